#include "kernelizer/tensor.hpp"

#include <limits>
#include <sstream>

namespace kernelizer {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidShape: return "invalid-shape";
    case ErrorCode::kInvalidPrecision: return "invalid-precision";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kCorruptFactorization: return "corrupt-factorization";
    case ErrorCode::kNotApplicable: return "not-applicable";
    case ErrorCode::kUnsupportedAxis: return "unsupported-axis";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kMalformedScheme: return "malformed-scheme";
    case ErrorCode::kZeroPivot: return "zero-pivot";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

Shape::Shape(std::initializer_list<std::size_t> dims)
    : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), ErrorCode::kInvalidShape, "shape must have rank >= 1");
  size_ = 1;
  for (std::size_t d : dims_) {
    require(d >= 1, ErrorCode::kInvalidShape, "shape extents must be >= 1");
    require(size_ <= std::numeric_limits<std::size_t>::max() / d,
            ErrorCode::kInvalidShape, "shape element count overflows");
    size_ *= d;
  }
}

std::size_t Shape::outer(std::size_t axis) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < axis; ++i) n *= dims_.at(i);
  return n;
}

std::size_t Shape::inner(std::size_t axis) const {
  std::size_t n = 1;
  for (std::size_t i = axis + 1; i < dims_.size(); ++i) n *= dims_[i];
  return n;
}

std::size_t Shape::offset(std::span<const std::size_t> index) const {
  require(index.size() == dims_.size(), ErrorCode::kInvalidArgument,
          "index rank does not match shape " + to_string());
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    require(index[i] < dims_[i], ErrorCode::kInvalidArgument,
            "index out of range for shape " + to_string());
    flat = flat * dims_[i] + index[i];
  }
  return flat;
}

std::vector<std::size_t> Shape::unravel(std::size_t flat) const {
  std::vector<std::size_t> index(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    index[i] = flat % dims_[i];
    flat /= dims_[i];
  }
  return index;
}

Shape Shape::without_axis(std::size_t axis) const {
  require(axis < dims_.size(), ErrorCode::kUnsupportedAxis, "axis out of range");
  if (dims_.size() == 1) return Shape{1};
  std::vector<std::size_t> dims;
  dims.reserve(dims_.size() - 1);
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (i != axis) dims.push_back(dims_[i]);
  return Shape(std::move(dims));
}

Shape Shape::with_leading(std::size_t extent) const {
  std::vector<std::size_t> dims;
  dims.reserve(dims_.size() + 1);
  dims.push_back(extent);
  dims.insert(dims.end(), dims_.begin(), dims_.end());
  return Shape(std::move(dims));
}

Shape Shape::with_trailing(std::size_t extent) const {
  std::vector<std::size_t> dims = dims_;
  dims.push_back(extent);
  return Shape(std::move(dims));
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << 'x';
    os << dims_[i];
  }
  os << ')';
  return os.str();
}

}  // namespace kernelizer
