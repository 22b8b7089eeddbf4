#pragma once

#include "kernelizer/error.hpp"
#include "kernelizer/factored_multiply.hpp"
#include "kernelizer/factorization.hpp"
#include "kernelizer/matched_filter.hpp"
#include "kernelizer/naive.hpp"
#include "kernelizer/netlist.hpp"
#include "kernelizer/op_count.hpp"
#include "kernelizer/product_table.hpp"
#include "kernelizer/scalar.hpp"
#include "kernelizer/scheme.hpp"
#include "kernelizer/streaming_engine.hpp"
#include "kernelizer/tensor.hpp"
