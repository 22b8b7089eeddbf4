"""Parse the DOT written by `kernelizer emit-dot` with pydot and compare its
node and edge counts against the netlist JSON of the same scheme."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import pydot


def main() -> int:
    exe, data = sys.argv[1], Path(sys.argv[2])
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for tensor, extra in [("dot_tensor.json", []), ("matrix.json", ["-d", "1"]),
                              ("matrix5.json", ["-d", "2", "-c", "2"]), ("zeros.json", [])]:
            scheme = Path(tmp) / "scheme.json"
            subprocess.run([exe, "synthesize", str(data / tensor), "-o", str(scheme), *extra],
                           check=True, capture_output=True)
            dot = subprocess.run([exe, "emit-dot", str(scheme)], check=True,
                                 capture_output=True, text=True).stdout
            net = json.loads(subprocess.run([exe, "emit-dot", "--json", str(scheme)], check=True,
                                            capture_output=True, text=True).stdout)
            graphs = pydot.graph_from_dot_data(dot)
            if not graphs:
                print(f"FAIL {tensor}: pydot could not parse the output")
                failures += 1
                continue
            g = graphs[0]
            names = {n.get_name().strip('"') for n in g.get_nodes()} - {"node", "edge", "graph"}
            expected = set(net["nodes"]) | {c["name"] for c in net["components"]}
            edges = len(g.get_edges())
            ok = names == expected and edges == len(net["edges"])
            print(f"{'ok' if ok else 'FAIL'} {tensor}: {len(names)} nodes, {edges} edges")
            failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
