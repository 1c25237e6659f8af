"""Build the four-copy tree and look at what the substitution produces.

The tree model is a path u-m-w with a pendant path m-p-q; each of its four
edges is a slot that gets replaced by a whole copy of the previous graph.
Run with:  python3 demos/01_build_and_inspect.py
"""

from ssgrowth import builtin, generate, model_parameters, verify_reduction_isomorphism
from ssgrowth.graph import bfs_distances, diameter

tree = builtin("tree4")
p = model_parameters(tree)
print(f"model {tree.name}: theta={p.theta} mu={p.mu} nu={p.nu} lambda={p.lam} rho={p.rho} delta={p.delta} b={p.b}")
print(f"predicted growth dimension log mu / log nu = {p.dim_predicted:.3f}\n")

# Each level multiplies the edges by mu and the boundary-to-boundary distance by nu.
print(" n  vertices  edges  d(u, w)  diameter")
for n in range(1, 6):
    hg = generate(tree, n)
    u, w = hg.boundary
    print(f"{n:2d}  {hg.graph.vertex_count:8d}  {hg.graph.edge_count:5d}  {bfs_distances(hg.graph, [u])[w]:7d}"
          f"  {diameter(hg.graph):8d}")

# The cells of G_3: one 3-cell (the whole graph), 4 two-cells, 16 one-cells.
hg = generate(tree, 3)
print("\ncells per level in G_3:", {k: len(cells) for k, cells in hg.cell_tree.items()})
first = hg.cells(1)[0]
print(f"first 1-cell: slot path {first.slot_path}, boundary {first.boundary}, {first.interior.size} interior vertices")

# Self-similarity: collapsing every 1-cell to the edges between its boundary
# vertices gives back G_2, with levels shifted by one.
report = verify_reduction_isomorphism(tree, 4)
print(f"\nself-similarity of G_4: {report.status}")
for m in report.measurements:
    print(f"  k={m.n}: reduction onto level >= k isomorphic to G_(4-k): {m.measured}")
