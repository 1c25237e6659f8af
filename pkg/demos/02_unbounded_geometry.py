"""Two anchorings of the same diamond rule, and why geometry stops being bounded.

The diamond is the 4-cycle v-a-w-b with the chord a-b.  Its boundary vertices
have degree b = 2 inside the cell, more than theta - 1 = 1, so every
substitution doubles the edges leaving the top cell.  Whether a single vertex
collects all of them depends only on which slot anchors G_n inside G_(n+1).
Run with:  python3 demos/02_unbounded_geometry.py
"""

from ssgrowth import builtin, check_bounded_geometry, classify_geometry, detect_origin
from ssgrowth.invariants import top_edge_boundary
from ssgrowth.substitution import generate

open_, fixed = builtin("diamond_open"), builtin("diamond_fixed")

print("edge boundary |dC_n| of the top cell:")
print("  ", [top_edge_boundary(generate(open_, n)) for n in range(1, 7)], "(doubles: 2^(n+1))")

conds = check_bounded_geometry(open_).facts["conditions"]
print("\nthe six bounded-geometry conditions on the diamond:", conds)

for m in (open_, fixed):
    origin = detect_origin(m)
    cls = classify_geometry(m, depth=6)
    print(f"\n{m.name}: anchor slot {m.anchor_slot} -> {origin.kind} (power {origin.stabilizing_power})")
    print(f"  classification: {cls.kind}")
    if origin.kind == "origin_vertex":
        print(f"  degree of the origin vertex in G_2..G_6: {cls.report.facts['origin_degrees']}")
    else:
        print(f"  origin cell boundary {origin.cell['boundary']} is mapped to {origin.cell['phi_boundary']}")
        row = cls.report.facts["marching_degrees"]
        print("  degree of the interior model vertices, one level deeper each time:",
              [row[str(n)]["1"] for n in range(1, 6)], "(3 * 2^n, but the vertex moves)")
