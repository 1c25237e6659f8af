"""Write your own cell model, validate it, and see what the checks report.

A model document lists the vertices, the ordered boundary, and the slots:
cliques of size theta whose j-th vertex receives the j-th boundary vertex of
the copy glued in.  The lopsided model below has a boundary vertex of degree 1
and one of degree 2, so there is no constant inner degree and the equivalence
of the bounded-geometry conditions does not apply, yet degrees stay bounded.
Run with:  python3 demos/04_custom_model.py
"""

from ssgrowth import check_bounded_geometry, model_parameters, parse_model, validate
from ssgrowth.io import ModelFormatError, dump_model
from ssgrowth.invariants import check_diameters

doc = """{
  "name": "lopsided",
  "vertices": 4,
  "boundary": [0, 1],
  "slots": [[0, 2], [2, 3], [1, 3], [1, 2]]
}"""
m = parse_model(doc)
print("validation:", {k: c.passed for k, c in validate(m).checks.items()})
p = model_parameters(m)
print(f"delta = {p.delta} > theta(theta-1) = {p.theta * (p.theta - 1)}, constant inner degree: {p.b}")

rep = check_bounded_geometry(m)
print("bounded geometry:", rep.status, "-", rep.notes[0])
print("  max degree by depth stabilises:", rep.facts["max_degree_stabilized"], "at", rep.facts["max_degree"])

# The upper bound on the distance from a boundary vertex to the rest of the
# cell is exceeded already at n = 2; the report carries the witness.
diam = check_diameters(m, n_max=3)
print("diameter bounds:", diam.status, diam.witnesses[0])

print("\ncanonical document:\n" + dump_model(m))

# Broken documents are rejected with the field and its position.
for bad in ('{"name": "x", "vertices": 3, "boundary": [0, 2],\n "slots": [[0, 1], [1]]}',
            '{"name": "x", "vertices": 3, "boundary": [0, 2], "slots": [[0, 1], [1, 2]], "colour": "red"}'):
    try:
        parse_model(bad)
    except ModelFormatError as exc:
        print("rejected:", exc)

# Well-formed but inadmissible: the first slot holds both boundary vertices.
print("F1 check:", validate(parse_model('{"name": "f1", "vertices": 2, "boundary": [0, 1], "slots": [[0, 1]]}'))
      .checks["F1"])
