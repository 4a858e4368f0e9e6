"""The standard tropical line in R^2, step by step.

Three rays from the origin in directions e1, e2, and -e1-e2.  With unit
weights the balancing condition holds at the origin; we then look at the
stalks of the sheaf of tropical 1-forms and the full Borel-Moore table.
"""

from trophom.cycles import TropicalCycle, is_balanced
from trophom.forms import omega_p
from trophom.homology import bm_table, cycle_class
from trophom.polyhedral import Polyhedron, complex_from_polyhedra, validate_complex

pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
          for r in [(1, 0), (0, 1), (-1, -1)]]
line, _keys = complex_from_polyhedra(2, pieces)
assert validate_complex(line) == []
print("cells:", line.cell_ids())

sheaf = omega_p(line, 1)
for cid in line.cell_ids():
    print("rank of the 1-form stalk at %s (dim %d): %d"
          % (cid, line.cells[cid].dim, sheaf.rank(cid)))

cycle = TropicalCycle(line, 1, {cid: 1 for cid in line.cells_of_dim(1)})
print("balanced:", is_balanced(cycle) == [])

bad = TropicalCycle(line, 1, dict(zip(line.cells_of_dim(1), [1, 1, 2])))
print("weights (1,1,2) violations:", is_balanced(bad))

print("Borel-Moore ranks:",
      {pq: r.shape.free_rank for pq, r in sorted(bm_table(line).items())})

cls = cycle_class(cycle)
print("cycle class closed:", cls.closed, "->", dict(sorted(cls.vector.items())))
