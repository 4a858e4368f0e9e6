"""Products of tropical lines: cross products of cycles and classes, and
the rank bookkeeping of the product homology table.
"""

from trophom.cycles import TropicalCycle, cross_product, is_balanced
from trophom.homology import cross_class, cycle_class, kunneth_check
from trophom.polyhedral import Polyhedron, complex_from_polyhedra

pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
          for r in [(1, 0), (0, 1), (-1, -1)]]
line = complex_from_polyhedra(2, pieces)[0]
cycle = TropicalCycle(line, 1, {cid: 1 for cid in line.cells_of_dim(1)})

square = cross_product(cycle, cycle)
print("line x line: %d weighted 2-cells, balanced: %s"
      % (len(square.support_ids()), is_balanced(square) == []))

lhs = cross_class(cycle_class(cycle), cycle_class(cycle), line, line,
                  prod=square.complex)
rhs = cycle_class(square)
print("class of the product equals product of the classes:",
      lhs.vector == rhs.vector)

out = kunneth_check(line, line)
print("Kunneth bookkeeping:", out["ok"])
for pq, v in sorted(out["table"].items()):
    print("  (p,q)=%s: %r (expected rank %d, %s)"
          % (pq, v["product"], v["expected_rank"], v["mode"]))
