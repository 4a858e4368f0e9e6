"""Homology of the real line with one end compactified.

The complex has four cells: the vertex at 0, the two half-lines, and the
point at +infinity (a cell of sedentarity {0}).  Classically (p = 0) the
Borel-Moore homology of a half-open interval vanishes; with 1-form
coefficients the constant weight is a locally finite balanced cycle and
H^BM_{1,1} = Z, dually H^{0,0} = Z.
"""

from trophom.homology import bm_table, cohomology_table, pd_check
from trophom.polyhedral import Polyhedron, complex_from_polyhedra

c = complex_from_polyhedra(
    1, [(frozenset(), Polyhedron(1, [(0,)], [(-1,)])),
        (frozenset(), Polyhedron(1, [(0,)], [(1,)])),
        (frozenset([0]), Polyhedron(0, [()]))])[0]
for cid in c.cell_ids():
    cell = c.cells[cid]
    print("cell %s: dim %d, sedentarity %s" % (cid, cell.dim,
                                               sorted(cell.sedentarity)))

print("H^BM:", {pq: repr(r.shape) for pq, r in sorted(bm_table(c).items())})
print("H:   ", {pq: repr(r.shape) for pq, r in sorted(cohomology_table(c).items())})
print("Poincare duality:", pd_check(c)["ok"])
