"""Cutting the standard tropical line out of the plane by a divisor.

The tropical polynomial max(0, -x, -y) is affine away from the standard
line; intersecting its divisor with the fundamental cycle of R^2 recovers
the line with all weights 1, together with a chain-level certificate that
ties the intersection weights to incidence signs and 1-form stalks.
"""

from trophom.cycles import TropicalCycle, is_balanced
from trophom.divisors import CartierDivisor, divisor_cap_class, intersect, pl_from_terms
from trophom.polyhedral import Polyhedron, complex_from_polyhedra

plane = complex_from_polyhedra(
    2, [(frozenset(), Polyhedron(2, [(0, 0)],
                                 [(1, 0), (-1, 0), (0, 1), (0, -1)]))])[0]
ambient = TropicalCycle(plane, 2, {plane.cells_of_dim(2)[0]: 1})

phi = pl_from_terms(plane, [((0, 0), 0), ((-1, 0), 0), ((0, -1), 0)])
divisor = CartierDivisor(phi)
print("divisor support cells:", divisor.support_ids())

out, certificate = divisor_cap_class(divisor, ambient)
print("intersection is balanced:", is_balanced(out) == [])
for cid, w in sorted(out.weights.items()):
    cell = out.complex.cells[cid]
    print("  weight %d on %s (rays %s)" % (w, cid, cell.poly.rays))
print("certificate entries (lhs always equals rhs):")
for entry in certificate:
    print(" ", entry)

# a second cut brings the line down to a point of total weight 1
again = intersect(divisor, out)
print("second intersection total weight:", sum(again.weights.values()))
