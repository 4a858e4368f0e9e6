"""Bergman fans of small matroids and the modification map.

The Bergman fan of a loopless matroid, with its flag-of-flats fan
structure, carries a canonical balanced fundamental cycle; deleting a
non-coloop element induces a coordinate projection whose push-forward and
collapsed locus realize a tropical modification.
"""

from trophom.cycles import is_balanced
from trophom.homology import pd_check
from trophom.matroids import bergman_fan, modification_map, uniform_matroid

for r, n in [(2, 3), (2, 4), (3, 4)]:
    bf = bergman_fan(uniform_matroid(r, n))
    fan = bf.fan
    print("B(U_{%d,%d}): dim %d, %d maximal cones, balanced: %s"
          % (r, n, fan.dim, len(fan.maximal_cells()),
             is_balanced(bf.fundamental_cycle()) == []))

out = pd_check(bergman_fan(uniform_matroid(2, 4)).fan)
print("Poincare duality on B(U_{2,4}):", out["ok"])
for pq, v in sorted(out["table"].items()):
    print("  (p,q)=%s: H^BM=%r dual=%r" % (pq, v["bm"], v["dual"]))

delta, data = modification_map(uniform_matroid(2, 3), 2)
print("modification B(U_{2,3}) -> B(U_{2,2}): matrix",
      [list(r) for r in delta.linear.entries])
print("divisor fan dimension:", data["divisor"].fan.dim)
