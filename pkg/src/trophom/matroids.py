"""Matroids from bases lists, their flats, deletion/contraction, Bergman
fans, and the tropical-modification map between Bergman fans.

Bergman fans live in R^E / R1, realized in coordinates by deleting the
last ground-set element's coordinate, with cones spanned by the vectors
e_F = sum_{i in F} e_i-bar over chains of proper nonempty flats.
"""

from itertools import combinations

from .cycles import TropicalCycle, cycles_equal, fundamental_cycle, is_balanced, push_forward
from .polyhedral import AffineMap, Polyhedron, _refine_poly, complex_from_polyhedra
from .zlattice import IntMatrix


class Matroid:
    """A matroid on a small ground set, stored by its list of bases."""

    def __init__(self, elements, bases):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate ground-set elements")
        self.bases = sorted({frozenset(b) for b in bases},
                            key=lambda b: sorted(self.elements.index(e) for e in b))
        if not self.bases:
            raise ValueError("a matroid needs at least one basis")
        ground = set(self.elements)
        sizes = {len(b) for b in self.bases}
        if len(sizes) != 1:
            raise ValueError("bases of unequal size")
        for b in self.bases:
            if not b <= ground:
                raise ValueError("basis uses unknown elements")
        self._check_exchange()

    def _check_exchange(self):
        basis_set = set(self.bases)
        for b1 in self.bases:
            for b2 in self.bases:
                for x in b1 - b2:
                    if not any((b1 - {x}) | {y} in basis_set for y in b2 - b1):
                        raise ValueError(
                            "basis exchange fails for %s, %s at %r"
                            % (sorted(b1), sorted(b2), x))

    @property
    def full_rank(self):
        return len(self.bases[0])

    def rank(self, subset):
        s = frozenset(subset)
        return max(len(b & s) for b in self.bases)

    def closure(self, subset):
        s = frozenset(subset)
        r = self.rank(s)
        return frozenset(e for e in self.elements if self.rank(s | {e}) == r)

    def flats(self):
        """All flats, sorted by (rank, sorted elements)."""
        out = {self.closure(frozenset())}
        for k in range(1, len(self.elements) + 1):
            for s in combinations(self.elements, k):
                out.add(self.closure(s))
        return sorted(out, key=lambda f: (len(f), sorted(self.elements.index(e)
                                                         for e in f)))

    def proper_flats(self):
        ground = frozenset(self.elements)
        return [f for f in self.flats() if f and f != ground]

    def loops(self):
        union = frozenset().union(*self.bases)
        return frozenset(self.elements) - union

    def coloops(self):
        out = frozenset(self.elements)
        for b in self.bases:
            out &= b
        return out

    @property
    def is_loopless(self):
        return not self.loops()

    def delete(self, i):
        if i not in self.elements:
            raise ValueError("unknown element %r" % i)
        if len(self.elements) == 1:
            raise ValueError("cannot delete the last element")
        rest = [e for e in self.elements if e != i]
        if i in self.coloops():
            bases = [b - {i} for b in self.bases]
        else:
            bases = [b for b in self.bases if i not in b]
        return Matroid(rest, bases)

    def contract(self, i):
        if i not in self.elements:
            raise ValueError("unknown element %r" % i)
        if len(self.elements) == 1:
            raise ValueError("cannot contract the last element")
        rest = [e for e in self.elements if e != i]
        if i in self.loops():
            return Matroid(rest, [b for b in self.bases])
        bases = [b - {i} for b in self.bases if i in b]
        return Matroid(rest, bases)

    def __eq__(self, other):
        return (isinstance(other, Matroid) and self.elements == other.elements
                and self.bases == other.bases)

    def __repr__(self):
        return "Matroid(%s, %s)" % (list(self.elements),
                                    [sorted(b) for b in self.bases])

    def to_json_dict(self):
        return {"elements": list(self.elements),
                "bases": [sorted(b, key=self.elements.index) for b in self.bases]}

    @staticmethod
    def from_json_dict(doc):
        return Matroid(doc["elements"], [frozenset(b) for b in doc["bases"]])


def uniform_matroid(r, n):
    """U_{r,n} on elements 0..n-1."""
    return Matroid(range(n), combinations(range(n), r))


def flat_vector(m, flat):
    """e_F = sum of quotient images of e_i, i in F, in the chart that
    deletes the last element's coordinate."""
    idx = {e: j for j, e in enumerate(m.elements)}
    n = len(m.elements)
    v = [0] * (n - 1)
    for e in flat:
        j = idx[e]
        if j < n - 1:
            v[j] += 1
        else:
            for t in range(n - 1):
                v[t] -= 1
    return tuple(v)


class BergmanFan:
    """The fine (flag of flats) fan structure on the tropical linear space
    of a loopless matroid."""

    def __init__(self, matroid):
        if not matroid.is_loopless:
            raise ValueError("Bergman fans require loopless matroids")
        self.matroid = matroid
        n = len(matroid.elements) - 1
        flats = matroid.proper_flats()
        chains = [()]
        by_len = {0: [()]}
        for l in range(1, matroid.full_rank):
            cur = []
            for chain in by_len.get(l - 1, []):
                for f in flats:
                    if not chain or chain[-1] < f:
                        cur.append(chain + (f,))
            by_len[l] = cur
            chains.extend(cur)
        origin = (0,) * n
        polys = {}
        for chain in chains:
            rays = [flat_vector(matroid, f) for f in chain]
            polys[chain] = Polyhedron(n, [origin], rays)
        maximal = [c for c in chains if len(c) == matroid.full_rank - 1]
        fan, keys = complex_from_polyhedra(
            n, [(frozenset(), polys[c]) for c in maximal], id_prefix="b")
        self.fan = fan
        self.chain_labels = {}
        for chain in chains:
            cid = keys.get((frozenset(), polys[chain].key))
            if cid is not None:
                self.chain_labels[cid] = chain

    def fundamental_cycle(self):
        return fundamental_cycle(self.fan)


def bergman_fan(matroid):
    return BergmanFan(matroid)


def deletion_map(m, i):
    """The chart matrix of the quotient map R^E/R1 -> R^{E-i}/R1 induced
    by deleting the i-th coordinate."""
    src = [e for e in m.elements[:-1]]           # chart coords of B(M)
    rest = [e for e in m.elements if e != i]
    out_last = rest[-1]
    rows = []
    for e in rest[:-1]:
        row = []
        for c in src:
            val = (1 if c == e else 0) - (1 if c == out_last else 0)
            row.append(val)
        rows.append(row)
    return AffineMap(IntMatrix(rows, len(src)))


def modification_map(m, i):
    """The coordinate-deletion map B(M) -> B(M-i) and its divisor data.

    Requires i not a coloop and M/i loopless.  Verifies that the
    push-forward of the fundamental cycle of B(M) is the fundamental cycle
    of B(M-i), and that the locus where the map collapses dimension maps
    onto B(M/i) inside B(M-i).  Returns (map, {"target": BergmanFan of
    M-i, "divisor": BergmanFan of M/i}).
    """
    if i in m.coloops():
        raise ValueError("element %r is a coloop" % i)
    contracted = m.contract(i)
    if not contracted.is_loopless:
        raise ValueError("the contraction by %r has loops" % i)
    source = bergman_fan(m)
    target = bergman_fan(m.delete(i))
    divisor = bergman_fan(contracted)
    delta = deletion_map(m, i)
    pushed = push_forward(delta, source.fundamental_cycle())
    if not cycles_equal(pushed, target.fundamental_cycle()):
        raise AssertionError("push-forward of the fundamental cycle is not "
                             "the fundamental cycle of the deletion")
    _check_divisor_locus(delta, source, divisor)
    return delta, {"target": target, "divisor": divisor}


def _check_divisor_locus(delta, source, divisor):
    k = source.fan.dim
    collapsed = []
    for cid in source.fan.maximal_cells():
        img = delta.apply_polyhedron(source.fan.cells[cid].poly)
        if img.dim < k:
            collapsed.append(img)
    div_cones = [divisor.fan.cells[cid].poly for cid in divisor.fan.maximal_cells()]
    div_forms = set()
    for p in div_cones:
        div_forms |= p.hyperplane_forms()
    col_forms = set()
    for p in collapsed:
        col_forms |= p.hyperplane_forms()
    for img in collapsed:
        for piece in _refine_poly(img, sorted(div_forms)):
            if not any(cone.contains(piece.relint_point()) for cone in div_cones):
                raise AssertionError("collapsed locus maps outside the divisor fan")
    for cone in div_cones:
        for piece in _refine_poly(cone, sorted(col_forms)):
            if not any(img.contains(piece.relint_point()) for img in collapsed):
                raise AssertionError("divisor fan not covered by the collapsed locus")
