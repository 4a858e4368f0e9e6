"""Tropical k-cycles: weighted face complexes with balancing, addition via
refinement, proper push-forward along affine maps, and cross products."""

import random
from fractions import Fraction

from .polyhedral import (
    FaceComplex,
    Polyhedron,
    _refine_poly,
    complex_from_polyhedra,
    product_complex,
)
from .zlattice import Sublattice, lattice_index, qsolve


class TropicalCycle:
    """A k-cycle: a face complex with integer weights on its k-cells.

    Zero weights are allowed in the dict; the support consists of the
    nonzero-weight cells.  Balancing is checked by is_balanced, not assumed.
    """

    def __init__(self, complex_, k, weights):
        for cid, w in weights.items():
            if cid not in complex_.cells:
                raise ValueError("weight on unknown cell %r" % cid)
            if complex_.cells[cid].dim != k:
                raise ValueError("weight on cell %r of dimension != %d" % (cid, k))
            if not isinstance(w, int):
                raise ValueError("weights must be integers")
        self.complex = complex_
        self.k = k
        self.weights = dict(weights)

    def weight(self, cid):
        return self.weights.get(cid, 0)

    def support_ids(self):
        return sorted(cid for cid, w in self.weights.items() if w != 0)

    def support_pieces(self):
        """(sedentarity, Polyhedron) pairs of the nonzero-weight cells."""
        return [(self.complex.cells[cid].sedentarity, self.complex.cells[cid].poly)
                for cid in self.support_ids()]

    def is_zero(self):
        return not self.support_ids()

    def scaled(self, factor):
        return TropicalCycle(self.complex, self.k,
                             {cid: factor * w for cid, w in self.weights.items()})

    def to_json_dict(self):
        return {"complex": self.complex.to_json_dict(), "k": self.k,
                "weights": {cid: w for cid, w in sorted(self.weights.items())}}

    @staticmethod
    def from_json_dict(doc):
        return TropicalCycle(FaceComplex.from_json_dict(doc["complex"]),
                             doc["k"], {cid: int(w) for cid, w in doc["weights"].items()})


def is_balanced(a):
    """Balancing report: one entry per finite codimension-1 face where the
    weighted sum of lattice normal vectors leaves the face's tangent lattice."""
    c = a.complex
    failures = []
    for tid in c.cells_of_dim(a.k - 1):
        tau = c.cells[tid]
        cofaces = [sid for sid in c.cofaces_of(tid)
                   if (tid, sid) in c.face_rel and c.cells[sid].dim == a.k]
        if not any(a.weight(sid) for sid in cofaces):
            continue
        total = (0,) * tau.poly.space_dim
        for sid in cofaces:
            n = c.lattice_normal_vector(sid, tid)
            total = tuple(x + a.weight(sid) * y for x, y in zip(total, n))
        if not tau.tangent.contains(total):
            failures.append({"face": tid, "sum": list(total)})
    return failures


def _generic_point(poly, bad_polys, seed=0):
    """A deterministic rational relative-interior point avoiding the given
    lower-dimensional polyhedra."""
    rng = random.Random(seed)
    pts = poly.points
    for attempt in range(500):
        if attempt == 0:
            y = poly.relint_point()
        else:
            ws = [Fraction(rng.randint(1, 997), 997) for _ in pts]
            tot = sum(ws)
            y = tuple(sum(w * p[i] for w, p in zip(ws, pts)) / tot
                      for i in range(poly.space_dim))
            for r in poly.rays:
                lam = Fraction(rng.randint(1, 997), 991)
                y = tuple(x + lam * c for x, c in zip(y, r))
        if all(not bp.contains(y) for bp in bad_polys):
            return y
    raise RuntimeError("could not find a generic point")


def _weight_lookup(cycle, sed, y):
    """Weight of the cycle at a point in the relative interior of exactly
    one of its weighted cells (0 when the point misses the support)."""
    for cid in cycle.support_ids():
        cell = cycle.complex.cells[cid]
        if cell.sedentarity == sed and cell.poly.contains(y):
            return cycle.weights[cid]
    return 0


def _union_refinement(cycles):
    """Refine the union of the cycles' supports by all their facet and
    affine-hull hyperplanes, one stratum at a time."""
    n = None
    for a in cycles:
        if n is None:
            n = a.complex.ambient_dim
        elif a.complex.ambient_dim != n:
            raise ValueError("ambient dimension mismatch")
    seds = {sed for a in cycles for (sed, _p) in a.support_pieces()}
    pieces = []
    for sed in sorted(seds, key=sorted):
        stratum = [p for a in cycles for (s, p) in a.support_pieces() if s == sed]
        forms = set()
        for p in stratum:
            forms |= p.hyperplane_forms()
        forms = sorted(forms)
        seen = set()
        for p in stratum:
            for piece in _refine_poly(p, forms):
                if piece.key not in seen:
                    seen.add(piece.key)
                    pieces.append((sed, piece))
    return complex_from_polyhedra(n if n is not None else 0, pieces)[0]


def add_cycles(a, b):
    """Sum of two k-cycles on the common refinement of their supports."""
    if a.k != b.k:
        raise ValueError("cycle dimensions differ")
    refined = _union_refinement([a, b])
    weights = {}
    for cid in refined.cells_of_dim(a.k):
        cell = refined.cells[cid]
        y = cell.poly.relint_point()
        w = _weight_lookup(a, cell.sedentarity, y) + _weight_lookup(b, cell.sedentarity, y)
        if w:
            weights[cid] = w
    nonzero = [(refined.cells[cid].sedentarity, refined.cells[cid].poly)
               for cid in sorted(weights)]
    support = complex_from_polyhedra(a.complex.ambient_dim, nonzero)[0]
    out_weights = {}
    for cid in support.cells_of_dim(a.k):
        cell = support.cells[cid]
        y = cell.poly.relint_point()
        out_weights[cid] = _weight_lookup(a, cell.sedentarity, y) + \
            _weight_lookup(b, cell.sedentarity, y)
    return TropicalCycle(support, a.k, out_weights)


def cycles_equal(a, b):
    """Equality of cycles as weighted sets (independent of face structure)."""
    return add_cycles(a, b.scaled(-1)).is_zero()


def cross_product(a, b):
    """The product cycle on the product complex, weight A(sigma)*B(tau)."""
    prod = product_complex(a.complex, b.complex)
    k = a.k + b.k
    weights = {}
    for ia, wa in a.weights.items():
        for ib, wb in b.weights.items():
            if wa * wb:
                weights["%s*%s" % (ia, ib)] = wa * wb
    return TropicalCycle(prod, k, weights)


def fundamental_cycle(c):
    """Weight 1 on every top-dimensional cell; balancing is up to the caller."""
    d = c.dim
    return TropicalCycle(c, d, {cid: 1 for cid in c.cells_of_dim(d)})


def push_forward(f, a, target=None):
    """Push-forward of a cycle along an affine map, as a cycle on the
    refined image subdivision.

    Weighted cells whose image drops dimension contribute nothing (their
    recession directions in the kernel of the linear part are collapsed);
    if all collapse, the zero cycle (on an empty complex) is returned.  The
    output is verified balanced; a balancing failure means the map was not
    proper on the support and raises ValueError.
    """
    k = a.k
    lin = f.linear
    m = lin.rows
    for cid in a.support_ids():
        if a.complex.cells[cid].sedentarity:
            raise ValueError("push_forward supports sedentarity-0 cycles only")
    images = {}
    collapsed = []
    for cid in a.support_ids():
        img = f.apply_polyhedron(a.complex.cells[cid].poly)
        if img.dim == k:
            images[cid] = img
        else:
            collapsed.append(img)
    # boundaries of full-dimensional images are images of proper faces
    lower = list(collapsed)
    for cid in images:
        for fid in a.complex.faces_of(cid):
            fcell = a.complex.cells[fid]
            if not fcell.sedentarity:
                lower.append(f.apply_polyhedron(fcell.poly))
    lower = [p for p in lower if p.dim < k]
    if not images:
        empty = FaceComplex(m, [], frozenset())
        return TropicalCycle(empty, k, {})
    forms = set()
    for img in images.values():
        forms |= img.hyperplane_forms()
    if target is not None:
        for tid in target.maximal_cells():
            forms |= target.cells[tid].poly.hyperplane_forms()
    forms = sorted(forms)
    pieces = []
    seen = set()
    for img in images.values():
        for piece in _refine_poly(img, forms):
            if piece.key not in seen:
                seen.add(piece.key)
                pieces.append((frozenset(), piece))
    refined = complex_from_polyhedra(m, pieces)[0]
    if target is not None:
        for (sed, piece) in pieces:
            if not any(target.cells[tid].poly.contains_polyhedron(piece)
                       for tid in target.maximal_cells()
                       if not target.cells[tid].sedentarity):
                raise ValueError("image is not contained in the target complex")
    weights = {}
    for did in refined.cells_of_dim(k):
        dcell = refined.cells[did]
        y = _generic_point(dcell.poly, lower)
        total = 0
        for cid, img in images.items():
            if not img.contains(y):
                continue
            x = _preimage_point(f, a.complex.cells[cid], y)
            if x is None or not a.complex.cells[cid].poly.contains(x):
                continue
            tangent_image = Sublattice(
                m, [lin.apply(row) for row in a.complex.cells[cid].tangent.basis.entries])
            total += a.weights[cid] * lattice_index(dcell.tangent, tangent_image)
        if total:
            weights[did] = total
    out = TropicalCycle(refined, k, weights)
    bad = is_balanced(out)
    if bad:
        raise ValueError("map is not proper on the support: "
                         "push-forward is unbalanced at %r" % bad)
    return out


def _preimage_point(f, cell, y):
    """The unique x in aff(cell) with f(x) = y, or None."""
    x0 = cell.poly.points[0]
    basis = cell.poly.direction_vectors()
    basis = Sublattice(cell.poly.space_dim, basis).basis.entries if basis else []
    cols = [f.linear.apply(b) for b in basis]
    rhs = [yv - fv for yv, fv in zip(y, f.apply(x0))]
    if not basis:
        return x0 if all(v == 0 for v in rhs) else None
    sol = qsolve([[col[i] for col in cols] for i in range(len(rhs))], rhs)
    if sol is None:
        return None
    x = list(x0)
    for t, b in zip(sol, basis):
        x = [xi + t * bi for xi, bi in zip(x, b)]
    # uniqueness: the map is injective on the cell's span when the image
    # has full dimension k, which the caller guarantees
    return tuple(x)
