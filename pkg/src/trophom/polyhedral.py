"""Rational polyhedra embedded in strata of the partial compactification
of R^n by +infinity coordinates, face complexes with orientation data,
incidence signs and lattice normal vectors.

A cell with sedentarity I (a set of coordinates frozen at +infinity) lives
in the stratum R_I, identified with R^{n-|I|} by deleting the coordinates
in I; the remaining coordinates keep their original, increasing order.
"""

from fractions import Fraction
from itertools import combinations

from .zlattice import (
    IntMatrix,
    Sublattice,
    clear_denominators,
    int_solve,
    kernel_basis,
    qnullspace,
    qsolve,
    saturate,
    _qrref,
)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _normalize_functional(coeffs, const, oriented):
    """Primitive integer representative of a.x + b (>= 0 or = 0).

    For equalities (oriented=False) the sign is fixed so the first nonzero
    entry of (coeffs, const) is positive.
    """
    vec = clear_denominators(tuple(coeffs) + (const,))
    if not oriented:
        lead = next((x for x in vec if x != 0), 1)
        if lead < 0:
            vec = tuple(-x for x in vec)
    return vec[:-1], vec[-1]


class Polyhedron:
    """A rational polyhedron given by generating points and rays (V-rep).

    The generating points need not be vertices.  The H-representation
    (affine-hull equalities plus facet inequalities) is derived on demand
    via homogenized facet enumeration and is canonical, so `key` implements
    equality of point sets.
    """

    __slots__ = ("space_dim", "points", "rays", "_hrep", "_key")

    def __init__(self, space_dim, points, rays=()):
        pts = tuple(sorted({tuple(Fraction(x) for x in p) for p in points}))
        rys = set()
        for r in rays:
            r = clear_denominators(r)
            if any(r):
                rys.add(r)
        if not pts:
            raise ValueError("a polyhedron needs at least one point")
        for p in pts:
            if len(p) != space_dim:
                raise ValueError("point dimension mismatch")
        for r in rys:
            if len(r) != space_dim:
                raise ValueError("ray dimension mismatch")
        object.__setattr__(self, "space_dim", space_dim)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rays", tuple(sorted(rys)))
        object.__setattr__(self, "_hrep", None)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, *a):
        raise AttributeError("Polyhedron is immutable")

    def _gens(self):
        return ([(Fraction(1),) + p for p in self.points]
                + [(Fraction(0),) + tuple(Fraction(x) for x in r) for r in self.rays])

    def hrep(self):
        """(equalities, inequalities): lists of (coeffs, const) for a.x+b=0 / >=0."""
        if self._hrep is not None:
            return self._hrep
        gens = self._gens()
        m1 = self.space_dim + 1
        pivots, span = _qrref(gens)
        s = len(span)
        eqs = []
        for v in qnullspace(gens, m1):
            eqs.append(_normalize_functional(v[1:], v[0], oriented=False))
        coords = [tuple(g[c] for c in pivots) for g in gens]
        ineqs = set()
        for sub in combinations(range(len(coords)), s - 1):
            ns = qnullspace([coords[i] for i in sub], s)
            if len(ns) != 1:
                continue
            nu = ns[0]
            vals = [_dot(nu, c) for c in coords]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                nu = tuple(-x for x in nu)
                vals = [-v for v in vals]
            else:
                continue
            tight = [gens[i] for i, v in enumerate(vals) if v == 0]
            if tight and len(_qrref(tight)[0]) == s - 1:
                # the functional supported on the pivot columns restricting to nu
                w = [Fraction(0)] * m1
                for j, c in enumerate(pivots):
                    w[c] = nu[j]
                ineqs.add(_normalize_functional(w[1:], w[0], oriented=True))
        hrep = (tuple(sorted(eqs)), tuple(sorted(ineqs)))
        object.__setattr__(self, "_hrep", hrep)
        return hrep

    @property
    def key(self):
        if self._key is None:
            object.__setattr__(self, "_key", self.hrep())
        return self._key

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.space_dim == other.space_dim \
            and self.key == other.key

    def __hash__(self):
        return hash((self.space_dim, self.key))

    def __repr__(self):
        return "Polyhedron(%d, points=%s, rays=%s)" % (
            self.space_dim, [list(map(str, p)) for p in self.points],
            [list(r) for r in self.rays])

    @property
    def dim(self):
        if not self.rays and len(self.points) == 1:
            return 0
        return len(_qrref(self._gens())[0]) - 1

    def direction_vectors(self):
        """Integer spanning set of the direction space (vertex differences and rays)."""
        p0 = self.points[0]
        vecs = [clear_denominators(tuple(x - y for x, y in zip(p, p0)))
                for p in self.points[1:]]
        vecs += [tuple(r) for r in self.rays]
        return [v for v in vecs if any(v)]

    def relint_point(self):
        n = len(self.points)
        pt = [sum(p[i] for p in self.points) / n for i in range(self.space_dim)]
        for r in self.rays:
            pt = [x + c for x, c in zip(pt, r)]
        return tuple(pt)

    def contains(self, x):
        eqs, ineqs = self.hrep()
        return (all(_dot(a, x) + b == 0 for a, b in eqs)
                and all(_dot(a, x) + b >= 0 for a, b in ineqs))

    def contains_polyhedron(self, other):
        eqs, ineqs = self.hrep()
        for p in other.points:
            if not self.contains(p):
                return False
        for r in other.rays:
            if any(_dot(a, r) != 0 for a, b in eqs) or any(_dot(a, r) < 0 for a, b in ineqs):
                return False
        return True

    def cut_halfspace(self, a, b):
        """Intersection with {x : a.x + b >= 0}, or None if empty.

        One step of the double description method (all-pairs variant).
        """
        vp = [_dot(a, p) + b for p in self.points]
        vr = [_dot(a, r) for r in self.rays]
        pts = [p for p, v in zip(self.points, vp) if v >= 0]
        rys = [r for r, v in zip(self.rays, vr) if v >= 0]
        pos_p = [(p, v) for p, v in zip(self.points, vp) if v > 0]
        neg_p = [(p, v) for p, v in zip(self.points, vp) if v < 0]
        pos_r = [(r, v) for r, v in zip(self.rays, vr) if v > 0]
        neg_r = [(r, v) for r, v in zip(self.rays, vr) if v < 0]
        for p, u in pos_p:
            for q, v in neg_p:
                t = u / (u - v)
                pts.append(tuple(x + t * (y - x) for x, y in zip(p, q)))
            for r, v in neg_r:
                t = u / -v
                pts.append(tuple(x + t * y for x, y in zip(p, r)))
        for q, v in neg_p:
            for r, u in pos_r:
                t = -v / u
                pts.append(tuple(x + t * y for x, y in zip(q, r)))
        for r, u in pos_r:
            for s, v in neg_r:
                rys.append(tuple(-v * x + u * y for x, y in zip(r, s)))
        if not pts:
            return None
        return Polyhedron(self.space_dim, pts, rys)

    def cut_hyperplane(self, a, b):
        cut = self.cut_halfspace(a, b)
        if cut is None:
            return None
        return cut.cut_halfspace(tuple(-x for x in a), -b)

    def intersect(self, other):
        """Exact intersection, or None if empty."""
        out = self
        eqs, ineqs = other.hrep()
        for a, b in eqs:
            out = out.cut_hyperplane(a, b)
            if out is None:
                return None
        for a, b in ineqs:
            out = out.cut_halfspace(a, b)
            if out is None:
                return None
        return out

    def proper_faces(self):
        """All nonempty proper faces, as a dict key -> Polyhedron."""
        out = {}
        stack = [self]
        seen = {self.key}
        while stack:
            cur = stack.pop()
            for a, b in cur.hrep()[1]:
                face = cur.cut_halfspace(tuple(-x for x in a), -b)
                if face is None or face.key in seen:
                    continue
                seen.add(face.key)
                out[face.key] = face
                stack.append(face)
        return out

    def recession_cone(self):
        zero = (Fraction(0),) * self.space_dim
        return Polyhedron(self.space_dim, [zero], self.rays)

    def translate(self, vec):
        return Polyhedron(self.space_dim,
                          [tuple(x + v for x, v in zip(p, vec)) for p in self.points],
                          self.rays)

    def hyperplane_forms(self):
        """Equalities and facet hyperplanes as canonical unoriented functionals."""
        eqs, ineqs = self.hrep()
        out = set(eqs)
        for a, b in ineqs:
            if any(a):
                out.add(_normalize_functional(a, b, oriented=False))
        return out


class AffineMap:
    """x -> linear.x + translate, with integral linear part."""

    __slots__ = ("linear", "translate")

    def __init__(self, linear, translate=None):
        linear = linear if isinstance(linear, IntMatrix) else IntMatrix(linear)
        if translate is None:
            translate = (Fraction(0),) * linear.rows
        translate = tuple(Fraction(x) for x in translate)
        if len(translate) != linear.rows:
            raise ValueError("translate dimension mismatch")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "translate", translate)

    def __setattr__(self, *a):
        raise AttributeError("AffineMap is immutable")

    def apply(self, x):
        return tuple(v + t for v, t in zip(self.linear.apply(x), self.translate))

    def apply_polyhedron(self, poly):
        pts = [self.apply(p) for p in poly.points]
        rys = [self.linear.apply(r) for r in poly.rays]
        return Polyhedron(self.linear.rows, pts, [r for r in rys if any(r)])

    def compose(self, other):
        """self after other."""
        return AffineMap(self.linear * other.linear,
                         self.apply(other.translate))

    def to_json_dict(self):
        return {"linear": [list(r) for r in self.linear.entries],
                "cols": self.linear.cols,
                "translate": [str(x) for x in self.translate]}

    @staticmethod
    def from_json_dict(doc):
        linear = IntMatrix([[int(x) for x in r] for r in doc["linear"]],
                           doc.get("cols"))
        translate = [Fraction(x) for x in doc.get("translate", [])]
        return AffineMap(linear, translate or None)


class Cell:
    """A polyhedron in one stratum, with id, sedentarity and tangent lattice."""

    __slots__ = ("id", "ambient_dim", "sedentarity", "poly", "tangent", "dim")

    def __init__(self, cell_id, ambient_dim, sedentarity, poly):
        sed = frozenset(sedentarity)
        if poly.space_dim != ambient_dim - len(sed):
            raise ValueError("cell %r: polyhedron lives in R^%d, expected R^%d"
                             % (cell_id, poly.space_dim, ambient_dim - len(sed)))
        dirs = poly.direction_vectors()
        tangent = saturate(Sublattice(poly.space_dim, dirs)) if dirs \
            else Sublattice.zero(poly.space_dim)
        object.__setattr__(self, "id", cell_id)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "sedentarity", sed)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "tangent", tangent)
        object.__setattr__(self, "dim", tangent.rank)

    def __setattr__(self, *a):
        raise AttributeError("Cell is immutable")

    def __repr__(self):
        return "Cell(%r, dim=%d, sed=%s)" % (self.id, self.dim, sorted(self.sedentarity))

    def local_coords(self):
        """Original indices of the stratum coordinates, in increasing order."""
        return [i for i in range(self.ambient_dim) if i not in self.sedentarity]


def infinity_face_poly(cell, target_sed):
    """The part of the closure of `cell` in the stratum `target_sed`, or None.

    This is the coordinate projection of the cell when its recession cone
    contains a direction that is positive on the new infinite coordinates
    and zero on the coordinates staying finite; otherwise the closure does
    not meet the stratum.
    """
    target_sed = frozenset(target_sed)
    if not target_sed > cell.sedentarity:
        raise ValueError("target sedentarity must strictly contain the cell's")
    local = cell.local_coords()
    extra = [i for i, orig in enumerate(local) if orig in target_sed]
    keep = [i for i, orig in enumerate(local) if orig not in target_sed]
    cone = cell.poly.recession_cone()
    for i in keep:
        a = tuple(1 if j == i else 0 for j in range(cell.poly.space_dim))
        cone = cone.cut_hyperplane(a, 0)
        if cone is None:
            return None
    for i in extra:
        a = tuple(1 if j == i else 0 for j in range(cell.poly.space_dim))
        cone = cone.cut_halfspace(a, -1)
        if cone is None:
            return None
    pts = [tuple(p[i] for i in keep) for p in cell.poly.points]
    rys = [tuple(r[i] for i in keep) for r in cell.poly.rays]
    return Polyhedron(len(keep), pts, [r for r in rys if any(r)])


class FaceComplex:
    """A finite face complex in the compactified R^n.

    `face_rel` holds all proper same-stratum face pairs (tau_id, sigma_id);
    `at_infinity` holds all pairs where tau lies in a deeper stratum of the
    closure of sigma.  Orientations are one sign per cell, relative to the
    canonical Hermite basis of its tangent lattice; incidence signs are
    derived from them (an explicit `eps_override` is only for validation
    experiments).
    """

    def __init__(self, ambient_dim, cells, face_rel, at_infinity=(),
                 orientation=None, eps_override=None):
        self.ambient_dim = ambient_dim
        self.cells = {c.id: c for c in cells}
        if len(self.cells) != len(cells):
            raise ValueError("duplicate cell ids")
        self.face_rel = frozenset(face_rel)
        self.at_infinity = frozenset(at_infinity)
        self.orientation = {cid: 1 for cid in self.cells}
        if orientation:
            for cid, s in orientation.items():
                if s not in (1, -1):
                    raise ValueError("orientation signs must be +-1")
                self.orientation[cid] = s
        self.eps_override = dict(eps_override or {})
        self._normal_cache = {}
        self._eps_cache = {}

    # -- basic structure ---------------------------------------------------

    def cell_ids(self):
        return sorted(self.cells)

    def cells_of_dim(self, d):
        return [cid for cid in self.cell_ids() if self.cells[cid].dim == d]

    @property
    def dim(self):
        return max((c.dim for c in self.cells.values()), default=0)

    def all_face_pairs(self):
        return self.face_rel | self.at_infinity

    def faces_of(self, cid):
        return {t for (t, s) in self.all_face_pairs() if s == cid}

    def cofaces_of(self, cid):
        return {s for (t, s) in self.all_face_pairs() if t == cid}

    def maximal_cells(self):
        non_max = {t for (t, s) in self.all_face_pairs()}
        return [cid for cid in self.cell_ids() if cid not in non_max]

    def maximal_cofaces(self, cid):
        maxes = set(self.maximal_cells())
        if cid in maxes:
            return [cid]
        return sorted(c for c in self.cofaces_of(cid) if c in maxes)

    def codim1_pairs(self, include_infinity=True):
        """(tau, sigma, at_inf) triples with dim tau = dim sigma - 1."""
        out = []
        for (t, s) in sorted(self.face_rel):
            if self.cells[t].dim == self.cells[s].dim - 1:
                out.append((t, s, False))
        if include_infinity:
            for (t, s) in sorted(self.at_infinity):
                if self.cells[t].dim == self.cells[s].dim - 1:
                    out.append((t, s, True))
        return out

    def facets_of(self, cid, include_infinity=True):
        d = self.cells[cid].dim
        out = [t for t in self.faces_of(cid)
               if self.cells[t].dim == d - 1
               and ((t, cid) in self.face_rel
                    or (include_infinity and (t, cid) in self.at_infinity))]
        return sorted(out)

    def support_polyhedra(self, sed=frozenset()):
        return [self.cells[cid].poly for cid in self.maximal_cells()
                if self.cells[cid].sedentarity == frozenset(sed)]

    # -- orientations, normal vectors, incidence signs ---------------------

    def eta_wedge(self, cid):
        """Coordinates of eta_sigma in the lex wedge basis of the stratum."""
        from .zlattice import wedge_vector
        cell = self.cells[cid]
        vec = wedge_vector(list(cell.tangent.basis.entries), cell.poly.space_dim)
        s = self.orientation[cid]
        return tuple(s * x for x in vec)

    def lattice_normal_vector(self, sigma, tau):
        """A lattice normal vector of sigma relative to tau (finite pairs only).

        Lies in T(sigma), points from tau into sigma, and completes a basis
        of T(tau) to one of T(sigma).  Deterministic.
        """
        if (tau, sigma) in self.at_infinity:
            raise ValueError("no lattice normal vector toward a face at infinity")
        if (tau, sigma) not in self.face_rel:
            raise ValueError("(%r, %r) is not a face pair" % (tau, sigma))
        key = (sigma, tau)
        if key in self._normal_cache:
            return self._normal_cache[key]
        cs, ct = self.cells[sigma], self.cells[tau]
        if ct.dim != cs.dim - 1:
            raise ValueError("not a codimension-1 pair")
        tau_coords = [cs.tangent.coordinates(row) for row in ct.tangent.basis.entries]
        if any(c is None for c in tau_coords):
            raise ValueError("tangent of %r is not contained in tangent of %r"
                             % (tau, sigma))
        n = self._complete_basis(cs, tau_coords)
        # orient from tau into sigma
        xs = cs.poly.relint_point()
        xt = ct.poly.relint_point()
        diff = tuple(a - b for a, b in zip(xs, xt))
        rows = [list(r) for r in ct.tangent.basis.entries] + [list(n)]
        coeffs = qsolve([[row[i] for row in rows] for i in range(len(n))], list(diff))
        if coeffs is None:
            raise ValueError("tau is not a face of sigma in the same stratum")
        if coeffs[-1] < 0:
            n = tuple(-x for x in n)
        self._normal_cache[key] = n
        return n

    def _complete_basis(self, cell, tau_coords):
        """Vector of T(cell) completing the given (k-1) coordinate rows to a basis."""
        from .zlattice import smith_normal_form
        k = cell.dim
        a = IntMatrix([list(c) for c in tau_coords], k)
        diag, left, right = smith_normal_form(a)
        for i in range(a.rows):
            if diag[i, i] != 1:
                raise ValueError("face tangent lattice is not saturated in the cell's")
        # rows of a generate the same lattice as the first k-1 rows of right^-1;
        # the last row of right^-1 completes them.
        target = [0] * k
        target[k - 1] = 1
        coords = list(int_solve(right.transpose(), target))
        basis = cell.tangent.basis.entries
        return tuple(sum(c * basis[i][j] for i, c in enumerate(coords))
                     for j in range(cell.poly.space_dim))

    def incidence_sign(self, sigma, tau):
        """epsilon_{sigma/tau} for a codimension-1 face pair.

        +1 iff eta_sigma = eta_tau ^ n_{sigma/tau} for finite pairs; for
        pairs at infinity the normal direction is the inward generator of
        the kernel of the stratum projection.
        """
        key = (sigma, tau)
        if key in self._eps_cache:
            return self._eps_cache[key]
        if (tau, sigma) in self.eps_override:
            return self.eps_override[(tau, sigma)]
        cs, ct = self.cells[sigma], self.cells[tau]
        if ct.dim != cs.dim - 1:
            raise ValueError("not a codimension-1 pair")
        if (tau, sigma) in self.face_rel:
            n = self.lattice_normal_vector(sigma, tau)
            rows = [cs.tangent.coordinates(r) for r in ct.tangent.basis.entries]
            rows.append(cs.tangent.coordinates(n))
        elif (tau, sigma) in self.at_infinity:
            rows = self._infinity_frame(sigma, tau)
        else:
            raise ValueError("(%r, %r) is not a face pair" % (tau, sigma))
        if any(r is None for r in rows):
            raise ValueError("face tangent data inconsistent at (%r, %r)" % (tau, sigma))
        det = IntMatrix([list(r) for r in rows], cs.dim).det()
        if abs(det) != 1:
            raise ValueError("incidence (%r, %r) is not unimodular" % (tau, sigma))
        eps = self.orientation[sigma] * self.orientation[tau] * (1 if det > 0 else -1)
        self._eps_cache[key] = eps
        return eps

    def _infinity_frame(self, sigma, tau):
        """Rows (in T(sigma) coordinates): lifts of T(tau)'s basis, then the
        inward kernel generator of the stratum projection."""
        cs, ct = self.cells[sigma], self.cells[tau]
        local = cs.local_coords()
        keep = [i for i, orig in enumerate(local) if orig not in ct.sedentarity]
        extra = [i for i, orig in enumerate(local) if orig in ct.sedentarity]
        hs = cs.tangent.basis.entries  # k rows of length m
        proj = IntMatrix([[hs[r][i] for r in range(len(hs))] for i in keep], len(hs))
        ker = kernel_basis(proj)
        if ker.rank != 1:
            raise ValueError("stratum projection kernel is not a line at (%r, %r)"
                             % (tau, sigma))
        w = ker.basis.row(0)
        wvec = tuple(sum(c * hs[i][j] for i, c in enumerate(w))
                     for j in range(cs.poly.space_dim))
        if sum(wvec[i] for i in extra) > 0:
            w = tuple(-x for x in w)
        rows = []
        for hrow in ct.tangent.basis.entries:
            y = int_solve(proj, list(hrow))
            rows.append(y)
        rows.append(w)
        return rows

    # -- JSON --------------------------------------------------------------

    def to_json_dict(self):
        cells = []
        for cid in self.cell_ids():
            c = self.cells[cid]
            faces = sorted([t, True] for t in self.faces_of(cid)
                           if (t, cid) in self.at_infinity)
            faces += sorted([t, False] for t in self.faces_of(cid)
                            if (t, cid) in self.face_rel)
            cells.append({
                "id": cid,
                "sedentarity": sorted(c.sedentarity),
                "vertices": [[str(x) for x in p] for p in c.poly.points],
                "rays": [list(r) for r in c.poly.rays],
                "faces": sorted(faces, key=lambda f: (str(f[0]), f[1])),
                "orientation_sign": self.orientation[cid],
            })
        return {"ambient_dim": self.ambient_dim, "cells": cells}

    @staticmethod
    def from_json_dict(doc):
        n = doc["ambient_dim"]
        cells = []
        face_rel = set()
        at_inf = set()
        orientation = {}
        for spec in doc["cells"]:
            poly = Polyhedron(n - len(spec.get("sedentarity", [])),
                              [[Fraction(x) for x in p] for p in spec["vertices"]],
                              spec.get("rays", []))
            cells.append(Cell(spec["id"], n, spec.get("sedentarity", []), poly))
            orientation[spec["id"]] = spec.get("orientation_sign", 1)
            for entry in spec.get("faces", []):
                t, inf = entry
                (at_inf if inf else face_rel).add((t, spec["id"]))
        return FaceComplex(n, cells, face_rel, at_inf, orientation)


# ---------------------------------------------------------------------------
# construction from polyhedra

def complex_from_polyhedra(ambient_dim, pieces, id_prefix="c"):
    """Build a validated-shape FaceComplex from (sedentarity, Polyhedron) pairs.

    Faces within each stratum are completed geometrically; at-infinity
    incidences between the given strata are recomputed.  Ids are assigned
    deterministically.  Returns (complex, key_to_id).
    """
    by_key = {}
    for sed, poly in pieces:
        sed = frozenset(sed)
        by_key[(sed, poly.key)] = (sed, poly)
        for face in poly.proper_faces().values():
            by_key[(sed, face.key)] = (sed, face)
    ordered = sorted(by_key.values(),
                     key=lambda sp: (len(sp[0]), sorted(sp[0]), sp[1].dim, _sort_key(sp[1])))
    cells = []
    key_to_id = {}
    for i, (sed, poly) in enumerate(ordered):
        cid = "%s%d" % (id_prefix, i)
        cells.append(Cell(cid, ambient_dim, sed, poly))
        key_to_id[(sed, poly.key)] = cid
    face_rel = set()
    at_inf = set()
    for a in cells:
        for b in cells:
            if a.id == b.id:
                continue
            if a.sedentarity == b.sedentarity:
                if a.dim < b.dim and b.poly.contains_polyhedron(a.poly):
                    face_rel.add((a.id, b.id))
            elif a.sedentarity > b.sedentarity:
                part = infinity_face_poly(b, a.sedentarity)
                if part is not None and part.contains_polyhedron(a.poly):
                    at_inf.add((a.id, b.id))
    fc = FaceComplex(ambient_dim, cells, face_rel, at_inf)
    return fc, key_to_id


def _sort_key(poly):
    eqs, ineqs = poly.hrep()
    return (eqs, ineqs, poly.points, poly.rays)


# ---------------------------------------------------------------------------
# validation

def validate_complex(c):
    """Check the face-complex invariants; returns a list of violations.

    Never raises on bad geometry: each problem is reported as a dict with a
    `kind` and the offending cells.
    """
    issues = []

    def bad(kind, **info):
        issues.append(dict(kind=kind, **info))

    for cid in c.cell_ids():
        cell = c.cells[cid]
        if not cell.poly.points:
            bad("no-vertices", cell=cid)
        dirs = cell.poly.direction_vectors()
        expected = saturate(Sublattice(cell.poly.space_dim, dirs)) if dirs \
            else Sublattice.zero(cell.poly.space_dim)
        if cell.tangent != expected:
            bad("tangent-mismatch", cell=cid)
        if cell.dim != cell.poly.dim:
            bad("dimension-mismatch", cell=cid)
        if not cell.sedentarity <= set(range(c.ambient_dim)):
            bad("sedentarity-out-of-range", cell=cid)

    # closure under same-stratum faces, and the face relation is geometric
    keys = {(cell.sedentarity, cell.poly.key): cid for cid, cell in c.cells.items()}
    for cid in c.cell_ids():
        cell = c.cells[cid]
        for face in cell.poly.proper_faces().values():
            fid = keys.get((cell.sedentarity, face.key))
            if fid is None:
                bad("missing-face", cell=cid)
            elif (fid, cid) not in c.face_rel:
                bad("missing-face-relation", face=fid, cell=cid)
    for (t, s) in c.face_rel:
        ct, cs = c.cells[t], c.cells[s]
        if ct.sedentarity != cs.sedentarity:
            bad("face-relation-across-strata", face=t, cell=s)
        elif ct.dim >= cs.dim or not cs.poly.contains_polyhedron(ct.poly):
            bad("not-a-face", face=t, cell=s)
        elif ct.poly.key not in cs.poly.proper_faces():
            bad("not-a-face", face=t, cell=s)
    for (t, s) in c.at_infinity:
        ct, cs = c.cells[t], c.cells[s]
        if not ct.sedentarity > cs.sedentarity:
            bad("at-infinity-sedentarity", face=t, cell=s)
            continue
        part = infinity_face_poly(cs, ct.sedentarity)
        if part is None or not part.contains_polyhedron(ct.poly):
            bad("not-a-face-at-infinity", face=t, cell=s)
    # completeness of recorded at-infinity incidences
    for cid in c.cell_ids():
        cs = c.cells[cid]
        for tid in c.cell_ids():
            ct = c.cells[tid]
            if ct.sedentarity > cs.sedentarity:
                part = infinity_face_poly(cs, ct.sedentarity)
                if part is not None and part.contains_polyhedron(ct.poly) \
                        and (tid, cid) not in c.at_infinity:
                    bad("missing-at-infinity-relation", face=tid, cell=cid)

    # pairwise intersections are common faces
    ids = c.cell_ids()
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            ca, cb = c.cells[a], c.cells[b]
            if ca.sedentarity != cb.sedentarity:
                continue
            inter = ca.poly.intersect(cb.poly)
            if inter is None:
                continue
            iid = keys.get((ca.sedentarity, inter.key))
            ok = iid is not None and all(
                iid == x or (iid, x) in c.face_rel for x in (a, b))
            if not ok:
                bad("intersection-not-common-face", cells=[a, b])

    # incidence signs: unimodularity and the d.d = 0 sign identity
    pairs = c.codim1_pairs()
    eps = {}
    for (t, s, _inf) in pairs:
        try:
            eps[(t, s)] = c.incidence_sign(s, t)
        except ValueError as e:
            bad("incidence-sign-error", face=t, cell=s, detail=str(e))
    by_sigma = {}
    for (t, s) in eps:
        by_sigma.setdefault(s, []).append(t)
    for s, taus in by_sigma.items():
        # for each corner rho < tau < sigma the signed contributions must cancel
        rho_sums = {}
        for t in taus:
            for r in c.facets_of(t):
                if (r, t) in eps:
                    rho_sums[r] = rho_sums.get(r, 0) + eps[(t, s)] * eps[(r, t)]
        for r, total in rho_sums.items():
            if total != 0:
                bad("dd-nonzero", cell=s, corner=r, total=total)

    return issues


# ---------------------------------------------------------------------------
# products, refinements, local fans

def product_complex(a, b):
    """The product face complex; tangents are direct sums, eta_{s x t} = eta_s ^ eta_t."""
    n = a.ambient_dim + b.ambient_dim
    cells = []
    orientation = {}
    face_rel = set()
    at_inf = set()
    pair_ids = {}
    for ia in a.cell_ids():
        ca = a.cells[ia]
        for ib in b.cell_ids():
            cb = b.cells[ib]
            cid = "%s*%s" % (ia, ib)
            pair_ids[(ia, ib)] = cid
            sed = ca.sedentarity | {a.ambient_dim + i for i in cb.sedentarity}
            pts = [p + q for p in ca.poly.points for q in cb.poly.points]
            zeros_a = (0,) * ca.poly.space_dim
            zeros_b = (0,) * cb.poly.space_dim
            rys = [tuple(r) + zeros_b for r in ca.poly.rays]
            rys += [zeros_a + tuple(r) for r in cb.poly.rays]
            cell = Cell(cid, n, sed, Polyhedron(ca.poly.space_dim + cb.poly.space_dim,
                                                pts, rys))
            cells.append(cell)
            orientation[cid] = _product_orientation(ca, cb, cell,
                                                    a.orientation[ia], b.orientation[ib])
    for ia in a.cell_ids():
        for ib in b.cell_ids():
            cid = pair_ids[(ia, ib)]
            for (ta, inf_a) in [(t, False) for t in a.faces_of(ia)
                                if (t, ia) in a.face_rel] \
                    + [(t, True) for t in a.faces_of(ia) if (t, ia) in a.at_infinity]:
                rel = at_inf if inf_a else face_rel
                rel.add((pair_ids[(ta, ib)], cid))
            for (tb, inf_b) in [(t, False) for t in b.faces_of(ib)
                                if (t, ib) in b.face_rel] \
                    + [(t, True) for t in b.faces_of(ib) if (t, ib) in b.at_infinity]:
                rel = at_inf if inf_b else face_rel
                rel.add((pair_ids[(ia, tb)], cid))
            for (ta, inf_a) in [(t, False) for t in a.faces_of(ia)
                                if (t, ia) in a.face_rel] \
                    + [(t, True) for t in a.faces_of(ia) if (t, ia) in a.at_infinity]:
                for (tb, inf_b) in [(t, False) for t in b.faces_of(ib)
                                    if (t, ib) in b.face_rel] \
                        + [(t, True) for t in b.faces_of(ib) if (t, ib) in b.at_infinity]:
                    rel = at_inf if (inf_a or inf_b) else face_rel
                    rel.add((pair_ids[(ta, tb)], cid))
    return FaceComplex(n, cells, face_rel, at_inf, orientation)


def _product_orientation(ca, cb, cell, sa, sb):
    """Sign making eta of the product cell equal eta_a ^ eta_b."""
    ha = ca.tangent.basis
    hb = cb.tangent.basis
    ma, mb = ca.poly.space_dim, cb.poly.space_dim
    rows = [tuple(r) + (0,) * mb for r in ha.entries]
    rows += [(0,) * ma + tuple(r) for r in hb.entries]
    coords = [cell.tangent.coordinates(r) for r in rows]
    det = IntMatrix([list(r) for r in coords], cell.dim).det()
    if abs(det) != 1:
        raise AssertionError("product tangent is not the direct sum")
    return sa * sb * (1 if det > 0 else -1)


def _refine_poly(poly, forms):
    """Refine one polyhedron by a list of unoriented functionals (a, b)."""
    pieces = [poly]
    for a, b in forms:
        nxt = []
        for p in pieces:
            vals = [_dot(a, x) + b for x in p.points] + [_dot(a, r) for r in p.rays]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                nxt.append(p)
                continue
            for sign in (1, -1):
                side = p.cut_halfspace(tuple(sign * x for x in a), sign * b)
                if side is not None and side.dim == p.dim:
                    nxt.append(side)
        pieces = nxt
    out = {}
    for p in pieces:
        out[p.key] = p
    return list(out.values())


def common_refinement(a, b, check_supports=True):
    """Common refinement of two complexes with equal support.

    Returns (complex, parents_a, parents_b) where the parent maps send each
    refined cell id to the smallest original cell containing it.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    seds = {c.sedentarity for c in a.cells.values()} | \
           {c.sedentarity for c in b.cells.values()}
    pieces = []
    for sed in seds:
        amax = [a.cells[cid] for cid in a.maximal_cells()
                if a.cells[cid].sedentarity == sed]
        bmax = [b.cells[cid] for cid in b.maximal_cells()
                if b.cells[cid].sedentarity == sed]
        forms = set()
        for cell in amax + bmax:
            forms |= cell.poly.hyperplane_forms()
        forms = sorted(forms)
        seen = set()
        for cell in amax + bmax:
            for piece in _refine_poly(cell.poly, forms):
                if piece.key not in seen:
                    seen.add(piece.key)
                    pieces.append((sed, piece))
    refined, _keys = complex_from_polyhedra(a.ambient_dim, pieces, id_prefix="r")
    parents_a = _parent_map(refined, a)
    parents_b = _parent_map(refined, b)
    if check_supports:
        for cid, parent in parents_a.items():
            if parent is None:
                raise ValueError("supports differ: refined cell %s is not in the first complex"
                                 % cid)
        for cid, parent in parents_b.items():
            if parent is None:
                raise ValueError("supports differ: refined cell %s is not in the second complex"
                                 % cid)
    return refined, parents_a, parents_b


def _parent_map(refined, original):
    out = {}
    for cid in refined.cell_ids():
        cell = refined.cells[cid]
        x = cell.poly.relint_point()
        best = None
        for oid in original.cell_ids():
            oc = original.cells[oid]
            if oc.sedentarity == cell.sedentarity and oc.poly.contains(x):
                if best is None or oc.dim < original.cells[best].dim:
                    best = oid
        out[cid] = best
    return out


def arrangement_refinement(c, hyperplanes):
    """Refine every stratum of `c` by ambient hyperplanes (a, b): a.x + b = 0.

    A hyperplane applies to a stratum only when its normal does not involve
    the stratum's deleted coordinates.  Returns (complex, parent_map).
    """
    same_stratum_faces = {t for (t, _s) in c.face_rel}
    stratum_maximal = [cid for cid in c.cell_ids()
                       if cid not in same_stratum_faces]
    pieces = []
    for cid in stratum_maximal:
        cell = c.cells[cid]
        local = cell.local_coords()
        forms = []
        for a, b in hyperplanes:
            if any(a[i] != 0 for i in cell.sedentarity):
                continue
            forms.append((tuple(a[i] for i in local), b))
        for piece in _refine_poly(cell.poly, forms):
            pieces.append((cell.sedentarity, piece))
    dedup = {}
    for sed, p in pieces:
        dedup[(sed, p.key)] = (sed, p)
    refined, _keys = complex_from_polyhedra(c.ambient_dim, list(dedup.values()),
                                            id_prefix="r")
    return refined, _parent_map(refined, c)


def local_fan(c, x):
    """The fan of cones over cells containing x (sedentarity-0 stratum).

    For x in the relative interior of a maximal cell this is a single
    linear space (with its faces).
    """
    x = tuple(Fraction(v) for v in x)
    hits = [cid for cid in c.cell_ids()
            if not c.cells[cid].sedentarity and c.cells[cid].poly.contains(x)]
    if not hits:
        raise ValueError("point is not in the sedentarity-0 support")
    pieces = []
    for cid in hits:
        poly = c.cells[cid].poly
        zero = (Fraction(0),) * poly.space_dim
        rays = [tuple(p[i] - x[i] for i in range(len(x))) for p in poly.points]
        rays = [clear_denominators(r) for r in rays if any(r)]
        rays += [tuple(r) for r in poly.rays]
        pieces.append((frozenset(), Polyhedron(poly.space_dim, [zero], rays)))
    fan, _keys = complex_from_polyhedra(c.ambient_dim, pieces, id_prefix="lf")
    return fan
