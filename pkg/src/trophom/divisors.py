"""Piecewise integral-affine functions, Cartier divisors, and the
divisor-cycle intersection with its chain-level certificate.

The intersection weight at a codimension-1 face tau of a weighted complex is

    sum_sigma A(sigma) * < m_sigma - m_tau, n_{sigma/tau} >

over the k-dimensional cofaces, where m_sigma is the covector of the
function on sigma and m_tau any affine extension of its restriction to tau
(the choice drops out for balanced cycles).
"""

from fractions import Fraction

from .cycles import TropicalCycle, _weight_lookup, is_balanced
from .forms import omega_p
from .polyhedral import FaceComplex, _refine_poly, complex_from_polyhedra
from .zlattice import pair_form_vector, wedge_vector


class PLFunction:
    """A piecewise affine function with integral slopes on a face complex.

    `cell_data` maps cell ids to (covector, constant); cells without an
    entry inherit the data of a maximal coface (well defined for continuous
    functions, which verify_pl checks).
    """

    def __init__(self, complex_, cell_data):
        self.complex = complex_
        self.cell_data = {}
        for cid, (cov, const) in cell_data.items():
            if cid not in complex_.cells:
                raise ValueError("data on unknown cell %r" % cid)
            cov = tuple(cov)
            if any(not isinstance(x, int) for x in cov):
                raise ValueError("covectors must be integral")
            self.cell_data[cid] = (cov, Fraction(const))

    def data_for_cell(self, cid):
        if cid in self.cell_data:
            return self.cell_data[cid]
        for coface in self.complex.maximal_cofaces(cid):
            if coface in self.cell_data:
                return self.cell_data[coface]
        raise ValueError("no affine data on or above cell %r" % cid)

    def data_at_point(self, y, sed=frozenset()):
        """(covector, constant) of the smallest cell containing y, or None."""
        best = None
        for cid in self.complex.cell_ids():
            cell = self.complex.cells[cid]
            if cell.sedentarity == frozenset(sed) and cell.poly.contains(y):
                if best is None or cell.dim < self.complex.cells[best].dim:
                    best = cid
        if best is None:
            return None
        return self.data_for_cell(best)

    def value(self, y):
        data = self.data_at_point(y)
        if data is None:
            raise ValueError("point outside the complex")
        cov, const = data
        return sum(c * x for c, x in zip(cov, y)) + const

    def to_json_dict(self):
        return {"complex": self.complex.to_json_dict(),
                "cells": {cid: {"covector": list(cov), "constant": str(const)}
                          for cid, (cov, const) in sorted(self.cell_data.items())}}

    @staticmethod
    def from_json_dict(doc):
        complex_doc = doc.get("complex", doc.get("complex_ref"))
        c = FaceComplex.from_json_dict(complex_doc)
        data = {cid: (tuple(int(x) for x in entry["covector"]),
                      Fraction(entry["constant"]))
                for cid, entry in doc["cells"].items()}
        return PLFunction(c, data)


def verify_pl(f):
    """Continuity report: one entry per finite face pair where the affine
    data of the face and the coface disagree on the face."""
    issues = []
    c = f.complex
    for (tid, sid) in sorted(c.face_rel):
        tau = c.cells[tid]
        try:
            mt, at = f.data_for_cell(tid)
            ms, as_ = f.data_for_cell(sid)
        except ValueError as e:
            issues.append({"kind": "missing-data", "detail": str(e)})
            continue
        dm = tuple(a - b for a, b in zip(ms, mt))
        da = as_ - at
        bad = any(sum(m * x for m, x in zip(dm, p)) + da != 0 for p in tau.poly.points)
        bad = bad or any(sum(m * x for m, x in zip(dm, r)) != 0 for r in tau.poly.rays)
        if bad:
            issues.append({"kind": "discontinuous", "face": tid, "cell": sid})
    return issues


class CartierDivisor:
    """A divisor given by a principal piecewise affine representative."""

    def __init__(self, pl):
        self.pl = pl

    def support_ids(self):
        """Cells where the function is not locally affine: some two maximal
        cofaces carry different covectors."""
        f = self.pl
        out = []
        for cid in f.complex.cell_ids():
            covs = {f.data_for_cell(x)[0] for x in f.complex.maximal_cofaces(cid)}
            if len(covs) > 1:
                out.append(cid)
        return out


def pl_from_terms(base, terms):
    """The tropical polynomial max of affine terms, as a PLFunction on the
    refinement of `base` by all pairwise difference hyperplanes.

    `terms` is a list of (covector, constant) pairs.
    """
    from .polyhedral import arrangement_refinement
    hyperplanes = []
    for i, (mi, ai) in enumerate(terms):
        for (mj, aj) in terms[i + 1:]:
            a = tuple(x - y for x, y in zip(mi, mj))
            if any(a) or Fraction(ai) != Fraction(aj):
                hyperplanes.append((a, Fraction(ai) - Fraction(aj)))
    refined, _parents = arrangement_refinement(base, hyperplanes)
    data = {}
    for cid in refined.cell_ids():
        cell = refined.cells[cid]
        if cell.sedentarity:
            continue
        y = cell.poly.relint_point()
        vals = [sum(Fraction(m) * x for m, x in zip(cov, y)) + Fraction(a)
                for cov, a in terms]
        best = max(range(len(terms)), key=lambda i: (vals[i], -i))
        data[cid] = (tuple(int(x) for x in terms[best][0]), Fraction(terms[best][1]))
    return PLFunction(refined, data)


# ---------------------------------------------------------------------------
# intersection

def _divisor_weight(c, weights, tid, m_of, m_tau):
    """The intersection weight at tau from coface covectors and an affine
    extension m_tau of the function on tau."""
    total = 0
    for sid in sorted(c.cofaces_of(tid)):
        if (tid, sid) not in c.face_rel or c.cells[sid].dim != c.cells[tid].dim + 1:
            continue
        w = weights.get(sid, 0)
        if not w:
            continue
        n = c.lattice_normal_vector(sid, tid)
        dm = tuple(a - b for a, b in zip(m_of[sid], m_tau))
        total += w * sum(x * y for x, y in zip(dm, n))
    return total


def _aligned_data(d, a):
    """Refine |a| by the divisor's cell structure; returns
    (refined complex, k-cell weights, per-cell covectors)."""
    phi = d.pl
    k = a.k
    n = a.complex.ambient_dim
    support = []
    for cid in a.support_ids():
        cell = a.complex.cells[cid]
        if cell.sedentarity:
            raise ValueError("divisor intersection supports sedentarity-0 cycles only")
        support.append(cell.poly)
    forms = set()
    for p in support:
        forms |= p.hyperplane_forms()
    for mid in phi.complex.maximal_cells():
        mcell = phi.complex.cells[mid]
        if not mcell.sedentarity:
            forms |= mcell.poly.hyperplane_forms()
    forms = sorted(forms)
    pieces = []
    seen = set()
    for p in support:
        for piece in _refine_poly(p, forms):
            if piece.key not in seen:
                seen.add(piece.key)
                pieces.append((frozenset(), piece))
    refined = complex_from_polyhedra(n, pieces)[0]
    weights = {}
    covectors = {}
    for cid in refined.cell_ids():
        cell = refined.cells[cid]
        y = cell.poly.relint_point()
        if cell.dim == k:
            weights[cid] = _weight_lookup(a, frozenset(), y)
        data = phi.data_at_point(y)
        if data is None:
            raise ValueError("the function is not defined on all of the support")
        covectors[cid] = data[0]
    return refined, weights, covectors


def intersect(d, a):
    """The Allermann-Rau divisor-cycle intersection, a (k-1)-cycle."""
    bad = is_balanced(a)
    if bad:
        raise ValueError("cannot intersect an unbalanced cycle: %r" % bad)
    refined, weights, covectors = _aligned_data(d, a)
    k = a.k
    out_weights = {}
    for tid in refined.cells_of_dim(k - 1):
        w = _divisor_weight(refined, weights, tid, covectors, covectors[tid])
        if w:
            out_weights[tid] = w
    out = TropicalCycle(refined, k - 1, out_weights)
    bad = is_balanced(out)
    if bad:
        raise AssertionError("divisor intersection is unbalanced: %r" % bad)
    return out


def _pair_form_cov_with_frame(omega, cov, frame, m):
    """<omega ^ cov, v_1 ^ ... ^ v_k> for omega in lex wedge^{k-1}
    coordinates on Z^m, a covector cov, and the frame rows v_i."""
    total = 0
    for j in range(len(frame)):
        rest = list(frame[:j]) + list(frame[j + 1:])
        sign = (-1) ** (len(frame) - 1 - j)
        val = sum(c * v for c, v in zip(cov, frame[j]))
        total += sign * val * pair_form_vector(omega, wedge_vector(rest, m))
    return total


def divisor_cap_class(d, a):
    """intersect(d, a) together with the chain-level certificate.

    For every codimension-1 cell tau and every basis form omega of the
    (k-1)-form stalk at tau, the boundary coefficient computed through the
    incidence-sign formula must equal <omega, eta_tau> times the
    intersection weight.  The two sides share no code path beyond the
    refined complex; a mismatch raises AssertionError.
    """
    bad = is_balanced(a)
    if bad:
        raise ValueError("cannot intersect an unbalanced cycle: %r" % bad)
    refined, weights, covectors = _aligned_data(d, a)
    k = a.k
    m = refined.ambient_dim
    sheaf = omega_p(refined, k - 1)
    out_weights = {}
    certificate = []
    for tid in refined.cells_of_dim(k - 1):
        w = _divisor_weight(refined, weights, tid, covectors, covectors[tid])
        if w:
            out_weights[tid] = w
        cofaces = [sid for sid in sorted(refined.cofaces_of(tid))
                   if (tid, sid) in refined.face_rel
                   and refined.cells[sid].dim == k and weights.get(sid, 0)]
        if not cofaces:
            continue
        tau = refined.cells[tid]
        eta_tau = wedge_vector(list(tau.tangent.basis.entries), m)
        s_tau = refined.orientation[tid]
        for omega in sheaf.lifts[tid]:
            lhs = 0
            for sid in cofaces:
                sigma = refined.cells[sid]
                dm = tuple(x - y for x, y in zip(covectors[sid], covectors[tid]))
                frame = list(sigma.tangent.basis.entries)
                val = _pair_form_cov_with_frame(omega, dm, frame, m)
                lhs += refined.incidence_sign(sid, tid) * weights[sid] \
                    * refined.orientation[sid] * val
            rhs = s_tau * pair_form_vector(omega, eta_tau) * w
            certificate.append({"face": tid, "lhs": lhs, "rhs": rhs})
            if lhs != rhs:
                raise AssertionError(
                    "chain-level certificate failed at %r: %d != %d" % (tid, lhs, rhs))
    out = TropicalCycle(refined, k - 1, out_weights)
    bad = is_balanced(out)
    if bad:
        raise AssertionError("divisor intersection is unbalanced: %r" % bad)
    return out, certificate
