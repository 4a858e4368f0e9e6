import random
from fractions import Fraction

import pytest

from trophom.cycles import (
    TropicalCycle,
    add_cycles,
    cycles_equal,
    fundamental_cycle,
    is_balanced,
)
from trophom.divisors import (
    CartierDivisor,
    PLFunction,
    _aligned_data,
    _divisor_weight,
    divisor_cap_class,
    intersect,
    pl_from_terms,
    verify_pl,
)
from trophom.polyhedral import Polyhedron, complex_from_polyhedra
from trophom.zlattice import clear_denominators, qnullspace


def plane_complex():
    plane = Polyhedron(2, [(0, 0)], [(1, 0), (-1, 0), (0, 1), (0, -1)])
    return complex_from_polyhedra(2, [(frozenset(), plane)])[0]


def plane_cycle(weight=1):
    c = plane_complex()
    return TropicalCycle(c, 2, {c.cells_of_dim(2)[0]: weight})


def tropical_line(weights=(1, 1, 1)):
    pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
              for r in [(1, 0), (0, 1), (-1, -1)]]
    c, keys = complex_from_polyhedra(2, pieces)
    ws = {}
    for (sed, poly), w in zip(pieces, weights):
        ws[keys[(sed, poly.key)]] = w
    return TropicalCycle(c, 1, ws)


def max_x_zero():
    """max(x, 0) on the plane."""
    return CartierDivisor(pl_from_terms(plane_complex(), [((1, 0), 0), ((0, 0), 0)]))


def standard_line_divisor():
    """max(0, -x, -y): its corner locus is the standard tropical line."""
    return CartierDivisor(pl_from_terms(
        plane_complex(), [((0, 0), 0), ((-1, 0), 0), ((0, -1), 0)]))


class TestPLFunction:
    def test_global_affine_has_empty_support(self):
        c = plane_complex()
        f = PLFunction(c, {cid: ((2, -1), Fraction(1, 3)) for cid in c.maximal_cells()})
        assert verify_pl(f) == []
        assert CartierDivisor(f).support_ids() == []
        assert f.value((1, 1)) == Fraction(4, 3)

    def test_max_terms_builds_continuous_function(self):
        f = pl_from_terms(plane_complex(), [((1, 0), 0), ((0, 1), 0), ((0, 0), 0)])
        assert verify_pl(f) == []
        for y in [(3, 1), (1, 3), (-2, -5), (Fraction(1, 2), Fraction(1, 2))]:
            assert f.value(y) == max(y[0], y[1], 0)

    def test_support_of_max(self):
        d = max_x_zero()
        support = d.support_ids()
        assert support
        for cid in support:
            cell = d.pl.complex.cells[cid]
            assert all(p[0] == 0 for p in cell.poly.points)
            assert all(r[0] == 0 for r in cell.poly.rays)

    def test_jump_reported(self):
        c = complex_from_polyhedra(
            1, [(frozenset(), Polyhedron(1, [(0,)], [(1,)])),
                (frozenset(), Polyhedron(1, [(0,)], [(-1,)]))])[0]
        data = {cid: ((1,), 0) if c.cells[cid].poly.contains((1,)) else ((1,), 5)
                for cid in c.cells_of_dim(1)}
        f = PLFunction(c, data)
        assert any(i["kind"] == "discontinuous" for i in verify_pl(f))

    def test_json_round_trip(self):
        import json
        f = max_x_zero().pl
        doc = json.loads(json.dumps(f.to_json_dict()))
        back = PLFunction.from_json_dict(doc)
        assert verify_pl(back) == []
        assert back.value((2, 7)) == 2


class TestIntersect:
    def test_affine_gives_zero(self):
        c = plane_complex()
        f = PLFunction(c, {cid: ((3, 1), 0) for cid in c.maximal_cells()})
        out = intersect(CartierDivisor(f), plane_cycle())
        assert out.is_zero()

    def test_max_x_zero_on_plane(self):
        out = intersect(max_x_zero(), plane_cycle())
        assert out.k == 1
        assert is_balanced(out) == []
        ids = out.support_ids()
        assert all(out.weights[cid] == 1 for cid in ids)
        for cid in ids:
            cell = out.complex.cells[cid]
            assert all(p[0] == 0 for p in cell.poly.points)
            assert all(r[0] == 0 for r in cell.poly.rays)
        # total: the vertical line with weight 1
        line = complex_from_polyhedra(
            2, [(frozenset(), Polyhedron(2, [(0, 0)], [(0, 1), (0, -1)]))])[0]
        assert cycles_equal(out, fundamental_cycle(line))

    def test_standard_line_from_divisor(self):
        out = intersect(standard_line_divisor(), plane_cycle())
        assert cycles_equal(out, tropical_line())

    def test_weight_scales_with_cycle(self):
        out = intersect(max_x_zero(), plane_cycle(3))
        assert set(out.weights.values()) == {3}

    def test_additive_in_cycles(self):
        d = standard_line_divisor()
        a = plane_cycle(1)
        b = plane_cycle(2)
        lhs = intersect(d, add_cycles(a, b))
        rhs = add_cycles(intersect(d, a), intersect(d, b))
        assert cycles_equal(lhs, rhs)

    def test_unbalanced_input_rejected(self):
        with pytest.raises(ValueError):
            intersect(max_x_zero(), tropical_line((1, 1, 2)))

    def test_extension_choice_is_irrelevant(self):
        # perturbing the affine extension at tau by covectors vanishing on
        # T(tau) leaves the weight unchanged, thanks to balancing
        d = standard_line_divisor()
        a = plane_cycle()
        refined, weights, covectors = _aligned_data(d, a)
        rng = random.Random(42)
        for tid in refined.cells_of_dim(1):
            base = _divisor_weight(refined, weights, tid, covectors, covectors[tid])
            tau = refined.cells[tid]
            for nu in qnullspace([list(r) for r in tau.tangent.basis.entries], 2):
                nu = clear_denominators(nu)
                for _ in range(5):
                    t = rng.randint(-4, 4)
                    shifted = tuple(m + t * x for m, x in zip(covectors[tid], nu))
                    assert _divisor_weight(refined, weights, tid, covectors,
                                           shifted) == base


class TestCapClassCertificate:
    def test_affine_zero_certificate(self):
        c = plane_complex()
        f = PLFunction(c, {cid: ((1, 1), 0) for cid in c.maximal_cells()})
        out, cert = divisor_cap_class(CartierDivisor(f), plane_cycle())
        assert out.is_zero()
        assert all(entry["lhs"] == entry["rhs"] == 0 for entry in cert)

    def test_standard_line_certificate_matches(self):
        out, cert = divisor_cap_class(standard_line_divisor(), plane_cycle())
        assert cycles_equal(out, tropical_line())
        assert cert
        assert all(entry["lhs"] == entry["rhs"] for entry in cert)
        assert any(entry["rhs"] != 0 for entry in cert)

    def test_max_x_zero_certificate(self):
        out, cert = divisor_cap_class(max_x_zero(), plane_cycle())
        assert all(entry["lhs"] == entry["rhs"] for entry in cert)

    def test_iterated_intersection_vanishes(self):
        d = max_x_zero()
        line = intersect(d, plane_cycle())
        again = intersect(d, line)
        assert again.is_zero()

    def test_line_cut_down_to_vertex(self):
        # max(0,-x,-y) on the standard line: one transverse intersection point
        d = standard_line_divisor()
        out, cert = divisor_cap_class(d, tropical_line())
        assert all(entry["lhs"] == entry["rhs"] for entry in cert)
        assert out.k == 0
        assert sum(out.weights.values()) == 1
