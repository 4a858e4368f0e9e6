"""End-to-end acceptance suite.

Each test pins one of the headline guarantees of the package, with
explicit wall-clock bounds where the guarantee includes one.  Expected
values come from independent hand computations or brute-force oracles
defined inside the tests, never from the library code under test.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from trophom.cycles import (
    TropicalCycle,
    cross_product,
    cycles_equal,
    fundamental_cycle,
    is_balanced,
    push_forward,
)
from trophom.divisors import CartierDivisor, divisor_cap_class, intersect, pl_from_terms
from trophom.forms import omega_p
from trophom.homology import (
    bm_complex,
    bm_table,
    cohomology_table,
    cross_class,
    cycle_class,
    cycle_class_chain,
    kunneth_check,
    pd_check,
    pushforward_class,
)
from trophom.matroids import Matroid, bergman_fan, uniform_matroid
from trophom.polyhedral import (
    AffineMap,
    Cell,
    FaceComplex,
    Polyhedron,
    arrangement_refinement,
    complex_from_polyhedra,
    product_complex,
    validate_complex,
)
from trophom.zlattice import (
    IntMatrix,
    Sublattice,
    lattice_index,
    smith_normal_form,
)


def standard_line_complex():
    pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
              for r in [(1, 0), (0, 1), (-1, -1)]]
    return complex_from_polyhedra(2, pieces)[0]


def standard_line_cycle(weights=(1, 1, 1)):
    c = standard_line_complex()
    return TropicalCycle(c, 1, dict(zip(c.cells_of_dim(1), weights)))


def plane_complex():
    poly = Polyhedron(2, [(0, 0)], [(1, 0), (-1, 0), (0, 1), (0, -1)])
    return complex_from_polyhedra(2, [(frozenset(), poly)])[0]


def plane_cycle():
    c = plane_complex()
    return TropicalCycle(c, 2, {c.cells_of_dim(2)[0]: 1})


def real_line_complex():
    pieces = [(frozenset(), Polyhedron(1, [(0,)], [(1,)])),
              (frozenset(), Polyhedron(1, [(0,)], [(-1,)]))]
    return complex_from_polyhedra(1, pieces)[0]


def real_line_cycle(weight=1):
    c = real_line_complex()
    return TropicalCycle(c, 1, {cid: weight for cid in c.cells_of_dim(1)})


def half_line_compactified():
    return complex_from_polyhedra(
        1, [(frozenset(), Polyhedron(1, [(0,)], [(-1,)])),
            (frozenset(), Polyhedron(1, [(0,)], [(1,)])),
            (frozenset([0]), Polyhedron(0, [()]))])[0]


def k4_matroid():
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def is_tree(subset):
        parent = list(range(4))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in subset:
            ru, rv = find(edges[e][0]), find(edges[e][1])
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    return Matroid(range(6), [b for b in combinations(range(6), 3)
                              if is_tree(b)])


class TestCriterion1StalkTable:
    def test_one_form_stalks_of_the_standard_line(self):
        start = time.monotonic()
        c = standard_line_complex()
        sheaf1 = omega_p(c, 1)
        sheaf2 = omega_p(c, 2)
        for cid in c.cell_ids():
            dim = c.cells[cid].dim
            assert sheaf1.rank(cid) == (2 if dim == 0 else 1)
            assert sheaf2.rank(cid) == 0
        assert time.monotonic() - start < 1.0


class TestCriterion2ThreeHalfPlanes:
    def test_two_form_stalk_on_the_common_line(self):
        e0 = (1, 0, 0)
        pieces = [(frozenset(),
                   Polyhedron(3, [(0, 0, 0)], [e0, (-1, 0, 0), ray]))
                  for ray in [(0, 1, 0), (0, 0, 1), (0, -1, -1)]]
        c = complex_from_polyhedra(3, pieces)[0]
        line = next(cid for cid in c.cells_of_dim(1)
                    if c.cells[cid].poly.contains((5, 0, 0)))
        assert omega_p(c, 2).rank(line) == 2


class TestCriterion3BalancingSuite:
    def test_suite(self):
        start = time.monotonic()
        assert is_balanced(standard_line_cycle()) == []
        bad = is_balanced(standard_line_cycle((1, 1, 2)))
        assert len(bad) == 1
        for m in [uniform_matroid(2, 3), uniform_matroid(2, 4),
                  uniform_matroid(3, 4), k4_matroid()]:
            assert is_balanced(bergman_fan(m).fundamental_cycle()) == []
        assert time.monotonic() - start < 5.0


class TestCriterion4DivisorIntersection:
    def test_standard_line_cut_from_the_plane(self):
        # max(0, -x, -y) has the standard line (rays e1, e2, -e1-e2) as its
        # corner locus; all weights must be 1
        d = CartierDivisor(pl_from_terms(
            plane_complex(), [((0, 0), 0), ((-1, 0), 0), ((0, -1), 0)]))
        out = intersect(d, plane_cycle())
        assert cycles_equal(out, standard_line_cycle())
        assert sorted(out.weights[cid] for cid in out.support_ids()) == [1, 1, 1]

    def test_max_x_y_zero_corner_fan(self):
        # max(x, y, 0) itself has corner locus with rays (1,1), (-1,0), (0,-1)
        d = CartierDivisor(pl_from_terms(
            plane_complex(), [((1, 0), 0), ((0, 1), 0), ((0, 0), 0)]))
        out = intersect(d, plane_cycle())
        pieces = [(frozenset(), Polyhedron(2, [(0, 0)], [r]))
                  for r in [(1, 1), (-1, 0), (0, -1)]]
        expected = fundamental_cycle(complex_from_polyhedra(2, pieces)[0])
        assert cycles_equal(out, expected)


class TestCriterion5PushForward:
    def test_doubling_gives_lattice_index_two(self):
        out = push_forward(AffineMap([[2]]), real_line_cycle())
        assert is_balanced(out) == []
        assert cycles_equal(out, real_line_cycle(2))

    def test_difference_of_coordinates_on_the_line(self):
        out = push_forward(AffineMap([[1, -1]]), standard_line_cycle())
        assert is_balanced(out) == []
        assert cycles_equal(out, real_line_cycle(1))


class TestCriterion6PoincareDuality:
    def cases(self):
        yield "B(U_{2,3})", bergman_fan(uniform_matroid(2, 3)).fan
        yield "B(U_{2,4})", bergman_fan(uniform_matroid(2, 4)).fan
        yield "B(U_{3,4})", bergman_fan(uniform_matroid(3, 4)).fan
        yield "half-line", half_line_compactified()
        yield "plane", plane_complex()
        yield "line x line", product_complex(standard_line_complex(),
                                             standard_line_complex())

    def test_tables_match_with_torsion(self):
        for name, c in self.cases():
            start = time.monotonic()
            out = pd_check(c)
            assert out["ok"], (name, out["table"])
            for entry in out["table"].values():
                assert entry["bm"] == entry["dual"]
            assert time.monotonic() - start < 30.0, name

    def test_reference_table_u23(self):
        ranks = {pq: r.shape.free_rank
                 for pq, r in bm_table(bergman_fan(uniform_matroid(2, 3)).fan).items()}
        assert ranks == {(0, 0): 0, (0, 1): 2, (1, 0): 0, (1, 1): 1}


class TestCriterion7Kunneth:
    def test_line_times_line(self):
        start = time.monotonic()
        out = kunneth_check(standard_line_complex(), standard_line_complex())
        assert out["ok"]
        assert all(v["mode"] == "exact" for v in out["table"].values())
        got = {pq: v["product"].free_rank for pq, v in out["table"].items()}
        assert got[(2, 2)] == 1 and got[(1, 2)] == 4 and got[(0, 2)] == 4
        assert time.monotonic() - start < 30.0

    def test_real_line_times_bergman_u23(self):
        start = time.monotonic()
        out = kunneth_check(real_line_complex(),
                            bergman_fan(uniform_matroid(2, 3)).fan)
        assert out["ok"]
        assert all(v["mode"] == "exact" for v in out["table"].values())
        got = {pq: v["product"].free_rank for pq, v in out["table"].items()}
        assert got[(2, 2)] == 1 and got[(1, 2)] == 3 and got[(0, 2)] == 2
        assert time.monotonic() - start < 30.0


class TestCriterion8CycleClassCoherence:
    def test_commutes_with_push_forward(self):
        a = standard_line_cycle()
        f = AffineMap([[1, -1]])
        pushed = push_forward(f, a)
        lhs = pushforward_class(f, cycle_class(a), a.complex, pushed.complex)
        rhs = cycle_class(pushed)
        assert lhs.vector == rhs.vector

    def test_takes_cross_products_to_cross_products(self):
        a = standard_line_cycle()
        b = standard_line_cycle()
        prod = cross_product(a, b)
        lhs = cross_class(cycle_class(a), cycle_class(b), a.complex,
                          b.complex, prod=prod.complex)
        rhs = cycle_class(prod)
        assert lhs.vector == rhs.vector

    def test_divisor_cap_certificate(self):
        d = CartierDivisor(pl_from_terms(
            plane_complex(), [((0, 0), 0), ((-1, 0), 0), ((0, -1), 0)]))
        out, cert = divisor_cap_class(d, plane_cycle())
        assert cert and all(e["lhs"] == e["rhs"] for e in cert)
        cls = cycle_class(out, out.complex)
        by_face = {}
        for e in cert:
            by_face.setdefault(e["face"], []).append(e["rhs"])
        for tid, rhss in by_face.items():
            assert [cls.vector.get((tid, i), 0)
                    for i in range(len(rhss))] == rhss


class TestCriterion9ClosedIffBalanced:
    def test_random_weighted_fans(self):
        from math import gcd
        rng = random.Random(2026)
        checked = 0
        seen_balanced = seen_unbalanced = 0
        def primitive(v):
            g = gcd(abs(v[0]), abs(v[1]))
            return (v[0] // g, v[1] // g)

        while checked < 110:
            rays = {}
            while len(rays) < rng.randint(2, 5):
                v = (rng.randint(-4, 4), rng.randint(-4, 4))
                if v != (0, 0):
                    rays[primitive(v)] = rng.randint(1, 4)
            if checked % 2 == 0:
                # close the fan up: one more ray chosen so weights balance
                total = (sum(w * r[0] for r, w in rays.items()),
                         sum(w * r[1] for r, w in rays.items()))
                if total == (0, 0) or primitive(total) in rays:
                    continue
                rays[primitive(total)] = -gcd(abs(total[0]), abs(total[1]))
            pieces = [(r, Polyhedron(2, [(0, 0)], [r])) for r in sorted(rays)]
            c, keys = complex_from_polyhedra(
                2, [(frozenset(), p) for _r, p in pieces])
            ws = {keys[(frozenset(), p.key)]: rays[r] for r, p in pieces}
            a = TropicalCycle(c, 1, ws)
            balanced = is_balanced(a) == []
            assert cycle_class_chain(a).closed == balanced
            seen_balanced += balanced
            seen_unbalanced += not balanced
            checked += 1
        assert checked >= 100 and seen_balanced and seen_unbalanced


class TestCriterion10KernelOracles:
    def test_snf_against_minor_gcd_oracle(self):
        from math import gcd
        rng = random.Random(99)
        for trial in range(1000):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            m = IntMatrix([[rng.randint(-9, 9) for _ in range(cols)]
                           for _ in range(rows)])
            diag, left, right = smith_normal_form(m)
            assert abs(left.det()) == 1 and abs(right.det()) == 1
            prod = left * m * right
            assert prod == diag
            ds = [diag[i, i] for i in range(min(rows, cols))]
            for a, b in zip(ds, ds[1:]):
                assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
            # determinantal-divisor oracle: d_1...d_k = gcd of k x k minors
            acc = 1
            for k in range(1, min(rows, cols) + 1):
                g = 0
                for ri in combinations(range(rows), k):
                    for ci in combinations(range(cols), k):
                        sub = IntMatrix([[m[i, j] for j in ci] for i in ri])
                        g = gcd(g, abs(sub.det()))
                acc *= ds[k - 1]
                assert abs(acc) == g

    def test_lattice_index_is_determinant(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randint(1, 4)
            m = IntMatrix([[rng.randint(-5, 5) for _ in range(n)]
                           for _ in range(n)])
            if m.det() == 0:
                continue
            assert lattice_index(Sublattice.full(n),
                                 Sublattice(n, m.entries)) == abs(m.det())

    def test_dd_zero_on_constructed_complexes(self):
        # IntChainComplex asserts d.d = 0 at construction; build both
        # models on every gallery complex in every form degree
        from trophom.homology import bm_complex as bm, cohomology_complex as coh
        for c in [standard_line_complex(), real_line_complex(),
                  half_line_compactified(), plane_complex(),
                  bergman_fan(uniform_matroid(2, 4)).fan,
                  product_complex(real_line_complex(),
                                  half_line_compactified())]:
            assert validate_complex(c) == []
            for p in range(c.dim + 1):
                bm(c, p)
                coh(c, p)


class TestCriterion11Metamorphic:
    def gallery(self):
        return [standard_line_complex(), real_line_complex(),
                half_line_compactified(), plane_complex(),
                bergman_fan(uniform_matroid(2, 4)).fan]

    @staticmethod
    def tables(c):
        return ({pq: r.shape for pq, r in bm_table(c).items()},
                {pq: r.shape for pq, r in cohomology_table(c).items()})

    def test_orientation_flips(self):
        rng = random.Random(11)
        for c in self.gallery():
            base = self.tables(c)
            orient = {cid: rng.choice([1, -1]) for cid in c.cell_ids()}
            flipped = FaceComplex(c.ambient_dim, list(c.cells.values()),
                                  c.face_rel, c.at_infinity, orient)
            assert self.tables(flipped) == base

    def test_relabeling(self):
        for c in self.gallery():
            base = self.tables(c)
            rename = {cid: "x_%s" % cid for cid in c.cell_ids()}
            cells = [Cell(rename[cid], c.ambient_dim, cell.sedentarity,
                          cell.poly) for cid, cell in c.cells.items()]
            relabeled = FaceComplex(
                c.ambient_dim, cells,
                {(rename[t], rename[s]) for (t, s) in c.face_rel},
                {(rename[t], rename[s]) for (t, s) in c.at_infinity},
                {rename[cid]: s for cid, s in c.orientation.items()})
            assert self.tables(relabeled) == base

    def test_refinement(self):
        rng = random.Random(17)
        for c in self.gallery():
            base = self.tables(c)
            n = c.ambient_dim
            cuts = []
            for _ in range(2):
                normal = tuple(rng.randint(-2, 2) for _ in range(n))
                if not any(normal):
                    normal = (1,) * n
                cuts.append((normal, Fraction(rng.randint(-3, 3), 2)))
            cuts.extend((tuple(1 if i == j else 0 for i in range(n)), 1)
                        for j in range(n))
            refined, _parents = arrangement_refinement(c, cuts)
            assert len(refined.cells) > len(c.cells)
            assert self.tables(refined) == base
