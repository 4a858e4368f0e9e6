import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trophom.zlattice import (
    AbelianGroupShape,
    IntMatrix,
    Sublattice,
    hermite_normal_form,
    image_basis,
    kernel_basis,
    lattice_index,
    lex_subsets,
    qnullspace,
    qsolve,
    quotient_shape,
    saturate,
    smith_normal_form,
    tor_group,
    wedge_power_map,
    wedge_vector,
)


def random_matrix(rng, max_dim=6, bound=9):
    rows = rng.randint(1, max_dim)
    cols = rng.randint(1, max_dim)
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(cols)]
                      for _ in range(rows)])


def check_snf(m):
    diag, left, right = smith_normal_form(m)
    assert left * m * right == diag
    assert abs(left.det()) == 1
    assert abs(right.det()) == 1
    ds = [diag[i, i] for i in range(min(diag.rows, diag.cols))]
    for i in range(diag.rows):
        for j in range(diag.cols):
            if i != j:
                assert diag[i, j] == 0
    assert all(d >= 0 for d in ds)
    for a, b in zip(ds, ds[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    return ds


def determinantal_divisors(m, k):
    """gcd of all k x k minors -- an independent oracle for the SNF diagonal."""
    g = 0
    for rs in lex_subsets(m.rows, k):
        for cs in lex_subsets(m.cols, k):
            g = gcd(g, IntMatrix([[m[i, j] for j in cs] for i in rs]).det())
    return g


class TestSmithNormalForm:
    def test_examples(self):
        ds = check_snf(IntMatrix.diagonal([2, 3]))
        assert ds == [1, 6]
        ds = check_snf(IntMatrix.identity(3))
        assert ds == [1, 1, 1]
        ds = check_snf(IntMatrix.diagonal([2, 4]))
        assert ds == [2, 4]

    def test_random_against_elementary_ops_oracle(self):
        rng = random.Random(20240901)
        for _ in range(1000):
            check_snf(random_matrix(rng))

    def test_diagonal_against_determinantal_divisor_oracle(self):
        rng = random.Random(77)
        cases = [random_matrix(rng, max_dim=4) for _ in range(100)]
        cases += [random_matrix(rng, max_dim=6, bound=5) for _ in range(20)]
        for m in cases:
            ds = check_snf(m)
            prev = 1
            for k in range(1, min(m.rows, m.cols) + 1):
                dk = determinantal_divisors(m, k)
                expect = dk // prev if dk else 0
                assert ds[k - 1] == expect
                if dk == 0:
                    break
                prev = dk


class TestHermite:
    def test_canonical(self):
        assert hermite_normal_form(IntMatrix([[2, 4], [1, 1]])) == IntMatrix([[1, 1], [0, 2]])

    def test_equal_lattices_equal_representation(self):
        rng = random.Random(5)
        for _ in range(50):
            m = random_matrix(rng, max_dim=4)
            # scramble generators by unimodular row ops
            rows = [list(r) for r in m.entries]
            for _ in range(10):
                i, j = rng.randrange(len(rows)), rng.randrange(len(rows))
                if i != j:
                    f = rng.randint(-3, 3)
                    rows[i] = [x + f * y for x, y in zip(rows[i], rows[j])]
            assert hermite_normal_form(m) == hermite_normal_form(IntMatrix(rows))


class TestLatticeIndex:
    def test_examples(self):
        assert lattice_index(Sublattice.full(1), Sublattice(1, [[2]])) == 2
        assert lattice_index(Sublattice.full(2), Sublattice(2, [[1, 1], [1, -1]])) == 2
        assert lattice_index(Sublattice.full(2), Sublattice(2, [[1, 0]])) == 0

    def test_rejects_non_sublattice(self):
        amb = Sublattice(2, [[2, 0], [0, 2]])
        with pytest.raises(ValueError):
            lattice_index(amb, Sublattice(2, [[1, 0]]))

    def test_identity_and_multiplicativity(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.randint(1, 4)
            basis = random_matrix(rng, max_dim=n)
            l = Sublattice(basis.cols, basis)
            if l.rank < l.ambient_rank or l.rank == 0:
                continue
            assert lattice_index(l, l) == 1
            k = rng.randint(1, 3)
            k2 = rng.randint(1, 3)
            m = Sublattice(l.ambient_rank, l.basis * k)
            nn = Sublattice(l.ambient_rank, l.basis * (k * k2))
            assert lattice_index(l, m) * lattice_index(m, nn) == lattice_index(l, nn)

    def test_against_det_oracle(self):
        rng = random.Random(13)
        for _ in range(200):
            n = rng.randint(1, 4)
            m = IntMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
            if m.det() == 0:
                continue
            assert lattice_index(Sublattice.full(n), Sublattice(n, m)) == abs(m.det())


class TestSaturate:
    def test_examples(self):
        assert saturate(Sublattice(2, [[2, 0]])) == Sublattice(2, [[1, 0]])
        assert saturate(Sublattice(2, [[1, 1], [1, -1]])) == Sublattice.full(2)
        assert saturate(Sublattice.full(2)) == Sublattice.full(2)

    def test_idempotent_and_finite_index(self):
        rng = random.Random(3)
        for _ in range(100):
            m = random_matrix(rng, max_dim=4)
            s = Sublattice(m.cols, m)
            sat = saturate(s)
            assert saturate(sat) == sat
            assert sat.contains_lattice(s)
            assert sat.rank == s.rank
            if s.rank:
                assert lattice_index(sat, s) >= 1


class TestKernelImageQuotient:
    def test_examples(self):
        assert quotient_shape(Sublattice.full(2), Sublattice(2, [[2, 0], [0, 3]])) \
            == AbelianGroupShape(0, [6])
        assert kernel_basis(IntMatrix([[1, 1, 1]])).rank == 2
        assert image_basis(IntMatrix.identity(3)) == Sublattice.full(3)

    def test_kernel_is_saturated_and_kills(self):
        rng = random.Random(8)
        for _ in range(100):
            m = random_matrix(rng, max_dim=5)
            k = kernel_basis(m)
            assert k.rank == m.cols - m.rank()
            for row in k.basis.entries:
                assert all(x == 0 for x in m.apply(row))
            assert saturate(k) == k

    def test_quotient_free_rank(self):
        rng = random.Random(9)
        for _ in range(100):
            m = random_matrix(rng, max_dim=5)
            shape = quotient_shape(Sublattice.full(m.rows), image_basis(m))
            assert shape.free_rank == m.rows - m.rank()


class TestWedge:
    def test_examples(self):
        m = IntMatrix([[1, 2], [3, 4]])
        assert wedge_power_map(m, 1) == m
        assert wedge_power_map(IntMatrix.diagonal([3, 5]), 2) == IntMatrix([[15]])
        m23 = IntMatrix([[1, 2, 3], [4, 5, 6]])
        w = wedge_power_map(m23, 2)
        assert (w.rows, w.cols) == (1, 3)
        # minors in lex order of column pairs (0,1), (0,2), (1,2)
        assert list(w.row(0)) == [-3, -6, -3]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 3),
           st.randoms(use_true_random=False))
    def test_functorial(self, a, b, c, p, rng):
        A = IntMatrix([[rng.randint(-4, 4) for _ in range(b)] for _ in range(a)])
        B = IntMatrix([[rng.randint(-4, 4) for _ in range(c)] for _ in range(b)])
        assert wedge_power_map(A * B, p) == wedge_power_map(A, p) * wedge_power_map(B, p)

    def test_wedge_vector_matches_map(self):
        rng = random.Random(21)
        for _ in range(50):
            n, p = rng.randint(1, 4), rng.randint(1, 3)
            if p > n:
                continue
            vecs = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(p)]
            m = IntMatrix(vecs).transpose()  # columns are the vectors
            via_map = wedge_power_map(m, p)
            assert tuple(via_map[i, 0] for i in range(via_map.rows)) == wedge_vector(vecs, n)


class TestTor:
    def test_examples(self):
        free = AbelianGroupShape(3)
        assert tor_group(free, AbelianGroupShape(1, [2, 4])).is_trivial
        assert tor_group(AbelianGroupShape(0, [4]), AbelianGroupShape(0, [6])) \
            == AbelianGroupShape(0, [2])
        assert tor_group(AbelianGroupShape(0, [2]), AbelianGroupShape(0, [2])) \
            == AbelianGroupShape(0, [2])

    def test_symmetric(self):
        a = AbelianGroupShape(1, [2, 12])
        b = AbelianGroupShape(0, [3, 18])
        assert tor_group(a, b) == tor_group(b, a)


class TestRationalHelpers:
    def test_qsolve(self):
        assert qsolve([[2, 0], [0, 4]], [1, 2]) == (Fraction(1, 2), Fraction(1, 2))
        assert qsolve([[1, 1], [1, 1]], [0, 1]) is None

    def test_qnullspace(self):
        basis = qnullspace([[1, 1, 1]])
        assert len(basis) == 2
        for v in basis:
            assert sum(v) == 0
