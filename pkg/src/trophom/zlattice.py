"""Exact integer and rational linear algebra.

Normal forms (Smith, Hermite), sublattices with canonical bases, lattice
indices, quotient shapes, wedge powers and Tor of finitely generated
abelian groups.  Everything is arbitrary-precision; there is no floating
point anywhere in the package.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd


class IntMatrix:
    """An immutable integer matrix, stored row-major.

    >>> IntMatrix([[1, 2], [3, 4]]) * IntMatrix.identity(2)
    IntMatrix([[1, 2], [3, 4]])
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        entries = tuple(tuple(int(x) for x in row) for row in entries)
        if entries:
            cols_ = len(entries[0])
            if any(len(row) != cols_ for row in entries):
                raise ValueError("ragged matrix")
            if cols is not None and cols != cols_:
                raise ValueError("column count mismatch")
            cols = cols_
        elif cols is None:
            cols = 0
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("IntMatrix is immutable")

    @staticmethod
    def identity(n):
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(rows, cols):
        return IntMatrix([[0] * cols for _ in range(rows)], cols)

    @staticmethod
    def diagonal(diag):
        n = len(diag)
        return IntMatrix([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return "IntMatrix(%s)" % [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix([[x * other for x in r] for r in self.entries], self.cols)
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.entries
        return IntMatrix(
            [[sum(a * ot[k][j] for k, a in enumerate(row)) for j in range(other.cols)]
             for row in self.entries],
            other.cols)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)]
                          for r, s in zip(self.entries, other.entries)], self.cols)

    def __neg__(self):
        return IntMatrix([[-x for x in r] for r in self.entries], self.cols)

    def transpose(self):
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)], self.rows)

    def apply(self, vec):
        """Matrix times column vector, returned as a tuple."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * v for a, v in zip(row, vec)) for row in self.entries)

    def stack(self, other):
        """Vertical concatenation."""
        if self.cols != other.cols and self.rows and other.rows:
            raise ValueError("dimension mismatch")
        cols = self.cols if self.rows else other.cols
        return IntMatrix(self.entries + other.entries, cols)

    def det(self):
        """Determinant via fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def rank(self):
        return len(_qrref([list(map(Fraction, r)) for r in self.entries])[0])


# ---------------------------------------------------------------------------
# rational elimination helpers (shared by the polyhedral module)

def _qrref(rows):
    """Reduced row echelon form over Q, in place on a list of Fraction lists.

    Returns (pivot_columns, rref_rows) with zero rows dropped.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots, rows[:r]


def qsolve(a_rows, b):
    """One rational solution x of A x = b, or None if inconsistent.

    `a_rows` is a list of rows; `b` a list.  Free variables are set to 0.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a_rows)]
    pivots, rref = _qrref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for prow, c in zip(rref, pivots):
        x[c] = prow[-1]
    return tuple(x)


def qnullspace(a_rows, n=None):
    """Basis of the rational right null space of A, as tuples of Fractions."""
    if n is None:
        n = len(a_rows[0]) if a_rows else 0
    pivots, rref = _qrref([[Fraction(x) for x in row] for row in a_rows]) if a_rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for prow, c in zip(rref, pivots):
            v[c] = -prow[f]
        basis.append(tuple(v))
    return basis


def clear_denominators(vec):
    """Scale a rational vector to a primitive integer vector (same direction)."""
    fracs = [Fraction(x) for x in vec]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# normal forms

def smith_normal_form(m):
    """Smith normal form: returns (diag, left, right) with left*m*right = diag.

    left and right are unimodular; diag is diagonal with nonnegative entries
    d_i | d_{i+1}.  Naive elementary operations, pivoting on the minimal
    nonzero absolute value.

    >>> d, l, r = smith_normal_form(IntMatrix.diagonal([2, 3]))
    >>> [d[0, 0], d[1, 1]]
    [1, 6]
    """
    a = [list(r) for r in m.entries]
    rows, cols = m.rows, m.cols
    left = [list(r) for r in IntMatrix.identity(rows).entries]
    right = [list(r) for r in IntMatrix.identity(cols).entries]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + f * y for x, y in zip(left[dst], left[src])]

    def addmul_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in right:
            row[dst] += f * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: minimal absolute nonzero value in the trailing block
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                addmul_row(i, t, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                addmul_col(j, t, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # divisibility: fold any non-divisible entry into the pivot position
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t] != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            addmul_row(t, bad, 1)
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    diag = IntMatrix([[a[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)],
                     cols)
    return diag, IntMatrix(left), IntMatrix(right)


def hermite_normal_form(m):
    """Row-style Hermite normal form with zero rows dropped.

    Pivots are positive, entries above each pivot are reduced into
    [0, pivot).  The result is the canonical basis of the row lattice.

    >>> hermite_normal_form(IntMatrix([[2, 4], [1, 1]]))
    IntMatrix([[1, 1], [0, 2]])
    """
    a = [list(r) for r in m.entries]
    rows, cols = m.rows, m.cols
    r = 0
    for c in range(cols):
        piv = None
        while True:
            nz = [i for i in range(r, rows) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, rows):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        if piv is None or a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return IntMatrix([row for row in a[:r] if any(row)] , cols)


class Sublattice:
    """A finitely generated subgroup of Z^n with a canonical (HNF) basis.

    Structural equality implements mathematical equality of sublattices.
    """

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, ambient_rank, generators):
        gens = IntMatrix(generators, ambient_rank) if not isinstance(generators, IntMatrix) \
            else generators
        if gens.cols != ambient_rank and gens.rows:
            raise ValueError("generator length != ambient rank")
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "basis", hermite_normal_form(gens))

    def __setattr__(self, *a):
        raise AttributeError("Sublattice is immutable")

    @staticmethod
    def full(n):
        return Sublattice(n, IntMatrix.identity(n))

    @staticmethod
    def zero(n):
        return Sublattice(n, IntMatrix([], n))

    @property
    def rank(self):
        return self.basis.rows

    def __eq__(self, other):
        return (isinstance(other, Sublattice) and self.ambient_rank == other.ambient_rank
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return "Sublattice(%d, %s)" % (self.ambient_rank, [list(r) for r in self.basis.entries])

    def coordinates(self, vec):
        """Integer coordinates of vec in the canonical basis, or None."""
        sol = qsolve([list(col) for col in self.basis.transpose().entries], list(vec)) \
            if self.rank else (() if all(x == 0 for x in vec) else None)
        if sol is None:
            return None
        if any(f.denominator != 1 for f in sol):
            return None
        return tuple(int(f) for f in sol)

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def contains_lattice(self, other):
        return all(self.contains(row) for row in other.basis.entries)


def lattice_index(ambient, sub):
    """[ambient : sub], or 0 when the index is infinite.

    >>> lattice_index(Sublattice.full(1), Sublattice(1, [[2]]))
    2
    """
    if ambient.ambient_rank != sub.ambient_rank:
        raise ValueError("ambient rank mismatch")
    coords = [ambient.coordinates(row) for row in sub.basis.entries]
    if any(c is None for c in coords):
        raise ValueError("sub is not contained in ambient")
    if sub.rank < ambient.rank:
        return 0
    return abs(IntMatrix(coords, ambient.rank).det())


def int_solve(m, b):
    """One integral solution x of m x = b, or None."""
    diag, left, right = smith_normal_form(m)
    lb = left.apply(b)
    z = []
    for i in range(m.cols):
        d = diag[i, i] if i < min(diag.rows, diag.cols) else 0
        bi = lb[i] if i < len(lb) else 0
        if d == 0:
            if i < len(lb) and bi != 0:
                return None
            z.append(0)
        else:
            if bi % d != 0:
                return None
            z.append(bi // d)
    for i in range(m.cols, len(lb)):
        if lb[i] != 0:
            return None
    return right.apply(z)


def kernel_basis(m):
    """Saturated integral basis of {x : m x = 0}, as a Sublattice of Z^cols."""
    diag, _left, right = smith_normal_form(m)
    r = sum(1 for i in range(min(diag.rows, diag.cols)) if diag[i, i] != 0)
    cols = right.transpose().entries  # rows are columns of right
    return Sublattice(m.cols, [cols[j] for j in range(r, m.cols)])


def image_basis(m):
    """The image lattice {m x : x in Z^cols} as a Sublattice of Z^rows."""
    return Sublattice(m.rows, m.transpose())


def saturate(s):
    """Smallest saturated sublattice containing s (same Q-span).

    >>> saturate(Sublattice(2, [[2, 0]]))
    Sublattice(2, [[1, 0]])
    """
    if s.rank == 0:
        return s
    # orthogonal complement, then complement again
    comp = kernel_basis(s.basis)
    return kernel_basis(comp.basis)


def quotient_shape(ambient, sub):
    """Isomorphism shape of ambient/sub as an AbelianGroupShape."""
    coords = [ambient.coordinates(row) for row in sub.basis.entries]
    if any(c is None for c in coords):
        raise ValueError("sub is not contained in ambient")
    m = IntMatrix(coords, ambient.rank)
    diag, _l, _r = smith_normal_form(m)
    ds = [diag[i, i] for i in range(min(diag.rows, diag.cols)) if diag[i, i] != 0]
    free = ambient.rank - len(ds)
    return AbelianGroupShape(free, [d for d in ds if d > 1])


class AbelianGroupShape:
    """Z^free_rank + sum of Z/d_i with d_1 | d_2 | ... , d_i >= 2."""

    __slots__ = ("free_rank", "invariant_factors")

    def __init__(self, free_rank, invariant_factors=()):
        factors = tuple(int(d) for d in invariant_factors)
        if any(d < 2 for d in factors):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValueError("divisibility chain violated")
        object.__setattr__(self, "free_rank", free_rank)
        object.__setattr__(self, "invariant_factors", factors)

    def __setattr__(self, *a):
        raise AttributeError("AbelianGroupShape is immutable")

    def __eq__(self, other):
        return (isinstance(other, AbelianGroupShape)
                and self.free_rank == other.free_rank
                and self.invariant_factors == other.invariant_factors)

    def __hash__(self):
        return hash((self.free_rank, self.invariant_factors))

    def __repr__(self):
        return "AbelianGroupShape(%d, %s)" % (self.free_rank, list(self.invariant_factors))

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_torsion_free(self):
        return not self.invariant_factors

    def torsion_order(self):
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n


def tor_group(a, b):
    """Tor_1 of two finitely generated abelian groups.

    Free parts contribute nothing; Z/m and Z/n contribute Z/gcd(m, n).

    >>> tor_group(AbelianGroupShape(0, [4]), AbelianGroupShape(0, [6]))
    AbelianGroupShape(0, [2])
    """
    cyclic = sorted(gcd(m, n) for m in a.invariant_factors for n in b.invariant_factors)
    cyclic = [d for d in cyclic if d > 1]
    # normalize the multiset of cyclic orders into invariant factors
    return _shape_from_cyclic(0, cyclic)


def _shape_from_cyclic(free_rank, orders):
    """Invariant-factor normalization of Z^free + sum Z/orders[i]."""
    per_prime = {}
    for d in orders:
        for p, e in _factorize(d):
            per_prime.setdefault(p, []).append(e)
    for p in per_prime:
        per_prime[p].sort(reverse=True)
    k = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(k):
        d = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    factors.sort()
    return AbelianGroupShape(free_rank, factors)


def _factorize(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# wedge powers

def lex_subsets(n, p):
    """The lexicographic basis order of p-subsets of range(n), shared package-wide."""
    return list(combinations(range(n), p))


def wedge_power_map(m, p):
    """The induced map wedge^p Z^cols -> wedge^p Z^rows in the lex basis.

    >>> wedge_power_map(IntMatrix.diagonal([2, 3]), 2)
    IntMatrix([[6]])
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    if p == 0:
        return IntMatrix.identity(1)
    rows_sub = lex_subsets(m.rows, p)
    cols_sub = lex_subsets(m.cols, p)
    out = []
    for rs in rows_sub:
        out_row = []
        for cs in cols_sub:
            minor = IntMatrix([[m[i, j] for j in cs] for i in rs])
            out_row.append(minor.det())
        out.append(out_row)
    return IntMatrix(out, len(cols_sub))


def wedge_vector(vectors, n):
    """Coordinates of v_1 ^ ... ^ v_p in the lex basis of wedge^p Z^n."""
    p = len(vectors)
    if p == 0:
        return (1,)
    return tuple(IntMatrix([[v[j] for j in sub] for v in vectors]).det()
                 for sub in lex_subsets(n, p))


def pair_form_vector(form_coords, vec_coords):
    """Pairing of wedge^p (Z^n)^* with wedge^p Z^n in matching lex coordinates."""
    return sum(a * b for a, b in zip(form_coords, vec_coords))
