"""Integral cellular chain complexes computing tropical Borel-Moore
homology and tropical cohomology, the tropical cycle class map, and the
Poincare-duality and Kunneth verification harnesses.

Everything is computed from finite face complexes:

* Borel-Moore homology H^BM_{p,q} comes from the complex whose degree-q
  term is the direct sum of Hom(F^p(sigma), Z) over q-cells sigma, with
  differentials given by incidence signs composed with transposed stalk
  restrictions (faces at infinity included; their stalks are small, which
  is what kills the boundary components toward infinity in top form
  degree).

* Sheaf cohomology H^{p,q} is the derived inverse limit of the stalk
  functor over the face poset: the cochain complex over strictly
  increasing chains of cells with values in the stalk at the largest
  cell.  On compact complexes this agrees with the naive cellular cochain
  complex.

Homology shapes come from Smith normal forms; generator representatives
use the change-of-basis matrices and are not canonical.
"""

from .forms import omega_p, product_sheaf_decomposition, pullback_forms
from .zlattice import (
    AbelianGroupShape,
    IntMatrix,
    Sublattice,
    int_solve,
    kernel_basis,
    pair_form_vector,
    smith_normal_form,
    tor_group,
    wedge_vector,
)


class IntChainComplex:
    """A finite complex of free Z-modules with labeled bases.

    `labels[q]` lists the basis labels of the degree-q term; `diffs[q]`
    maps degree q to degree q + step (step = -1 for chain complexes, +1
    for cochain complexes) in the row convention (row i is the image of
    basis element i).  d after d = 0 is asserted at construction.
    """

    def __init__(self, labels, diffs, step=-1):
        if step not in (-1, 1):
            raise ValueError("step must be +-1")
        self.step = step
        self.labels = {q: list(v) for q, v in labels.items() if v}
        self.diffs = {}
        for q, m in diffs.items():
            if m.rows != self.dim(q) or m.cols != self.dim(q + step):
                raise ValueError("differential shape mismatch in degree %r" % q)
            if m.rows:
                self.diffs[q] = m
        for q, m in self.diffs.items():
            nxt = self.diffs.get(q + step)
            if nxt is None:
                continue
            prod = m * nxt
            if any(any(row) for row in prod.entries):
                raise AssertionError("d after d is nonzero from degree %r" % q)
        self._degree_of = {}
        for q, lab in self.labels.items():
            for l in lab:
                self._degree_of[l] = q

    def degrees(self):
        return sorted(self.labels)

    def dim(self, q):
        return len(self.labels.get(q, []))

    def diff(self, q):
        if q in self.diffs:
            return self.diffs[q]
        return IntMatrix.zero(self.dim(q), self.dim(q + self.step))

    def boundary(self, vector):
        """Image of a {label: coeff} vector under the differential."""
        qs = {self._degree_of[l] for l in vector if vector[l]}
        out = {}
        for q in qs:
            v = [vector.get(l, 0) for l in self.labels[q]]
            d = self.diff(q)
            img = [sum(v[i] * d[i, j] for i in range(d.rows)) for j in range(d.cols)]
            for l, x in zip(self.labels.get(q + self.step, []), img):
                if x:
                    out[l] = out.get(l, 0) + x
        return {l: x for l, x in out.items() if x}


class HomologyResult:
    """Shape (and optional generators) of one homology group.

    `generators` is a list of (order, {label: coeff}) pairs; order 0 means
    a free generator, order d >= 2 a torsion generator of that order.
    """

    def __init__(self, bigrade, shape, generators=()):
        self.bigrade = bigrade
        self.shape = shape
        self.generators = list(generators)

    def __repr__(self):
        return "HomologyResult(%r, %r)" % (self.bigrade, self.shape)


def homology(cc, q, bigrade=None, want_generators=False):
    """ker/im of an IntChainComplex at degree q, via Smith normal form."""
    n = cc.dim(q)
    if n == 0:
        return HomologyResult(bigrade, AbelianGroupShape(0))
    d = cc.diff(q)
    if d.cols == 0:
        ker = Sublattice.full(n)
    else:
        ker = kernel_basis(d.transpose())
    prev = cc.diff(q - cc.step)
    img = Sublattice(n, [list(r) for r in prev.entries] if prev.rows else [])
    coords = [ker.coordinates(row) for row in img.basis.entries]
    if any(c is None for c in coords):
        raise AssertionError("image is not contained in the kernel at degree %r" % q)
    m = IntMatrix([list(c) for c in coords], ker.rank)
    diag, _left, right = smith_normal_form(m)
    ds = [diag[i, i] for i in range(min(diag.rows, diag.cols)) if diag[i, i] != 0]
    shape = AbelianGroupShape(ker.rank - len(ds), [x for x in ds if x > 1])
    generators = []
    if want_generators and ker.rank:
        labels = cc.labels[q]
        kb = ker.basis.entries
        for i in range(ker.rank):
            order = ds[i] if i < len(ds) else 0
            if order == 1:
                continue
            e = [0] * ker.rank
            e[i] = 1
            x = int_solve(right.transpose(), e)  # row i of right^{-1}
            vec = [sum(x[t] * kb[t][j] for t in range(ker.rank)) for j in range(n)]
            generators.append(
                (order, {labels[j]: vec[j] for j in range(n) if vec[j]}))
    return HomologyResult(bigrade, shape, generators)


# ---------------------------------------------------------------------------
# the Borel-Moore complex

def bm_complex(c, p, sheaf=None):
    """Degree-q term: direct sum of Hom(F^p(sigma), Z) over q-cells;
    differential component sigma -> tau = eps_{sigma/tau} times the
    transpose of the stalk restriction F^p(tau) -> F^p(sigma)."""
    sheaf = sheaf or omega_p(c, p)
    labels = {}
    pos = {}
    for q in range(c.dim + 1):
        lab = []
        for cid in c.cells_of_dim(q):
            for i in range(sheaf.rank(cid)):
                pos[(cid, i)] = len(lab)
                lab.append((cid, i))
        labels[q] = lab
    mats = {q: [[0] * len(labels.get(q - 1, [])) for _ in labels[q]]
            for q in labels if q >= 1 and labels[q]}
    for (tid, sid, _inf) in c.codim1_pairs():
        q = c.cells[sid].dim
        rt, rs = sheaf.rank(tid), sheaf.rank(sid)
        if not (rt and rs):
            continue
        eps = c.incidence_sign(sid, tid)
        res = sheaf.restriction(tid, sid)  # F(tau) -> F(sigma)
        mat = mats[q]
        for i in range(rs):
            row = mat[pos[(sid, i)]]
            for j in range(rt):
                if res[j, i]:
                    row[pos[(tid, j)]] += eps * res[j, i]
    diffs = {q: IntMatrix(m, len(labels.get(q - 1, [])))
             for q, m in mats.items()}
    return IntChainComplex(labels, diffs, step=-1)


# ---------------------------------------------------------------------------
# the cohomology (derived inverse limit) complex

def _strict_above(c):
    """Transitive closure of the face relation: cid -> set of strict cofaces."""
    above = {cid: set(c.cofaces_of(cid)) for cid in c.cell_ids()}
    changed = True
    while changed:
        changed = False
        for cid in above:
            extra = set()
            for other in above[cid]:
                extra |= above[other] - above[cid]
            if extra:
                above[cid] |= extra
                changed = True
    return above


def _poset_chains(c):
    """All strictly increasing cell chains, grouped by length - 1."""
    above = _strict_above(c)
    out = {0: [(cid,) for cid in c.cell_ids()]}
    q = 0
    while out[q]:
        nxt = []
        for ch in out[q]:
            for s in sorted(above[ch[-1]]):
                nxt.append(ch + (s,))
        q += 1
        out[q] = nxt
    del out[q]
    return out


def cohomology_complex(c, p, sheaf=None):
    """Degree-q term: direct sum of F^p(last cell) over strictly increasing
    chains of q+1 cells; the coboundary alternates over chain extensions,
    restricting the stalk when the top cell grows."""
    sheaf = sheaf or omega_p(c, p)
    chains = _poset_chains(c)
    labels = {}
    pos = {}
    for q, chs in chains.items():
        lab = []
        for ch in chs:
            for i in range(sheaf.rank(ch[-1])):
                pos[(ch, i)] = len(lab)
                lab.append((ch, i))
        labels[q] = lab
    mats = {q: [[0] * len(labels.get(q + 1, [])) for _ in labels[q]]
            for q in labels if labels[q]}
    for q in sorted(chains):
        if q + 1 not in chains or not labels.get(q):
            continue
        mat = mats[q]
        for ch2 in chains[q + 1]:
            for drop in range(q + 2):
                sub = ch2[:drop] + ch2[drop + 1:]
                if drop <= q:
                    sign = (-1) ** drop
                    for i in range(sheaf.rank(ch2[-1])):
                        mat[pos[(sub, i)]][pos[(ch2, i)]] += sign
                else:
                    sign = (-1) ** (q + 1)
                    res = sheaf.restriction(ch2[q], ch2[q + 1])
                    for i in range(sheaf.rank(ch2[q])):
                        row = mat[pos[(sub, i)]]
                        for j in range(sheaf.rank(ch2[q + 1])):
                            if res[i, j]:
                                row[pos[(ch2, j)]] += sign * res[i, j]
    diffs = {q: IntMatrix(m, len(labels.get(q + 1, [])))
             for q, m in mats.items()}
    return IntChainComplex(labels, diffs, step=1)


# ---------------------------------------------------------------------------
# tables

def _run_table(jobs, threads):
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda j: j(), jobs))
    else:
        results = [j() for j in jobs]
    out = {}
    for chunk in results:
        out.update(chunk)
    return out


def bm_table(c, p_range=None, q_range=None, want_generators=False, threads=1):
    """{(p, q): HomologyResult} table of tropical Borel-Moore homology."""
    n = c.dim
    ps = list(p_range if p_range is not None else range(n + 1))
    qs = list(q_range if q_range is not None else range(n + 1))

    def job(p):
        def run():
            cc = bm_complex(c, p)
            return {(p, q): homology(cc, q, (p, q), want_generators)
                    for q in qs}
        return run

    return _run_table([job(p) for p in ps], threads)


def cohomology_table(c, p_range=None, q_range=None, want_generators=False,
                     threads=1):
    """{(p, q): HomologyResult} table of tropical cohomology."""
    n = c.dim
    ps = list(p_range if p_range is not None else range(n + 1))
    qs = list(q_range if q_range is not None else range(n + 1))

    def job(p):
        def run():
            cc = cohomology_complex(c, p)
            return {(p, q): homology(cc, q, (p, q), want_generators)
                    for q in qs}
        return run

    return _run_table([job(p) for p in ps], threads)


def pd_check(c, n=None, threads=1):
    """Compare H^BM_{p,q} with H^{n-p,n-q} over the full (p,q) table.

    Requires a purely n-dimensional complex; rank and torsion must both
    agree for a verdict of True.  Mismatches are reported per entry (they
    are meaningful: duality can genuinely fail off tropical manifolds).
    """
    if n is None:
        n = c.dim
    top = {c.cells[cid].dim for cid in c.maximal_cells()}
    if top != {n}:
        raise ValueError("complex is not purely %d-dimensional (max cell "
                         "dims %s)" % (n, sorted(top)))
    rng = range(n + 1)
    bm = bm_table(c, rng, rng, threads=threads)
    coh = cohomology_table(c, rng, rng, threads=threads)
    table = {}
    ok = True
    for p in rng:
        for q in rng:
            a = bm[(p, q)].shape
            b = coh[(n - p, n - q)].shape
            match = a == b
            ok = ok and match
            table[(p, q)] = {"bm": a, "dual": b, "match": match}
    return {"n": n, "ok": ok, "table": table}


def kunneth_check(a, b, threads=1):
    """Rank bookkeeping for H^BM of a product complex.

    Checks rank(H^BM_{p,q}(a x b)) = sum over i+j=p, k+l=q of the factor
    rank products; when every factor group entering a bigrade (including
    the Tor pairs one q lower) is torsion free the full shape is checked,
    otherwise the verdict is rank-only (the extension problem hides the
    product's torsion).
    """
    from .polyhedral import product_complex
    prod = product_complex(a, b)
    na, nb = a.dim, b.dim
    n = na + nb
    ta = bm_table(a, range(na + 1), range(na + 1), threads=threads)
    tb = bm_table(b, range(nb + 1), range(nb + 1), threads=threads)
    tp = bm_table(prod, range(n + 1), range(n + 1), threads=threads)
    table = {}
    ok = True
    for p in range(n + 1):
        for q in range(n + 1):
            rank = 0
            factors = []
            tor_parts = []
            for i in range(na + 1):
                for k in range(na + 1):
                    j, l = p - i, q - k
                    if 0 <= j <= nb and 0 <= l <= nb:
                        sa, sb = ta[(i, k)].shape, tb[(j, l)].shape
                        rank += sa.free_rank * sb.free_rank
                        if not (sa.is_trivial or sb.is_trivial):
                            factors.extend([sa, sb])
                    if 0 <= j <= nb and 0 <= q - 1 - k <= nb:
                        tor_parts.append(tor_group(ta[(i, k)].shape,
                                                   tb[(j, q - 1 - k)].shape))
            got = tp[(p, q)].shape
            exact = (all(s.is_torsion_free for s in factors)
                     and all(t.is_trivial for t in tor_parts))
            if exact:
                match = got == AbelianGroupShape(rank)
                mode = "exact"
            else:
                match = got.free_rank == rank
                mode = "rank-only"
            ok = ok and match
            table[(p, q)] = {"product": got, "expected_rank": rank,
                             "mode": mode, "match": match}
    return {"ok": ok, "table": table}


# ---------------------------------------------------------------------------
# the cycle class map

class TropicalChainClass:
    """A chain in the Borel-Moore complex of an ambient face complex.

    `vector` maps (cell id, stalk basis index) to an integer; the entry at
    (sigma, i) is the value of the coefficient functional on the i-th
    stalk basis element of F^k(sigma).
    """

    def __init__(self, ambient, bigrade, vector, closed):
        self.ambient = ambient
        self.bigrade = bigrade
        self.vector = {l: x for l, x in vector.items() if x}
        self.closed = closed

    @property
    def is_zero(self):
        return not self.vector

    def __repr__(self):
        return "TropicalChainClass(%r, %d entries, closed=%r)" % (
            self.bigrade, len(self.vector), self.closed)


def cycle_class_chain(a, ambient=None, sheaf=None, cc=None):
    """The Borel-Moore (k,k)-chain of a weighted cycle, with its closedness
    flag (closed if and only if the cycle is balanced); no hard error."""
    if ambient is None:
        ambient = a.complex
    k = a.k
    sheaf = sheaf or omega_p(ambient, k)
    cc = cc or bm_complex(ambient, k, sheaf)
    kcells = [cid for cid in ambient.cells_of_dim(k)
              if not ambient.cells[cid].sedentarity]
    for cid in a.support_ids():
        cell = a.complex.cells[cid]
        if cell.sedentarity:
            raise ValueError("cycle classes require sedentarity-0 support")
        if not any(ambient.cells[d].poly.contains_polyhedron(cell.poly)
                   for d in kcells):
            raise ValueError("support cell %r is not inside a k-cell of the "
                             "ambient complex (refine first)" % cid)
    from .cycles import _weight_lookup
    vector = {}
    for did in kcells:
        w = _weight_lookup(a, frozenset(),
                           ambient.cells[did].poly.relint_point())
        if not w:
            continue
        eta = ambient.eta_wedge(did)
        for i, lift in enumerate(sheaf.lifts[did]):
            val = w * pair_form_vector(lift, eta)
            if val:
                vector[(did, i)] = val
    closed = not cc.boundary(vector)
    return TropicalChainClass(ambient, (k, k), vector, closed)


def cycle_class(a, ambient=None):
    """The tropical cycle class of a balanced cycle; closedness of the
    chain is verified (it is equivalent to balancing) and a failure is a
    hard error."""
    cls = cycle_class_chain(a, ambient)
    if not cls.closed:
        raise ValueError("cycle class is not closed: the input cycle is "
                         "not balanced")
    return cls


def pushforward_class(f, cls, source, target):
    """Chain-level push-forward of a Borel-Moore class along an affine map.

    A k-cell sigma whose image keeps dimension k must land inside a k-cell
    delta of the target (otherwise the map is not cellular and is
    rejected); its coefficient functional transports through the form
    pullback, multiplied by the orientation sign of the map on sigma.
    Collapsed cells contribute nothing.
    """
    k = cls.bigrade[0]
    sheaf_t = omega_p(target, k)
    cc_t = bm_complex(target, k, sheaf_t)
    sheaf_s = omega_p(source, k)
    matrices, _violations = pullback_forms(f, source, target, k,
                                           source_sheaf=sheaf_s,
                                           target_sheaf=sheaf_t)
    out = {}
    for sid in source.cell_ids():
        scell = source.cells[sid]
        coeffs = [cls.vector.get((sid, i), 0) for i in range(sheaf_s.rank(sid))]
        if not any(coeffs):
            continue
        if scell.sedentarity or scell.dim != k:
            raise ValueError("push-forward supports classes carried by "
                             "sedentarity-0 k-cells only")
        img = f.apply_polyhedron(scell.poly)
        if img.dim < k:
            continue
        if sid not in matrices:
            raise ValueError("map is not cellular on %r" % sid)
        did, pullback = matrices[sid]
        if target.cells[did].dim != k:
            raise ValueError("image of %r is not contained in a k-cell of "
                             "the target (refine first)" % sid)
        images = [f.linear.apply(row) for row in scell.tangent.basis.entries]
        wv = wedge_vector(images, target.ambient_dim)
        wv = tuple(source.orientation[sid] * x for x in wv)
        eta_d = target.eta_wedge(did)
        t = None
        for i, x in enumerate(eta_d):
            if x:
                t = wv[i] // x if wv[i] % x == 0 else None
                break
        if t is None or any(u != t * v for u, v in zip(wv, eta_d)):
            raise AssertionError("image tangent wedge is not a multiple of "
                                 "the target cell's orientation wedge")
        sign = 1 if t > 0 else -1
        transported = pullback.apply(coeffs)
        for j, x in enumerate(transported):
            if x:
                out[(did, j)] = out.get((did, j), 0) + sign * x
    closed = not cc_t.boundary(out)
    if cls.closed and not closed:
        raise AssertionError("push-forward of a closed class is not closed")
    return TropicalChainClass(target, cls.bigrade, out, closed)


def cross_class(cls_a, cls_b, a, b, prod=None):
    """The product of two Borel-Moore classes on the product complex,
    through the block decomposition of the product form stalks."""
    from .polyhedral import product_complex
    if prod is None:
        prod = product_complex(a, b)
    ka, qa = cls_a.bigrade
    kb, qb = cls_b.bigrade
    if (ka, qa) != (ka, ka) or (kb, qb) != (kb, kb):
        raise ValueError("cross products are implemented for (k,k)-classes")
    k = ka + kb
    decomp = product_sheaf_decomposition(a, b, k, prod=prod)
    sheaf_a = omega_p(a, ka)
    sheaf_b = omega_p(b, kb)
    cc = bm_complex(prod, k)
    vector = {}
    for ia in a.cells_of_dim(ka):
        ca = [cls_a.vector.get((ia, i), 0) for i in range(sheaf_a.rank(ia))]
        if not any(ca):
            continue
        for ib in b.cells_of_dim(kb):
            cb = [cls_b.vector.get((ib, i), 0) for i in range(sheaf_b.rank(ib))]
            if not any(cb):
                continue
            cid = "%s*%s" % (ia, ib)
            entry = decomp[cid]
            targets = [ca[ra] * cb[rb] if (i, j) == (ka, kb) else 0
                       for (i, j, ra, rb) in entry["pairs"]]
            cob = entry["change_of_basis"]
            v = int_solve(cob, targets)
            if v is None:
                raise AssertionError("product functional does not descend "
                                     "to the stalk basis at %r" % cid)
            for j, x in enumerate(v):
                if x:
                    vector[(cid, j)] = vector.get((cid, j), 0) + x
    closed = not cc.boundary(vector)
    return TropicalChainClass(prod, (k, k), vector, closed)
