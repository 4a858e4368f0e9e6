"""The cellular sheaf of tropical p-forms.

The stalk at a cell sigma with sedentarity I is the image of the map

    wedge^p (Z^{n-|I|})^*  ->  (+)_{sigma' maximal coface}  wedge^p (T^Z(sigma'))^*

assembled from wedge powers of the cotangent restriction to each maximal
coface; restriction along a face pair tau <= sigma is the coordinate
projection onto the (fewer) maximal cells containing sigma.  Stalks are
stored as canonical sublattices of the direct sum, together with one
integral preimage ("lift") per basis element, used for pairings with
tangent wedges.
"""

from itertools import combinations

from .zlattice import (
    IntMatrix,
    Sublattice,
    image_basis,
    int_solve,
    lex_subsets,
    wedge_power_map,
)


def _binom(n, p):
    if p < 0 or p > n:
        return 0
    out = 1
    for i in range(p):
        out = out * (n - i) // (i + 1)
    return out


def _coface_restriction(c, cid, coface_id):
    """Matrix sending a chart covector of `cid` to its restriction to the
    tangent of the maximal coface, in the coface's Hermite dual basis."""
    cell = c.cells[cid]
    coface = c.cells[coface_id]
    local = cell.local_coords()
    pos = {orig: i for i, orig in enumerate(coface.local_coords())}
    h = coface.tangent.basis.entries
    return IntMatrix([[row[pos[orig]] for orig in local] for row in h],
                     len(local))


class CellularFormSheaf:
    """Stalks and restriction maps of the sheaf of tropical p-forms.

    Restriction matrices use the row convention: row i is the image of the
    i-th stalk basis element, so compositions read res(rho->tau) * res(tau->sigma).
    """

    def __init__(self, complex_, p):
        if p < 0:
            raise ValueError("form degree must be >= 0")
        self.complex = complex_
        self.p = p
        self.cofaces = {}
        self.block_sizes = {}
        self.chart_map = {}
        self.lattice = {}
        self.lifts = {}
        self._restrictions = {}
        for cid in complex_.cell_ids():
            self._build_stalk(cid)

    def _build_stalk(self, cid):
        c = self.complex
        p = self.p
        cofaces = c.maximal_cofaces(cid)
        m = len(c.cells[cid].local_coords())
        blocks = []
        sizes = []
        for coface_id in cofaces:
            r = _coface_restriction(c, cid, coface_id)
            blocks.append(wedge_power_map(r, p) if p <= r.rows
                          else IntMatrix([], _binom(m, p)))
            sizes.append(_binom(c.cells[coface_id].dim, p))
        total = IntMatrix([], _binom(m, p))
        for b in blocks:
            total = total.stack(b)
        lat = image_basis(total)
        lifts = []
        for row in lat.basis.entries:
            x = int_solve(total, list(row))
            if x is None:
                raise AssertionError("stalk basis element has no integral preimage")
            lifts.append(tuple(x))
        self.cofaces[cid] = cofaces
        self.block_sizes[cid] = sizes
        self.chart_map[cid] = total
        self.lattice[cid] = lat
        self.lifts[cid] = lifts

    def rank(self, cid):
        return self.lattice[cid].rank

    def stalk_basis(self, cid):
        return self.lattice[cid].basis

    def chart_vector_to_stalk(self, cid, omega):
        """Stalk-basis coordinates of the image of a chart p-covector, in
        lex wedge coordinates; None if omega is not integral on the stalk."""
        return self.lattice[cid].coordinates(self.chart_map[cid].apply(omega))

    def project_to_cofaces(self, source_cid, vec, target_cid):
        """Project a direct-sum vector at source onto the blocks of target's
        cofaces (which must be a subset of source's)."""
        offsets = {}
        off = 0
        for coface_id, size in zip(self.cofaces[source_cid], self.block_sizes[source_cid]):
            offsets[coface_id] = (off, size)
            off += size
        out = []
        for coface_id in self.cofaces[target_cid]:
            start, size = offsets[coface_id]
            out.extend(vec[start:start + size])
        return tuple(out)

    def restriction(self, tau, sigma):
        """IntMatrix F^p(tau) -> F^p(sigma) for a face pair tau <= sigma."""
        key = (tau, sigma)
        if key in self._restrictions:
            return self._restrictions[key]
        if tau == sigma:
            mat = IntMatrix.identity(self.rank(tau))
            self._restrictions[key] = mat
            return mat
        if (tau, sigma) not in self.complex.all_face_pairs():
            raise ValueError("(%r, %r) is not a face pair" % (tau, sigma))
        missing = set(self.cofaces[sigma]) - set(self.cofaces[tau])
        if missing:
            raise AssertionError("cofaces of %r not among cofaces of %r" % (sigma, tau))
        rows = []
        for b in self.lattice[tau].basis.entries:
            proj = self.project_to_cofaces(tau, b, sigma)
            coords = self.lattice[sigma].coordinates(proj)
            if coords is None:
                raise AssertionError("restriction leaves the stalk lattice at %r" % sigma)
            rows.append(list(coords))
        mat = IntMatrix(rows, self.rank(sigma))
        self._restrictions[key] = mat
        return mat

    def to_json_dict(self):
        return {cid: {"rank": self.rank(cid),
                      "basis": [list(r) for r in self.stalk_basis(cid).entries]}
                for cid in self.complex.cell_ids()}


def omega_p(complex_, p):
    """The cellular sheaf of tropical p-forms on a validated complex."""
    return CellularFormSheaf(complex_, p)


class DualFormCosheaf:
    """Integral duals of the p-form stalks, with transposed corestrictions."""

    def __init__(self, sheaf):
        self.sheaf = sheaf
        self.p = sheaf.p

    def rank(self, cid):
        return self.sheaf.rank(cid)

    def corestriction(self, tau, sigma):
        """IntMatrix Hom(F^p(sigma), Z) -> Hom(F^p(tau), Z)."""
        return self.sheaf.restriction(tau, sigma).transpose()


# ---------------------------------------------------------------------------
# pullback of forms

def pullback_forms(f, source, target, p, source_sheaf=None, target_sheaf=None):
    """Per-cell pullback matrices F^p(delta) -> F^p(sigma) along an affine map.

    Each sedentarity-0 cell of `source` must map into a cell of `target`;
    the target cell is the smallest one containing the image.  Returns
    (matrices, violations) where matrices maps sigma_id -> (delta_id,
    IntMatrix in the row convention) and violations lists cells whose image
    is not contained in a single target cell or whose pullback leaves the
    stalk lattice.
    """
    fs = source_sheaf or omega_p(source, p)
    ft = target_sheaf or omega_p(target, p)
    matrices = {}
    violations = []
    for sid in source.cell_ids():
        scell = source.cells[sid]
        if scell.sedentarity:
            violations.append({"cell": sid, "kind": "cell-at-infinity"})
            continue
        image = f.apply_polyhedron(scell.poly)
        did = _smallest_containing_cell(target, image)
        if did is None:
            violations.append({"cell": sid, "kind": "image-not-in-a-cell"})
            continue
        wedge_dual = wedge_power_map(f.linear.transpose(), p)
        rows = []
        ok = True
        for lift in ft.lifts[did]:
            pulled = wedge_dual.apply(lift)
            coords = fs.chart_vector_to_stalk(sid, pulled)
            if coords is None:
                violations.append({"cell": sid, "kind": "pullback-not-integral"})
                ok = False
                break
            rows.append(list(coords))
        if ok:
            matrices[sid] = (did, IntMatrix(rows, fs.rank(sid)))
    return matrices, violations


def _smallest_containing_cell(c, poly):
    best = None
    for cid in c.cell_ids():
        cell = c.cells[cid]
        if cell.sedentarity:
            continue
        if cell.poly.contains_polyhedron(poly):
            if best is None or cell.dim < c.cells[best].dim:
                best = cid
    return best


# ---------------------------------------------------------------------------
# product decomposition

def wedge_product_coords(a_coords, i, ma, b_coords, j, mb):
    """Lex coordinates of (a ^ b) on Z^{ma+mb} from a in wedge^i (Z^{ma})^*
    and b in wedge^j (Z^{mb})^*, with the a-coordinates listed first."""
    a_subs = lex_subsets(ma, i)
    b_subs = lex_subsets(mb, j)
    vals = {}
    for ia, sa in enumerate(a_subs):
        for ib, sb in enumerate(b_subs):
            key = tuple(sa) + tuple(ma + t for t in sb)
            vals[key] = a_coords[ia] * b_coords[ib]
    return tuple(vals.get(sub, 0) for sub in lex_subsets(ma + mb, i + j))


def product_sheaf_decomposition(a, b, p, prod=None, pair_id=None):
    """Decomposition of F^p on the product complex into F^i (x) F^j blocks.

    Returns a dict mapping each product cell id to
    {"blocks": {(i, j): IntMatrix}, "change_of_basis": IntMatrix,
     "pairs": [(i, j, a_index, b_index), ...]} where each block row is the
    stalk coordinate vector of (a-basis element) wedge (b-basis element)
    and the change-of-basis matrix stacks all blocks (unimodular iff the
    decomposition is an isomorphism, which the callers assert).
    """
    from .polyhedral import product_complex
    if prod is None:
        prod = product_complex(a, b)
    if pair_id is None:
        pair_id = lambda ia, ib: "%s*%s" % (ia, ib)
    sheaf_a = {i: omega_p(a, i) for i in range(p + 1)}
    sheaf_b = {j: omega_p(b, j) for j in range(p + 1)}
    sheaf_prod = omega_p(prod, p)
    out = {}
    for ia in a.cell_ids():
        ma = len(a.cells[ia].local_coords())
        for ib in b.cell_ids():
            mb = len(b.cells[ib].local_coords())
            cid = pair_id(ia, ib)
            blocks = {}
            all_rows = []
            pairs = []
            for i in range(p + 1):
                j = p - i
                fa, fb = sheaf_a[i], sheaf_b[j]
                rows = []
                for ra, lift_a in enumerate(fa.lifts[ia]):
                    for rb, lift_b in enumerate(fb.lifts[ib]):
                        omega = wedge_product_coords(lift_a, i, ma, lift_b, j, mb)
                        coords = sheaf_prod.chart_vector_to_stalk(cid, omega)
                        if coords is None:
                            raise AssertionError(
                                "product form leaves the stalk lattice at %r" % cid)
                        rows.append(list(coords))
                        pairs.append((i, j, ra, rb))
                blocks[(i, j)] = IntMatrix(rows, sheaf_prod.rank(cid))
                all_rows.extend(rows)
            out[cid] = {
                "blocks": blocks,
                "change_of_basis": IntMatrix(all_rows, sheaf_prod.rank(cid)),
                "pairs": pairs,
            }
    return out
