"""Derived and singularity category computations.

Hom spaces in the derived category are homotopy classes of chain maps
out of a termwise free resolution of the source, materialized deep
enough that every chain map and every homotopy into the target lives on
the window.  Perfectness is decided by walking syzygy chains of the
resolution until one vanishes or provably repeats.  The singularity
quotient divides the derived Hom space by the image of maps into high
hard truncations of a stabilized target, sweeping the truncation degree
until the quotient dimension repeats.
"""

from .exactla import Mat, cokernel_projection, hstack, rank
from .modcat import ModMap, is_projective, jordan_type, quotient_module
from .ncx import ChainMap, NComplex, is_acyclic_at, shift_theta, truncate_hard, zero_complex
from .homotopy import BudgetExceeded, cone, hom_K, suspend
from .resolve import (
    MonChain,
    MonChainMap,
    complete_resolution,
    find_monchain_isomorphism,
    mmor_iota,
    mmor_is_projective,
    mmor_stable_hom,
    projective_resolution,
    syzygy_Omega,
)


class CutoffExhausted(RuntimeError):
    """The syzygy walk ended with neither a vanishing nor a confirmed
    repetition; a larger cutoff may decide the question."""


class PlateauNotReached(RuntimeError):
    """A dimension sweep ended before two consecutive values agreed."""


# --------------------------------------------------------------- shifting


def theta_map(f: ChainMap, j: int) -> ChainMap:
    """Degree shift of a chain map: component n of the result is
    component n + j of f."""
    src = shift_theta(f.source, j)
    tgt = shift_theta(f.target, j)
    comps = {}
    for k in range(src.lo, src.hi + 1):
        c = f.comp(k + j)
        if not c.is_zero():
            comps[k] = c
    return ChainMap(src, tgt, comps, check=False)


def iota_map(g: MonChainMap, n: int) -> ChainMap:
    """The chain map between placed complexes induced by a map of chains."""
    src = mmor_iota(g.source, n)
    tgt = mmor_iota(g.target, n)
    comps = {}
    for r in range(1, g.source.N):
        c = g.comp(r)
        if not c.is_zero():
            comps[n - g.source.N + 1 + r] = c
    return ChainMap(src, tgt, comps, check=False)


def _inclusion(sub: NComplex, whole: NComplex) -> ChainMap:
    # degreewise identity; valid whenever sub shares objects with whole
    fld = whole.algebra.field
    comps = {}
    for k in range(sub.lo, sub.hi + 1):
        d = sub.obj(k).dim
        if d:
            comps[k] = ModMap(sub.obj(k), whole.obj(k), Mat.identity(fld, d))
    return ChainMap(sub, whole, comps, check=False)


# ---------------------------------------------------------- quasi-iso test


def is_quasi_iso(f: ChainMap) -> bool:
    """True when the cone of f is acyclic in every amplitude.

    Outside the widened support window the cone vanishes, so checking
    degrees within N - 1 of the window is exhaustive.
    """
    c = cone(f)
    if c.is_zero():
        return True
    return all(is_acyclic_at(c, k) for k in range(c.lo - c.N + 1, c.hi + c.N))


def resolution_collapse(p: NComplex, n: int) -> ChainMap:
    """The degreewise projection from tau^{<=n} p onto the placed syzygy
    chain of p at n.

    The component matrices are the same cokernel projections that the
    syzygy construction computes, so the target is bit-identical to
    mmor_iota(syzygy_Omega(p, n + 1), n).  When p is acyclic at degrees
    <= n the map is a quasi-isomorphism.
    """
    N = p.N
    ch = syzygy_Omega(p, n + 1)
    src = truncate_hard(p, "le", n)
    tgt = mmor_iota(ch, n)
    comps = {}
    for r in range(1, N):
        amb = n + 1 - N + r
        qmat = cokernel_projection(p.d_power(n + 1 - N, r).mat)
        quo, proj = quotient_module(p.obj(amb), qmat)
        if not proj.is_zero():
            comps[amb] = ModMap(src.obj(amb), ch.level(r), proj.mat)
    return ChainMap(src, tgt, comps, check=True)


# ------------------------------------------------------------- derived Hom


class DHomSpace:
    """Hom space of the derived category, carried by a chosen resolution.

    The dimension does not depend on the resolution; the resolution, its
    augmentation and the homotopy Hom space it was read from are kept so
    later constructions can reuse them.
    """

    __slots__ = ("source", "target", "resolution", "augmentation", "khom", "dim")

    def __init__(self, source, target, resolution, augmentation, khom, dim):
        self.source = source
        self.target = target
        self.resolution = resolution
        self.augmentation = augmentation
        self.khom = khom
        self.dim = dim

    def __repr__(self):
        return f"DHomSpace(dim={self.dim})"


def hom_D(x: NComplex, y: NComplex, lo=None) -> DHomSpace:
    """Hom space of the derived category between bounded complexes.

    Resolves the source down to N + 1 degrees below both supports; any
    chain map or homotopy into y vanishes below the support of y, so the
    finite window computes the honest space.  lo overrides the depth.
    """
    if x.N != y.N or x.algebra != y.algebra:
        raise ValueError("hom between incompatible complexes")
    if lo is None:
        lo = min(x.lo, y.lo) - x.N - 1
    p, aug = projective_resolution(x, lo=lo)
    kh = hom_K(p, y)
    return DHomSpace(x, y, p, aug, kh, kh.dim)


def ext(x: NComplex, y: NComplex, n: int) -> int:
    """dim Hom_D(x, sigma^n y).

    Even suspension powers are realized as degree shifts by N; an odd
    power contributes one explicit suspension.
    """
    q, s = divmod(n, 2)
    t = suspend(y) if s else y
    return hom_D(x, shift_theta(t, q * y.N)).dim


# ------------------------------------------------------------- perfectness


class PerfectDecision:
    """Outcome of the perfectness walk; truthy exactly when perfect.

    position is the degree where the walk stopped: at a projective (or
    vanishing) syzygy chain when perfect, at a chain isomorphic to the
    earlier one at degree repeat_of when not.
    """

    __slots__ = ("perfect", "position", "witness", "repeat_of", "steps")

    def __init__(self, perfect, position, witness, repeat_of, steps):
        self.perfect = perfect
        self.position = position
        self.witness = witness
        self.repeat_of = repeat_of
        self.steps = steps

    def __bool__(self):
        return self.perfect

    def __repr__(self):
        verdict = "perfect" if self.perfect else "not perfect"
        return f"PerfectDecision({verdict} at degree {self.position} after {self.steps} steps)"


def is_perfect(x: NComplex, cutoff=None, iso_budget: int = 4096) -> PerfectDecision:
    """Decide whether x is isomorphic in the derived category to a bounded
    complex of projectives.

    A termwise projective complex is perfect outright.  Otherwise the
    syzygy chains of a minimal-cover resolution are walked downward from
    the bottom of the support: a projective chain certifies perfection,
    and a chain isomorphic to an earlier one certifies an eventually
    periodic resolution, hence the opposite.  Matching Jordan data alone
    never declares a repetition; an explicit isomorphism is required, and
    an exhausted candidate budget keeps the walk going.

    Raises CutoffExhausted when neither certificate appears in time.
    """
    if x.is_zero():
        return PerfectDecision(True, None, None, None, 0)
    if all(is_projective(x.obj(k)) for k in range(x.lo, x.hi + 1)):
        return PerfectDecision(True, x.lo, None, None, 0)
    if cutoff is None:
        cutoff = 4 * x.N * x.algebra.m + (x.hi - x.lo + 1) + 4
    p, _ = projective_resolution(x, lo=x.lo - cutoff - 2 * x.N)
    seen = []
    for step in range(cutoff + 1):
        n = x.lo - step
        ch = syzygy_Omega(p, n)
        if ch.is_zero() or mmor_is_projective(ch):
            return PerfectDecision(True, n, ch, None, step)
        key = tuple(jordan_type(ch.level(r)) for r in range(1, x.N))
        for prior_n, prior_key, prior_ch in seen:
            if prior_key != key:
                continue
            try:
                if find_monchain_isomorphism(ch, prior_ch, budget=iso_budget) is not None:
                    return PerfectDecision(False, n, ch, prior_n, step)
            except BudgetExceeded:
                pass
        seen.append((n, key, ch))
    raise CutoffExhausted(
        f"no projective or repeating syzygy chain within {cutoff} steps below degree {x.lo}"
    )


# --------------------------------------------------------- singularity Hom


class SingHomSpace:
    """Hom space in the singularity quotient of the derived category.

    hom is the derived Hom space the quotient is taken in: maps from the
    resolution of the source into the placed syzygy chain standing for
    the target (the target itself whenever it literally is a placed
    chain).  mask_matrix holds, in hom coordinates, the image of the maps
    into the hard truncation tau^{>= cutoff} of the stabilized target;
    every such truncation is a bounded complex of projectives.  The
    cutoff was swept downward until dim = hom.dim - mask_rank agreed
    twice in a row.

    rep_target is the non-positive half of the complete resolution
    standing for the target, pushed so its syzygy chain sits at degree
    top; stabilization is the full materialized window it was cut from;
    collapse maps rep_target onto the placed chain.
    """

    __slots__ = (
        "source", "target", "pair", "rep_target", "stabilization", "top",
        "hom", "resolution", "augmentation", "collapse",
        "mask_matrix", "mask_rank", "dim", "cutoff",
    )

    def __init__(self, source, target, pair, rep_target, stabilization, top,
                 hom, resolution, augmentation, collapse,
                 mask_matrix, mask_rank, dim, cutoff):
        self.source = source
        self.target = target
        self.pair = pair
        self.rep_target = rep_target
        self.stabilization = stabilization
        self.top = top
        self.hom = hom
        self.resolution = resolution
        self.augmentation = augmentation
        self.collapse = collapse
        self.mask_matrix = mask_matrix
        self.mask_rank = mask_rank
        self.dim = dim
        self.cutoff = cutoff

    def __repr__(self):
        return f"SingHomSpace(dim={self.dim}, cutoff={self.cutoff})"


def _chain_form(y: NComplex):
    """Read y as the placement of a chain of monics with top degree y.hi,
    or None when the window is too wide or a differential is not monic."""
    N = y.N
    if y.hi - y.lo > N - 2:
        return None
    t = y.hi
    levels = []
    monics = []
    for r in range(1, N):
        k = t - N + 1 + r
        levels.append(y.obj(k))
        if r < N - 1:
            d = y.diff(k)
            if rank(d.mat) != d.source.dim:
                return None
            monics.append(d)
    w = MonChain(y.algebra, N, levels, monics, check=True)
    return w, t


def _trivial_sing(x, y, pair):
    # source or target vanishes in the quotient: the factoring subspace
    # is everything, so the mask is the full identity
    alg = x.algebra
    fld = alg.field
    q0 = zero_complex(alg, x.N)
    kh = pair.khom
    return SingHomSpace(
        x, y, pair, q0, q0, 0, kh, pair.resolution, pair.augmentation,
        ChainMap.zero(q0, y), Mat.identity(fld, kh.dim), kh.dim, 0, None,
    )


def _stabilize(w: MonChain, t: int, iso_budget: int):
    """Complete resolution of w, cut at its non-positive half and pushed
    so the syzygy chain sits at t.  Returns (rep_target, stabilization,
    collapse onto iota^t of a chain isomorphic to w), or None when the
    complete resolution cannot be certified against w."""
    lazy = complete_resolution(w)
    core = lazy.complex()
    back = lazy.syzygy_chain()
    match = find_monchain_isomorphism(back, w, budget=iso_budget)
    if match is None:
        return None
    v1 = iota_map(match, 0) @ resolution_collapse(core, 0)
    return (
        shift_theta(truncate_hard(core, "le", 0), -t),
        shift_theta(core, -t),
        theta_map(v1, -t),
    )


def hom_sing(x: NComplex, y: NComplex, iso_budget: int = 4096) -> SingHomSpace:
    """Hom space in the singularity category.

    The target is traded for a placed chain of monics: either y literally
    is one, or a syzygy chain of its resolution is used (the discarded
    truncation is a bounded complex of projectives, invisible in the
    quotient).  The derived Hom space into the placed chain is divided by
    the image of the maps into hard truncations of the non-positive half
    of its complete resolution; the truncation degree sweeps downward
    until the quotient dimension agrees twice in a row.

    Raises PlateauNotReached when the sweep ends first, and AssertionError
    when no complete resolution can be certified against the target.
    """
    if x.N != y.N or x.algebra != y.algebra:
        raise ValueError("hom between incompatible complexes")
    alg, N = x.algebra, x.N
    fld = alg.field

    def pair_space(depth_lo=None):
        p, aug = projective_resolution(x, lo=depth_lo)
        kh = hom_K(p, y)
        return DHomSpace(x, y, p, aug, kh, kh.dim)

    if x.is_zero() or y.is_zero():
        return _trivial_sing(x, y, pair_space())

    got = _chain_form(y)
    stab = None
    if got is not None:
        w, t = got
        if mmor_is_projective(w):
            return _trivial_sing(x, y, pair_space())
        stab = _stabilize(w, t, iso_budget)
    if stab is None:
        # either y is not literally a placed chain or its complete
        # resolution could not be certified; pass to a syzygy chain,
        # whose minimal covers leave no projective summands behind
        py, _ = projective_resolution(y)
        t = y.lo - 1
        w = syzygy_Omega(py, y.lo)
        if w.is_zero() or mmor_is_projective(w):
            return _trivial_sing(x, y, pair_space())
        stab = _stabilize(w, t, iso_budget)
        if stab is None:
            raise AssertionError("complete resolution does not certify against the target chain")
    q_half, full, v_full = stab

    pair = pair_space(min(x.lo, q_half.lo) - N - 1)
    p, aug = pair.resolution, pair.augmentation
    if v_full.target == y:
        kh = pair.khom
    else:
        kh = hom_K(p, v_full.target)

    prev = None
    for m_cut in range(t, q_half.lo + N - 1, -1):
        sub = truncate_hard(q_half, "ge", m_cut)
        inc = _inclusion(sub, q_half)
        hs = hom_K(p, sub)
        cols = [
            kh.class_coordinates(v_full @ (inc @ g))
            for g in hs.representatives
        ]
        mask = hstack(cols) if cols else Mat.zeros(fld, kh.dim, 0)
        r = rank(mask)
        qdim = kh.dim - r
        if prev == qdim:
            return SingHomSpace(
                x, y, pair, q_half, full, t, kh, p, aug, v_full,
                mask, r, qdim, m_cut,
            )
        prev = qdim
    raise PlateauNotReached(
        f"quotient dimension did not stabilize sweeping down to degree {q_half.lo + N}"
    )


# ------------------------------------------------------ triangle of spaces


class BuchweitzReport:
    """Result of comparing stable and singular Hom spaces; truthy on PASS.

    PASS requires the dimensions to agree, the source stabilization to be
    certified (its truncated complete resolution collapses onto the
    placed syzygy chain by a quasi-isomorphism away from the wall, and
    the discarded positive part is perfect), and the stable classes to
    land linearly independently outside the factoring subspace.
    """

    __slots__ = (
        "stable_dim", "sing_dim", "dims_match", "collapse_quasi_iso",
        "complement_perfect", "embedding_injective", "passed", "cutoff",
    )

    def __init__(self, stable_dim, sing_dim, dims_match, collapse_quasi_iso,
                 complement_perfect, embedding_injective, passed, cutoff):
        self.stable_dim = stable_dim
        self.sing_dim = sing_dim
        self.dims_match = dims_match
        self.collapse_quasi_iso = collapse_quasi_iso
        self.complement_perfect = complement_perfect
        self.embedding_injective = embedding_injective
        self.passed = passed
        self.cutoff = cutoff

    def __bool__(self):
        return self.passed

    def __repr__(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"BuchweitzReport({verdict}: stable {self.stable_dim} vs singular {self.sing_dim})"


def buchweitz_verify(xc: MonChain, yc: MonChain, iso_budget: int = 4096) -> BuchweitzReport:
    """Compare the stable Hom space of two chains of monics with the
    singular Hom space of their degree-zero placements.

    Reports: the two dimensions; whether the non-positive half of a
    complete resolution of the source collapses quasi-isomorphically
    (away from the materialization wall) onto its placement, with the
    syzygy chain certified isomorphic to the source; whether the
    discarded positive half is perfect; and whether the classes of the
    stable representatives are independent modulo the factoring subspace.
    PASS is the conjunction.
    """
    if xc.algebra != yc.algebra or xc.N != yc.N:
        raise ValueError("hom between incompatible chains")
    N = xc.N
    x_cx = mmor_iota(xc, 0)
    y_cx = mmor_iota(yc, 0)
    stable = mmor_stable_hom(xc, yc)
    ss = hom_sing(x_cx, y_cx, iso_budget=iso_budget)
    dims_match = stable.dim == ss.dim

    if xc.is_zero() or mmor_is_projective(xc):
        # the placement is already perfect, nothing to stabilize
        collapse_ok = True
        comp_perf = True
    else:
        lazy = complete_resolution(xc)
        core = lazy.complex()
        match = find_monchain_isomorphism(lazy.syzygy_chain(), xc, budget=iso_budget)
        if match is None:
            collapse_ok = False
            comp_perf = False
        else:
            v = iota_map(match, 0) @ resolution_collapse(core, 0)
            c = cone(v)
            collapse_ok = all(
                is_acyclic_at(c, k) for k in range(c.lo + 2 * N, c.hi + N)
            )
            comp_perf = bool(is_perfect(truncate_hard(core, "ge", 1)))

    if stable.representatives and not y_cx.is_zero():
        cols = [
            ss.hom.class_coordinates(iota_map(g, 0) @ ss.augmentation)
            for g in stable.representatives
        ]
        stacked = hstack([ss.mask_matrix] + cols)
        injective = rank(stacked) == ss.mask_rank + len(cols)
    else:
        injective = stable.dim == 0

    passed = dims_match and collapse_ok and comp_perf and injective
    return BuchweitzReport(
        stable.dim, ss.dim, dims_match, collapse_ok, comp_perf,
        injective, passed, ss.cutoff,
    )


# ---------------------------------------------------------------- Tate Hom


def tate_hom(x: MonChain, y: MonChain, n: int, rounds: int = 4) -> int:
    """Dimension of the degree-n Hom space between complete resolutions.

    Chain maps of totally acyclic complexes modulo homotopy correspond to
    stable maps of their syzygy chains, so the dimension is read off as
    the stable Hom space of the degree-one syzygy chains of the two
    materialized windows.  The n-th suspension of the target is realized
    by a degree shift for the even part and one explicit suspension for
    the odd part; a finite window misses homotopies whose support crosses
    its wall, which is why the windows widen until the dimension agrees
    twice in a row.  A projective (or zero) chain has a contractible
    complete resolution, so the dimension is zero outright.

    Raises PlateauNotReached when the dimension keeps drifting.
    """
    if x.algebra != y.algebra or x.N != y.N:
        raise ValueError("hom between incompatible chains")
    if x.is_zero() or y.is_zero() or mmor_is_projective(x) or mmor_is_projective(y):
        return 0
    N = x.N
    lx = complete_resolution(x)
    ly = complete_resolution(y)
    q, s = divmod(n, 2)
    prev = None
    for _ in range(rounds):
        cy = ly.complex()
        base = suspend(cy) if s else cy
        shifted = shift_theta(base, q * N)
        try:
            zx = lx.syzygy_chain()
            zy = syzygy_Omega(shifted, 1)
            d = mmor_stable_hom(zx, zy).dim
        except ValueError:
            # the shifted window is too shallow for the syzygy; widen
            d = None
        if d is not None and prev == d:
            return d
        prev = d
        lx.extend_left(N)
        lx.extend_right(N)
        ly.extend_left(N)
        ly.extend_right(N)
    raise PlateauNotReached(f"dimension did not stabilize within {rounds} window sizes")
