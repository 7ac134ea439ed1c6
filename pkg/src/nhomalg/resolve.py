"""Resolutions of N-complexes through grids of bicartesian squares.

An N-array is a grid of modules X^k_r, r = 0..N, with horizontal maps
p^k_r: X^k_r -> X^k_{r-1} and diagonal maps i^k_r: X^k_r -> X^{k+1}_{r+1}
making every square commute.  Acyclic complexes unfold into acyclic
arrays whose column entries are the amplitude cycle objects, and every
bounded-above complex acquires a projectively resolving array built by an
induction of pullbacks and minimal covers.  Gluing such an array to the
dual of a second one along a cokernel seam yields complete resolutions:
acyclic complexes of free modules unbounded in both directions.

Chains of monomorphisms (the shape of syzygy data) form a small category
of their own with enough projectives; it is implemented first since the
gluing step consumes it.
"""

from .exactla import Mat, block, cokernel_projection, hstack, kernel_basis, rank, rref, solve, vstack
from .modcat import (
    ModMap,
    Module,
    analysis,
    direct_sum,
    dual_map,
    dual_module,
    hom_basis,
    is_projective,
    jordan_type,
    proj_cover,
    pullback,
    quotient_module,
    submodule,
    zero_module,
)
from .ncx import ChainMap, NComplex, is_acyclic, is_acyclic_at, is_totally_acyclic, zero_complex
from .homotopy import BudgetExceeded


def _flat(mat: Mat) -> Mat:
    return Mat._trusted(mat.field, mat.rows * mat.cols, 1, mat.entries)


def _combine(basis, coords: Mat, src: Module, tgt: Module) -> ModMap:
    fld = src.algebra.field
    acc = Mat.zeros(fld, tgt.dim, src.dim)
    for idx, b in enumerate(basis):
        c = coords.entry(idx, 0)
        if c != fld.coerce(0):
            acc = acc + b.mat.scale(c)
    return ModMap(src, tgt, acc, check=False)


def _solve_postcomposed(src: Module, mid: Module, posts, rhss):
    """Canonical equivariant u: src -> mid with post_t . u = rhs_t for all t.

    The unknown is expressed in a Hom basis, so the solution intertwines
    the actions by construction.  Returns None when inconsistent.
    """
    fld = src.algebra.field
    basis = hom_basis(src, mid)
    if not basis:
        if all(r.is_zero() for r in rhss):
            return ModMap.zero(src, mid)
        return None
    cols = [vstack([_flat((p @ b).mat) for p in posts]) for b in basis]
    rhs = vstack([_flat(r.mat) for r in rhss])
    sol = solve(hstack(cols), rhs)
    if sol is None:
        return None
    return _combine(basis, sol, src, mid)


def _descend(proj: ModMap, f: ModMap) -> ModMap:
    # unique g with g . proj = f; uniqueness makes g automatically equivariant
    got = solve(proj.mat.transpose(), f.mat.transpose())
    if got is None:
        raise ValueError("map does not factor through the projection")
    return ModMap(proj.target, f.target, got.transpose(), check=False)


def _splits(mono: ModMap) -> bool:
    """Whether a monomorphism admits an equivariant retraction."""
    fld = mono.source.algebra.field
    basis = hom_basis(mono.target, mono.source)
    ident = Mat.identity(fld, mono.source.dim)
    if not basis:
        return mono.source.dim == 0
    cols = [_flat((b @ mono).mat) for b in basis]
    return solve(hstack(cols), _flat(ident)) is not None


# ------------------------------------------------------ chains of monics


class MonChain:
    """A chain of monomorphisms X^1 >-> X^2 >-> ... >-> X^{N-1}.

    Levels are indexed 1..N-1.  For N = 2 the chain is a single module
    and carries no maps.
    """

    __slots__ = ("algebra", "N", "objects", "monics")

    def __init__(self, algebra, N, objects, monics, check=True):
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        objects = tuple(objects)
        monics = tuple(monics)
        if len(objects) != N - 1:
            raise ValueError(f"expected {N - 1} levels, got {len(objects)}")
        if len(monics) != N - 2:
            raise ValueError(f"expected {N - 2} structure maps, got {len(monics)}")
        for ob in objects:
            if ob.algebra != algebra:
                raise ValueError("level over the wrong algebra")
        self.algebra = algebra
        self.N = N
        self.objects = objects
        self.monics = monics
        if check:
            bad = mmor_validate(self)
            if bad is not None:
                raise ValueError(f"structure map out of level {bad} is not a monomorphism")

    def level(self, r: int) -> Module:
        if not 1 <= r <= self.N - 1:
            raise ValueError(f"level {r} outside 1..{self.N - 1}")
        return self.objects[r - 1]

    def monic(self, r: int) -> ModMap:
        if not 1 <= r <= self.N - 2:
            raise ValueError(f"no structure map out of level {r}")
        return self.monics[r - 1]

    def dims(self):
        return tuple(ob.dim for ob in self.objects)

    def is_zero(self) -> bool:
        return all(ob.dim == 0 for ob in self.objects)

    def __eq__(self, other):
        return (
            isinstance(other, MonChain)
            and self.algebra == other.algebra
            and self.N == other.N
            and self.objects == other.objects
            and self.monics == other.monics
        )

    def __hash__(self):
        return hash((self.algebra, self.N, self.objects, self.monics))

    def __repr__(self):
        return f"MonChain(N={self.N}, dims={list(self.dims())})"


def mmor_validate(x: MonChain):
    """None when every structure map is a monomorphism between the right
    levels, else the source level of the first failure."""
    for r in range(1, x.N - 1):
        f = x.monics[r - 1]
        if f.source != x.objects[r - 1] or f.target != x.objects[r]:
            return r
        if not f.is_injective():
            return r
    return None


class MonChainMap:
    """A tuple of level maps commuting with the structure monics."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: MonChain, target: MonChain, comps, check=True):
        comps = tuple(comps)
        if len(comps) != source.N - 1:
            raise ValueError(f"expected {source.N - 1} components, got {len(comps)}")
        self.source = source
        self.target = target
        self.comps = comps
        if check:
            for r in range(1, source.N):
                c = comps[r - 1]
                if c.source != source.level(r) or c.target != target.level(r):
                    raise ValueError(f"component {r} has wrong endpoints")
            for r in range(1, source.N - 1):
                left = target.monic(r) @ comps[r - 1]
                right = comps[r] @ source.monic(r)
                if left.mat != right.mat:
                    raise ValueError(f"components do not commute with the monic at level {r}")

    def comp(self, r: int) -> ModMap:
        return self.comps[r - 1]

    @classmethod
    def identity(cls, x: MonChain) -> "MonChainMap":
        return cls(x, x, [ModMap.identity(x.level(r)) for r in range(1, x.N)], check=False)

    @classmethod
    def zero(cls, x: MonChain, y: MonChain) -> "MonChainMap":
        return cls(x, y, [ModMap.zero(x.level(r), y.level(r)) for r in range(1, x.N)], check=False)

    def __matmul__(self, other: "MonChainMap") -> "MonChainMap":
        return MonChainMap(other.source, self.target, [a @ b for a, b in zip(self.comps, other.comps)], check=False)

    def __add__(self, other: "MonChainMap") -> "MonChainMap":
        return MonChainMap(self.source, self.target, [a + b for a, b in zip(self.comps, other.comps)], check=False)

    def __sub__(self, other: "MonChainMap") -> "MonChainMap":
        return MonChainMap(self.source, self.target, [a - b for a, b in zip(self.comps, other.comps)], check=False)

    def __neg__(self) -> "MonChainMap":
        return MonChainMap(self.source, self.target, [-a for a in self.comps], check=False)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def is_isomorphism(self) -> bool:
        return all(c.is_isomorphism() for c in self.comps)

    def __eq__(self, other):
        return (
            isinstance(other, MonChainMap)
            and self.source == other.source
            and self.target == other.target
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.source, self.target, self.comps))

    def __repr__(self):
        return f"MonChainMap(levels={len(self.comps)})"


def mmor_iota(x: MonChain, n: int) -> NComplex:
    """The chain as an N-complex with the top level placed at degree n."""
    return NComplex(x.algebra, x.N, n - x.N + 2, list(x.objects), list(x.monics), check=False)


def mmor_direct_sum(chains) -> MonChain:
    chains = list(chains)
    if not chains:
        raise ValueError("empty direct sum needs an algebra")
    alg, N = chains[0].algebra, chains[0].N
    fld = alg.field
    objects = [direct_sum([c.level(r) for c in chains]) for r in range(1, N)]
    monics = []
    for r in range(1, N - 1):
        n = len(chains)
        grid = [[chains[i].monic(r).mat if i == j else None for j in range(n)] for i in range(n)]
        rows = [c.level(r + 1).dim for c in chains]
        cols = [c.level(r).dim for c in chains]
        monics.append(ModMap(objects[r - 1], objects[r], block(fld, grid, rows, cols), check=False))
    return MonChain(alg, N, objects, monics, check=False)


def mu_chain(a: Module, t: int, N: int) -> MonChain:
    """The chain with a at the top t levels (identity monics) and zero below."""
    if not 1 <= t <= N - 1:
        raise ValueError(f"t must lie in 1..{N - 1}, got {t}")
    fld = a.algebra.field
    zero = zero_module(a.algebra)
    objects = [zero] * (N - 1 - t) + [a] * t
    monics = []
    for r in range(1, N - 1):
        if objects[r - 1].dim == 0:
            mat = Mat.zeros(fld, objects[r].dim, 0)
        else:
            mat = Mat.identity(fld, a.dim)
        monics.append(ModMap(objects[r - 1], objects[r], mat, check=False))
    return MonChain(a.algebra, N, objects, monics, check=False)


def mmor_is_projective(x: MonChain) -> bool:
    """Projective chains have projective levels and split structure maps."""
    if not all(is_projective(x.level(r)) for r in range(1, x.N)):
        return False
    return all(_splits(x.monic(r)) for r in range(1, x.N - 1))


def mmor_proj_cover(x: MonChain) -> MonChainMap:
    """Minimal-flavoured cover: level r is the sum of the covers of the
    cokernels of the first r structure maps, mapping by lifted generators.

    The cover chain is projective and each level map is epic.
    """
    alg, N = x.algebra, x.N
    fld = alg.field
    pieces = []
    for j in range(1, N):
        if j == 1:
            c = proj_cover(x.level(1))
            pieces.append((c.source, c))
        else:
            q = analysis(x.monic(j - 1)).cokernel
            c = proj_cover(q.target)
            lift = _solve_postcomposed(c.source, x.level(j), [q], [c])
            if lift is None:
                raise AssertionError("cover generators failed to lift")
            pieces.append((c.source, lift))
    levels = []
    eps = []
    for r in range(1, N):
        mods = [pieces[j - 1][0] for j in range(1, r + 1)]
        level = direct_sum(mods)
        cols = []
        for j in range(1, r + 1):
            g = pieces[j - 1][1]
            for t in range(j, r):
                g = x.monic(t) @ g
            cols.append(g.mat)
        mat = hstack(cols) if cols else Mat.zeros(fld, x.level(r).dim, 0)
        e = ModMap(level, x.level(r), mat, check=False)
        if not e.is_surjective():
            raise AssertionError(f"cover fails to surject at level {r}")
        levels.append(level)
        eps.append(e)
    monics = []
    for r in range(1, N - 1):
        small, big = levels[r - 1], levels[r]
        incl = vstack([Mat.identity(fld, small.dim), Mat.zeros(fld, big.dim - small.dim, small.dim)])
        monics.append(ModMap(small, big, incl, check=False))
    cover_chain = MonChain(alg, N, levels, monics, check=False)
    return MonChainMap(cover_chain, x, eps, check=True)


def mmor_hom_basis(x: MonChain, y: MonChain):
    """Basis of the space of chain maps x -> y."""
    fld = x.algebra.field
    N = x.N
    bases = [hom_basis(x.level(r), y.level(r)) for r in range(1, N)]
    sizes = [len(b) for b in bases]
    total = sum(sizes)
    if total == 0:
        return []
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    rows = []
    for r in range(1, N - 1):
        rows.append(y.level(r + 1).dim * x.level(r).dim)
    if not rows:
        coords = Mat.identity(fld, total)
    else:
        cols = []
        for r in range(1, N):
            for b in bases[r - 1]:
                pieces = []
                for c in range(1, N - 1):
                    if c == r:
                        pieces.append(_flat((y.monic(c) @ b).mat))
                    elif c == r - 1:
                        pieces.append(_flat((b @ x.monic(c)).mat).scale(fld.coerce(-1)))
                    else:
                        pieces.append(Mat.zeros(fld, rows[c - 1], 1))
                cols.append(vstack(pieces))
        coords = kernel_basis(hstack(cols))
    out = []
    for j in range(coords.cols):
        comps = []
        for r in range(1, N):
            col = Mat(fld, sizes[r - 1], 1, [coords.entry(offsets[r - 1] + i, j) for i in range(sizes[r - 1])])
            comps.append(_combine(bases[r - 1], col, x.level(r), y.level(r)))
        out.append(MonChainMap(x, y, comps, check=False))
    return out


def _chain_flat(g: MonChainMap) -> Mat:
    return vstack([_flat(c.mat) for c in g.comps])


class MmorStableHom:
    """Chain maps modulo those factoring through the cover of the target."""

    __slots__ = ("dim", "representatives", "projectively_trivial")

    def __init__(self, dim, representatives, projectively_trivial):
        self.dim = dim
        self.representatives = representatives
        self.projectively_trivial = projectively_trivial


def mmor_stable_hom(x: MonChain, y: MonChain) -> MmorStableHom:
    full = mmor_hom_basis(x, y)
    if not full:
        return MmorStableHom(0, [], [])
    cover = mmor_proj_cover(y)
    through = [cover @ h for h in mmor_hom_basis(x, cover.source)]
    triv_cols = [_chain_flat(h) for h in through]
    full_cols = [_chain_flat(h) for h in full]
    if triv_cols:
        _, pivots, _ = rref(hstack(triv_cols + full_cols))
        k = len(triv_cols)
        reps = [full[j - k] for j in pivots if j >= k]
        triv_rank = sum(1 for j in pivots if j < k)
    else:
        reps = full
        triv_rank = 0
    return MmorStableHom(len(full) - triv_rank, reps, through)


def mmor_stable_class_coordinates(g: MonChainMap, stable: MmorStableHom) -> Mat:
    """Coordinates of the stable class of g in the representative basis."""
    fld = g.source.algebra.field
    cols = [_chain_flat(h) for h in stable.projectively_trivial] + [_chain_flat(r) for r in stable.representatives]
    ntriv = len(stable.projectively_trivial)
    if not cols:
        if not g.is_zero():
            raise ValueError("nonzero map in a zero Hom space")
        return Mat.zeros(fld, 0, 1)
    sol = solve(hstack(cols), _chain_flat(g))
    if sol is None:
        raise ValueError("map does not lie in the given Hom space")
    return Mat(fld, len(stable.representatives), 1, [sol.entry(ntriv + i, 0) for i in range(len(stable.representatives))])


# --------------------------------------------------------------- N-arrays


class NArray:
    """Grid of modules linked by horizontal p-maps and diagonal i-maps.

    Entries live at (k, r) for k in [lo, hi] and r in 0..N; everything
    outside the window is zero.  Construction verifies that all squares
    p^{k+1}_{r+1} i^k_r = i^k_{r-1} p^k_r commute and records three
    verified flags: epic (all p surjective), monic (all i injective) and
    bicartesian (every square passes the short-exactness rank criterion).
    """

    __slots__ = ("algebra", "N", "lo", "hi", "_objs", "_pmaps", "_imaps", "epic", "monic", "bicartesian")

    def __init__(self, algebra, N, lo, hi, objs, pmaps, imaps, check=True):
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        self.algebra = algebra
        self.N = N
        self.lo = lo
        self.hi = hi
        self._objs = dict(objs)
        self._pmaps = dict(pmaps)
        self._imaps = dict(imaps)
        if check:
            for k in range(lo, hi + 1):
                for r in range(1, N):
                    left = self.p(k + 1, r + 1) @ self.i(k, r)
                    right = self.i(k, r - 1) @ self.p(k, r)
                    if left.mat != right.mat:
                        raise ValueError(f"square at (k={k}, r={r}) does not commute")
        self.epic = all(self.p(k, r).is_surjective() for k in range(lo, hi + 1) for r in range(1, N + 1))
        self.monic = all(self.i(k, r).is_injective() for k in range(lo, hi + 1) for r in range(N))
        self.bicartesian = all(_square_exact(self, k, r) for k in range(lo, hi + 1) for r in range(1, N))

    def is_empty(self) -> bool:
        return self.hi < self.lo

    def obj(self, k: int, r: int) -> Module:
        if not 0 <= r <= self.N:
            raise ValueError(f"row {r} outside 0..{self.N}")
        if self.lo <= k <= self.hi:
            got = self._objs.get((k, r))
            if got is not None:
                return got
        return zero_module(self.algebra)

    def p(self, k: int, r: int) -> ModMap:
        got = self._pmaps.get((k, r))
        if got is not None:
            return got
        return ModMap.zero(self.obj(k, r), self.obj(k, r - 1))

    def i(self, k: int, r: int) -> ModMap:
        got = self._imaps.get((k, r))
        if got is not None:
            return got
        return ModMap.zero(self.obj(k, r), self.obj(k + 1, r + 1))

    def p_chain(self, k: int, r_top: int, r_bot: int) -> ModMap:
        out = ModMap.identity(self.obj(k, r_top))
        for r in range(r_top, r_bot, -1):
            out = self.p(k, r) @ out
        return out

    def i_chain(self, k: int, r: int, steps: int) -> ModMap:
        out = ModMap.identity(self.obj(k, r))
        for t in range(steps):
            out = self.i(k + t, r + t) @ out
        return out

    def top_diff(self, k: int) -> ModMap:
        return self.i(k, self.N - 1) @ self.p(k, self.N)

    def top_power(self, k: int, t: int) -> ModMap:
        out = ModMap.identity(self.obj(k, self.N))
        for j in range(t):
            out = self.top_diff(k + j) @ out
        return out

    def diagonal_vanishes(self) -> bool:
        return all(self.i_chain(k, 0, self.N).is_zero() for k in range(self.lo, self.hi + 1))

    def is_acyclic_array(self) -> bool:
        return (
            self.epic
            and self.monic
            and self.bicartesian
            and all(self.obj(k, 0).dim == 0 for k in range(self.lo, self.hi + 1))
        )

    def is_resolving(self) -> bool:
        return self.epic and self.bicartesian and self.diagonal_vanishes()

    def is_projectively_resolving(self) -> bool:
        return self.is_resolving() and all(is_projective(self.obj(k, self.N)) for k in range(self.lo, self.hi + 1))

    def __repr__(self):
        return f"NArray(N={self.N}, window=[{self.lo},{self.hi}])"


def _square_exact(a: NArray, k: int, r: int) -> bool:
    """Short-exactness criterion for the square at (k, r): the stacked
    inclusion into the sum corner must be monic, the spread difference
    epic, and the ranks complementary."""
    stacked = vstack([a.i(k, r).mat, a.p(k, r).mat])
    spread = hstack([a.p(k + 1, r + 1).mat, a.i(k, r - 1).mat.scale(a.algebra.field.coerce(-1))])
    if not (spread @ stacked).is_zero():
        return False
    dim_corner = a.obj(k, r).dim
    dim_mid = a.obj(k + 1, r + 1).dim + a.obj(k, r - 1).dim
    dim_out = a.obj(k + 1, r).dim
    rk_in = rank(stacked)
    rk_out = rank(spread)
    return rk_in == dim_corner and rk_out == dim_out and rk_in + rk_out == dim_mid


def _empty_array(algebra, N: int) -> NArray:
    return NArray(algebra, N, 0, -1, {}, {}, {}, check=False)


def array_from_acyclic(x: NComplex) -> NArray:
    """Unfold an acyclic complex into its acyclic array of cycle objects.

    Entry (k, r) is the amplitude-r cycle submodule of X^{k+N-r}; the
    i-maps are the kernel inclusions, the p-maps apply the differential.
    Row N is X itself with identity witnesses, so the round trip through
    complex_from_array is the identity.
    """
    alg, N = x.algebra, x.N
    if x.is_zero():
        return _empty_array(alg, N)
    for n in range(x.lo - N + 1, x.hi + N):
        if not is_acyclic_at(x, n):
            raise ValueError(f"input is not acyclic at degree {n}")
    lo, hi = x.lo - N + 1, x.hi
    incls = {}
    objs = {}
    maps = {}
    for k in range(lo, hi + 1):
        for r in range(N + 1):
            amb = k + N - r
            basis = kernel_basis(x.d_power(amb, r).mat)
            mod, incl = submodule(x.obj(amb), basis)
            incls[(k, r)] = incl
            objs[(k, r)] = mod
    pmaps = {}
    imaps = {}
    for k in range(lo, hi + 1):
        for r in range(1, N + 1):
            amb = k + N - r
            mat = solve(incls[(k, r - 1)].mat, x.diff(amb).mat @ incls[(k, r)].mat)
            if mat is None:
                raise AssertionError("differential fails to restrict to cycles")
            pmaps[(k, r)] = ModMap(objs[(k, r)], objs[(k, r - 1)], mat, check=False)
        for r in range(N):
            if k + 1 > hi:
                continue
            mat = solve(incls[(k + 1, r + 1)].mat, incls[(k, r)].mat)
            if mat is None:
                raise AssertionError("cycle inclusion fails to factor")
            imaps[(k, r)] = ModMap(objs[(k, r)], objs[(k + 1, r + 1)], mat, check=False)
    arr = NArray(alg, N, lo, hi, objs, pmaps, imaps)
    if not arr.is_acyclic_array():
        raise AssertionError("unfolded array failed its acyclicity certificates")
    return arr


def complex_from_array(a: NArray) -> NComplex:
    """The top row of the array, with differential i after p."""
    if a.is_empty():
        return zero_complex(a.algebra, a.N)
    objs = [a.obj(k, a.N) for k in range(a.lo, a.hi + 1)]
    diffs = [a.top_diff(k) for k in range(a.lo, a.hi)]
    return NComplex(a.algebra, a.N, a.lo, objs, diffs, check=True)


def bottom_row(a: NArray) -> NComplex:
    """The row-0 complex, with differential p after i."""
    if a.is_empty():
        return zero_complex(a.algebra, a.N)
    objs = [a.obj(k, 0) for k in range(a.lo, a.hi + 1)]
    diffs = [a.p(k + 1, 1) @ a.i(k, 0) for k in range(a.lo, a.hi)]
    return NComplex(a.algebra, a.N, a.lo, objs, diffs, check=True)


# ------------------------------------------------- resolving construction


def keller_resolve(x: NComplex, lo=None, cover_override=None) -> NArray:
    """Projectively resolving array of a bounded-above complex.

    Columns are built downward from the top of the support: first the
    diagonal map out of the new bottom object, solved equivariantly
    against the stacked epi-and-diagonal system, then N-1 successive
    pullbacks, then a minimal projective cover of the last pullback.
    Row 0 is x itself; row N is termwise free.

    lo bounds the materialized window from below (default: the lower end
    of the support of x).  cover_override maps a column index to a
    replacement surjection from a free module onto that column's level
    N-1 object; it exists for non-minimal resolutions and for gluing.
    """
    alg, N = x.algebra, x.N
    fld = alg.field
    override = dict(cover_override or {})
    if x.is_zero() and not override:
        return _empty_array(alg, N)
    m = x.hi
    if x.is_zero():
        m = max(override)
    elif override:
        m = max(m, max(override))
    if lo is None:
        lo = x.lo if not x.is_zero() else min(override)
    lo = min(lo, m)

    objs, pmaps, imaps = {}, {}, {}

    def gobj(k, r):
        if k > m:
            return zero_module(alg)
        return objs[(k, r)]

    def gp(k, r):
        if k > m:
            return ModMap.zero(gobj(k, r), gobj(k, r - 1))
        return pmaps[(k, r)]

    def gi(k, r):
        if k > m:
            return ModMap.zero(gobj(k, r), gobj(k + 1, r + 1))
        return imaps[(k, r)]

    for n in range(m + 1, lo, -1):
        col = n - 1
        bottom = x.obj(col)
        objs[(col, 0)] = bottom
        chain = ModMap.identity(gobj(n, 1))
        for t in range(1, N):
            chain = gi(n + t - 1, t) @ chain
        jm = _solve_postcomposed(
            bottom,
            gobj(n, 1),
            [gp(n, 1), chain],
            [ModMap(bottom, gobj(n, 0), x.diff(col).mat, check=False), ModMap.zero(bottom, chain.target)],
        )
        if jm is None:
            raise AssertionError(f"resolving induction has no diagonal map at column {col}")
        imaps[(col, 0)] = jm
        for r in range(1, N):
            pb, to_prev, to_up = pullback(gi(col, r - 1), gp(n, r + 1))
            objs[(col, r)] = pb
            pmaps[(col, r)] = to_prev
            imaps[(col, r)] = to_up
        target = objs[(col, N - 1)]
        if col in override:
            eps = override[col]
            if eps.target != target:
                raise ValueError(f"cover override at column {col} has the wrong target")
            if not is_projective(eps.source) or not eps.is_surjective():
                raise ValueError(f"cover override at column {col} is not an epi from a projective")
        else:
            eps = proj_cover(target)
        objs[(col, N)] = eps.source
        pmaps[(col, N)] = eps

    arr = NArray(alg, N, lo, m, objs, pmaps, imaps)
    if not arr.is_projectively_resolving():
        raise AssertionError("construction failed its resolving certificates")
    return arr


def _augmentation(a: NArray, x: NComplex) -> ChainMap:
    """The full p-composite from the top row onto the resolved complex."""
    top = complex_from_array(a)
    comps = {}
    for k in range(a.lo, a.hi + 1):
        if a.obj(k, 0) != x.obj(k):
            raise ValueError(f"array bottom row disagrees with the complex at degree {k}")
        comps[k] = ModMap(a.obj(k, a.N), x.obj(k), a.p_chain(k, a.N, 0).mat, check=False)
    return ChainMap(top, x, comps, check=True)


def projective_resolution(x: NComplex, lo=None):
    """A termwise free complex with an epic-in-each-degree quasi-isomorphism
    onto x, materialized down to lo (default: support plus a margin of
    4 N m degrees)."""
    if x.is_zero():
        p = zero_complex(x.algebra, x.N)
        return p, ChainMap.zero(p, x)
    if lo is None:
        lo = x.lo - (4 * x.N * x.algebra.m + (x.hi - x.lo + 1))
    arr = keller_resolve(x, lo=lo)
    return complex_from_array(arr), _augmentation(arr, x)


# ------------------------------------------------------------- cone array


def cone_array(a: NArray) -> NArray:
    """Acyclic array of the cone over the augmentation of a resolving array.

    Entry (n, r) for r >= 1 is X^{n+N-r}_{N-r} plus the row-N terms at
    degrees n+N-r+1 .. n+N-1; row 0 is zero.  The p-maps and i-maps are
    the block matrices with single diagonal/horizontal legs, shifted
    identities, and negated diagonal chains in the last row.
    """
    alg, N = a.algebra, a.N
    fld = alg.field
    if a.is_empty():
        return _empty_array(alg, N)
    if not a.is_resolving():
        raise ValueError("cone array needs a resolving input array")
    lo, hi = a.lo, a.hi

    def blocks(n, r):
        # source decomposition of C^n_r
        out = [a.obj(n + N - r, N - r)]
        for k in range(N - r + 1, N):
            out.append(a.obj(n + k, N))
        return out

    objs = {}
    for n in range(lo, hi + 1):
        objs[(n, 0)] = zero_module(alg)
        for r in range(1, N + 1):
            objs[(n, r)] = direct_sum(blocks(n, r))

    def cobj(n, r):
        if lo <= n <= hi:
            return objs[(n, r)]
        return zero_module(alg)

    pmaps, imaps = {}, {}
    for n in range(lo, hi + 1):
        pmaps[(n, 1)] = ModMap.zero(objs[(n, 1)], objs[(n, 0)])
        for r in range(2, N + 1):
            src = blocks(n, r)
            tgt = blocks(n, r - 1)
            grid = [[None] * len(src) for _ in tgt]
            grid[0][0] = a.i(n + N - r, N - r).mat
            grid[0][1] = a.p_chain(n + N - r + 1, N, N - r + 1).mat
            for t in range(1, r - 1):
                grid[t][t + 1] = Mat.identity(fld, tgt[t].dim)
            mat = block(fld, grid, [b.dim for b in tgt], [b.dim for b in src])
            pmaps[(n, r)] = ModMap(objs[(n, r)], objs[(n, r - 1)], mat, check=False)
        imaps[(n, 0)] = ModMap.zero(objs[(n, 0)], cobj(n + 1, 1))
        for r in range(1, N):
            src = blocks(n, r)
            tgt = [a.obj(n + N - r, N - r - 1)]
            for k in range(N - r, N):
                tgt.append(a.obj(n + 1 + k, N))
            grid = [[None] * len(src) for _ in tgt]
            grid[0][0] = a.p(n + N - r, N - r).mat
            grid[r][0] = a.i_chain(n + N - r, N - r, r).mat.scale(fld.coerce(-1))
            for t in range(1, r):
                grid[t][t] = Mat.identity(fld, src[t].dim)
                grid[r][t] = a.top_power(n + N - r + t, r - t).mat.scale(fld.coerce(-1))
            mat = block(fld, grid, [b.dim for b in tgt], [b.dim for b in src])
            imaps[(n, r)] = ModMap(objs[(n, r)], cobj(n + 1, r + 1), mat, check=False)

    arr = NArray(alg, N, lo, hi, objs, pmaps, imaps)
    if not (arr.epic and arr.monic and arr.bicartesian):
        raise AssertionError("cone array failed its acyclicity certificates")
    return arr


# ------------------------------------------------------- lifting of maps


def lift_along(f, source_array: NArray, target_array: NArray) -> ChainMap:
    """Lift f through the augmentations to a chain map between top rows.

    f is a ChainMap between the arrays' row-0 complexes, or a MonChainMap
    (placed at degree 0 first).  The lift is found by one canonical solve
    over all degrees at once; the chain condition is certified from
    max(lo) + N - 1 upward, components below are zero.  Any two lifts of
    the same f differ by a null-homotopy on the certified interior.
    """
    if isinstance(f, MonChainMap):
        src = mmor_iota(f.source, 0)
        tgt = mmor_iota(f.target, 0)
        comps = {r - f.source.N + 1: f.comp(r) for r in range(1, f.source.N)}
        f = ChainMap(src, tgt, comps, check=True)
    alg, N = f.source.algebra, f.source.N
    fld = alg.field
    pa = complex_from_array(source_array)
    pb = complex_from_array(target_array)
    aug_a = _augmentation(source_array, f.source)
    aug_b = _augmentation(target_array, f.target)
    klo = max(source_array.lo, target_array.lo)
    khi = max(pa.hi, pb.hi)

    def attempt(start):
        degs = list(range(start, khi + 1))
        bases = {k: hom_basis(pa.obj(k), pb.obj(k)) for k in degs}
        sizes = {k: len(bases[k]) for k in degs}
        offsets = {}
        total = 0
        for k in degs:
            offsets[k] = total
            total += sizes[k]
        if total == 0:
            return ChainMap(pa, pb, {}, check=False)
        row_specs = []
        for k in degs:
            row_specs.append(("aug", k, f.target.obj(k).dim * pa.obj(k).dim))
            row_specs.append(("chain", k, pb.obj(k + 1).dim * pa.obj(k).dim))
        cols = []
        for k in degs:
            for b in bases[k]:
                pieces = []
                for kind, j, nrows in row_specs:
                    if nrows == 0:
                        continue
                    if kind == "aug" and j == k:
                        pieces.append(_flat((aug_b.comp(k) @ b).mat))
                    elif kind == "chain" and j == k:
                        pieces.append(_flat((pb.diff(k) @ b).mat))
                    elif kind == "chain" and j == k - 1:
                        pieces.append(_flat((b @ pa.diff(k - 1)).mat).scale(fld.coerce(-1)))
                    else:
                        pieces.append(Mat.zeros(fld, nrows, 1))
                cols.append(vstack(pieces))
        rhs_pieces = []
        for kind, j, nrows in row_specs:
            if nrows == 0:
                continue
            if kind == "aug":
                rhs_pieces.append(_flat((f.comp(j) @ aug_a.comp(j)).mat))
            else:
                rhs_pieces.append(Mat.zeros(fld, nrows, 1))
        sol = solve(hstack(cols), vstack(rhs_pieces))
        if sol is None:
            return None
        comps = {}
        for k in degs:
            if sizes[k] == 0:
                continue
            coords = Mat(fld, sizes[k], 1, [sol.entry(offsets[k] + i, 0) for i in range(sizes[k])])
            comps[k] = _combine(bases[k], coords, pa.obj(k), pb.obj(k))
        return ChainMap(pa, pb, comps, check=False)

    # with the full window constrained the lift is a genuine chain map
    # everywhere; the truncation edge can make that system inconsistent,
    # in which case the bottom margin grows one degree at a time
    for start in range(klo, klo + N):
        got = attempt(start)
        if got is not None:
            return got
    raise AssertionError("lifting solve is inconsistent")


# ---------------------------------------------------------------- syzygy


def syzygy_Omega(x: NComplex, n: int) -> MonChain:
    """The chain of cokernels of the iterated differentials out of degree
    n-N, one per amplitude, linked by the maps induced by d.

    Needs acyclicity at degrees n-N+1 .. n-1; those make the induced maps
    injective and identify the cokernels with cycle objects.
    """
    N = x.N
    for j in range(n - N + 1, n):
        if not is_acyclic_at(x, j):
            raise ValueError(f"input is not acyclic at degree {j}")
    objects = []
    projs = []
    for r in range(1, N):
        amb = n - N + r
        qmat = cokernel_projection(x.d_power(n - N, r).mat)
        quo, proj = quotient_module(x.obj(amb), qmat)
        objects.append(quo)
        projs.append(proj)
    monics = []
    for r in range(1, N - 1):
        amb = n - N + r
        induced = _descend(projs[r - 1], projs[r] @ x.diff(amb))
        monics.append(induced)
    return MonChain(x.algebra, N, objects, monics, check=True)


# ---------------------------------------------------- complete resolutions


def _glued_complete_resolution(chain: MonChain, depth_left: int, depth_right: int):
    """Glue the resolution of the chain to the dual of the resolution of
    the dualized cokernel seam.  Returns (complex, certified range)."""
    alg, N = chain.algebra, chain.N
    if chain.is_zero():
        return zero_complex(alg, N), (-depth_left, depth_right)
    left = keller_resolve(mmor_iota(chain, 0), lo=-depth_left)
    q = complex_from_array(left)
    projs = []
    for r in range(1, N):
        qmat = cokernel_projection(q.d_power(-1 - r, r).mat)
        quo, proj = quotient_module(q.obj(-1), qmat)
        projs.append(proj)
    dual_objs = [dual_module(p.target) for p in projs]
    dual_monics = []
    for r in range(1, N - 1):
        pi = _descend(projs[r], projs[r - 1])
        dual_monics.append(dual_map(pi))
    flipped = MonChain(alg, N, dual_objs, dual_monics, check=True)
    emb = _descend(projs[N - 2], q.diff(-1))
    if not emb.is_injective():
        raise AssertionError("seam embedding is not injective")
    right = keller_resolve(mmor_iota(flipped, 0), lo=-depth_right, cover_override={0: dual_map(emb)})
    qp = complex_from_array(right)

    objects = [q.obj(k) for k in range(-depth_left, 1)]
    diffs = [q.diff(k) for k in range(-depth_left, 0)]
    for k in range(1, depth_right + 1):
        objects.append(dual_module(qp.obj(-k)))
        diffs.append(dual_map(qp.diff(-k)))
    core = NComplex(alg, N, -depth_left, objects, diffs, check=True)

    left_wall = q.lo <= -depth_left
    right_wall = qp.lo <= -depth_right
    clo = core.lo + (N - 1 if left_wall else 0)
    chi = core.hi - (N - 1 if right_wall else 0)
    if clo <= chi:
        if not is_acyclic(core, clo, chi):
            raise AssertionError("glued complex is not acyclic on the certified range")
        if not is_totally_acyclic(core, clo, chi):
            raise AssertionError("glued complex is not totally acyclic on the certified range")
    for k in core.degrees():
        if not is_projective(core.obj(k)):
            raise AssertionError(f"glued complex has a non-projective term at degree {k}")
    return core, (clo, chi)


class LazyAPC:
    """An acyclic complex of projectives materialized on a finite window.

    complex() returns the current core; certified_range the degrees where
    acyclicity and total acyclicity were verified.  extend_left and
    extend_right deepen the window and rebuild; the construction is
    deterministic top-down, so overlapping windows agree.  Extension is
    capped; pass a bigger cap to the constructor to go further.  Not safe
    for concurrent extension: one writer at a time.
    """

    __slots__ = ("chain", "cap", "_depth_left", "_depth_right", "_core", "_certified")

    def __init__(self, chain: MonChain, depth_left=None, depth_right=None, cap=None):
        N, m = chain.N, chain.algebra.m
        self.chain = chain
        self.cap = cap if cap is not None else 4 * N * m + (N - 1)
        default = min(2 * N * m + N, self.cap)
        self._depth_left = depth_left if depth_left is not None else default
        self._depth_right = depth_right if depth_right is not None else default
        if max(self._depth_left, self._depth_right) > self.cap:
            raise ValueError(f"requested depth exceeds the cap {self.cap}")
        if min(self._depth_left, self._depth_right) < N:
            raise ValueError(f"depths below N = {N} leave no room for the seam")
        self._rebuild()

    def _rebuild(self):
        self._core, self._certified = _glued_complete_resolution(self.chain, self._depth_left, self._depth_right)

    def complex(self) -> NComplex:
        return self._core

    @property
    def certified_range(self):
        return self._certified

    @property
    def depths(self):
        return (self._depth_left, self._depth_right)

    def extend_left(self, steps: int = 1):
        want = self._depth_left + steps
        if want > self.cap:
            raise ValueError(f"left depth {want} exceeds the cap {self.cap}; build with a larger cap")
        self._depth_left = want
        self._rebuild()
        return self

    def extend_right(self, steps: int = 1):
        want = self._depth_right + steps
        if want > self.cap:
            raise ValueError(f"right depth {want} exceeds the cap {self.cap}; build with a larger cap")
        self._depth_right = want
        self._rebuild()
        return self

    def syzygy_chain(self) -> MonChain:
        return syzygy_Omega(self._core, 1)

    def __repr__(self):
        return f"LazyAPC(window=[{-self._depth_left},{self._depth_right}], certified={self._certified})"


def complete_resolution(chain: MonChain, depth_left=None, depth_right=None, cap=None) -> LazyAPC:
    """Complete resolution of a chain of monics: a doubly unbounded acyclic
    complex of free modules whose syzygy chain at position 1 returns the
    input up to isomorphism.

    The left half resolves the chain by minimal covers; the right half is
    the dual of a second resolution seeded with the dualized cokernel
    seam, which turns covers into hulls exactly.
    """
    return LazyAPC(chain, depth_left, depth_right, cap)


# --------------------------------------------------- chain isomorphism test


def find_monchain_isomorphism(x: MonChain, y: MonChain, budget: int = 4096):
    """Explicit isomorphism of chains, or None when there is none.

    Levelwise jordan types must match; then candidates are drawn from the
    chain-map space.  Over a prime field the search is exhaustive, so None
    is a proof of absence (BudgetExceeded when the budget runs out first).
    Over the rationals absence is never proven.
    """
    if x.algebra != y.algebra or x.N != y.N:
        return None
    for r in range(1, x.N):
        if jordan_type(x.level(r)) != jordan_type(y.level(r)):
            return None
    if x.is_zero() and y.is_zero():
        return MonChainMap.zero(x, y)
    basis = mmor_hom_basis(x, y)
    if not basis:
        return None
    fld = x.algebra.field

    def candidate(coeffs):
        got = None
        for c, b in zip(coeffs, basis):
            if c == 0:
                continue
            term = MonChainMap(
                x,
                y,
                [ModMap(comp.source, comp.target, comp.mat.scale(fld.coerce(c)), check=False) for comp in b.comps],
                check=False,
            )
            got = term if got is None else got + term
        return got

    if fld.kind == "prime-field":
        p = fld.p
        total = p ** len(basis)
        tried = 0
        for i in range(len(basis)):
            for c in range(1, p):
                if tried >= budget:
                    raise BudgetExceeded(f"tried {tried} candidates of {total - 1}")
                tried += 1
                got = candidate([c if j == i else 0 for j in range(len(basis))])
                if got is not None and got.is_isomorphism():
                    return got
        for code in range(1, total):
            coeffs = []
            c = code
            for _ in range(len(basis)):
                coeffs.append(c % p)
                c //= p
            if sum(1 for v in coeffs if v) == 1:
                continue
            if tried >= budget:
                raise BudgetExceeded(f"tried {tried} candidates of {total - 1}")
            tried += 1
            got = candidate(coeffs)
            if got is not None and got.is_isomorphism():
                return got
        return None
    import random as _random

    rng = _random.Random(0)
    for _ in range(budget):
        coeffs = [rng.randint(-3, 3) for _ in range(len(basis))]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        got = candidate(coeffs)
        if got is not None and got.is_isomorphism():
            return got
    raise BudgetExceeded(f"sampled {budget} candidates over the rationals")
