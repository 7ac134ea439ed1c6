"""Finite-dimensional modules over the truncated polynomial algebra k[x]/(x^m).

A module is a vector space with a nilpotent operator (the action of x) whose
m-th power vanishes.  For m = 1 this degenerates to plain vector spaces.  The
category is abelian and Frobenius: projective = injective = free, every map
has a kernel/image/cokernel analysis, and the stable Hom quotients out maps
that factor through a projective cover.

All objects are immutable and all computations are exact.
"""
from functools import lru_cache

from .exactla import (
    FieldSpec,
    Mat,
    block,
    cokernel_projection,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    pullback_square,
    rank,
    solve,
    vstack,
)


class Algebra:
    """The ground data: a field together with the nilpotency degree m >= 1."""

    __slots__ = ("field", "m")

    def __init__(self, field: FieldSpec, m: int):
        if m < 1:
            raise ValueError(f"nilpotency degree must be >= 1, got {m}")
        self.field = field
        self.m = m

    def __eq__(self, other):
        return (
            isinstance(other, Algebra) and self.field == other.field and self.m == other.m
        )

    def __hash__(self):
        return hash((self.field, self.m))

    def __repr__(self):
        return f"Algebra({self.field!r}, m={self.m})"


class Module:
    """A finite-dimensional module: a square matrix for the action of x.

    Args:
        algebra: ground algebra, fixing the field and the nilpotency degree.
        action: dim x dim matrix over the algebra's field with action^m = 0.
    """

    __slots__ = ("algebra", "dim", "action")

    def __init__(self, algebra: Algebra, action: Mat):
        if action.field != algebra.field:
            raise ValueError("module action is over the wrong field")
        if action.rows != action.cols:
            raise ValueError(f"action must be square, got {action.rows}x{action.cols}")
        power = Mat.identity(algebra.field, action.rows)
        for _ in range(algebra.m):
            power = power @ action
        if not power.is_zero():
            raise ValueError(f"action^{algebra.m} != 0")
        self.algebra = algebra
        self.dim = action.rows
        self.action = action

    def action_power(self, j: int) -> Mat:
        out = Mat.identity(self.algebra.field, self.dim)
        for _ in range(j):
            out = out @ self.action
        return out

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.algebra == other.algebra
            and self.action == other.action
        )

    def __hash__(self):
        return hash((self.algebra, self.action))

    def __repr__(self):
        return f"Module(dim={self.dim}, type={jordan_type(self)})"


class ModMap:
    """An equivariant map of modules: mat . action_src = action_tgt . mat."""

    __slots__ = ("source", "target", "mat")

    def __init__(self, source: Module, target: Module, mat: Mat, check: bool = True):
        if mat.rows != target.dim or mat.cols != source.dim:
            raise ValueError(
                f"map shape {mat.rows}x{mat.cols} does not fit "
                f"{source.dim} -> {target.dim}"
            )
        if check and mat @ source.action != target.action @ mat:
            raise ValueError("matrix does not commute with the x-action")
        self.source = source
        self.target = target
        self.mat = mat

    @classmethod
    def identity(cls, mod: Module) -> "ModMap":
        return cls(mod, mod, Mat.identity(mod.algebra.field, mod.dim), check=False)

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModMap":
        return cls(source, target, Mat.zeros(source.algebra.field, target.dim, source.dim), check=False)

    def __matmul__(self, other: "ModMap") -> "ModMap":
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return ModMap(other.source, self.target, self.mat @ other.mat, check=False)

    def __add__(self, other: "ModMap") -> "ModMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum of maps with different ends")
        return ModMap(self.source, self.target, self.mat + other.mat, check=False)

    def __sub__(self, other: "ModMap") -> "ModMap":
        return self + (-other)

    def __neg__(self) -> "ModMap":
        return ModMap(self.source, self.target, -self.mat, check=False)

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def is_injective(self) -> bool:
        return rank(self.mat) == self.source.dim

    def is_surjective(self) -> bool:
        return rank(self.mat) == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and rank(self.mat) == self.source.dim

    def __eq__(self, other):
        return (
            isinstance(other, ModMap)
            and self.source == other.source
            and self.target == other.target
            and self.mat == other.mat
        )

    def __hash__(self):
        return hash((self.source, self.target, self.mat))

    def __repr__(self):
        return f"ModMap({self.source.dim} -> {self.target.dim})"


# ------------------------------------------------------------- constructors


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, Mat.zeros(algebra.field, 0, 0))


def module_from_parts(algebra: Algebra, parts) -> Module:
    """Direct sum of Jordan blocks k[x]/(x^s) for each part s in `parts`.

    Basis convention per block of size s: x sends basis vector i to i+1 and
    the last one to zero, so the action matrix is the lower shift.
    """
    parts = tuple(parts)
    for s in parts:
        if not 1 <= s <= algebra.m:
            raise ValueError(f"part {s} outside 1..{algebra.m}")
    dim = sum(parts)
    ent = [0] * (dim * dim)
    off = 0
    for s in parts:
        for i in range(s - 1):
            ent[(off + i + 1) * dim + (off + i)] = 1
        off += s
    return Module(algebra, Mat(algebra.field, dim, dim, ent))


def free_module(algebra: Algebra, rk: int) -> Module:
    return module_from_parts(algebra, [algebra.m] * rk)


def simple_module(algebra: Algebra) -> Module:
    return module_from_parts(algebra, [1])


def direct_sum(mods) -> Module:
    mods = list(mods)
    if not mods:
        raise ValueError("direct sum of nothing needs an algebra; use zero_module")
    alg = mods[0].algebra
    if any(m.algebra != alg for m in mods):
        raise ValueError("direct sum across different algebras")
    n = len(mods)
    act = block(
        alg.field,
        [[mods[i].action if i == j else None for j in range(n)] for i in range(n)],
        row_dims=[m.dim for m in mods],
        col_dims=[m.dim for m in mods],
    )
    return Module(alg, act)


def summand_inclusion(mods, index: int) -> ModMap:
    """Inclusion of the index-th summand into direct_sum(mods)."""
    total = direct_sum(mods)
    alg = mods[index].algebra
    before = sum(m.dim for m in mods[:index])
    d = mods[index].dim
    ent = [0] * (total.dim * d)
    for i in range(d):
        ent[(before + i) * d + i] = 1
    return ModMap(mods[index], total, Mat(alg.field, total.dim, d, ent), check=False)


def summand_projection(mods, index: int) -> ModMap:
    total = direct_sum(mods)
    alg = mods[index].algebra
    before = sum(m.dim for m in mods[:index])
    d = mods[index].dim
    ent = [0] * (d * total.dim)
    for i in range(d):
        ent[i * total.dim + (before + i)] = 1
    return ModMap(total, mods[index], Mat(alg.field, d, total.dim, ent), check=False)


# ----------------------------------------------------------------- duality


def dual_module(mod: Module) -> Module:
    """k-linear dual; the action transposes.  Dualizing twice is the identity
    on the nose, not just up to isomorphism."""
    return Module(mod.algebra, mod.action.transpose())


def dual_map(f: ModMap) -> ModMap:
    return ModMap(dual_module(f.target), dual_module(f.source), f.mat.transpose(), check=False)


# ----------------------------------------------------- analysis of morphisms


def _induced_action_on_sub(parent: Module, incl: Mat) -> Mat:
    # incl is injective and its image is x-stable, so the restriction exists
    res = solve(incl, parent.action @ incl)
    if res is None:
        raise ValueError("subspace is not stable under the action")
    return res


def _induced_action_on_quot(parent: Module, proj: Mat) -> Mat:
    # proj is surjective and its kernel is x-stable; transpose to solve
    res = solve(proj.transpose(), (proj @ parent.action).transpose())
    if res is None:
        raise ValueError("quotient kernel is not stable under the action")
    return res.transpose()


def submodule(parent: Module, incl: Mat) -> tuple[Module, ModMap]:
    """The submodule spanned by the (independent, x-stable) columns of incl."""
    sub = Module(parent.algebra, _induced_action_on_sub(parent, incl))
    return sub, ModMap(sub, parent, incl, check=False)


def quotient_module(parent: Module, proj: Mat) -> tuple[Module, ModMap]:
    quo = Module(parent.algebra, _induced_action_on_quot(parent, proj))
    return quo, ModMap(parent, quo, proj, check=False)


class Analysis:
    """Kernel/coimage/image/cokernel data of a map f, with f = image . coimage.

    Fields:
        kernel: inclusion of ker(f) into the source.
        coimage: surjection of the source onto the image coordinates.
        image: inclusion of im(f) into the target.
        cokernel: surjection of the target onto coker(f).
    """

    __slots__ = ("kernel", "coimage", "image", "cokernel")

    def __init__(self, kernel, coimage, image, cokernel):
        self.kernel = kernel
        self.coimage = coimage
        self.image = image
        self.cokernel = cokernel


def analysis(f: ModMap) -> Analysis:
    src, tgt = f.source, f.target
    ker_b = kernel_basis(f.mat)
    ker_mod, ker_incl = submodule(src, ker_b)
    im_b = image_basis(f.mat)
    im_mod, im_incl = submodule(tgt, im_b)
    coim_mat = solve(im_b, f.mat)
    coim = ModMap(src, im_mod, coim_mat, check=False)
    q = cokernel_projection(f.mat)
    cok_mod, cok_proj = quotient_module(tgt, q)
    return Analysis(ker_incl, coim, im_incl, cok_proj)


def kernel_map(f: ModMap) -> ModMap:
    return analysis(f).kernel


def cokernel_map(f: ModMap) -> ModMap:
    return analysis(f).cokernel


# ------------------------------------------------------------- Jordan types


def jordan_type(mod: Module) -> tuple[int, ...]:
    """Descending partition of Jordan block sizes of the action.

    Computed from the rank sequence r_j = rank(action^j): the number of
    blocks of size >= j is r_{j-1} - r_j.  Two modules are isomorphic
    exactly when their jordan types agree.
    """
    m = mod.algebra.m
    ranks = [mod.dim]
    power = Mat.identity(mod.algebra.field, mod.dim)
    for _ in range(m):
        power = power @ mod.action
        ranks.append(rank(power))
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, m + 1)]
    parts = []
    for size in range(m, 0, -1):
        mult = at_least[size - 1] - (at_least[size] if size < m else 0)
        parts.extend([size] * mult)
    return tuple(parts)


def modules_isomorphic(a: Module, b: Module) -> bool:
    return a.algebra == b.algebra and jordan_type(a) == jordan_type(b)


def is_projective(mod: Module) -> bool:
    m = mod.algebra.m
    return all(part == m for part in jordan_type(mod))


# ------------------------------------------------------------ covers, hulls


def proj_cover(mod: Module) -> ModMap:
    """Minimal projective cover P -> M with P free of rank dim(M/xM).

    The generators of P are sent to lifts of a basis of M/xM; minimality
    (kernel inside the radical of P) holds by construction.
    """
    alg = mod.algebra
    q = cokernel_projection(mod.action)
    t = q.rows
    p = free_module(alg, t)
    if t == 0:
        return ModMap(p, mod, Mat.zeros(alg.field, mod.dim, 0), check=False)
    sec = solve(q, Mat.identity(alg.field, t))
    cols = []
    for j in range(t):
        gen = Mat(alg.field, mod.dim, 1, [sec.entry(i, j) for i in range(mod.dim)])
        v = gen
        for _ in range(alg.m):
            cols.append(v)
            v = mod.action @ v
    cover = ModMap(p, mod, hstack(cols))
    if not cover.is_surjective():
        raise AssertionError("cover construction failed to surject")
    return cover


def inj_hull(mod: Module) -> ModMap:
    """Minimal injective hull M -> I, built as the dual of the projective
    cover of the dual module."""
    return dual_map(proj_cover(dual_module(mod)))


def syzygy(mod: Module) -> Module:
    """Kernel of the minimal projective cover."""
    return analysis(proj_cover(mod)).kernel.source


def cosyzygy(mod: Module) -> Module:
    return analysis(inj_hull(mod)).cokernel.target


# ------------------------------------------------------------- Hom spaces


@lru_cache(maxsize=4096)
def _hom_basis_cached(src: Module, tgt: Module) -> tuple:
    f = src.algebra.field
    nt, ns = tgt.dim, src.dim
    if nt == 0 or ns == 0:
        return ()
    constraint = kron(tgt.action, Mat.identity(f, ns)) - kron(
        Mat.identity(f, nt), src.action.transpose()
    )
    basis = kernel_basis(constraint)
    out = []
    for j in range(basis.cols):
        flat = [basis.entry(i, j) for i in range(nt * ns)]
        out.append(ModMap(src, tgt, Mat(f, nt, ns, flat), check=False))
    return tuple(out)


def hom_basis(src: Module, tgt: Module) -> list[ModMap]:
    """Canonical basis of the space of equivariant maps src -> tgt.

    A matrix F commutes with the actions iff the row-major vectorization of
    F lies in the kernel of (A_tgt kron I) - (I kron A_src^T).
    """
    if src.algebra != tgt.algebra:
        raise ValueError("hom across different algebras")
    return list(_hom_basis_cached(src, tgt))


class StableHom:
    """Stable Hom: maps modulo those factoring through the cover of the target."""

    __slots__ = ("dim", "representatives", "projectively_trivial")

    def __init__(self, dim, representatives, projectively_trivial):
        self.dim = dim
        self.representatives = representatives
        self.projectively_trivial = projectively_trivial


def _flat(mat: Mat) -> Mat:
    return Mat._trusted(mat.field, mat.rows * mat.cols, 1, mat.entries)


def stable_hom(src: Module, tgt: Module) -> StableHom:
    """Quotient of Hom(src, tgt) by maps factoring through proj_cover(tgt).

    Any map factoring through some projective factors through the cover epi,
    so the quotient is independent of the choice.  Representatives are the
    Hom basis elements whose classes extend a basis of the factoring
    subspace to the whole space, found by one row reduction.
    """
    full = hom_basis(src, tgt)
    if not full:
        return StableHom(0, [], [])
    f = src.algebra.field
    cover = proj_cover(tgt)
    through = [cover @ g for g in hom_basis(src, cover.source)]
    n = tgt.dim * src.dim
    triv_cols = [_flat(h.mat) for h in through]
    full_cols = [_flat(h.mat) for h in full]
    if triv_cols:
        stacked = hstack(triv_cols + full_cols)
        from .exactla import rref as _rref

        _, pivots, _ = _rref(stacked)
        k = len(triv_cols)
        reps = [full[j - k] for j in pivots if j >= k]
        triv_rank = sum(1 for j in pivots if j < k)
    else:
        reps = full
        triv_rank = 0
    return StableHom(len(full) - triv_rank, reps, through)


def stable_class_coordinates(f: ModMap, stable: StableHom) -> Mat:
    """Coordinates of the stable class of f in the representative basis.

    Solves f = sum c_i rep_i + (map factoring through the cover) exactly.
    Raises if f is not in the span (it always is when stable was computed
    for the same source and target).
    """
    fld = f.source.algebra.field
    cols = [_flat(h.mat) for h in stable.projectively_trivial] + [
        _flat(r.mat) for r in stable.representatives
    ]
    ntriv = len(stable.projectively_trivial)
    if not cols:
        if not f.is_zero():
            raise ValueError("nonzero map in a zero Hom space")
        return Mat.zeros(fld, 0, 1)
    sol = solve(hstack(cols), _flat(f.mat))
    if sol is None:
        raise ValueError("map does not lie in the given Hom space")
    return Mat(fld, len(stable.representatives), 1, [sol.entry(ntriv + i, 0) for i in range(len(stable.representatives))])


# ------------------------------------------------------------- pullbacks


def pullback(f: ModMap, g: ModMap) -> tuple[Module, ModMap, ModMap]:
    """Pullback of f: A -> C, g: B -> C in the module category.

    Returns (P, P -> A, P -> B); the underlying space is the linear pullback
    and the action is the restriction of the direct-sum action.
    """
    if f.target != g.target:
        raise ValueError("pullback legs must share the target")
    sq = pullback_square(f.mat, g.mat)
    ab = direct_sum([f.source, g.source])
    p_mod, _ = submodule(ab, sq.inclusion)
    return (
        p_mod,
        ModMap(p_mod, f.source, sq.to_a, check=False),
        ModMap(p_mod, g.source, sq.to_b, check=False),
    )


def find_module_isomorphism(a: Module, b: Module):
    """An explicit isomorphism a -> b when the jordan types agree, else None.

    Built from explicit block-to-block maps: for each part, send the chosen
    cyclic generator of the source block to the one in the target.
    """
    if a.algebra != b.algebra or jordan_type(a) != jordan_type(b):
        return None
    gens_a = _cyclic_generators(a)
    gens_b = _cyclic_generators(b)
    f = a.algebra.field
    cols_a, cols_b = [], []
    for (size, va), (_, vb) in zip(gens_a, gens_b):
        wa, wb = va, vb
        for _ in range(size):
            cols_a.append(wa)
            cols_b.append(wb)
            wa = a.action @ wa
            wb = b.action @ wb
    basis_a = hstack(cols_a) if cols_a else Mat.zeros(f, a.dim, 0)
    basis_b = hstack(cols_b) if cols_b else Mat.zeros(f, b.dim, 0)
    inv_a = inverse(basis_a)
    if inv_a is None:
        raise AssertionError("generator columns failed to span")
    return ModMap(a, b, basis_b @ inv_a, check=False)


def _cyclic_generators(mod: Module) -> list[tuple[int, Mat]]:
    """Vectors generating the Jordan blocks, as (block size, column) pairs,
    sizes descending.

    Stage s picks lifts of a basis of ker(A^s) / (ker(A^{s-1}) + A ker(A^{s+1})):
    these generate exactly the size-s blocks, and the chains A^j v over all
    stages assemble to a basis of the whole space.
    """
    from .exactla import rref as _rref

    f = mod.algebra.field
    m = mod.algebra.m
    if mod.dim == 0:
        return []
    kernels = [kernel_basis(mod.action_power(s)) for s in range(m + 2)]
    picked: list[tuple[int, Mat]] = []
    for s in range(m, 0, -1):
        shifted = mod.action @ kernels[s + 1]
        deny = hstack([kernels[s - 1], shifted])
        cand = kernels[s]
        stacked = hstack([deny, cand])
        _, pivots, _ = _rref(stacked)
        for j in pivots:
            if j >= deny.cols:
                col = j - deny.cols
                v = Mat(f, mod.dim, 1, [cand.entry(i, col) for i in range(mod.dim)])
                picked.append((s, v))
    return picked
