"""N-complexes over the module category: construction, mu-complexes, hulls,
contraction, amplitude homology, acyclicity, truncations.

An N-complex is a graded module with degree +1 differentials whose N-fold
composites vanish.  Windows are finite; every degree outside the window is
the zero module.  Amplitude homology at position n and amplitude r is
H^n_(r) = ker(d^{r out of n}) / im(d^{N-r into n}).
"""
from .exactla import (
    Mat,
    block,
    cokernel_projection,
    hstack,
    image_basis,
    kernel_basis,
    solve,
    vstack,
)
from .modcat import (
    Algebra,
    ModMap,
    Module,
    direct_sum as module_direct_sum,
    free_module,
    hom_basis,
    quotient_module,
    submodule,
    zero_module,
)


class NComplex:
    """A bounded N-complex.

    Args:
        algebra: the ground algebra of all objects.
        N: vanishing degree of the differential, at least 2.
        lo: degree of the first listed object.
        objects: modules in degrees lo, lo+1, ...
        diffs: maps objects[i] -> objects[i+1]; one fewer than objects.
        check: verify the N-fold composite condition on construction.
    """

    __slots__ = ("algebra", "N", "lo", "hi", "_objects", "_diffs")

    def __init__(self, algebra, N, lo, objects, diffs, check=True):
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        objects = list(objects)
        diffs = list(diffs)
        if len(diffs) != max(0, len(objects) - 1):
            raise ValueError(f"{len(objects)} objects need {max(0, len(objects) - 1)} differentials, got {len(diffs)}")
        for i, d in enumerate(diffs):
            if d.source != objects[i] or d.target != objects[i + 1]:
                raise ValueError(f"differential {i} does not match adjacent objects")
        for ob in objects:
            if ob.algebra != algebra:
                raise ValueError("object over the wrong algebra")
        # trim zero modules at both ends
        while objects and objects[0].dim == 0:
            objects.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while objects and objects[-1].dim == 0:
            objects.pop()
            if diffs:
                diffs.pop()
        if not objects:
            lo = 0
        self.algebra = algebra
        self.N = N
        self.lo = lo
        self.hi = lo + len(objects) - 1
        self._objects = tuple(objects)
        self._diffs = tuple(diffs)
        if check:
            bad = validate(self)
            if bad is not None:
                raise ValueError(f"N-fold composite is nonzero starting at degree {bad}")

    def obj(self, k: int) -> Module:
        if self.lo <= k <= self.hi:
            return self._objects[k - self.lo]
        return zero_module(self.algebra)

    def diff(self, k: int) -> ModMap:
        if self.lo <= k < self.hi:
            return self._diffs[k - self.lo]
        return ModMap.zero(self.obj(k), self.obj(k + 1))

    def d_power(self, k: int, r: int) -> ModMap:
        """The composite X^k -> X^{k+r} of r consecutive differentials."""
        if r < 0:
            raise ValueError("negative power")
        out = ModMap.identity(self.obj(k))
        for j in range(r):
            out = self.diff(k + j) @ out
        return out

    def is_zero(self) -> bool:
        return not self._objects

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def __eq__(self, other):
        return (
            isinstance(other, NComplex)
            and self.algebra == other.algebra
            and self.N == other.N
            and self.lo == other.lo
            and self._objects == other._objects
            and self._diffs == other._diffs
        )

    def __hash__(self):
        return hash((self.algebra, self.N, self.lo, self._objects, self._diffs))

    def __repr__(self):
        dims = [m.dim for m in self._objects]
        return f"NComplex(N={self.N}, window=[{self.lo},{self.hi}], dims={dims})"


def validate(x: NComplex):
    """None when every N-fold composite vanishes, else the first bad degree."""
    for k in range(x.lo, x.hi + 1):
        if not x.d_power(k, x.N).is_zero():
            return k
    return None


def zero_complex(algebra: Algebra, N: int) -> NComplex:
    return NComplex(algebra, N, 0, [], [], check=False)


class ChainMap:
    """A degreewise map of N-complexes commuting with the differentials."""

    __slots__ = ("source", "target", "_comps")

    def __init__(self, source: NComplex, target: NComplex, comps, check=True):
        if source.N != target.N or source.algebra != target.algebra:
            raise ValueError("chain map between incompatible complexes")
        cleaned = {}
        for k, f in dict(comps).items():
            if f.source != source.obj(k) or f.target != target.obj(k):
                raise ValueError(f"component at degree {k} has wrong ends")
            if not f.is_zero():
                cleaned[k] = f
        self.source = source
        self.target = target
        self._comps = cleaned
        if check:
            lo = min(source.lo, target.lo) - 1
            hi = max(source.hi, target.hi)
            for k in range(lo, hi + 1):
                lhs = self.comp(k + 1) @ source.diff(k)
                rhs = target.diff(k) @ self.comp(k)
                if lhs.mat != rhs.mat:
                    raise ValueError(f"components do not commute with d at degree {k}")

    def comp(self, k: int) -> ModMap:
        got = self._comps.get(k)
        if got is not None:
            return got
        return ModMap.zero(self.source.obj(k), self.target.obj(k))

    @classmethod
    def identity(cls, x: NComplex) -> "ChainMap":
        return cls(x, x, {k: ModMap.identity(x.obj(k)) for k in x.degrees()}, check=False)

    @classmethod
    def zero(cls, x: NComplex, y: NComplex) -> "ChainMap":
        return cls(x, y, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise ValueError("chain map composition mismatch")
        ks = set(self._comps) | set(other._comps)
        return ChainMap(
            other.source,
            self.target,
            {k: self.comp(k) @ other.comp(k) for k in ks},
            check=False,
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("chain map sum mismatch")
        ks = set(self._comps) | set(other._comps)
        return ChainMap(self.source, self.target, {k: self.comp(k) + other.comp(k) for k in ks}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: -f for k, f in self._comps.items()}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self._comps.values())

    def __eq__(self, other):
        return (
            isinstance(other, ChainMap)
            and self.source == other.source
            and self.target == other.target
            and self._comps == other._comps
        )

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


# ------------------------------------------------------------ constructions


def mu(a: Module, s: int, t: int, N: int) -> NComplex:
    """The mu-complex: `a` in degrees s-t+1..s with identity differentials.

    For t <= N-1 these are the projective-injective objects of the category
    of N-complexes; t = N gives the totally acyclic identity tower.
    """
    if not 1 <= t <= N:
        raise ValueError(f"t must be in 1..{N}, got {t}")
    objects = [a] * t
    diffs = [ModMap.identity(a)] * (t - 1)
    return NComplex(a.algebra, N, s - t + 1, objects, diffs, check=False)


def single(a: Module, deg: int, N: int) -> NComplex:
    return mu(a, deg, 1, N)


def shift_theta(x: NComplex, j: int) -> NComplex:
    """Degree shift without signs: (theta^j X)^n = X^{n+j}."""
    return NComplex(x.algebra, x.N, x.lo - j, x._objects, x._diffs, check=False)


def negate(x: NComplex) -> NComplex:
    return NComplex(x.algebra, x.N, x.lo, x._objects, [-d for d in x._diffs], check=False)


def direct_sum(complexes) -> NComplex:
    complexes = [x for x in complexes]
    if not complexes:
        raise ValueError("direct sum of nothing needs an algebra; use zero_complex")
    alg, n_deg = complexes[0].algebra, complexes[0].N
    if any(x.N != n_deg or x.algebra != alg for x in complexes):
        raise ValueError("direct sum across different N or algebras")
    live = [x for x in complexes if not x.is_zero()]
    if not live:
        return zero_complex(alg, n_deg)
    lo = min(x.lo for x in live)
    hi = max(x.hi for x in live)
    objects = [module_direct_sum([x.obj(k) for x in live]) for k in range(lo, hi + 1)]
    diffs = []
    for k in range(lo, hi):
        mats = [x.diff(k).mat for x in live]
        grid = [[mats[i] if i == j else None for j in range(len(live))] for i in range(len(live))]
        d = block(
            alg.field,
            grid,
            row_dims=[x.obj(k + 1).dim for x in live],
            col_dims=[x.obj(k).dim for x in live],
        )
        diffs.append(ModMap(objects[k - lo], objects[k + 1 - lo], d, check=False))
    return NComplex(alg, n_deg, lo, objects, diffs, check=False)


# ------------------------------------------------------------------- hulls


def hull_I(x: NComplex):
    """The injective hull complex I(X) with its termwise-monic unit.

    I(X)^n = direct sum of X^k for k in n..n+N-1; the unit at degree n has
    block components d^{k-n}: X^n -> X^k, and the differential keeps the
    shared blocks and drops or adds zero at the edges.
    """
    return _hull(x, into=True)


def hull_P(x: NComplex):
    """The projective hull complex P(X) with its termwise-epic counit.

    P(X)^n = direct sum of X^j for j in n-N+1..n; the counit at degree n has
    block components d^{n-j}: X^j -> X^n.
    """
    return _hull(x, into=False)


def _hull(x: NComplex, into: bool):
    alg, n_deg = x.algebra, x.N
    if x.is_zero():
        z = zero_complex(alg, n_deg)
        return z, ChainMap.zero(*((x, z) if into else (z, x)))
    if into:
        lo, hi = x.lo - n_deg + 1, x.hi
        blocks = lambda n: list(range(n, n + n_deg))
    else:
        lo, hi = x.lo, x.hi + n_deg - 1
        blocks = lambda n: list(range(n - n_deg + 1, n + 1))
    objects = []
    for n in range(lo, hi + 1):
        objects.append(module_direct_sum([x.obj(k) for k in blocks(n)]))
    diffs = []
    for n in range(lo, hi):
        src_blocks, tgt_blocks = blocks(n), blocks(n + 1)
        grid = []
        for bt in tgt_blocks:
            row = []
            for bs in src_blocks:
                row.append(Mat.identity(alg.field, x.obj(bt).dim) if bs == bt else None)
            grid.append(row)
        d = block(
            alg.field,
            grid,
            row_dims=[x.obj(b).dim for b in tgt_blocks],
            col_dims=[x.obj(b).dim for b in src_blocks],
        )
        diffs.append(ModMap(objects[n - lo], objects[n + 1 - lo], d, check=False))
    hull = NComplex(alg, n_deg, lo, objects, diffs, check=False)
    comps = {}
    for n in x.degrees():
        if into:
            mats = [x.d_power(n, k - n).mat for k in blocks(n)]
            comps[n] = ModMap(x.obj(n), hull.obj(n), vstack(mats), check=False)
        else:
            mats = [x.d_power(j, n - j).mat for j in blocks(n)]
            comps[n] = ModMap(hull.obj(n), x.obj(n), hstack(mats), check=False)
    unit = (
        ChainMap(x, hull, comps, check=False) if into else ChainMap(hull, x, comps, check=False)
    )
    return hull, unit


def hull_I_map(f: ChainMap):
    """Functoriality of I: blockwise application of the components of f."""
    return _hull_map(f, into=True)


def hull_P_map(f: ChainMap):
    return _hull_map(f, into=False)


def _hull_map(f: ChainMap, into: bool):
    x, y = f.source, f.target
    if into:
        hx, _ = hull_I(x)
        hy, _ = hull_I(y)
        blocks = lambda n: list(range(n, n + x.N))
    else:
        hx, _ = hull_P(x)
        hy, _ = hull_P(y)
        blocks = lambda n: list(range(n - x.N + 1, n + 1))
    comps = {}
    for n in range(min(hx.lo, hy.lo), max(hx.hi, hy.hi) + 1):
        bl = blocks(n)
        grid = [
            [f.comp(bt).mat if bs == bt else None for bs in bl]
            for bt in bl
        ]
        m = block(
            x.algebra.field,
            grid,
            row_dims=[y.obj(b).dim for b in bl],
            col_dims=[x.obj(b).dim for b in bl],
        )
        comps[n] = ModMap(hx.obj(n), hy.obj(n), m, check=False)
    return ChainMap(hx, hy, comps, check=False)


# -------------------------------------------------------------- contraction


def gamma_index(n: int, r: int, s: int, N: int) -> int:
    """Where degree s of an N-complex lands in the contraction anchored at n.

    The sample points are n + aN and n + aN + r; degree s maps to the image
    of the largest sample point at most s.
    """
    if not 1 <= r <= N - 1:
        raise ValueError(f"amplitude must be in 1..{N - 1}, got {r}")
    a, rem = divmod(s - n, N)
    return n + 2 * a + (1 if rem >= r else 0)


def gamma(x: NComplex, n: int, r: int) -> NComplex:
    """Contraction to a 2-complex: alternating composites d^{r}, d^{N-r},
    with X^n kept at position n."""
    if not 1 <= r <= x.N - 1:
        raise ValueError(f"amplitude must be in 1..{x.N - 1}, got {r}")
    if x.is_zero():
        return zero_complex(x.algebra, 2)
    # sample degrees n+aN (even slot) and n+aN+r (odd slot)
    a_min = -((n - x.lo) // x.N + 2)
    a_max = (x.hi - n) // x.N + 2
    objects = []
    diffs = []
    for a in range(a_min, a_max + 1):
        even_deg, odd_deg = n + a * x.N, n + a * x.N + r
        objects.append(x.obj(even_deg))
        diffs.append(x.d_power(even_deg, r))
        objects.append(x.obj(odd_deg))
        diffs.append(x.d_power(odd_deg, x.N - r))
    diffs.pop()
    return NComplex(x.algebra, 2, n + 2 * a_min, objects, diffs, check=False)


# ----------------------------------------------------- amplitude homology


class AmplitudeHomology:
    """Cycles, boundaries and their quotient at one position and amplitude.

    Fields:
        n, r: position and amplitude.
        cycles: inclusion Z^n_(r) -> X^n, the kernel of the outgoing d^{r}.
        boundaries: inclusion B^n_(N-r) -> X^n, the image of the incoming
            d^{N-r}.
        boundaries_in_cycles: map B -> Z over which `cycles` factors
            `boundaries`.
        quotient: surjection Z -> H onto the homology module.
        module: the homology module H itself.
    """

    __slots__ = ("n", "r", "cycles", "boundaries", "boundaries_in_cycles", "quotient", "module")

    def __init__(self, n, r, cycles, boundaries, boundaries_in_cycles, quotient, module):
        self.n = n
        self.r = r
        self.cycles = cycles
        self.boundaries = boundaries
        self.boundaries_in_cycles = boundaries_in_cycles
        self.quotient = quotient
        self.module = module

    @property
    def dim(self) -> int:
        return self.module.dim


def homology(x: NComplex, n: int, r: int) -> AmplitudeHomology:
    if not 1 <= r <= x.N - 1:
        raise ValueError(f"amplitude must be in 1..{x.N - 1}, got {r}")
    xn = x.obj(n)
    z_basis = kernel_basis(x.d_power(n, r).mat)
    z_mod, z_incl = submodule(xn, z_basis)
    incoming = x.d_power(n - (x.N - r), x.N - r).mat
    b_basis = image_basis(incoming)
    b_mod, b_incl = submodule(xn, b_basis)
    in_cycles_mat = solve(z_basis, b_basis)
    if in_cycles_mat is None:
        raise AssertionError("boundaries do not lie inside cycles")
    b_in_z = ModMap(b_mod, z_mod, in_cycles_mat, check=False)
    proj = cokernel_projection(in_cycles_mat)
    h_mod, quot = quotient_module(z_mod, proj)
    return AmplitudeHomology(n, r, z_incl, b_incl, b_in_z, quot, h_mod)


def is_acyclic_at(x: NComplex, n: int) -> bool:
    return all(homology(x, n, r).dim == 0 for r in range(1, x.N))


def is_acyclic(x: NComplex, lo=None, hi=None) -> bool:
    if lo is None:
        lo = x.lo
    if hi is None:
        hi = x.hi
    return all(is_acyclic_at(x, n) for n in range(lo, hi + 1))


# ------------------------------------------------------------ hom complexes


COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"


def _vector_algebra(alg: Algebra) -> Algebra:
    return Algebra(alg.field, 1)


def _hom_coords(basis, f: ModMap) -> Mat:
    """Coordinates of f in a hom_basis list; canonical least solution."""
    fld = f.mat.field
    if not basis:
        if not f.is_zero():
            raise ValueError("map outside the zero Hom space")
        return Mat.zeros(fld, 0, 1)
    cols = hstack([Mat(fld, b.mat.rows * b.mat.cols, 1, b.mat.entries) for b in basis])
    flat = Mat(fld, f.mat.rows * f.mat.cols, 1, f.mat.entries)
    sol = solve(cols, flat)
    if sol is None:
        raise AssertionError("hom basis failed to span")
    return sol


def hom_complex(x: NComplex, a: Module, variance: str) -> NComplex:
    """Apply Hom(a, -) or Hom(-, a) degreewise; the result is an N-complex
    of vector spaces (an algebra with m = 1).

    Covariant: degree n holds Hom(a, X^n), differentials postcompose with d.
    Contravariant: degree n holds Hom(X^{-n}, a), differentials precompose
    with d^{-n-1}, so the window flips sign.
    """
    if variance not in (COVARIANT, CONTRAVARIANT):
        raise ValueError(f"unknown variance {variance!r}")
    valg = _vector_algebra(x.algebra)
    if x.is_zero():
        return zero_complex(valg, x.N)
    if variance == COVARIANT:
        degs = list(range(x.lo, x.hi + 1))
        spaces = {n: hom_basis(a, x.obj(n)) for n in degs}
        arrow = lambda n: (n, n + 1, lambda g: x.diff(n) @ g)
    else:
        degs = list(range(-x.hi, -x.lo + 1))
        spaces = {n: hom_basis(x.obj(-n), a) for n in degs}
        arrow = lambda n: (n, n + 1, lambda g: g @ x.diff(-n - 1))
    objects = []
    for n in degs:
        dim = len(spaces[n])
        objects.append(Module(valg, Mat.zeros(valg.field, dim, dim)))
    diffs = []
    for idx, n in enumerate(degs[:-1]):
        src_basis = spaces[n]
        tgt_basis = spaces[n + 1]
        _, _, push = arrow(n)
        cols = [_hom_coords(tgt_basis, push(g)) for g in src_basis]
        mat = (
            hstack(cols)
            if cols
            else Mat.zeros(valg.field, len(tgt_basis), 0)
        )
        diffs.append(ModMap(objects[idx], objects[idx + 1], mat, check=False))
    return NComplex(valg, x.N, degs[0], objects, diffs, check=False)


def is_totally_acyclic_at(x: NComplex, n: int) -> bool:
    """Acyclic at n, and the contravariant Hom into the regular module is
    acyclic at -n.  Over a Frobenius algebra every projective is a direct
    sum of copies of the regular module, so this single test suffices."""
    if not is_acyclic_at(x, n):
        return False
    reg = free_module(x.algebra, 1)
    hom = hom_complex(x, reg, CONTRAVARIANT)
    return is_acyclic_at(hom, -n)


def is_totally_acyclic(x: NComplex, lo=None, hi=None) -> bool:
    if lo is None:
        lo = x.lo
    if hi is None:
        hi = x.hi
    return all(is_totally_acyclic_at(x, n) for n in range(lo, hi + 1))


# ------------------------------------------------------------- truncations


def truncate_hard(x: NComplex, side: str, n: int) -> NComplex:
    """tau^{<=n} keeps degrees up to n, tau^{>=n} keeps degrees from n on."""
    if side == "le":
        lo, hi = x.lo, min(x.hi, n)
    elif side == "ge":
        lo, hi = max(x.lo, n), x.hi
    else:
        raise ValueError(f"side must be 'le' or 'ge', got {side!r}")
    if lo > hi:
        return zero_complex(x.algebra, x.N)
    objects = [x.obj(k) for k in range(lo, hi + 1)]
    diffs = [x.diff(k) for k in range(lo, hi)]
    return NComplex(x.algebra, x.N, lo, objects, diffs, check=False)


def truncate_soft(x: NComplex, side: str, n: int) -> NComplex:
    """Soft truncations by cokernel or kernel chains.

    sigma^{>=n} needs acyclicity at n..n+N-2 and replaces the low edge by
    the cokernel chain C^{n+r-1}_(r); sigma^{<=n} needs acyclicity at
    n-N+2..n and replaces the high edge by the kernel chain Z^{n-r+1}_(r).
    """
    N = x.N
    if side == "ge":
        for k in range(n, n + N - 1):
            if not is_acyclic_at(x, k):
                raise ValueError(f"soft truncation needs acyclicity at {k}")
        degs = list(range(n, n + N - 1))
        projs = {}
        mods = {}
        for k in degs:
            r = k - n + 1
            q = cokernel_projection(x.d_power(k - r, r).mat)
            mods[k], projs[k] = quotient_module(x.obj(k), q)
        objects = [mods[k] for k in degs]
        diffs = []
        for k in degs[:-1]:
            lhs = (projs[k + 1] @ x.diff(k)).mat
            mat = solve(projs[k].mat.transpose(), lhs.transpose())
            diffs.append(ModMap(mods[k], mods[k + 1], mat.transpose(), check=False))
        # splice onto the untouched part
        tail_lo = n + N - 1
        if x.hi >= tail_lo:
            lhs = x.diff(tail_lo - 1).mat
            mat = solve(projs[tail_lo - 1].mat.transpose(), lhs.transpose())
            diffs.append(ModMap(mods[tail_lo - 1], x.obj(tail_lo), mat.transpose(), check=False))
            objects.extend(x.obj(k) for k in range(tail_lo, x.hi + 1))
            diffs.extend(x.diff(k) for k in range(tail_lo, x.hi))
        return NComplex(x.algebra, N, n, objects, diffs, check=False)
    if side == "le":
        for k in range(n - N + 2, n + 1):
            if not is_acyclic_at(x, k):
                raise ValueError(f"soft truncation needs acyclicity at {k}")
        degs = list(range(n - N + 2, n + 1))
        incls = {}
        mods = {}
        for k in degs:
            r = n - k + 1
            basis = kernel_basis(x.d_power(k, r).mat)
            mods[k], incl = submodule(x.obj(k), basis)
            incls[k] = incl
        head_hi = n - N + 1
        objects = [x.obj(k) for k in range(x.lo, head_hi + 1)]
        diffs = [x.diff(k) for k in range(x.lo, head_hi)]
        if objects:
            mat = solve(incls[head_hi + 1].mat, x.diff(head_hi).mat)
            diffs.append(ModMap(x.obj(head_hi), mods[head_hi + 1], mat, check=False))
        objects.extend(mods[k] for k in degs)
        for k in degs[:-1]:
            mat = solve(incls[k + 1].mat, (x.diff(k).mat @ incls[k].mat))
            diffs.append(ModMap(mods[k], mods[k + 1], mat, check=False))
        return NComplex(x.algebra, N, x.lo if x.lo <= head_hi else degs[0], objects, diffs, check=False)
    raise ValueError(f"side must be 'le' or 'ge', got {side!r}")
