"""Homotopy category layer: frozen examples and laws.

Hand-checked oracles:
  the identity of the full mu-tower is null-homotopic with h = id at the top
  degree (substituting into the boundary formula telescopes to the identity
  at every degree); the identity of a one-term complex admits no homotopy
  for N >= 3 because every candidate term passes through a zero object.
"""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhomalg.exactla import GF, QQ
from nhomalg.modcat import (
    Algebra,
    ModMap,
    free_module,
    hom_basis,
    module_from_parts,
    simple_module,
)
from nhomalg.ncx import (
    COVARIANT,
    CONTRAVARIANT,
    ChainMap,
    NComplex,
    direct_sum,
    hom_complex,
    homology,
    mu,
    shift_theta,
    validate,
    zero_complex,
)
from nhomalg.homotopy import (
    BudgetExceeded,
    Homotopy,
    cocone,
    cone,
    desuspend,
    find_homotopy_equivalence,
    hom_K,
    is_contractible,
    is_null_homotopic,
    null_homotopy,
    standard_triangle,
    suspend,
    suspend_map,
)

F2 = GF(2)
A2 = Algebra(F2, 2)
A3 = Algebra(GF(3), 3)


def algebras():
    return st.sampled_from([A2, A3])


def modules(alg):
    return st.lists(st.integers(1, alg.m), min_size=1, max_size=2).map(
        lambda parts: module_from_parts(alg, parts)
    )


def small_modules(alg):
    # single Jordan block; keeps hom spaces tiny for equivalence searches
    return st.integers(1, alg.m).map(lambda part: module_from_parts(alg, [part]))


def mu_sums(alg, n_deg, max_pieces=2):
    piece = st.tuples(modules(alg), st.integers(-2, 2), st.integers(1, n_deg))
    return st.lists(piece, min_size=1, max_size=max_pieces).map(
        lambda ps: direct_sum([mu(a, s, t, n_deg) for (a, s, t) in ps])
    )


def full_mu_sums(alg, n_deg, max_pieces=2):
    piece = st.tuples(modules(alg), st.integers(-2, 2))
    return st.lists(piece, min_size=1, max_size=max_pieces).map(
        lambda ps: direct_sum([mu(a, s, n_deg, n_deg) for (a, s) in ps])
    )


def random_homotopy(x: NComplex, y: NComplex, seed: int) -> Homotopy:
    rng = random.Random(seed)
    comps = {}
    for k in x.degrees():
        tgt = y.obj(k - x.N + 1)
        if tgt.dim == 0 or x.obj(k).dim == 0:
            continue
        m = ModMap.zero(x.obj(k), tgt)
        for b in hom_basis(x.obj(k), tgt):
            c = rng.randint(-1, 1)
            if c:
                m = m + ModMap(x.obj(k), tgt, b.mat.scale(x.algebra.field.coerce(c)), check=False)
        comps[k] = m
    return Homotopy(x, y, comps)


# ------------------------------------------------------------ null homotopy


def test_zero_map_is_null_homotopic():
    x = mu(simple_module(A2), 0, 2, 3)
    h = null_homotopy(ChainMap.zero(x, x))
    assert h is not None
    assert h.boundary().is_zero()


def test_identity_of_full_mu_is_null_homotopic():
    for alg, n_deg in [(A2, 2), (A2, 3), (A3, 4)]:
        x = mu(free_module(alg, 1), 1, n_deg, n_deg)
        assert is_contractible(x)


def test_identity_of_singleton_is_not_null_homotopic():
    x = mu(simple_module(A2), 0, 1, 3)
    assert not is_contractible(x)


@given(
    algebras().flatmap(lambda alg: st.tuples(mu_sums(alg, 3), mu_sums(alg, 3))),
    st.integers(0, 10 ** 6),
)
@settings(max_examples=30, deadline=None)
def test_null_homotopy_finds_all_boundaries(xy, seed):
    x, y = xy
    f = random_homotopy(x, y, seed).boundary()
    ChainMap(x, y, {k: f.comp(k) for k in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1)})
    wit = null_homotopy(f)
    assert wit is not None
    back = wit.boundary()
    for k in range(min(x.lo, y.lo), max(x.hi, y.hi) + 1):
        assert back.comp(k).mat == f.comp(k).mat


@given(algebras(), st.integers(-2, 2), st.integers(1, 2), st.integers(1, 2))
@settings(max_examples=20, deadline=None)
def test_partial_mu_not_contractible(alg, s, t, rk):
    # a tower shorter than the full length is nonzero in the homotopy
    # category: every homotopy term passes through a zero object, so the
    # identity cannot be a boundary, even for towers of free modules
    assert not is_contractible(mu(free_module(alg, rk), s, t, 3))


# ----------------------------------------------------------------- hom_K


def test_hom_k_from_zero():
    y = mu(simple_module(A2), 0, 2, 3)
    k = hom_K(zero_complex(A2, 3), y)
    assert k.dim == 0 and k.basis == []


@given(
    algebras().flatmap(
        lambda alg: st.tuples(
            modules(alg), st.integers(-2, 2), st.integers(1, 2), mu_sums(alg, 3)
        )
    )
)
@settings(max_examples=30, deadline=None)
def test_hom_k_from_mu_is_amplitude_homology(astx):
    a, s, t, x = astx
    n_deg = 3
    got = hom_K(mu(a, s, t, n_deg), x)
    hom_cx = hom_complex(x, a, COVARIANT)
    expect = homology(hom_cx, s - t + 1, t)
    assert got.dim == expect.dim


@given(
    algebras().flatmap(
        lambda alg: st.tuples(
            modules(alg), st.integers(-2, 2), st.integers(1, 2), mu_sums(alg, 3)
        )
    )
)
@settings(max_examples=30, deadline=None)
def test_hom_k_into_mu_is_amplitude_homology(astx):
    a, s, t, x = astx
    n_deg = 3
    got = hom_K(x, mu(a, s, t, n_deg))
    hom_cx = hom_complex(x, a, CONTRAVARIANT)
    expect = homology(hom_cx, -s, t)
    assert got.dim == expect.dim


@given(algebras().flatmap(lambda alg: st.tuples(mu_sums(alg, 3), mu_sums(alg, 3))))
@settings(max_examples=20, deadline=None)
def test_hom_k_dimension_law_and_additivity(xy):
    x, y = xy
    k = hom_K(x, y)
    assert k.dim == len(k.basis) - len(k.null_basis)
    assert k.dim == len(k.representatives)
    both = hom_K(direct_sum([x, x]), y)
    assert both.dim == 2 * k.dim


def test_class_coordinates_of_identity():
    x = mu(simple_module(A2), 0, 1, 3)
    k = hom_K(x, x)
    coords = k.class_coordinates(ChainMap.identity(x))
    assert coords.rows == k.dim == 1
    assert not coords.is_zero()
    rebuilt = k.from_class_coordinates(coords)
    assert is_null_homotopic(rebuilt - ChainMap.identity(x))


# --------------------------------------------------- suspension and cones


def test_suspension_and_friends_validate():
    x = mu(module_from_parts(A3, [2, 1]), 0, 3, 3)
    assert validate(suspend(x)) is None
    assert validate(desuspend(x)) is None
    assert validate(cone(ChainMap.identity(x))) is None
    assert validate(cocone(ChainMap.identity(x))) is None


def test_cone_of_map_to_zero_is_suspension():
    x = mu(module_from_parts(A2, [2]), 1, 2, 3)
    z = zero_complex(A2, 3)
    assert cone(ChainMap.zero(x, z)) == suspend(x)
    assert cocone(ChainMap.zero(z, x)) == desuspend(x)


def test_theta_cocone_is_negated_cone_for_n2():
    a = module_from_parts(A2, [2, 1])
    x = mu(a, 0, 2, 2)
    y = mu(a, 0, 2, 2)
    f = ChainMap.identity(x)
    from nhomalg.ncx import negate

    lhs = shift_theta(cocone(f), 1)
    rhs = negate(cone(f))
    assert lhs == rhs


def test_cone_of_identity_is_contractible():
    x = mu(module_from_parts(A2, [2, 1]), 0, 2, 3)
    assert is_contractible(cone(ChainMap.identity(x)))


@given(algebras().flatmap(lambda alg: st.tuples(
    small_modules(alg), st.integers(-2, 2), st.integers(1, 3)
)))
@settings(max_examples=20, deadline=None)
def test_sigma_squared_is_theta_n_on_mu(ast_):
    a, s, t = ast_
    n_deg = 3
    x = mu(a, s, t, n_deg)
    eq = find_homotopy_equivalence(suspend(suspend(x)), shift_theta(x, n_deg))
    assert eq is not None


@given(algebras().flatmap(lambda alg: st.tuples(small_modules(alg), st.integers(-2, 2), st.integers(1, 2))))
@settings(max_examples=20, deadline=None)
def test_sigma_mu_lands_on_the_complementary_mu(ast_):
    a, s, t = ast_
    n_deg = 3
    eq = find_homotopy_equivalence(suspend(mu(a, s, t, n_deg)), mu(a, s - t, n_deg - t, n_deg))
    assert eq is not None


@given(algebras().flatmap(lambda alg: st.tuples(full_mu_sums(alg, 3), full_mu_sums(alg, 3), st.integers(0, 10 ** 6))))
@settings(max_examples=15, deadline=None)
def test_cone_acyclicity(xyseed):
    from nhomalg.ncx import is_acyclic, is_totally_acyclic

    x, y, seed = xyseed
    kxy = hom_K(x, y)
    rng = random.Random(seed)
    f = ChainMap.zero(x, y)
    for b in kxy.basis:
        if rng.randint(0, 1):
            f = f + b
    c = cone(f)
    assert is_acyclic(c, c.lo - 1, c.hi + 1)
    assert is_totally_acyclic(c, c.lo - 1, c.hi + 1)


@given(algebras().flatmap(lambda alg: mu_sums(alg, 3)))
@settings(max_examples=10, deadline=None)
def test_sigma_quasi_inverse_dimensions(x):
    there_and_back = suspend(desuspend(x))
    probe = mu(free_module(x.algebra, 1), 0, 1, 3)
    assert hom_K(there_and_back, probe).dim == hom_K(x, probe).dim
    assert hom_K(probe, there_and_back).dim == hom_K(probe, x).dim


def test_sigma_quasi_inverse_equivalence():
    x = mu(module_from_parts(A2, [2]), 0, 2, 3)
    eq = find_homotopy_equivalence(suspend(desuspend(x)), x)
    assert eq is not None
    eq = find_homotopy_equivalence(desuspend(suspend(x)), x)
    assert eq is not None


# --------------------------------------------------------------- triangles


def test_standard_triangle_structure():
    a = module_from_parts(A2, [2])
    x = mu(a, 0, 2, 3)
    y = mu(a, 0, 3, 3)
    kxy = hom_K(x, y)
    f = kxy.basis[0] if kxy.basis else ChainMap.zero(x, y)
    tri = standard_triangle(f)
    # structural maps are chain maps
    ChainMap(tri.into_cone.source, tri.into_cone.target, {k: tri.into_cone.comp(k) for k in tri.into_cone.target.degrees()})
    ChainMap(tri.onto_suspension.source, tri.onto_suspension.target, {k: tri.onto_suspension.comp(k) for k in tri.onto_suspension.source.degrees()})
    # adjacent composites vanish up to homotopy; the middle one on the nose
    assert (tri.onto_suspension @ tri.into_cone).is_zero()
    assert is_null_homotopic(tri.into_cone @ f)


def test_triangle_of_map_to_zero():
    x = mu(simple_module(A2), 0, 2, 3)
    tri = standard_triangle(ChainMap.zero(x, zero_complex(A2, 3)))
    assert tri.into_cone.source.is_zero()
    assert tri.onto_suspension.source == suspend(x)
    assert tri.onto_suspension.comp(suspend(x).lo).is_isomorphism()


@given(
    algebras().flatmap(lambda alg: st.tuples(mu_sums(alg, 3), mu_sums(alg, 3))),
    st.integers(0, 10 ** 6),
)
@settings(max_examples=15, deadline=None)
def test_triangle_composite_null_homotopic(xy, seed):
    x, y = xy
    kxy = hom_K(x, y)
    rng = random.Random(seed)
    f = ChainMap.zero(x, y)
    for b in kxy.basis:
        if rng.randint(0, 1):
            f = f + b
    tri = standard_triangle(f)
    assert is_null_homotopic(tri.into_cone @ f)


# ------------------------------------------------------ equivalence search


def test_equivalence_of_equal_complexes():
    x = mu(module_from_parts(A2, [2, 1]), 0, 2, 3)
    eq = find_homotopy_equivalence(x, x)
    assert eq is not None
    assert is_null_homotopic(eq.backward @ eq.forward - ChainMap.identity(x))
    assert is_null_homotopic(eq.forward @ eq.backward - ChainMap.identity(x))


def test_equivalence_absorbs_projective_summand():
    a = module_from_parts(A2, [2])
    x = mu(simple_module(A2), 0, 1, 2)
    padded = direct_sum([x, mu(a, 1, 2, 2)])
    eq = find_homotopy_equivalence(x, padded)
    assert eq is not None


def test_no_equivalence_between_distinct_simples():
    x = mu(simple_module(A2), 0, 1, 2)
    y = shift_theta(x, 1)
    assert find_homotopy_equivalence(x, y) is None


def test_budget_exceeded_is_distinct_from_absence():
    k2 = module_from_parts(A2, [1, 1])
    x = mu(simple_module(A2), 0, 1, 2)
    y = mu(k2, 0, 1, 2)
    with pytest.raises(BudgetExceeded):
        find_homotopy_equivalence(x, y, budget=1)
    assert find_homotopy_equivalence(x, y, budget=10 ** 6) is None


def test_rational_search_raises_budget_error():
    aq = Algebra(QQ, 2)
    x = mu(module_from_parts(aq, [1]), 0, 1, 2)
    y = mu(module_from_parts(aq, [1, 1]), 0, 1, 2)
    with pytest.raises(BudgetExceeded):
        find_homotopy_equivalence(x, y, budget=25, seed=3)


def test_witnesses_attached_to_equivalence():
    x = mu(simple_module(A2), 0, 1, 2)
    padded = direct_sum([x, mu(module_from_parts(A2, [2]), 0, 2, 2)])
    eq = find_homotopy_equivalence(x, padded)
    assert eq is not None
    lhs = eq.witness_source.boundary()
    target = eq.backward @ eq.forward - ChainMap.identity(x)
    for k in x.degrees():
        assert lhs.comp(k).mat == target.comp(k).mat
