import time

from nhomalg.exactla import GF, QQ
from nhomalg.modcat import Algebra, simple_module, free_module, module_from_parts
from nhomalg.ncx import single, mu, shift_theta, truncate_hard
from nhomalg.homotopy import hom_K
from nhomalg.resolve import mmor_iota, MonChain, projective_resolution, mu_chain
from nhomalg.derived import (
    hom_D, ext, is_perfect, hom_sing, buchweitz_verify, tate_hom,
    is_quasi_iso, resolution_collapse, CutoffExhausted, PlateauNotReached,
)

F2 = GF(2)
A2 = Algebra(F2, 2)
K2 = simple_module(A2)
k_cx = single(K2, 0, 2)

t0 = time.time()

# anchor: hom_D(i0 k, i0 k) over A_2, N=2
d = hom_D(k_cx, k_cx)
print("hom_D(k,k) dim =", d.dim, "(expect 1)", f"{time.time()-t0:.2f}s")

# anchor: Ext^n = 1 for n = 0..6
t0 = time.time()
dims = [ext(k_cx, k_cx, n) for n in range(7)]
print("ext(k,k,n) n=0..6 =", dims, "(expect all 1)", f"{time.time()-t0:.2f}s")

# negative n: Ext^{-1}(k,k) should be 1 too on the 2-periodic side? compute
print("ext(k,k,-1) =", ext(k_cx, k_cx, -1), "ext(k,k,-2) =", ext(k_cx, k_cx, -2))

# hom_D with Y=0
from nhomalg.ncx import zero_complex
print("hom_D(k,0) dim =", hom_D(k_cx, zero_complex(A2, 2)).dim, "(expect 0)")

# is_quasi_iso: identity, zero->mu, collapse of mu-sum
from nhomalg.ncx import ChainMap, direct_sum as complex_sum
print("is_quasi_iso(id) =", is_quasi_iso(ChainMap.identity(k_cx)), "(expect True)")
A2free = free_module(A2, 1)
mu2 = mu(A2free, 3, 2, 2)
print("is_quasi_iso(0->mu_N) =", is_quasi_iso(ChainMap.zero(zero_complex(A2, 2), mu2)), "(expect True)")
big = complex_sum([mu(A2free, 1, 2, 2), mu(A2free, 3, 2, 2), mu(A2free, 4, 2, 2)])
col = resolution_collapse(big, 2)
print("is_quasi_iso(collapse of mu-sum) =", is_quasi_iso(col), "(expect True)")

# is_perfect anchors
t0 = time.time()
pd = is_perfect(k_cx)
print("is_perfect(i0 k) =", bool(pd), pd, "(expect False with cycle)", f"{time.time()-t0:.2f}s")
pd2 = is_perfect(single(A2free, 3, 2))
print("is_perfect(mu_1(free)) =", bool(pd2), "(expect True)")
A1 = Algebra(F2, 1)
k1 = simple_module(A1)
print("is_perfect over m=1 =", bool(is_perfect(single(k1, 0, 2))), "(expect True)")

# hom_sing anchors
t0 = time.time()
ss = hom_sing(k_cx, k_cx)
print("hom_sing(k,k) dim =", ss.dim, "cutoff =", ss.cutoff, "hom dim =", ss.hom.dim,
      "mask rank =", ss.mask_rank, "(expect dim 1)", f"{time.time()-t0:.2f}s")
t0 = time.time()
free_cx = single(A2free, 0, 2)
ss2 = hom_sing(k_cx, free_cx)
print("hom_sing(k, free) dim =", ss2.dim, "(expect 0)", f"{time.time()-t0:.2f}s")
ss3 = hom_sing(zero_complex(A2, 2), k_cx)
print("hom_sing(0, k) dim =", ss3.dim, "(expect 0)")

# buchweitz anchors
t0 = time.time()
kchain = MonChain(A2, 2, [K2], [])
rep = buchweitz_verify(kchain, kchain)
print("buchweitz(k,k):", repr(rep), "inj =", rep.embedding_injective,
      "collapse =", rep.collapse_quasi_iso, "perf =", rep.complement_perfect,
      f"{time.time()-t0:.2f}s")
t0 = time.time()
freechain = MonChain(A2, 2, [A2free], [])
rep2 = buchweitz_verify(freechain, kchain)
print("buchweitz(free,k):", repr(rep2), f"{time.time()-t0:.2f}s")

# tate anchors
t0 = time.time()
print("tate(k,k,0) =", tate_hom(kchain, kchain, 0), "(expect 1)", f"{time.time()-t0:.2f}s")
t0 = time.time()
tdims = [tate_hom(kchain, kchain, n) for n in (1, 2, 3, -1, -2)]
print("tate(k,k,n) n=1,2,3,-1,-2 =", tdims, "(expect all 1)", f"{time.time()-t0:.2f}s")
print("tate(free,k,0) =", tate_hom(freechain, kchain, 0), "(expect 0)")
