import time

from nhomalg.exactla import GF, Mat
from nhomalg.modcat import Algebra, ModMap, simple_module, free_module, module_from_parts
from nhomalg.ncx import single, mu, shift_theta, homology, hom_complex, COVARIANT, direct_sum as csum
from nhomalg.homotopy import hom_K
from nhomalg.resolve import MonChain, mmor_iota, keller_resolve, complex_from_array, _augmentation
from nhomalg.derived import hom_D, ext, is_perfect, hom_sing, buchweitz_verify, tate_hom

F2 = GF(2)
F3 = GF(3)
A2 = Algebra(F2, 2)
A23 = Algebra(F2, 2)
A3 = Algebra(F3, 3)
K2 = simple_module(A2)
K3 = simple_module(A3)

# --- buchweitz, A_2 with N=3, mu_{N-1}(k)-type chain: levels [k, k], monic id
t0 = time.time()
idk = ModMap(K2, K2, Mat.identity(F2, 1))
mu_type = MonChain(A2, 3, [K2, K2], [idk])
rep = buchweitz_verify(mu_type, mu_type)
print("buchweitz mu_{N-1}(k)-type A2 N=3:", repr(rep), f"{time.time()-t0:.2f}s")

# --- buchweitz, A_2 N=3, chain [0, k] (k at top only)
t0 = time.time()
z0 = module_from_parts(A2, [])
topk = MonChain(A2, 3, [z0, K2], [ModMap(z0, K2, Mat.zeros(F2, 1, 0))])
rep = buchweitz_verify(topk, topk)
print("buchweitz top-k A2 N=3:", repr(rep), f"{time.time()-t0:.2f}s")
t0 = time.time()
rep = buchweitz_verify(topk, mu_type)
print("buchweitz top-k vs mu-type:", repr(rep), f"{time.time()-t0:.2f}s")

# --- buchweitz, A_3 N=2, chains k3 and [2]
t0 = time.time()
k3chain = MonChain(A3, 2, [K3], [])
m2chain = MonChain(A3, 2, [module_from_parts(A3, [2])], [])
print("buchweitz k3:", repr(buchweitz_verify(k3chain, k3chain)), f"{time.time()-t0:.2f}s")
t0 = time.time()
print("buchweitz k3 vs [2]:", repr(buchweitz_verify(k3chain, m2chain)), f"{time.time()-t0:.2f}s")
t0 = time.time()
print("buchweitz [2] vs [2]:", repr(buchweitz_verify(m2chain, m2chain)), f"{time.time()-t0:.2f}s")

# --- hom_sing general path: wide-window target (not a placed chain)
t0 = time.time()
k_cx = single(K2, 0, 2)
wide = csum([single(K2, 0, 2), single(K2, 2, 2)])   # window wider than N-1
ssw = hom_sing(k_cx, wide)
print("hom_sing(k, k+k[2]) dim =", ssw.dim, "cutoff =", ssw.cutoff, f"{time.time()-t0:.2f}s")
# oracle: sing-Hom additive in target: hom_sing(k, k) + hom_sing(k, Theta k)
s1 = hom_sing(k_cx, single(K2, 2, 2)).dim
print("  vs parts:", hom_sing(k_cx, k_cx).dim, "+", s1)

# --- resolution independence: same dim through a padded cover resolution
t0 = time.time()
free1 = free_module(A2, 1)
arr = keller_resolve(k_cx, lo=-8, cover_override=(0, free_module(A2, 2)))
p2 = complex_from_array(arr)
kh = hom_K(p2, k_cx)
print("hom_D via padded resolution dim =", kh.dim, "(expect 1)", f"{time.time()-t0:.2f}s")

# --- mu-probe identity
t0 = time.time()
ok = True
for (s, t) in [(0, 1), (2, 1), (3, 2), (1, 1)]:
    for tgt in (k_cx, single(module_from_parts(A2, [2, 1]), 1, 3) if False else k_cx,):
        pass
for N in (2, 3):
    algN = A2 if N == 2 else A2
    fr = free_module(algN, 1)
    for s in (0, 1, 3):
        for t in range(1, N):
            src = mu(fr, s, t, N)
            for tgt in (single(K2, 0, N), csum([single(K2, 0, N), single(module_from_parts(algN, [2]), 2, N)])):
                got = hom_D(src, tgt).dim
                hc = hom_complex(tgt, fr, COVARIANT)
                want = homology(hc, s - t + 1, t).dim
                if got != want:
                    ok = False
                    print("  MISMATCH", N, s, t, got, want)
print("mu-probe identity:", ok, f"{time.time()-t0:.2f}s")

# --- perfect vanishing past support
t0 = time.time()
perf = mu(free1, 1, 2, 2)   # mu_N(free): perfect and acyclic
w_cx = mmor_iota(MonChain(A2, 2, [K2], []), 0)
dims = [ext(perf, w_cx, n) for n in range(0, 5)]
print("ext(perfect-acyclic, i0 k, n) =", dims, "(expect all 0)", f"{time.time()-t0:.2f}s")

# --- tate over A_3
t0 = time.time()
tdims = [tate_hom(k3chain, k3chain, n) for n in (0, 1, 2)]
print("tate A3 (0,1,2) =", tdims, f"{time.time()-t0:.2f}s")

# --- timing probe: buchweitz A_3 N=3 and A_2 N=4
t0 = time.time()
k3c3 = MonChain(A3, 3, [K3, K3], [ModMap(K3, K3, Mat.identity(F3, 1))])
print("buchweitz A3 N=3:", repr(buchweitz_verify(k3c3, k3c3)), f"{time.time()-t0:.2f}s")
t0 = time.time()
A24 = Algebra(F2, 2)
k24 = simple_module(A24)
ch4 = MonChain(A24, 4, [k24, k24, k24], [ModMap(k24, k24, Mat.identity(F2, 1))] * 2)
print("buchweitz A2 N=4:", repr(buchweitz_verify(ch4, ch4)), f"{time.time()-t0:.2f}s")
