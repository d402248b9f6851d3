"""One-off timing/validation probe for acceptance fixtures not yet covered."""
import time

from ordzeta import finmod as fd
from ordzeta import hall, qha
from ordzeta import zeta as zz
from ordzeta.orders import OrderContext, OrderSpec

T0 = time.time()


def tick(msg):
    print(f"[{time.time()-T0:7.2f}s] {msg}", flush=True)


# (a) lie_checks at the acceptance sizes not yet run
for n, m in [(2, 1), (2, 2), (2, 4), (2, 5), (3, 1), (3, 3)]:
    t = time.time()
    rep = hall.lie_checks(n, m)
    tick(f"lie_checks({n},{m}): dim={rep.dim} irr={rep.irreducible} "
         f"spec={rep.h_spectrum} pairing={rep.pairing} holds={rep.holds} "
         f"[{time.time()-t:.1f}s]")

# (b) heredity chain m=4 + criterion 11 duals
for m in (2, 3, 4):
    t = time.time()
    A = fd.truncated_polynomial_algebra(2, m)
    chain = qha.iterated_radical_chain(A.regular_module())
    C0 = chain.subcats[0]
    M = fd.direct_sum_module([C0.rep(l) for l in C0.labels])
    hch = qha.heredity_chain(M, chain)
    gd = fd.global_dimension(hch.algebra)
    tick(f"ADR m={m}: len={chain.length} holds={hch.holds} "
         f"certs={len(hch.certificates)} dim={hch.algebra.dim} gl={gd} "
         f"[{time.time()-t:.1f}s]")
    assert hch.holds and chain.length == m and gd <= m

for name, A in [("serial3", fd.truncated_polynomial_algebra(2, 3)),
                ("ut3", fd.upper_triangular_algebra(2, 3))]:
    t = time.time()
    M = fd.direct_sum_module([A.regular_module(), fd.dual_regular_module(A)])
    ch = qha.iterated_radical_chain(M)
    print("   layers:", [x.dim for x in ch.layer_objects],
          "reports:", [r.holds for r in ch.reports])
    parts = [x for x in ch.layer_objects if x.dim]
    Msum = fd.direct_sum_module(parts)
    hch = qha.heredity_chain(Msum, ch)
    gd = fd.global_dimension(hch.algebra)
    mlen = ch.length
    tick(f"dual-pair {name}: len={mlen} holds={hch.holds} "
         f"Gamma dim={hch.algebra.dim} gl={gd} bound={2*mlen-2} "
         f"[{time.time()-t:.1f}s]")
    assert hch.holds and gd <= 2 * mlen - 2

# (c) tiled(3) chain shape + cusp steps at D=8
t3 = OrderContext(OrderSpec.tiled_triangular(3), 2, precision=20)
tch = qha.build_CV_chain(t3, (1,))
tick(f"tiled(3) chain: length={tch.length} terminal={tch.terminal.labels}")
assert tch.length == 0

c3 = OrderContext(OrderSpec.cusp(3), 2, "equal", precision=20)
cch = qha.build_CV_chain(c3, (1,))
for st in cch.steps():
    t = time.time()
    ok = zz.verify_block_lemma(st, (1,), 8)
    tick(f"cusp step remove {st.removed}: block lemma D=8 -> {ok} "
         f"[{time.time()-t:.1f}s]")
    assert ok

# row-transformed first row: entry(L3,c) - T*entry(L2,c) == delta(c == L3)
zm = zz.zeta_matrix(c3, (1,), 8)
for c in zm.labels:
    s3 = zm.entry("Lambda_3", c)
    s2 = zm.entry("Lambda_2", c)
    for k in range(9):
        want = 1 if (k == 0 and c == "Lambda_3") else 0
        got = s3[k] - (s2[k - 1] if k else 0)
        assert got == want, (c, k, got, want)
tick("cusp row transformation reproduces (1,0,0,0)")

# (d) congruence(4) det at D=10 (criterion 2 n=4)
t = time.time()
g4 = OrderContext(OrderSpec.congruence(4), 2, precision=18)
d4 = zz.det_zeta(zz.zeta_matrix(g4, (1, 1), 10))
tick(f"congruence(4) det: num={d4.num} den={d4.den} [{time.time()-t:.1f}s]")

# (e) equal-flavor tiled p=3 (criterion 15 instance)
t = time.time()
te = OrderContext(OrderSpec.tiled_triangular(3), 3, "equal", precision=18)
zme = zz.zeta_matrix(te, (1,), 12)
tm = OrderContext(OrderSpec.tiled_triangular(3), 3, "mixed", precision=18)
zmm = zz.zeta_matrix(tm, (1,), 12)
same = all(zme.series[i][j][k] == zmm.series[i][j][k]
           for i in range(3) for j in range(3) for k in range(13))
tick(f"tiled(3) p=3 equal==mixed coefficientwise: {same} "
     f"[{time.time()-t:.1f}s]")
assert same and zme.labels == zmm.labels

print(f"PROBE OK in {time.time()-T0:.1f}s")
