"""Scratch checks for orders.py (to be absorbed into tests/)."""

import time

from ordzeta import chainring as cr
from ordzeta.orders import (
    AModule, OrderContext, OrderSpec, class_normal_form, decompose_lattice,
    end_residue_algebra, enumerate_classes, finite_quotients_isomorphic,
    full_lattice_catalog, hom_generators, ind_lattices, is_isomorphic,
    is_stable, iter_stable_sublattices, lattice_colength, lattice_index,
    make_lattice, multiplier_lattice, overring_restriction, proj_inj_flags,
    radical_sublattice, scaled, standard_lattice, sublattices_of_colength,
)

t0 = time.time()


def tick(msg):
    print(f"[{time.time() - t0:7.2f}s] {msg}")


# --- congruence(3), p=2, mixed ------------------------------------------
ctx = OrderContext(OrderSpec.congruence(3), 2)
cat = full_lattice_catalog(ctx, (1, 1))
assert cat.labels() == ["Lambda_3", "Lambda_2", "Lambda_1", "Lambda_0"], cat.labels()
assert cat.mode == "multiplier"
tick("congruence(3) full catalog validated (multiplier mode)")

# multiplier of Lambda_k is Lambda_k itself
for k in range(4):
    lam = cat.entry(3 - k).lattice
    O = multiplier_lattice(lam)
    assert O.denom == 0 and O.rows == lam.rows, (k, O)
tick("O(Lambda_k) == Lambda_k exactly")

# brute-force oracle: all full sublattices of colength <= 5 of the standard
# lattice, filtered by stability, vs the walk
R = ctx.ring
std = ctx.regular_lattice()
p = 2


def brute_counts(L, cmax):
    counts = {c: 0 for c in range(cmax + 1)}
    for a in range(cmax + 1):
        for c in range(cmax + 1 - a):
            for b in range(p ** c):
                rows = [
                    [R.mul(R.pi_power(a), L.rows[0][0]),
                     R.add(R.mul(R.pi_power(a), L.rows[0][1]),
                           R.mul(R.from_int(b), L.rows[1][1]))],
                    [0, R.mul(R.pi_power(c), L.rows[1][1])],
                ]
                N = make_lattice(L.space, rows)
                if lattice_colength(L, N) == a + c and is_stable(N):
                    counts[a + c] += 1
    return counts


# note: parameterization [[p^a, p^a*h01 + b*h11],[0, p^c*h11]] runs over all
# HNF sublattices of a rank-2 lattice with rows h0, h1 (b < p^c distinct)
bc = brute_counts(std, 5)
walk = {}
for N, c in iter_stable_sublattices(std, 5):
    walk[c] = walk.get(c, 0) + 1
assert walk == bc, (walk, bc)
tick(f"stable sublattice counts match brute force: {bc}")

# classification of every node agrees with multiplier catalog validation
for N, c in iter_stable_sublattices(std, 6):
    idx = cat.classify(N)
    assert is_isomorphic(cat.entry(idx).lattice, N)
tick("walk nodes classify consistently")

# ind catalog
ind = ind_lattices(ctx)
assert ind.labels() == ["Lambda_3", "Lambda_2", "Lambda_1", "RxO", "OxR"], ind.labels()
flags = [(e.label, e.projective, e.injective) for e in ind.entries]
tick(f"congruence ind catalog: {flags}")
assert [e.label for e in ind.entries if e.projective and e.injective] == ["Lambda_3"], flags
assert [e.label for e in ind.entries if e.projective] == ["Lambda_3"], flags

# overrings
sub = overring_restriction(ctx, OrderSpec.congruence(2))
assert sub.labels() == ["Lambda_2", "Lambda_1", "RxO", "OxR"], sub.labels()
sub0 = overring_restriction(ctx, OrderSpec.congruence(0))
assert sub0.labels() == ["RxO", "OxR"], sub0.labels()
tick("overring restriction tables")

# V = (2,1) catalog (split defect mode)
cat21 = full_lattice_catalog(ctx, (2, 1))
assert cat21.size == 4 and cat21.mode == "split_defect", (cat21.size, cat21.mode)
tick(f"(2,1) catalog: {cat21.labels()}")

# V = (2,0) single class
cat20 = full_lattice_catalog(ctx, (2, 0))
assert cat20.size == 1 and cat20.mode == "single"

# decomposition: Lambda_0 = R x R splits into RxO + OxR
lam0 = cat.entry(3).lattice
parts = decompose_lattice(standard_lattice(ctx, (1, 1)))
assert len(parts) == 1  # Lambda_3 (regular) is indecomposable
parts0 = decompose_lattice(lam0)
assert len(parts0) == 2, parts0
tick("decomposition sanity")

# finite quotients
lam2 = cat.entry(1).lattice
assert finite_quotients_isomorphic((std, scaled(std, 1)), (std, scaled(std, 1)))
subs2 = sublattices_of_colength(std, 2)
qtypes = []
for W in subs2:
    qtypes.append(W)
# pi*std has colength 2; std/pi*std vs std/W for W with cyclic quotient must differ
pi_std = scaled(std, 1)
cyclic = [W for W in subs2 if W.key() != pi_std.key()]
assert cyclic
got_true = finite_quotients_isomorphic((std, pi_std), (std, pi_std))
got_false = finite_quotients_isomorphic((std, pi_std), (std, cyclic[0]))
assert got_true and not got_false, (got_true, got_false)
tick("finite quotient isomorphism basic checks")

# --- enumerate larger congruence, check counts vs n -----------------------
for n in (1, 2):
    c2 = OrderContext(OrderSpec.congruence(n), 2)
    assert full_lattice_catalog(c2, (1, 1)).size == n + 1
    assert ind_lattices(c2).size == n + 2
tick("congruence n=1,2 catalog sizes")

# --- cusp(3), p=2, equal -------------------------------------------------
cctx = OrderContext(OrderSpec.cusp(3), 2, flavor="equal")
ccat = full_lattice_catalog(cctx, (1,))
assert ccat.labels() == ["Lambda_3", "Lambda_2", "Lambda_1", "Lambda_0"], ccat.labels()
assert ccat.mode == "multiplier"
cind = ind_lattices(cctx)
tick(f"cusp(3) catalogs: {[(e.label, e.projective, e.injective) for e in cind.entries]}")
assert cind.size == 4

# cusp BFS level counts
cstd = cctx.regular_lattice()
cw = {}
for N, c in iter_stable_sublattices(cstd, 6):
    cw[c] = cw.get(c, 0) + 1
tick(f"cusp stable sublattice counts to colength 6: {cw}")

# --- tiled triangular ----------------------------------------------------
tctx = OrderContext(OrderSpec.tiled_triangular(3), 2)
tcat = full_lattice_catalog(tctx, (1,))
assert tcat.labels() == ["P_1", "P_3", "P_2"], tcat.labels()
assert tcat.mode == "colength_mod", tcat.mode
tind = ind_lattices(tctx)
tick(f"tiled(3) catalogs: {[(e.label, e.projective, e.injective) for e in tind.entries]}")
assert all(e.projective for e in tind.entries)

# scaling chain: minimal colength of a sublattice of P_j in class of P_i
tstd = standard_lattice(tctx, (1,))
tw = {}
for N, c in iter_stable_sublattices(tstd, 6):
    idx = tcat.classify(N)
    tw.setdefault(idx, []).append(c)
mins = {tcat.entry(i).label: min(cs) for i, cs in tw.items()}
tick(f"tiled minimal colengths from the standard class (= P_3): {mins}")
# std ~ P_3; the class of P_j first appears at colength (3 - j) mod 3
assert mins == {"P_1": 2, "P_3": 0, "P_2": 1}, mins

# per-class counts: scale chain means one sublattice per colength c0 + 3k
counts = {tcat.entry(i).label: sorted(cs) for i, cs in tw.items()}
assert counts["P_3"] == [0, 3, 6], counts
assert counts["P_2"] == [1, 4], counts
assert counts["P_1"] == [2, 5], counts
tick("tiled scale-chain structure confirmed")

# tiled(2)
t2 = OrderContext(OrderSpec.tiled_triangular(2), 2)
t2cat = full_lattice_catalog(t2, (1,))
assert t2cat.labels() == ["P_1", "P_2"]

# --- end algebras / hom ranks -------------------------------------------
alg, gens = end_residue_algebra(std)
tick(f"End(regular)/pi dim = {len(gens)}")
h = hom_generators(cat.entry(0).lattice, cat.entry(1).lattice)
h2 = hom_generators(cat.entry(0).lattice, cat.entry(1).lattice, boost=2)
assert len(h) == len(h2)
tick(f"hom rank Lambda_3 -> Lambda_2 = {len(h)} (stable under boost)")

# generalized index: skew-symmetric
l3, l1 = cat.entry(0).lattice, cat.entry(2).lattice
assert lattice_index(l3, l1) == -lattice_index(l1, l3)
assert lattice_index(l3, scaled(l3, 2)) == 2 * l3.rank
tick("index sanity")

print("ALL ORDERS SMOKE CHECKS PASSED")
