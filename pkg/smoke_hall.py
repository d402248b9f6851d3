"""End-to-end smoke for hall.py: quiver-side Hall numbers/polynomials/
products, the lattice-side Hall module, the zeta bridge, and Lie checks."""

import random
import time

from fractions import Fraction

from ordzeta import fields as fd
from ordzeta import hall
from ordzeta.errors import CheckFailed, NotNilpotent, UnsupportedModule
from ordzeta.orders import OrderContext, OrderSpec

t0 = time.time()
random.seed(7)


def stamp(msg):
    print(f"[{time.time() - t0:6.1f}s] {msg}")


# --- multipartitions -------------------------------------------------------

mp = hall.multipartition(2, [(2, 1), (1,)])
assert mp.weight == 4
assert hall.string_mp(3, 1, 4).dim_vector() == (1, 2, 1)
assert hall.empty_mp(2).is_empty
assert hall.simple_mp(2, 1).dim_vector() == (0, 1)
# extensions of S_0 by S_1 in the 2-vertex quiver: split, and both strings
exts = hall.multipartitions_with_dim_vector(2, (1, 1))
assert len(exts) == 3
stamp("multipartitions ok")

# --- rep iso types ---------------------------------------------------------

for q in (2, 3, 4):
    F = hall._hall_field(q)
    assert hall.rep_iso_type(hall.zero_rep(F, 3)) == hall.empty_mp(3)
    for n in (1, 2, 3):
        for v in range(n):
            s = hall.simple_mp(n, v)
            assert hall.rep_iso_type(hall.build_rep(F, s)) == s
# random round trips
for trial in range(30):
    n = random.choice((1, 2, 3))
    parts = [[] for _ in range(n)]
    for _ in range(random.randint(0, 4)):
        parts[random.randrange(n)].append(random.randint(1, 4))
    target = hall.multipartition(n, parts)
    F = hall._hall_field(random.choice((2, 3, 4)))
    assert hall.rep_iso_type(hall.build_rep(F, target)) == target, target
# non-nilpotent rejection: invertible loop at one vertex
F2 = fd.prime_field(2)
loop = hall.quiver_rep(F2, 1, (1,), (((1,),),))
try:
    hall.rep_iso_type(loop)
    raise AssertionError("expected NotNilpotent")
except NotNilpotent:
    pass
stamp("rep_iso_type ok")

# --- hall numbers ----------------------------------------------------------

for q in (2, 3, 4, 5):
    one1 = hall.multipartition(1, [(1,)])
    two11 = hall.multipartition(1, [(1, 1)])
    two2 = hall.multipartition(1, [(2,)])
    # whole-thing and zero-thing subobjects
    assert hall.hall_number(hall.empty_mp(1), two11, two11, q) == 1
    assert hall.hall_number(two11, hall.empty_mp(1), two11, q) == 1
    # q+1 lines in the square of the simple
    assert hall.hall_number(one1, one1, two11, q) == q + 1
    # one stable line in the length-2 string
    assert hall.hall_number(one1, one1, two2, q) == 1
# 2-vertex string: socle is the vertex-1 simple
S0, S1 = hall.simple_mp(2, 0), hall.simple_mp(2, 1)
str2 = hall.string_mp(2, 0, 2)
for q in (2, 3):
    assert hall.hall_number(S0, S1, str2, q) == 1
    assert hall.hall_number(S1, S0, str2, q) == 0
stamp("hall_number ok")

# --- hall products ---------------------------------------------------------

u1 = hall.hall_unit(1, hall.multipartition(1, [(1,)]), q=2)
sq = u1 * u1
assert sq.as_dict() == {hall.multipartition(1, [(1, 1)]): 3,
                        hall.multipartition(1, [(2,)]): 1}
one = hall.hall_one(1, q=2)
assert (one * u1).as_dict() == u1.as_dict()
assert (u1 * one).as_dict() == u1.as_dict()

# associativity on specialized small triples
for n, q in ((1, 2), (2, 2), (2, 3)):
    pool = [hall.simple_mp(n, v) for v in range(n)]
    if n == 1:
        pool.append(hall.multipartition(1, [(2,)]))
    else:
        pool.append(hall.string_mp(n, 0, 2))
    for trial in range(4):
        a, b, c = (hall.hall_unit(n, random.choice(pool), q=q)
                   for _ in range(3))
        assert ((a * b) * c).as_dict() == (a * (b * c)).as_dict()
stamp("hall_product specialized ok")

# generic product: coefficients are polynomials in the field size
gu = hall.hall_unit(1, hall.multipartition(1, [(1,)]))
gsq = gu * gu
assert gsq.as_dict() == {hall.multipartition(1, [(1, 1)]): (1, 1),
                         hall.multipartition(1, [(2,)]): (1,)}
stamp("hall_product generic ok")

# --- hall polynomials ------------------------------------------------------

one1 = hall.multipartition(1, [(1,)])
two11 = hall.multipartition(1, [(1, 1)])
poly = hall.hall_polynomial(one1, one1, two11)
assert poly == (1, 1), poly            # T + 1
# held-out prime
assert hall.poly_eval_int(poly, 7) == hall.hall_number(one1, one1, two11, 7)
# empty quotient: constant 1 exactly when the big type equals the sub type
assert hall.hall_polynomial(hall.empty_mp(1), two11, two11) == (1,)
assert hall.hall_polynomial(hall.empty_mp(1), two11,
                            hall.multipartition(1, [(2,)])) == ()
# 2-vertex string fixture: constant 1
assert hall.hall_polynomial(S0, S1, str2) == (1,)
stamp("hall_polynomial ok")

# --- lattice Hall module ---------------------------------------------------

hctx = hall.lattice_hall_context(2, 1, 2)
assert hctx.basis == [(1, 0), (0, 1)]
assert hall.generic_module_dimension(2, 1) == 2
assert hall.generic_module_dimension(2, 3) == 4
assert hall.generic_module_dimension(3, 2) == 6

# identity action
v01 = hall.module_unit(2, 1, (0, 1), q=2)
ident = hall.hall_one(2, q=2)
assert hall.hall_module_action(ident, v01).as_dict() == v01.as_dict()

# specialized vs generic-evaluated agree (two ways)
for vtx in (0, 1):
    for comp in ((1, 0), (0, 1)):
        x_s = hall.hall_unit(2, hall.simple_mp(2, vtx), q=2)
        v_s = hall.module_unit(2, 1, comp, q=2)
        spec_res = hall.hall_module_action(x_s, v_s).as_dict()
        x_g = hall.hall_unit(2, hall.simple_mp(2, vtx))
        v_g = hall.module_unit(2, 1, comp)
        gen_res = hall.hall_module_action(x_g, v_g).as_dict()
        evaluated = {k: hall.poly_eval_int(p, 2) for k, p in gen_res.items()}
        evaluated = {k: c for k, c in evaluated.items() if c}
        assert spec_res == evaluated, (vtx, comp, spec_res, evaluated)
# each simple moves each class to the other class exactly once in total
tot = {}
for vtx in (0, 1):
    x_s = hall.hall_unit(2, hall.simple_mp(2, vtx), q=2)
    res = hall.hall_module_action(x_s, v01).as_dict()
    for k, c in res.items():
        tot[k] = tot.get(k, 0) + c
assert tot == {(1, 0): 1}, tot
stamp("module action two-ways ok")

# module axiom: (x*y).v == x.(y.v), specialized and generic
for q in (2, 3):
    for va, vb in ((0, 0), (0, 1), (1, 0)):
        x = hall.hall_unit(2, hall.simple_mp(2, va), q=q)
        y = hall.hall_unit(2, hall.simple_mp(2, vb), q=q)
        for comp in ((1, 0), (0, 1)):
            v = hall.module_unit(2, 1, comp, q=q)
            lhs = hall.hall_module_action(hall.hall_product(x, y), v)
            rhs = hall.hall_module_action(x, hall.hall_module_action(y, v))
            assert lhs.as_dict() == rhs.as_dict(), (q, va, vb, comp)
x = hall.hall_unit(2, hall.simple_mp(2, 0))
y = hall.hall_unit(2, hall.simple_mp(2, 1))
v = hall.module_unit(2, 1, (1, 0))
lhs = hall.hall_module_action(hall.hall_product(x, y), v)
rhs = hall.hall_module_action(x, hall.hall_module_action(y, v))
assert lhs.as_dict() == rhs.as_dict()
stamp("module axiom ok")

# mixed flavor and non-prime residue are refused
try:
    hall.lattice_hall_context(2, 1, 4)
    raise AssertionError("expected UnsupportedModule")
except UnsupportedModule:
    pass

# --- zeta bridge -----------------------------------------------------------

ctx_c = OrderContext(OrderSpec.congruence(2), 2, "equal", precision=14)
assert hall.verify_zeta_bridge(ctx_c, (1, 1), 0)
assert hall.verify_zeta_bridge(ctx_c, (1, 1), 6)
stamp("zeta bridge congruence(2) D=6 ok")

ctx_t = OrderContext(OrderSpec.tiled_triangular(2), 2, "equal", precision=14)
assert hall.verify_zeta_bridge(ctx_t, (1,), 6)
stamp("zeta bridge tiled(2) D=6 ok")

ctx_m = OrderContext(OrderSpec.congruence(2), 2, "mixed", precision=14)
try:
    hall.verify_zeta_bridge(ctx_m, (1, 1), 2)
    raise AssertionError("expected UnsupportedModule")
except UnsupportedModule:
    pass

# --- Lie checks ------------------------------------------------------------

rep = hall.lie_checks(2, 0)
assert rep.dim == 1 and rep.irreducible
rep = hall.lie_checks(2, 3)
assert rep.dim == 4 and rep.irreducible
assert rep.h_spectrum == (3, 1, -1, -3)
stamp(f"lie_checks(2,3) ok: pairing={rep.pairing}")
rep = hall.lie_checks(3, 2)
assert rep.dim == 6 and rep.irreducible
stamp("lie_checks(3,2) ok")
rep = hall.lie_checks(4, 1)
assert rep.dim == 4 and rep.irreducible and rep.commuting_pairs == 2
stamp("lie_checks(4,1) ok")

print(f"ALL HALL SMOKE OK in {time.time() - t0:.1f}s")
