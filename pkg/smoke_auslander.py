import sys
import time

sys.path.insert(0, "src")

from ordzeta import finmod as fd
from ordzeta.fields import prime_field
from smoke_finmod import poly_quot_algebra, check

t0 = time.time()
A = poly_quot_algebra(2, [0, 0, 0, 1], "F2[x]/x^3")
reg = A.regular_module()

# modules A, A/(x^2), A/(x) as quotients of the regular module
J = A.radical_rows()  # (x), (x^2) spans
Jmod = fd.submodule_module(reg, J)
J2rows = fd.module_radical_rows(Jmod)
J2 = [Jmod.embedding_rows[i] for i in range(len(Jmod.embedding_rows))]
# embed J^2 back into the regular module
J2_in_reg = []
for r in fd.module_radical_rows(Jmod):
    v = [0] * reg.dim
    for c, row in zip(r, Jmod.embedding_rows):
        if c:
            for t in range(reg.dim):
                v[t] = (v[t] + c * row[t]) % 2
    J2_in_reg.append(v)

Ax, _ = fd.quotient_module(reg, J)          # A/(x), dim 1
Ax2, _ = fd.quotient_module(reg, J2_in_reg)  # A/(x^2), dim 2
M = fd.direct_sum_module([reg, Ax2, Ax])
check("generator module dim", M.dim, 6)

E, mats = fd.end_algebra(M)
check("Auslander algebra dim", E.dim, 14)
t1 = time.time()
print(f"  [end_algebra {t1-t0:.2f}s]")

rad = E.radical_rows()
t2 = time.time()
print(f"  [radical dim {len(rad)} in {t2-t1:.2f}s]")
check("#simples", len(E.simples()), 3)
t3 = time.time()
print(f"  [simples {t3-t2:.2f}s]")
gd = fd.global_dimension(E)
t4 = time.time()
check("gl.dim", gd, 2)
print(f"  [gl.dim {t4-t3:.2f}s]")
dd = fd.dominant_dimension_at_least(E, 2)
t5 = time.time()
check("dom.dim >= 2", dd, True)
print(f"  [dom.dim>=2 {t5-t4:.2f}s]")
print(f"auslander smoke OK in {t5-t0:.2f}s")
