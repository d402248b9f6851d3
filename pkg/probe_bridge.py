"""Probe: compare overlattice counts against zeta matrix entries in both
orientations at small truncation, for congruence(2) and tiled_triangular(2)."""

from ordzeta import hall, orders, zeta as zz
from ordzeta.orders import OrderContext, OrderSpec

for spec, module in [(OrderSpec.congruence(2), (1, 1)),
                     (OrderSpec.tiled_triangular(2), (1,))]:
    ctx = OrderContext(spec, 2, "equal", precision=12)
    D = 3
    labels, counts = hall.hall_action_matrix(ctx, module, D)
    zm = zz.zeta_matrix(ctx, module, D)
    print("====", spec.label, "labels:", labels)
    for lt in labels:
        for lf in labels:
            got = counts[(lt, lf)]
            direct = [zm.entry(lt, lf)[k] for k in range(D + 1)]
            swapped = [zm.entry(lf, lt)[k] for k in range(D + 1)]
            print(f"  over[{lt},{lf}] = {got}   zeta[{lt},{lf}] = {direct}"
                  f"   zeta[{lf},{lt}] = {swapped}")
