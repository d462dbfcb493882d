"""Expectation values in the Z2 field algebra on the window {1/2, 1, 3/2, 2}.

E averages over the D(G) symmetry.  A monomial survives only when its
disorder part multiplies to the unit, and the result is a combination
of the gauge-invariant observables w_y v_x.
"""
from gspin.expr import ExprContext, evaluate, format_element
from gspin.field import FieldExpectation, field_algebra, wv_observable
from gspin.groups import cyclic

G = cyclic(2)
F = field_algebra(G)
ctx = ExprContext(G, F=F)
rec = FieldExpectation(F)

print(f"dim F = {F.dim}, dim observables = {len(rec.range_basis)}")

for src in ["d[a]@1", "d[a]@1 * d[a]@2", "r[a]@1/2", "r[a]@1/2 * r[a]@3/2",
            "d[a]@1 * d[a]@2 * r[u]@1/2 * r[u]@3/2"]:
    val = evaluate(f"E({src})", ctx)
    print(f"E({src}) = {format_element(val, ctx) if val else '0'}")

# the observables are exactly the E-fixed points
for y in range(2):
    for x in range(2):
        w = wv_observable(F, y, x)
        fixed = rec.map(w.coeffs) == w.coeffs
        print(f"w_{G.name(y)} v_{G.name(x)}: {format_element(w, ctx)}  (E-fixed: {fixed})")
