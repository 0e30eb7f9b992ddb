"""Closed-form reuse formulas by sampling and exact interpolation.

The engine runs the exact analysis on a grid of bindings, groups warm
accesses into structural classes, and fits each class's reuse distance
and multiplicity as polynomials (quasi-polynomials when loop steps or
cache geometry introduce residue dependence). Every fit is checked by
exact integer equality on held-out bindings before it is reported.

Run: python demos/05_symbolic_formulas.py
"""

from loopdmd import SymbolicConfig, analyze_concrete, analyze_symbolic, check_source
from loopdmd import formula as fx

NESTED = """\
params N, M;
array A[N, M];
array B[M];

for i in 0 .. N {
  for j in 0 .. M {
    read A[i, j];
    read B[j];
  }
}
"""

v = check_source(NESTED)
dist = analyze_symbolic(v)

print("=== fitted access counts ===")
print(f"  n_total = {fx.render_plain(dist.n_total.to_formula())}")
print(f"  n_warm  = {fx.render_plain(dist.n_warm.to_formula())}")
print(f"  n_cold  = {fx.render_plain(dist.n_cold.to_formula())}")

print("\n=== reuse classes ===")
for g in dist.groups:
    tag = "scaling" if g.scaling else "diagnostic"
    print(f"  [{tag}] {g.source_label} after {g.pred_label} (carrier dim {g.key.carrier})")
    print(f"      rd = {fx.render_plain(g.rd_formula())}")
    print(f"      multiplicity = {fx.render_plain(g.mult_formula())}")

held_out = {"N": 9, "M": 7}
_, concrete = analyze_concrete(v, held_out)
print(f"\n=== held-out check at {held_out} ===")
print(f"  formula n_total = {dist.n_total.evaluate(held_out)}, exact = {concrete.n_total}")
print(f"  formula n_cold  = {dist.n_cold.evaluate(held_out)}, exact = {concrete.n_cold}")

STEPPED = "params N;\narray A[N];\nfor i in 0 .. N step 2 {\n  read A[i];\n}\n"
v2 = check_source(STEPPED)
dist2 = analyze_symbolic(v2, config=SymbolicConfig(base=12))
print("\n=== stepped loop: the count ceil(N/2) is a quasi-polynomial ===")
print(f"  n_total = {fx.render_plain(dist2.n_total.to_formula())}")
for n in (10, 11):
    _, c = analyze_concrete(v2, {"N": n})
    print(f"  N={n}: formula {dist2.n_total.evaluate({'N': n})}, exact {c.n_total}")
