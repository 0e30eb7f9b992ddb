"""Cache-line blocking and set-associative tagging.

With a block size B, the last subscript is replaced by its cache-line
index floor(d/B): accesses to the same line become the same data point,
so spatial locality shows up as shorter reuse distances. With S sets, the
set index d mod S is appended, splitting elements across cache sets.

Run: python demos/04_cache_geometry.py
"""

from loopdmd import analyze_concrete, build_access_map, check_source, dmd_numeric, dump_access_map

SWEEP = """\
params N;
array A[N];
for t in 0 .. 2 {
  for i in 0 .. N {
    read A[i];
  }
}
"""

v = check_source(SWEEP)
binding = {"N": 16}

print("=== repeated sweep over A[0..N) ===")
for B in (1, 2, 4, 8):
    _, dist = analyze_concrete(v, binding, block_size=B)
    print(
        f"  B={B}: n_cold={dist.n_cold:>3}  groups={dist.groups}"
        f"  DMD={dmd_numeric(dist):8.3f}"
    )
print("  -> larger lines mean fewer cold misses and shorter re-sweep distances")

print("\n=== the access map shows the blocked subscript ===")
print(dump_access_map(build_access_map(v, block_size=4)))

print("=== set tagging appends d mod S ===")
print(dump_access_map(build_access_map(v, block_size=1, num_sets=2)))

_, base = analyze_concrete(v, binding)
_, tagged = analyze_concrete(v, binding, num_sets=2)
print(f"  S=1 distribution: {base.groups}")
print(f"  S=2 distribution: {tagged.groups}")
print("  (set tagging alone never merges elements, it only refines them)")
