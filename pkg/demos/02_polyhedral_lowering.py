"""Lowering to timestamp spaces and access maps.

Every loop becomes an ordinal dimension, every multi-statement block a
selector dimension, and conditionals become per-branch guards. Points in
lexicographic order are exactly the program's accesses in execution order.

Run: python demos/02_polyhedral_lowering.py
"""

from loopdmd import (
    build_access_map,
    build_timestamp_space,
    check_source,
    dump_access_map,
    dump_space,
    enumerate_points,
    evaluate_access,
)

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
space = build_timestamp_space(v)
print("=== timestamp space ===")
print(dump_space(space))

amap = build_access_map(v)
print("=== access map ===")
print(dump_access_map(amap))

binding = {"N": 2, "M": 2}
print(f"=== enumeration at {binding}: lexicographic = execution order ===")
for point in enumerate_points(space, binding):
    dp = evaluate_access(amap, point, binding)
    print(f"  {point} -> array {dp.array_id}, subscripts {dp.subscripts}")

STEPPED = """\
params N;
array A[2 * N];
for i in 1 .. N step 2 {
  read A[i];
}
"""
v2 = check_source(STEPPED)
print("\n=== stepped loop: ordinal o encodes iteration count, i = 2*o + 1 ===")
print(dump_access_map(build_access_map(v2)))

GUARDED = """\
params N;
array A[N];
array B[N];
for i in 0 .. N {
  for j in 0 .. N {
    if i == j {
      read A[i];
    } else {
      read B[j];
    }
  }
}
"""
v3 = check_source(GUARDED)
print("=== conditional branches become guards ===")
print(dump_space(build_timestamp_space(v3)))
