"""Walk through the DSL frontend: tokens, AST, validation, diagnostics.

Run: python demos/01_parse_and_inspect.py
"""

from loopdmd import (
    ValidationError,
    check_source,
    parse_source,
    render_program,
    tokenize,
)

MATMUL = """\
params M, N, K;
array A[M, K];
array B[K, N];
array C[M, N];

// classic triple loop
for i in 0 .. M {
  for j in 0 .. N {
    for k in 0 .. K {
      read C[i, j];
      read A[i, k];
      read B[k, j];
      write C[i, j];
    }
  }
}
"""

print("=== tokens of the loop header ===")
for tok in tokenize("for i in 0 .. M step 2 {"):
    print(f"  {tok.kind.value:16} {tok.text!r}  span {tok.start}..{tok.end}")

print("\n=== parsed and validated ===")
program = check_source(MATMUL)
print(f"  params: {program.params}")
print(f"  arrays: {[(a.name, len(a.extents)) for a in program.arrays]}")
print(f"  access statements: {program.access_count}, loop depth: {program.max_loop_depth}")

print("\n=== pretty-printed back to source ===")
print(render_program(parse_source(MATMUL)))

print("=== diagnostics: everything wrong is reported at once ===")
BROKEN = """\
params N, N;
array A[N, N];
for i in 0 .. N {
  for i in 0 .. N {
    read A[i];
    read B[i * i];
  }
}
"""
try:
    check_source(BROKEN)
except ValidationError as e:
    for d in e.diagnostics:
        print(f"  {d}")
