"""Shared program corpus: named kernels plus seeded random affine nests.

Each entry carries >= 3 small concrete bindings (trip counts <= 8) for
oracle cross-validation, and symbolic-engine knobs sized so CLI runs stay
fast on the deeper random nests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

MATMUL = """\
params M, N, K;
array A[M, K];
array B[K, N];
array C[M, N];

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

STENCIL = """\
params N, T;
array A[N];
array B[N];

for t in 0 .. T {
  for i in 1 .. N - 1 {
    read A[i - 1];
    read A[i];
    read A[i + 1];
    write B[i];
  }
  for i in 1 .. N - 1 {
    read B[i];
    write A[i];
  }
}
"""

WALKTHROUGH = """\
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


@dataclass
class CorpusEntry:
    name: str
    source: str
    bindings: list[dict[str, int]]
    cli_args: list[str] = field(default_factory=list)


def _diag(params: list[str], values: list) -> list[dict[str, int]]:
    out = []
    for v in values:
        if isinstance(v, int):
            out.append({p: v for p in params})
        else:
            out.append(dict(zip(params, v)))
    return out


FIXED: list[CorpusEntry] = [
    CorpusEntry("matmul", MATMUL, _diag(["M", "N", "K"], [(2, 2, 2), (3, 4, 2), (4, 4, 4)])),
    CorpusEntry("stencil1d", STENCIL, _diag(["N", "T"], [(5, 2), (6, 3), (8, 2)])),
    CorpusEntry("walkthrough", WALKTHROUGH, _diag(["N", "M"], [(3, 3), (4, 5), (6, 4)])),
    CorpusEntry(
        "copy1d",
        "params N;\narray A[N];\narray B[N];\nfor i in 0 .. N {\n  read A[i];\n  write B[i];\n}\n",
        _diag(["N"], [3, 5, 8]),
    ),
    CorpusEntry(
        "stepped2",
        "params N;\narray A[N];\nfor i in 0 .. N step 2 {\n  read A[i];\n  read A[i + 1];\n}\n",
        _diag(["N"], [4, 6, 8, 7]),
    ),
    CorpusEntry(
        "stepped3_offset",
        "params N;\narray A[N];\nfor i in 1 .. N step 3 {\n  read A[i];\n}\nfor i in 0 .. N {\n  read A[i];\n}\n",
        _diag(["N"], [5, 7, 8]),
    ),
    CorpusEntry(
        "conditional_diag",
        "params N;\narray A[N, N];\nfor i in 0 .. N {\n  for j in 0 .. N {\n"
        "    if i == j {\n      read A[i, i];\n    } else {\n      read A[i, j];\n    }\n  }\n}\n",
        _diag(["N"], [3, 4, 5]),
    ),
    CorpusEntry(
        "conditional_band",
        "params N;\narray A[N];\narray B[N];\nfor i in 0 .. N {\n  for j in 0 .. N {\n"
        "    if i <= j && j < i + 3 {\n      read A[j];\n      write B[i];\n    }\n  }\n}\n",
        _diag(["N"], [3, 5, 6]),
    ),
    CorpusEntry(
        "conditional_guard_param",
        "params N, M;\narray A[N];\nfor i in 0 .. N {\n  if i < M {\n    read A[i];\n  }\n"
        "  read A[0];\n}\n",
        _diag(["N", "M"], [(4, 2), (5, 5), (6, 3)]),
    ),
    CorpusEntry(
        "triangular",
        "params N;\narray A[N];\nfor i in 0 .. N {\n  for j in 0 .. i {\n    read A[j];\n  }\n}\n",
        _diag(["N"], [3, 5, 7]),
    ),
    CorpusEntry(
        "affine_bounds",
        "params N;\narray A[N];\narray B[N];\nfor i in 1 .. N - 1 {\n  read A[i - 1];\n"
        "  read A[i + 1];\n  write B[i];\n}\n",
        _diag(["N"], [4, 6, 8]),
    ),
    CorpusEntry(
        "broadcast",
        "params N;\narray A[N];\nfor i in 0 .. N {\n  read A[0];\n  read A[i];\n}\n",
        _diag(["N"], [3, 5, 8]),
    ),
    CorpusEntry(
        "transpose",
        "params N, M;\narray A[N, M];\narray B[M, N];\nfor i in 0 .. N {\n  for j in 0 .. M {\n"
        "    read A[i, j];\n    write B[j, i];\n  }\n}\n",
        _diag(["N", "M"], [(3, 4), (4, 3), (5, 5)]),
    ),
    CorpusEntry(
        "floordiv_access",
        "params N;\narray A[N];\nfor i in 0 .. N {\n  read A[i / 2];\n}\n",
        _diag(["N"], [4, 6, 7]),
    ),
    CorpusEntry(
        "scalar_hot",
        "params N;\narray A[N, N];\narray S[1];\nfor i in 0 .. N {\n  for j in 0 .. N {\n"
        "    read A[i, j];\n    update S[0];\n  }\n}\n",
        _diag(["N"], [3, 4, 6]),
    ),
    CorpusEntry(
        "two_phases",
        "params N;\narray A[N];\nfor i in 0 .. N {\n  write A[i];\n}\nfor i in 0 .. N {\n"
        "  read A[N - 1 - i];\n}\n",
        _diag(["N"], [3, 5, 8]),
    ),
    CorpusEntry(
        "tensor4",
        "params N, M;\narray A[N, M];\narray B[M, N];\narray C[N, N];\n"
        "for b in 0 .. 2 {\n  for i in 0 .. N {\n    for j in 0 .. N {\n      for k in 0 .. M {\n"
        "        read A[i, k];\n        read B[k, j];\n        update C[i, j];\n      }\n    }\n  }\n}\n",
        _diag(["N", "M"], [(2, 3), (3, 2), (3, 3)]),
        cli_args=["--degree-bound", "2", "--sample-base", "3"],
    ),
    CorpusEntry(
        "neg_subscripts",
        "params N;\narray A[N];\nfor i in 0 .. N {\n  read A[i - 2];\n  read A[2 * i - N];\n}\n",
        _diag(["N"], [3, 5, 7]),
    ),
    CorpusEntry(
        "nested_if",
        "params N;\narray A[N];\narray B[N];\nfor i in 0 .. N {\n  for j in 0 .. N {\n"
        "    if i < j {\n      if j < i + 3 {\n        read A[j];\n      } else {\n"
        "        read B[j];\n      }\n    }\n  }\n}\n",
        _diag(["N"], [3, 5, 6]),
    ),
    CorpusEntry(
        "unit_extent",
        "params N;\narray A[1];\narray B[N];\nread A[0];\nfor i in 0 .. N {\n  read B[i];\n}\nread A[0];\n",
        _diag(["N"], [2, 4, 8]),
    ),
]


_ITERATORS = ["i", "j", "k", "l"]


def _random_subscript(rng: random.Random, iters: list[str], params: list[str]) -> str:
    pool = []
    if iters:
        v = rng.choice(iters)
        pool = [v, f"{v} + 1", f"{v} - 1", f"2 * {v}", f"{v} / 2"]
        if len(iters) >= 2:
            a, b = rng.sample(iters, 2)
            pool += [f"{a} + {b}", f"{a} - {b}"]
        pool.append(f"{rng.choice(params)} - 1 - {v}")
    pool.append(str(rng.randrange(3)))
    return rng.choice(pool)


def _random_condition(rng: random.Random, iters: list[str], params: list[str]) -> str:
    a = rng.choice(iters)
    choices = [f"{a} == 0", f"{a} > 1", f"{a} + 1 < {rng.choice(params)}"]
    if len(iters) >= 2:
        b = rng.choice([x for x in iters if x != a])
        choices += [f"{a} < {b}", f"{a} == {b}", f"{a} >= {b}"]
    n = rng.choice([1, 1, 2])
    return " && ".join(rng.sample(choices, min(n, len(choices))))


def _random_accesses(
    rng: random.Random, arrays: list[tuple[str, int]], iters: list[str], params: list[str]
) -> list[str]:
    out = []
    for _ in range(rng.randint(1, 3)):
        name, rank = rng.choice(arrays)
        subs = ", ".join(_random_subscript(rng, iters, params) for _ in range(rank))
        kind = rng.choice(["read", "read", "write", "update"])
        out.append(f"{kind} {name}[{subs}];")
    return out


def random_program(seed: int) -> str:
    rng = random.Random(seed)
    n_params = rng.choice([1, 1, 1, 2])
    params = ["N", "M"][:n_params]
    arrays = []
    for idx in range(rng.randint(1, 2)):
        rank = rng.choice([1, 1, 2])
        arrays.append((chr(ord("A") + idx), rank))
    depth = rng.randint(1, 4)

    lines = [f"params {', '.join(params)};"]
    for name, rank in arrays:
        extents = ", ".join(rng.choice(params) for _ in range(rank))
        lines.append(f"array {name}[{extents}];")
    lines.append("")

    iters: list[str] = []
    indent = ""
    for level in range(depth):
        it = _ITERATORS[level]
        lower = rng.choice(["0", "0", "1"])
        upper = rng.choice(params)
        if lower == "1" and rng.random() < 0.5:
            upper = f"{upper} - 1"
        if level > 0 and rng.random() < 0.25:
            lower = iters[-1]
        step = rng.choice([1, 1, 1, 2, 3])
        head = f"for {it} in {lower} .. {upper}"
        if step != 1:
            head += f" step {step}"
        lines.append(f"{indent}{head} {{")
        iters.append(it)
        indent += "  "

    body: list[str] = []
    if rng.random() < 0.4:
        cond = _random_condition(rng, iters, params)
        body.append(f"if {cond} {{")
        for a in _random_accesses(rng, arrays, iters, params):
            body.append(f"  {a}")
        if rng.random() < 0.5:
            body.append("} else {")
            for a in _random_accesses(rng, arrays, iters, params):
                body.append(f"  {a}")
        body.append("}")
    for a in _random_accesses(rng, arrays, iters, params):
        body.append(a)
    for line in body:
        lines.append(indent + line)

    for level in range(depth - 1, -1, -1):
        lines.append("  " * level + "}")
    return "\n".join(lines) + "\n"


def _random_entries(count: int = 10) -> list[CorpusEntry]:
    entries = []
    for seed in range(count):
        src = random_program(seed + 1)
        params = ["N", "M"] if "params N, M;" in src else ["N"]
        bindings = _diag(params, [4, 5, 6] if len(params) == 1 else [(4, 3), (5, 5), (3, 6)])
        deep = src.count("for ") >= 3
        args = ["--degree-bound", "2", "--sample-base", "4"] if deep else []
        entries.append(CorpusEntry(f"random{seed:02d}", src, bindings, cli_args=args))
    return entries


CORPUS: list[CorpusEntry] = FIXED + _random_entries(10)

BY_NAME = {e.name: e for e in CORPUS}
