export interface Preset {
  name: string;
  label: string;
  source: string;
}

export const PRESETS: Preset[] = [
  {
    name: 'matmul',
    label: 'Matrix multiplication',
    source: `params M, N, K;
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
`,
  },
  {
    name: 'stencil',
    label: '1D Jacobi stencil',
    source: `params N, T;
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
`,
  },
  {
    name: 'nested-reuse',
    label: 'Nested loop with reuse',
    source: `params N, M;
array A[N, M];
array B[M];

for i in 0 .. N {
  for j in 0 .. M {
    read A[i, j];
    read B[j];
  }
}
`,
  },
];

export function presetByName(name: string): Preset | undefined {
  return PRESETS.find((p) => p.name === name);
}
