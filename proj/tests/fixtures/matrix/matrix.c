/* 4x4 integer matrix kernels. */

static int mat_identity[16] = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
static int mat_scratch[16];

static __attribute__((noinline)) int dot(const int *row, const int *m, int col) {
  int s = 0;
  for (int k = 0; k < 4; ++k) s += row[k] * m[k * 4 + col];
  return s;
}

static __attribute__((noinline)) int det3(const int *m, int skip_col) {
  int c[3], n = 0;
  for (int j = 0; j < 4; ++j)
    if (j != skip_col) c[n++] = j;
  const int *r1 = m + 4, *r2 = m + 8, *r3 = m + 12;
  return r1[c[0]] * (r2[c[1]] * r3[c[2]] - r2[c[2]] * r3[c[1]]) -
         r1[c[1]] * (r2[c[0]] * r3[c[2]] - r2[c[2]] * r3[c[0]]) +
         r1[c[2]] * (r2[c[0]] * r3[c[1]] - r2[c[1]] * r3[c[0]]);
}

void mat_mul(int *out, const int *a, const int *b) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mat_scratch[i * 4 + j] = dot(a + i * 4, b, j);
  for (int i = 0; i < 16; ++i) out[i] = mat_scratch[i];
}

int mat_det(const int *m) {
  int d = 0;
  for (int j = 0; j < 4; ++j) {
    int term = m[j] * det3(m, j);
    d += (j & 1) ? -term : term;
  }
  return d;
}

void mat_transpose(int *m) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      int t = m[i * 4 + j];
      m[i * 4 + j] = m[j * 4 + i];
      m[j * 4 + i] = t;
    }
}

/* Same name as ringbuf's init. */
int init(void) {
  int tmp[16];
  mat_mul(tmp, mat_identity, mat_identity);
  return tmp[0];
}
