/* In-place integer sorting and search. */

static __attribute__((noinline)) void gap_insert(int *a, long n, long gap) {
  for (long i = gap; i < n; ++i) {
    int v = a[i];
    long j = i;
    while (j >= gap && a[j - gap] > v) {
      a[j] = a[j - gap];
      j -= gap;
    }
    a[j] = v;
  }
}

static __attribute__((noinline)) void sift_down(int *a, long start, long end) {
  long root = start;
  while (2 * root + 1 <= end) {
    long child = 2 * root + 1, swap = root;
    if (a[swap] < a[child]) swap = child;
    if (child + 1 <= end && a[swap] < a[child + 1]) swap = child + 1;
    if (swap == root) return;
    int t = a[root];
    a[root] = a[swap];
    a[swap] = t;
    root = swap;
  }
}

void sort_insertion(int *a, long n) { gap_insert(a, n, 1); }

void sort_shell(int *a, long n) {
  static const long gaps[] = {701, 301, 132, 57, 23, 10, 4, 1};
  for (unsigned g = 0; g < sizeof gaps / sizeof gaps[0]; ++g) gap_insert(a, n, gaps[g]);
}

void sort_heap(int *a, long n) {
  for (long start = (n - 2) / 2; start >= 0; --start) sift_down(a, start, n - 1);
  for (long end = n - 1; end > 0; --end) {
    int t = a[0];
    a[0] = a[end];
    a[end] = t;
    sift_down(a, 0, end - 1);
  }
}

long bsearch_int(const int *a, long n, int key) {
  long lo = 0, hi = n - 1;
  while (lo <= hi) {
    long mid = lo + (hi - lo) / 2;
    if (a[mid] == key) return mid;
    if (a[mid] < key) lo = mid + 1;
    else hi = mid - 1;
  }
  return -1;
}
