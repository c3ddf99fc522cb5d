/* Fixed-capacity ring buffer; state lives in ring_state.c. */

struct ring {
  int slots[64];
  unsigned head, tail, size;
};

extern struct ring rb_state;

static __attribute__((noinline)) unsigned rb_index(unsigned i) { return i & 63u; }

int rb_push(int v) {
  if (rb_state.size == 64) return -1;
  rb_state.slots[rb_index(rb_state.tail)] = v;
  rb_state.tail = rb_index(rb_state.tail + 1);
  ++rb_state.size;
  return 0;
}

int rb_pop(int *out) {
  if (rb_state.size == 0) return -1;
  if (out) *out = rb_state.slots[rb_index(rb_state.head)];
  rb_state.head = rb_index(rb_state.head + 1);
  --rb_state.size;
  return 0;
}
