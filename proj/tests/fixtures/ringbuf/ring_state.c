struct ring {
  int slots[64];
  unsigned head, tail, size;
};

struct ring rb_state;

void rb_clear(void) {
  for (unsigned i = 0; i < 64; ++i) rb_state.slots[i] = 0;
  rb_state.head = rb_state.tail = rb_state.size = 0;
}

/* Same name as matrix's init: only renaming lets both link into one binary. */
int init(void) {
  rb_clear();
  rb_state.slots[0] = 0x52494e47;
  return 1;
}
