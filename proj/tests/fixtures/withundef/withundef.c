/* Five exports; broken_fn needs a symbol nothing provides. */

extern int missing_external_symbol(int);

static __attribute__((noinline)) int wu_scale(int x) { return x * 7 + 3; }

int wu_first(int x) { return wu_scale(x) ^ 0x55; }
int wu_second(int x) { return wu_scale(x + 1) - 9; }
int wu_third(int x) { return (x << 2) | (x >> 3); }
int wu_fourth(int x) { return wu_third(x) + wu_first(x); }
int broken_fn(int x) { return missing_external_symbol(x) + 1; }
