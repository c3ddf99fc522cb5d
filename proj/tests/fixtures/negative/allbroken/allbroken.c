extern int not_provided_anywhere(int);
extern int also_not_provided(void);

int ab_one(int x) { return not_provided_anywhere(x); }
int ab_two(void) { return also_not_provided() + 1; }
