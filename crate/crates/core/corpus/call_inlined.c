// The caller in call.c with its call inlined by hand.
int foo(int X1, int X2) {
  int X3, X4;
  X2 = X1 + X1;
  X3 = X2;
  X4 = X2;
  while (X4 < X3) {
    X4 = X3 + X3;
  }
  X1 = X4;
}
