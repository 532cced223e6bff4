// A caller and its callee, analyzed with the call rule.
int f(int X1, int X2) {
  while (X2 < X1) {
    X2 = X1 + X1;
  }
  return X2;
}

int foo(int X1, int X2) {
  X2 = X1 + X1;
  X1 = f(X2, X2);
}
