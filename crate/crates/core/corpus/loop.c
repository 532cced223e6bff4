// Bounded iteration: X2 grows by X1 on each of X3 rounds.
int loop_add(int X1, int X2, int X3) {
  loop X3 {
    X2 = X1 + X2;
  }
  return X2;
}
