// Independent choices in the two branches of a conditional.
int foo(int X1, int X2, int X3) {
  if (X1 == 1) {
    X1 = X1 + X2;
  } else {
    X1 = X1 - X3;
  }
  return X1;
}
