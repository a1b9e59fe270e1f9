void multi() {
  x = x + y;
  z = y;
  a = 42;
}
