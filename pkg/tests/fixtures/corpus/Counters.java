class Counters {
  int total;

  int sum(int[] values, int n) {
    int acc = 0;
    for (int i = 0; i < n; i++) {
      acc += values[i];
    }
    return acc;
  }

  int sumSquares(int[] values, int n) {
    int acc = 0;
    for (int i = 0; i < n; i++) {
      acc += values[i] * values[i];
    }
    return acc;
  }

  int countPositive(int[] values, int n) {
    int count = 0;
    for (int i = 0; i < n; i++) {
      if (values[i] > 0) {
        count++;
      }
    }
    return count;
  }

  int countZero(int[] values, int n) {
    int num = 0;
    for (int i = 0; i < n; i++) {
      if (values[i] == 0) {
        num++;
      }
    }
    return num;
  }

  int product(int[] values, int n) {
    int result = 1;
    for (int k = 0; k < n; k++) {
      result = result * values[k];
    }
    return result;
  }

  void addAll(int[] values, int n) {
    for (int j = 0; j < n; j++) {
      total = total + values[j];
    }
  }
}
