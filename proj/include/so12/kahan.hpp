#pragma once

namespace so12 {

// compensated summation; T is double or std::complex<double>
template <class T>
struct Kahan {
  T sum{};
  T c{};
  void add(T x) {
    T y = x - c;
    T t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace so12
