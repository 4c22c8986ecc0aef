#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <mutex>
#include <string>
#include <type_traits>

namespace factoria {

using Real = boost::multiprecision::mpfr_float;

// MPFR default precision is process-global. Every high-precision evaluation
// runs under this guard, which serializes evaluators across threads and
// restores the previous precision on exit. Re-entrant.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(int digits10);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned previous_;
};

// Decimal rendering with `digits` significant digits.
std::string to_decimal(const Real& x, int digits);

// Number of correct significant digits implied by |radius| relative to |value|.
int certified_digits(const Real& value, const Real& radius);

// Truncated Taylor jet (f, f', f'') of a function of one real variable.
// Forward-mode arithmetic through second order.
template <class T>
struct Jet {
  T v{0};
  T d1{0};
  T d2{0};

  static Jet constant(const T& c) { return Jet{c, T(0), T(0)}; }
  static Jet variable(const T& x) { return Jet{x, T(1), T(0)}; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    d1 -= o.d1;
    d2 -= o.d2;
    return *this;
  }
  Jet& operator*=(const T& c) {
    v *= c;
    d1 *= c;
    d2 *= c;
    return *this;
  }
  const T& operator[](int order) const { return order == 0 ? v : (order == 1 ? d1 : d2); }
};

template <class T>
Jet<T> operator+(Jet<T> a, const Jet<T>& b) { return a += b; }
template <class T>
Jet<T> operator-(Jet<T> a, const Jet<T>& b) { return a -= b; }
template <class T>
Jet<T> operator-(const Jet<T>& a) { return Jet<T>{-a.v, -a.d1, -a.d2}; }
template <class T>
Jet<T> operator*(Jet<T> a, const std::type_identity_t<T>& c) { return a *= c; }
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return Jet<T>{a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2};
}
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  T q = a.v / b.v;
  T q1 = (a.d1 - q * b.d1) / b.v;
  T q2 = (a.d2 - 2 * q1 * b.d1 - q * b.d2) / b.v;
  return Jet<T>{q, q1, q2};
}
template <class T>
Jet<T> exp(const Jet<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return Jet<T>{e, a.d1 * e, (a.d2 + a.d1 * a.d1) * e};
}
template <class T>
Jet<T> log(const Jet<T>& a) {
  using std::log;
  return Jet<T>{log(a.v), a.d1 / a.v, (a.d2 * a.v - a.d1 * a.d1) / (a.v * a.v)};
}

}  // namespace factoria
