#pragma once

#include <type_traits>

#include "cantor/scalar.hpp"

namespace cantor {

// Forward-mode dual number: value and first derivative carried together.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(const T& value, const T& derivative) : v(value), d(derivative) {}
  template <class U, std::enable_if_t<std::is_constructible_v<T, const U&> && !std::is_same_v<U, Dual>, int> = 0>
  Dual(const U& value) : v(T(value)), d(T(0)) {}

  static Dual variable(const T& x) { return Dual(x, T(1)); }

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    T inv = T(1) / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.v, -a.d); }
};

template <class R>
using DualComplex = Dual<Complex<R>>;
template <class R>
using DualReal = Dual<R>;

template <class T>
const T& value_of(const Dual<T>& x) { return x.v; }
template <class T>
const T& value_of(const T& x) { return x; }

template <class R>
R modulus(const Complex<R>& z) { using std::abs; return abs(z); }
template <class R>
R modulus(const DualComplex<R>& z) { using std::abs; return abs(z.v); }

}  // namespace cantor
