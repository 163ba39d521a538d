#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <type_traits>

#include "cantor/errors.hpp"

namespace cantor {

namespace bmp = boost::multiprecision;

// MPFR-backed real with run-time precision and no expression templates, so it
// behaves like a plain value type inside std::complex and Eigen.
using mp_real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

template <class R>
using Complex = std::complex<R>;
using mp_complex = Complex<mp_real>;

template <class R>
inline constexpr bool is_mp_v = std::is_same_v<R, mp_real>;

struct PrecisionContext {
  int significant_digits = 50;

  void validate() const {
    if (significant_digits < 15)
      throw ConstraintViolated("precision must be at least 15 significant digits, got " +
                               std::to_string(significant_digits));
  }
  bool solver_capable() const { return significant_digits >= 40; }

  // CANTOR_PRECISION overrides the fallback when set.
  static PrecisionContext from_env(int fallback = 50) {
    PrecisionContext p{fallback};
    if (const char* env = std::getenv("CANTOR_PRECISION")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0') throw ParseError("CANTOR_PRECISION is not an integer: " + std::string(env));
      p.significant_digits = static_cast<int>(v);
    }
    p.validate();
    return p;
  }
};

// Sets the working precision of newly created mp_real values for its lifetime.
// The MPFR default precision is process-wide, so set it before spawning workers.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(int digits) : saved_(mp_real::default_precision()) {
    mp_real::default_precision(static_cast<unsigned>(digits));
  }
  explicit ScopedPrecision(const PrecisionContext& p) : ScopedPrecision(p.significant_digits) {}
  ~ScopedPrecision() { mp_real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

template <class To, class From>
To real_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (is_mp_v<From>) {
    return x.template convert_to<To>();
  } else if constexpr (is_mp_v<To>) {
    return To(x);
  } else {
    return static_cast<To>(x);
  }
}

template <class To, class From>
Complex<To> complex_cast(const Complex<From>& z) {
  return Complex<To>(real_cast<To>(z.real()), real_cast<To>(z.imag()));
}

template <class R>
R parse_real(const std::string& text) {
  if (text.empty()) throw ParseError("empty decimal string");
  if constexpr (is_mp_v<R>) {
    try {
      return mp_real(text);
    } catch (const std::exception&) {
      throw ParseError("not a decimal number: '" + text + "'");
    }
  } else {
    char* end = nullptr;
    long double v = std::strtold(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') throw ParseError("not a decimal number: '" + text + "'");
    return static_cast<R>(v);
  }
}

// Scientific decimal string; `digits` significant digits (0 means round-trip digits).
template <class R>
std::string to_decimal(const R& x, int digits = 0) {
  if constexpr (is_mp_v<R>) {
    int d = digits > 0 ? digits : static_cast<int>(mp_real::default_precision()) + 2;
    if (x == 0) return "0";
    return x.str(d, std::ios_base::scientific);
  } else {
    int d = digits > 0 ? digits : std::numeric_limits<R>::max_digits10;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Le", d - 1, static_cast<long double>(x));
    return buf;
  }
}

template <class R>
R pi() {
  using std::acos;
  return acos(R(-1));
}

template <class R>
R epsilon() {
  return std::numeric_limits<R>::epsilon();
}

template <class R>
Complex<R> cis(const R& theta) {
  using std::cos;
  using std::sin;
  return Complex<R>(cos(theta), sin(theta));
}

// Integer power by repeated squaring; works for reals, complexes and duals.
template <class T>
T ipow(T x, long k) {
  if (k < 0) return T(1) / ipow(x, -k);
  T result(1);
  while (k > 0) {
    if (k & 1) result = result * x;
    k >>= 1;
    if (k) x = x * x;
  }
  return result;
}

// Real power with an exact rational exponent p/q evaluated at working precision.
template <class R>
R rational_pow(const R& base, long p, long q) {
  using std::pow;
  return pow(base, R(p) / R(q));
}

template <class R>
bool finite(const Complex<R>& z) {
  using std::isfinite;
  if constexpr (is_mp_v<R>)
    return boost::multiprecision::isfinite(z.real()) && boost::multiprecision::isfinite(z.imag());
  else
    return isfinite(z.real()) && isfinite(z.imag());
}

}  // namespace cantor
