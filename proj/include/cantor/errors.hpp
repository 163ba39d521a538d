#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Base of every failure raised by the library. `kind()` is a stable tag used in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CANTOR_ERROR(Name)                                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}          \
  };

CANTOR_ERROR(NonConvergence)
CANTOR_ERROR(DerivativeUnderflow)
CANTOR_ERROR(SingularJacobian)
CANTOR_ERROR(ConstraintViolated)
CANTOR_ERROR(DegenerateDenominator)
CANTOR_ERROR(CertificateFailed)
CANTOR_ERROR(ContinuationBreakdown)
CANTOR_ERROR(SeedNotFound)
CANTOR_ERROR(OutOfBand)
CANTOR_ERROR(OrbitEscaped)
CANTOR_ERROR(Undecidable)
CANTOR_ERROR(DegenerateCurve)
CANTOR_ERROR(Unsupported)
CANTOR_ERROR(ParseError)

#undef CANTOR_ERROR

}  // namespace cantor
