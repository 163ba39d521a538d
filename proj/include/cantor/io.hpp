#pragma once

#include <string>

#include <json.hpp>

#include "cantor/certify.hpp"
#include "cantor/dynamics.hpp"
#include "cantor/solver.hpp"
#include "cantor/symbolic.hpp"

namespace cantor {

using Json = nlohmann::ordered_json;

// Reals travel as decimal strings so nothing is rounded through double.
Json real_json(const mp_real& x);
Json complex_json(const mp_complex& z);
mp_real real_from_json(const Json& j);
mp_complex complex_from_json(const Json& j);

Json spec_to_json(const MapSpec& spec);
// Rebuilds the spec at its stored precision; stored Q/R coefficients are reused as-is.
MapSpec spec_from_json(const Json& j);

Json solution_to_json(const CoefficientSolution& sol, int digits = 0);
Json parabolic_to_json(const ParabolicReport& rep);
Json critical_to_json(const CriticalReport& rep);
Json trap_to_json(const std::string& name, const TrapReport<mp_real>& rep);

// Parabolic, critical and trap certificates of one spec in a single document.
struct CertificateBundle {
  Json document;
  bool passed = false;
};
CertificateBundle certify_all(const MapSpec& spec, int samples = 512);

std::string curve_to_csv(const ComponentCurve& curve);
ComponentCurve curve_from_csv(const std::string& text);
Json curve_to_json(const ComponentCurve& curve, std::optional<double> turning = std::nullopt);

std::string read_text(const std::string& path);
// Byte-exact write; IO failures surface as std::runtime_error with the system message.
void write_text(const std::string& path, const std::string& content);
std::string dump(const Json& j);

}  // namespace cantor
