#pragma once

#include <string>

#include <json.hpp>

namespace reconn {

// Machine-readable invariant checks: suites "autodiff", "geometry",
// "exact-solutions", "eigen". Each check carries the measured value and its
// threshold; "pass" aggregates the suite.
nlohmann::json verify_suite(const std::string& suite);

}  // namespace reconn
