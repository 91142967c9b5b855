#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "cardcsp/scalar.hpp"
#include "cardcsp/solver.hpp"
#include "cardcsp/spectra.hpp"

namespace cardcsp::report {

using Json = nlohmann::ordered_json;

// {"exact": "a/b", "float": x}
Json number(const Rational& value);
Json number(const QuadScalar& value);

Json assignment(const Assignment& a);
Json variables(const std::vector<std::uint32_t>& vars);
Json polynomial(const MultilinearPoly& f);

Json kernel_report(const KernelReport& report);
Json verdict(const Verdict& verdict);
Json eigen_summary(const EigenSummary& summary);

// Adds "schema": 1 and the command name ahead of the body.
Json document(const char* command, const Json& body);

}  // namespace cardcsp::report
