#pragma once

// JSON serialization of reports. Every top-level report carries the library
// version and the grid resolution it was computed on.

#include <json.hpp>
#include <string>

#include "zeropack/dbar.hpp"
#include "zeropack/lattice_sigma.hpp"
#include "zeropack/optimize.hpp"

namespace zeropack {

using Json = nlohmann::ordered_json;

/// Library version, "MAJOR.MINOR.PATCH[+gHASH]".
const char* version();

/// [[re, im], ...] in increasing degree.
Json polynomial_to_json(const ComplexPolynomial& p);
/// Accepts [[re, im], ...], a bare list of reals, or an object with a
/// "coefficients" (or "minimizer") member holding either. Throws
/// InvalidArgumentError on anything else.
ComplexPolynomial polynomial_from_json(const Json& j);

Json to_json(const DensityReport& report);
Json to_json(const MinimizeResult& result, int degree_bound, const OptimizerConfig& config);
Json to_json(const GapReport& report);
Json to_json(const CorrectionResult& result, const CutoffSpec& cutoff, Geometry geometry, double param);
Json to_json(const CellAverage& average, double theta, double beta, Resolution resolution);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace zeropack
