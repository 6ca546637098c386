#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "itjulia/apps.hpp"
#include "itjulia/contour.hpp"
#include "itjulia/core.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/geometry.hpp"
#include "itjulia/plseq.hpp"

namespace itj {

using json = nlohmann::json;

/// Sequence description:
/// {"kind": "explicit-prefix-with-periodic-tail" | "builtin-thm72" |
///  "builtin-thm72-limit", "bounds": {"d", "K", "M"}, "prefix": [...],
///  "tail": [...], "n": int}. A polynomial is a list of coefficients in
/// ascending order, each a number or an [re, im] pair.
SequenceSpec sequence_from_json(const json& j);
json sequence_to_json(const SequenceSpec& seq);
/// Parses a JSON file; InputError names the failing line and column.
json read_json_file(const std::string& path);
/// Reads and parses a sequence file; InputError messages name the line or
/// the offending field.
SequenceSpec read_sequence_file(const std::string& path);

/// Polynomial-like sequence description:
/// {"from_sequence": <sequence>, "rho": real, "horizon": int}
struct PLSpec {
  SequenceSpec sequence;
  double rho = 0.0;
  int horizon = 0;
};
PLSpec pl_spec_from_json(const json& j);

json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j, const std::string& where);

/// Binary PGM: 255 inside the filled set, 255 * steps / depth elsewhere.
void write_pgm(const std::string& path, const JuliaApprox& ja);
std::vector<std::uint8_t> pgm_bytes(const JuliaApprox& ja);

/// CSV with a "# closed=<bool>" header comment and re,im rows.
void write_curve_csv(const std::string& path, const Curve& curve);

void write_json(const std::string& path, const json& j);

json components_to_json(const std::vector<ComponentInfo>& comps);
json thm72_row_to_json(const Thm72Row& row);
json pl_report_to_json(const PLReport& rep);
json turning_to_json(const TurningReport& rep);
json separation_to_json(const SeparationResult& sep);

}  // namespace itj
