#pragma once

// Config parsing and the JSON/CSV emitters shared by the CLI and the tests.
// Reals are written with 9 significant digits.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmglab/charroots.hpp"
#include "fmglab/crossings.hpp"
#include "fmglab/dynamics.hpp"

namespace fmg {

/// Flat object {p, q, r, alpha, variant, d, k}; variant is "one_term" or "two_term"
/// and defaults to two_term when d is present. Throws Error(InvalidSpec).
[[nodiscard]] ModelSpec parse_model(std::string_view json_text);
[[nodiscard]] ModelSpec load_model(const std::string& path);
[[nodiscard]] std::string model_to_json(const ModelSpec& spec);

/// "%.9g"
[[nodiscard]] std::string format_real(double v);

/// {"tag": ..., "tau_star": ... (SSR only), "s1": [...], "s2": [...]} plus "x_star"
/// when given.
[[nodiscard]] std::string verdict_to_json(const StabilityVerdict& v, std::optional<double> x_star = std::nullopt);
[[nodiscard]] StabilityVerdict verdict_from_json(std::string_view json_text);

/// [{"re": ..., "im": ..., "residual": ...}, ...]
[[nodiscard]] std::string roots_to_json(const RootReport& rep);

/// Header t,x[,y]; every stride-th node.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, std::size_t stride = 1);
/// Header only, for empty time ranges.
void write_trajectory_header(std::ostream& os, bool two_term);

/// a1,c,verdict,tau_star,first_s1,first_s2; absent values are left empty and cells
/// that failed carry the error code in the verdict column.
void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows);

/// tau,tag,value: one row per settled peak, the limit for ConvergesTo, an empty
/// value with tag Diverged for runs that blew up.
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

}  // namespace fmg
