#pragma once
// Exact oracle: exhaustive enumeration over the 2^n equiprobable sign paths
// of a (optionally scaled) Rademacher sequence.  Produces the exact
// population of any max functional, so probabilities and moments carry no
// sampling error.  Capped at n <= 22 (about 4.2M paths).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hrlab/stats.hpp"

namespace hrlab {

inline constexpr std::size_t kExactEnumerationCap = 22;

// Base value of `spec` for every sign pattern; increments are
// x_i = +-scale_i (scale_i = 1 when scale is empty).  Order: pattern bits of
// the path index, bit i = sign of x_{i+1}.
[[nodiscard]] std::vector<double> rademacher_base_values(std::size_t n, const MaxSpec& spec,
                                                         std::span<const double> scale = {});

// Exact statistics (degenerate CIs, exact=true) computed from the full
// population.
[[nodiscard]] StatBundle exact_rademacher_stats(std::size_t n, const MaxSpec& spec,
                                                std::optional<double> moment_r,
                                                const std::vector<double>& epsilons,
                                                std::span<const double> scale = {});

}  // namespace hrlab
