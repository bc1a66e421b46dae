#pragma once
// SLLN rate harness: path-wise validation of the abstract strong laws, the
// rate envelopes, the logarithmic-normalization SLLN, and the
// Marcinkiewicz-Zygmund truncation machinery.
//
// Almost-sure statements are operationalized as quantile trends over path
// ensembles with doubling horizons: a decay verdict requires each reported
// quantile (median-only for the heavy-tailed MZ statistic and the
// log-normalized statistic) to shrink across the grid by a configured
// factor, a boundedness verdict caps the growth between the last two grid
// points.  These are desk-scale surrogates, never proofs.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hrlab/envelope.hpp"
#include "hrlab/ensemble.hpp"
#include "hrlab/models.hpp"
#include "hrlab/sequences.hpp"
#include "hrlab/verify.hpp"

namespace hrlab {

enum class TrendVerdict { Decaying, NotDecaying, Bounded, Unbounded, NotApplicable };

[[nodiscard]] std::string to_string(TrendVerdict v);

struct RateCfg {
    std::vector<double> levels{0.5, 0.9, 0.99};  // quantile levels, ascending
    double decay_factor = 2.0;       // required q(n_1)/q(n_G) for Decaying
    double growth_tolerance = 0.10;  // allowed relative growth for Bounded
};

struct RateCheckReport {
    std::string check_id;
    std::string model_id;
    std::vector<std::size_t> grid;  // strictly increasing horizons
    std::vector<double> levels;
    // quantile rows indexed [level][grid point]
    std::vector<std::vector<double>> primary;
    std::vector<std::vector<double>> secondary;  // empty unless the op defines one
    std::string primary_label;
    std::string secondary_label;
    TrendVerdict verdict = TrendVerdict::NotApplicable;
    TrendVerdict secondary_verdict = TrendVerdict::NotApplicable;
    std::string note;  // names the horizon and any precondition diagnosis
};

// Quantiles of |S_n / b_n| on the grid.  Precondition (gate, not error): the
// scheme's series sum alpha_l / b_l^r must be certified convergent;
// otherwise the report comes back NotApplicable with the diagnosis quoted.
// Decaying iff every quantile row shrinks by cfg.decay_factor from n_1 to n_G.
[[nodiscard]] RateCheckReport slln_decay(const EnsembleSpec& ens, const BoundScheme& scheme,
                                         const NormalizerSequence& b,
                                         const std::vector<std::size_t>& grid,
                                         const RateCfg& cfg = {});

// Quantiles of the running sup_{n_1 <= k <= n} |S_k| / beta_k.  Bounded iff
// the quantile row at level ~0.9 grows by less than cfg.growth_tolerance
// between the last two grid points.  Throws when the envelope horizon is
// shorter than the grid.
[[nodiscard]] RateCheckReport rate_envelope_check(const EnsembleSpec& ens,
                                                  const RateEnvelope& envelope,
                                                  const std::vector<std::size_t>& grid,
                                                  const RateCfg& cfg = {});

// T_n = (1/log n) sum_{k<=n} X_k / k (analytic centering; all models here are
// zero-mean).  Primary row: |T_n| with a median strictly-decreasing Decaying
// verdict; secondary row: (log n)^delta |T_n| with a Bounded trend verdict.
// Requires 0 <= delta < 1/2 and grid starting at n >= 2.
[[nodiscard]] RateCheckReport log_slln_check(const EnsembleSpec& ens, double delta,
                                             const std::vector<std::size_t>& grid,
                                             const RateCfg& cfg = {});

// Truncations at level k^{1/p} (k = first_index, first_index+1, ...):
//   y_k = clamp(x_k, +-k^{1/p})        (clipped)
//   z_k = x_k when |x_k| <= k^{1/p} else 0   (zeroed)
struct TruncationTriple {
    std::vector<double> y;
    std::vector<double> z;
    double p = 1.0;
};
[[nodiscard]] TruncationTriple truncate(std::span<const double> x, double p,
                                        std::size_t first_index = 1);

// G(y) = sup_{n <= n_window} (1/n) sum_{k<=n} P(|X_k| > y); for the identical
// marginals used here this is exactly the single-variable tail, so n_window
// is recorded but does not change the values.
struct GFunction {
    std::vector<double> y;
    std::vector<double> g;
    std::size_t n_window = 1;
};
[[nodiscard]] GFunction g_function(const MarginalSpec& marginal, std::vector<double> y_grid,
                                   std::size_t n_window = 1);

// Both halves of the integrability condition
//   integral_0^inf y^{p-1} G(y) dy < inf   and   sum_k P(|X_k|^p > k) < inf.
// For identical marginals the integral equals E|X|^p / p exactly; the sum is
// accumulated to `horizon` with an analytic tail majorant per marginal
// family (+inf recorded when the series provably diverges).
struct PMomentReport {
    double p = 0.0;
    double integral_value = 0.0;  // E|X|^p / p; +inf when the moment is infinite
    bool integral_converges = false;
    double sum_partial = 0.0;
    double sum_tail_bound = 0.0;  // +inf when divergent
    bool sum_converges = false;
    bool holds = false;  // both conditions
    std::string detail;  // names the failing condition, if any
};
[[nodiscard]] PMomentReport p_moment_check(const MarginalSpec& marginal, double p,
                                           std::size_t horizon = 100000);

// Marcinkiewicz-Zygmund SLLN check: quantiles of |S_n| / n^{1/p} with a
// Decaying verdict (median row), gated on the integrability condition above
// and, for 1 <= p < 2, on the Kolmogorov probability inequality for the
// centered truncated sums (checked on both the clipped Y and zeroed Z
// routes with analytic alpha_i = Var Y_i resp. Var Z_i and K = 1,
// independent case).  When a gate fails the report is NotApplicable and
// failing_condition names the condition.
struct MzCfg {
    RateCfg rate{};
    BootstrapCfg bootstrap{};
    std::size_t epsilon_points = 10;
    std::size_t truncation_window = 1000;  // (6.2) horizon, capped at grid[0]
};
struct MzReport {
    bool applicable = false;
    std::string failing_condition;
    PMomentReport pmoment;
    std::vector<VerificationRecord> truncated_kolmogorov;  // Y and Z routes
    RateCheckReport rate;
    double y_z_gap = 0.0;  // median |S^Y_n - S^Z_n| / n^{1/p} at the horizon
};
[[nodiscard]] MzReport mz_slln_check(const EnsembleSpec& ens, double p,
                                     const std::vector<std::size_t>& grid, const MzCfg& cfg = {});

}  // namespace hrlab
