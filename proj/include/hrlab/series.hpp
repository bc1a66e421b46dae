#pragma once
// Series machinery for the weight/normalizer calculus: partial sums of
// sum alpha_l / b_l^r with convergence diagnosis, suffix tails nu_k, the Abel
// summation cross-check, the Kounias-Weng alpha transformation, and the
// constant-transfer arithmetic between Kolmogorov-type and Hajek-Renyi-type
// inequalities.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/numeric.hpp"
#include "hrlab/sequences.hpp"

namespace hrlab {

enum class SeriesState { Converged, Diverged, Inconclusive };

[[nodiscard]] std::string to_string(SeriesState s);

struct ConvergenceDiagnosis {
    SeriesState state = SeriesState::Inconclusive;
    double partial_sum = 0.0;     // prefix sum at the horizon
    double tail_bound = 0.0;      // >= true tail when Converged
    double limit_estimate = 0.0;  // within tail_bound of the limit when Converged
    std::string detail;
};

struct SeriesResult {
    std::vector<double> partial;  // partial sums, compensated accumulation
    ConvergenceDiagnosis diagnosis;
};

// Partial sums of sum_{l<=N} alpha_l / b_l^r.  Family tags admit analytic
// tail majorants (integral bound for power terms, ratio bound when a
// geometric factor is present); explicit-list alpha is treated as zero
// beyond its stored support, hence exact.
[[nodiscard]] SeriesResult series_ratio_sum(const WeightSequence& alpha,
                                            const NormalizerSequence& b, double r,
                                            std::size_t N);

// Suffix tails nu_k = sum_{l=k}^N alpha_l/b_l^r plus a shared truncation
// bound for the discarded l > N terms.  Stored in double-double so the
// telescoping identity nu_k - nu_{k+1} = alpha_k/b_k^r survives millions of
// terms.  nu(k) is the stored (lower) value; the true tail lies in
// [nu(k), nu(k) + tail_bound()].
class TailSeries {
public:
    TailSeries(std::vector<DD> nu, double tail_bound, bool exact);

    [[nodiscard]] std::size_t size() const { return nu_.size(); }
    [[nodiscard]] double nu(std::size_t k) const { return dd_value(nu_[k - 1]); }
    [[nodiscard]] DD nu_dd(std::size_t k) const { return nu_[k - 1]; }
    [[nodiscard]] double nu_upper(std::size_t k) const { return nu(k) + tail_bound_; }
    [[nodiscard]] double tail_bound() const { return tail_bound_; }
    [[nodiscard]] bool exact() const { return exact_; }

private:
    std::vector<DD> nu_;
    double tail_bound_;
    bool exact_;
};

// Throws std::domain_error on a provably divergent series and
// std::invalid_argument when no tail majorant exists (explicit-list b with
// tagged alpha) unless the caller supplies one.
[[nodiscard]] TailSeries tail_series(const WeightSequence& alpha, const NormalizerSequence& b,
                                     double r, std::size_t N,
                                     std::optional<double> tail_majorant = std::nullopt);

// Abel-summation diagnostics:
//   cond_sum:  partial sums of sum_l Lambda_l (1/b_l^r - 1/b_{l+1}^r)
//   cond_sup:  sup_n Lambda_n / b_n^r
// If both stabilize, the ratio series sum alpha_l/b_l^r converges as well;
// the identity
//   sum_{l<=n} alpha_l/b_l^r = Lambda_n/b_n^r + sum_{l<n} Lambda_l (1/b_l^r - 1/b_{l+1}^r)
// is recomputed on every prefix and the worst relative residual reported.
struct AbelReport {
    bool cond_sum_stabilizes = false;
    bool cond_sup_bounded = false;
    SeriesState ratio_state = SeriesState::Inconclusive;
    double cond_sum_value = 0.0;
    double cond_sup_value = 0.0;
    double max_identity_residual = 0.0;  // relative to max(1, |prefix sum|)
    std::string detail;
};
[[nodiscard]] AbelReport abel_condition_check(const WeightSequence& alpha,
                                              const NormalizerSequence& b, double r,
                                              std::size_t N);

// alpha_k = (a_1+...+a_k)^r - (a_1+...+a_{k-1})^r for r > 1 (the weights that
// insert the Kounias-Weng inequality into the Kolmogorov-type framework).
// For r <= 1 the framework uses alpha_k = a_k^r directly; this throws.
[[nodiscard]] WeightSequence kounias_weng_alpha(const WeightSequence& a, double r);

// Both sides of the domination sum_l alpha_l/beta_l^r <= (sum_l a_l/beta_l)^r.
struct KWDomination {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
[[nodiscard]] KWDomination kw_domination(const WeightSequence& a, double r,
                                         const NormalizerSequence& beta, std::size_t n);

// Constant transfer from a Kolmogorov-type constant K to the Hajek-Renyi-type
// constant C:
//   MomentFirst  : C = 4K
//   MomentSecond : C = 4 D_r K, D_r = 1 for 0<r<=1, 2^{r-1} for r>=1
//   ProbFirst    : C = 4K
//   ProbSecond   : C = (1 + 4^{1/r})^r K
enum class TransferKind { MomentFirst, MomentSecond, ProbFirst, ProbSecond };

[[nodiscard]] std::string to_string(TransferKind t);
[[nodiscard]] double constant_transfer(double K, double r, TransferKind t);

}  // namespace hrlab
