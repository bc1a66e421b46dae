#pragma once
// Max statistics over path ensembles: per-path base values (the various
// maxima of partial sums appearing on inequality left-hand sides), plus
// moment / exceedance-probability functionals of them with path-resampling
// bootstrap confidence intervals.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrlab/ensemble.hpp"

namespace hrlab {

enum class StatKind {
    MomentOfMax,         // E[ max_{lo<l<=hi} |S_l - S_lo| ]^r
    ProbOfMax,           // P( max_{lo<l<=hi} |S_l - S_lo| >= eps )
    WeightedMomentOfMax, // E[ max_{l<=hi} |S_l|/beta_l ]^r
    WeightedProbOfMax,   // P( max_{l<=hi} |S_l|/beta_l >= eps )
    TwoSegment,          // max_{m<=l<=hi} |S_l|/beta_l, either functional
};

[[nodiscard]] std::string to_string(StatKind k);

// Which maximum is taken per path.  `beta` (1-based values in beta[0]) is
// required by the weighted kinds; `one_sided` drops the absolute value (the
// demisubmartingale and superadditive-moment inequalities bound the signed
// running maximum).
struct MaxSpec {
    StatKind kind = StatKind::MomentOfMax;
    std::size_t lo = 0;  // window start (exclusive) for the unweighted kinds
    std::size_t hi = 0;  // window end (inclusive); 1-based index into the path
    std::size_t m = 1;   // segment start for TwoSegment
    std::vector<double> beta;
    bool one_sided = false;

    void validate(std::size_t path_length) const;
    [[nodiscard]] std::string label() const;
};

// Base value for a single path of increments.
[[nodiscard]] double max_base_value(std::span<const double> x, const MaxSpec& spec);

// Base values for every path of an ensemble.
[[nodiscard]] std::vector<double> base_values(const PathEnsemble& ens, const MaxSpec& spec);

struct CI {
    double low = 0.0;
    double high = 0.0;
};

struct MaxStatistic {
    MaxSpec spec;
    bool moment = true;    // moment functional vs exceedance probability
    double r = 2.0;        // moment order
    double epsilon = 0.0;  // threshold when !moment
    double estimate = 0.0;
    CI ci{};
    bool exact = false;

    [[nodiscard]] std::string label() const;
};

struct BootstrapCfg {
    std::size_t resamples = 1000;
    double level = 0.99;
    std::uint64_t seed = 0;
    std::string salt;  // distinct consumers get independent index streams
};

// One resampling pass over the shared base values evaluates the moment
// functional mean|v|^r (if r given) and P(v >= eps) for every eps.
struct StatBundle {
    std::optional<MaxStatistic> moment;
    std::vector<MaxStatistic> probs;  // one per epsilon, same order as input
};
[[nodiscard]] StatBundle evaluate_stats(const std::vector<double>& values, const MaxSpec& spec,
                                        std::optional<double> moment_r,
                                        const std::vector<double>& epsilons,
                                        const BootstrapCfg& cfg);

// Same functionals treated as exact (full-population values from an
// enumeration): degenerate CIs, exact flag set.
[[nodiscard]] StatBundle evaluate_exact(const std::vector<double>& values, const MaxSpec& spec,
                                        std::optional<double> moment_r,
                                        const std::vector<double>& epsilons);

// Convenience wrapper: base values + one statistic from an ensemble.
[[nodiscard]] MaxStatistic mc_max_statistic(const PathEnsemble& ens, const MaxSpec& spec,
                                            bool moment, double r_or_eps,
                                            const BootstrapCfg& cfg);

}  // namespace hrlab
