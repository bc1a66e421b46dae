#pragma once
// Reproducible generators for the dependence classes under study, each
// packaged with the theoretical bound scheme (alpha weights, order r,
// constant K) that the matching maximal inequality asserts.
//
// Constructions (all increments zero-mean, unit-variance unless the marginal
// says otherwise):
//   IID            x_k iid draws from a configurable marginal
//   MartingaleDiff x_k = eps_k * sign(S_{k-1}), eps iid symmetric marginal
//   NAGaussian     jointly Gaussian, equicorrelation -c/(n-1) (0<c<1), or
//                  antithetic pairs (x_{2j+1} = -x_{2j}); non-positive
//                  pairwise correlations make the vector negatively
//                  associated (Joag-Dev & Proschan 1983)
//   AR1            stationary Gaussian AR(1), x_k = a x_{k-1} + sqrt(1-a^2) z_k;
//                  Gaussian maximal correlation gives rho(m) = |a|^m
//   AANA           x_k = (z_k + q_k z_{k+1})/sqrt(1+q_k^2), q_k -> 0
//   LogOU          Ornstein-Uhlenbeck sampled at times log k: unit variance,
//                  cov(x_k, x_l) = (min/max)^beta exactly
//   Demimartingale positively equicorrelated Gaussian increments; their
//                  partial sums form a demimartingale (Newman & Wright 1982)

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hrlab/rng.hpp"
#include "hrlab/sequences.hpp"

namespace hrlab {

enum class MarginalKind { Normal, Rademacher, ParetoSym, Cauchy, Zero };

// Marginal distribution of one increment, with the analytic moment and tail
// helpers the bound computations need.
struct MarginalSpec {
    MarginalKind kind = MarginalKind::Normal;
    double sigma = 1.0;  // Normal scale
    double gamma = 1.8;  // ParetoSym tail index: P(|X|>y) = y^-gamma, |X| >= 1

    void validate() const;
    [[nodiscard]] double draw(const RngStream& rs, std::uint64_t step) const;
    [[nodiscard]] bool has_abs_moment(double p) const;
    [[nodiscard]] double abs_moment(double p) const;  // E|X|^p, +inf if infinite
    [[nodiscard]] double variance() const;            // +inf if infinite/undefined
    [[nodiscard]] double fourth_moment() const;
    [[nodiscard]] double tail_prob(double y) const;   // P(|X| > y), y >= 0
    // E[X^2 1{|X| <= c}], needed for truncated-variable variances.
    [[nodiscard]] double truncated_second_moment(double c) const;
    [[nodiscard]] bool symmetric() const { return true; }  // all supported marginals
    [[nodiscard]] std::string label() const;
};

// Mixing-weight schedule q_l = c * l^-s for the AANA construction.
struct QSchedule {
    double c = 1.0;
    double s = 1.0;

    [[nodiscard]] double q(std::size_t l) const;
    // A_n = sum_{l=1}^{n-1} q_l^2 (exact, compensated).
    [[nodiscard]] double a_sum(std::size_t n) const;
    [[nodiscard]] std::string label() const;
};

enum class ProcessKind { IID, MartingaleDiff, NAGaussian, AR1, AANA, LogOU, Demimartingale };
enum class NAVariant { Equicorrelated, AntitheticPairs };

[[nodiscard]] std::string to_string(ProcessKind k);

struct ProcessModel {
    ProcessKind kind = ProcessKind::IID;
    std::size_t n = 0;
    MarginalSpec marginal{};  // IID / MartingaleDiff only; others are unit Gaussians
    double ar_a = 0.5;        // AR1 coefficient, |a| < 1
    double logou_beta = 1.0;  // LogOU covariance exponent, > 0
    QSchedule q{};            // AANA weights
    double na_c = 0.9;        // NAGaussian equicorrelation strength, 0 < c < 1
    NAVariant na_variant = NAVariant::Equicorrelated;
    double demi_rho = 0.3;    // Demimartingale increment correlation, 0 <= rho < 1
    std::string id;           // report label; synthesized from kind when empty

    void validate() const;  // throws std::invalid_argument
    [[nodiscard]] std::string label() const;

    // Fills out[0..n) with the increments of one path.  Pure function of the
    // stream; scratch is reused storage for the driving normals.
    void sample_path(const RngStream& rs, std::span<double> out, std::vector<double>& scratch) const;

    // Analytic per-increment moments (index-independent for every kind here).
    [[nodiscard]] double increment_variance() const;
    [[nodiscard]] double increment_abs_moment(double p) const;
    // Standard deviation of S_l (closed form from the covariance structure);
    // available for the jointly Gaussian kinds and IID/MartingaleDiff.
    [[nodiscard]] double partial_sum_sd(std::size_t l) const;
};

// --- theoretical bound schemes ---------------------------------------------

enum class SchemeKind { Moment1, Moment2, Prob1, Prob2, Demi, KW };

[[nodiscard]] std::string to_string(SchemeKind k);

struct KConstant {
    double value = 1.0;
    bool estimated = false;  // true when theory names no explicit constant
};

struct BoundScheme {
    WeightSequence alpha;
    double r = 2.0;
    KConstant K{};
    SchemeKind kind = SchemeKind::Prob1;
    std::string source;  // citation tag for reports
};

// The scheme the theory attaches to a model at moment order p.
//   IID/MartingaleDiff, p=2: probability form K=1 (Kolmogorov) or, with
//     moment_form, K=4 (Doob); both hold on every sub-window (second kind).
//   NAGaussian, 1<p<=2: K=2^{3-p}, alpha_l = E|X_l|^p (Shao 2000, Thm 2;
//     p=2 case due to Matula 1992); windows inherit the bound because
//     subsets of NA vectors are NA.
//   NAGaussian, p>2: K=2(15p/ln p)^p with the composite weights
//     alpha_l = sigma_l^2 (sum sigma^2)^{p/2-1} + E|X_l|^p pinned at horizon
//     n; for m<=n the pinned weights dominate the true RHS term-wise, so the
//     first-kind inequality still holds for every m.
//   AANA: probability form, K_n = 2(A_n + sqrt(1+A_n^2))^2 (Chandra & Ghosal
//     1996); K_m <= K_n makes the horizon-pinned constant valid for m<=n.
//   AR1: moment form with K estimated (Shao 1995 names no explicit constant).
//   Demimartingale: r=1, K=1, alpha_l = E(S_l^+ - S_{l-1}^+) closed form
//     (Christofides 2000).
[[nodiscard]] BoundScheme theoretical_bound(const ProcessModel& model, double p, bool moment_form = false);

// Dyadic mixing schedule rho(2^i) = |a|^(2^i) for the AR(1) model, plus the
// finite limit of its sum.  Throws for non-AR1 models.
struct RhoSchedule {
    std::vector<double> rho;  // rho(2^0), rho(2^1), ...
    double sum;               // sum over the returned prefix
    double limit;             // sum_{i>=0} |a|^(2^i), converged value
};
[[nodiscard]] RhoSchedule rho_schedule(const ProcessModel& model, std::size_t terms = 21);

}  // namespace hrlab
