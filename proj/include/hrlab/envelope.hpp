#pragma once
// Rate envelopes for strong laws: from a convergent ratio series with tails
// nu_k = sum_{l>=k} alpha_l/b_l^r, build
//   beta_n = max_{1<=k<=n} b_k nu_k^{delta/r}          (Hu & Hu 2006)
//   beta_n = max_{1<=k<=n} b_k (phi(1/nu_k))^{-1/r}    (Sung, Hu & Volodin 2008)
// Both are non-decreasing with beta_n/b_n -> 0, so S_n/b_n = O(beta_n/b_n)
// almost surely whenever the matching maximal inequality holds.  The same
// construction is the witness for the abstract normalizer-existence lemma.

#include <cstddef>
#include <string>
#include <vector>

#include "hrlab/dini.hpp"
#include "hrlab/sequences.hpp"
#include "hrlab/series.hpp"

namespace hrlab {

enum class EnvelopeSource { PowerTail, PhiTail };

struct RateEnvelope {
    std::vector<double> beta;   // beta_1..beta_N (non-decreasing by construction)
    std::vector<double> ratio;  // beta_n / b_n
    EnvelopeSource source = EnvelopeSource::PowerTail;
    std::string phi_label;
    double delta = 0.0;  // PowerTail parameter
    double r = 2.0;
    // ratio trend: index of the last ratio maximum and whether the ratio is
    // non-increasing from there to the horizon (the computable rendering of
    // beta_n/b_n -> 0).
    std::size_t ratio_peak_index = 1;
    bool ratio_eventually_decreasing = false;
    // growth classification on the horizon: bounded iff the last horizon
    // doubling grows beta by < 0.1%
    bool bounded_branch = false;

    [[nodiscard]] double term(std::size_t n) const { return beta[n - 1]; }
    [[nodiscard]] std::size_t size() const { return beta.size(); }
};

[[nodiscard]] RateEnvelope hu_hu_envelope(const WeightSequence& alpha,
                                          const NormalizerSequence& b, double r, double delta,
                                          std::size_t N);

[[nodiscard]] RateEnvelope phi_envelope(const WeightSequence& alpha, const NormalizerSequence& b,
                                        double r, const PhiFunction& phi, std::size_t N);

// Constructive witness for the normalizer-existence lemma: returns the power
// envelope as a NormalizerSequence after verifying on the horizon that it is
// non-decreasing, that witness/b decays after its peak, and that
// sum alpha_k/witness_k^r stabilizes (each term is dominated by
// (alpha_k/b_k^r)/nu_k^delta, a convergent Dini-transformed series).
struct WitnessReport {
    NormalizerSequence witness;
    double ratio_series_value;          // sum alpha_k/witness_k^r at horizon
    double ratio_series_last_doubling;  // increment over the last doubling
    double dini_majorant_value;         // Dini bound that dominates it
    bool domination_holds;              // term-wise domination verified
};
[[nodiscard]] WitnessReport lemma22_witness(const WeightSequence& alpha,
                                            const NormalizerSequence& b, double r, double delta,
                                            std::size_t N);

}  // namespace hrlab
