#include "hrlab/envelope.hpp"

#include <cmath>
#include <stdexcept>

#include "hrlab/numeric.hpp"

namespace hrlab {

namespace {

RateEnvelope build_envelope(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                            const PhiFunction& phi, std::size_t N, EnvelopeSource source,
                            double delta) {
    if (N == 0 || alpha.size() < N || b.size() < N)
        throw std::invalid_argument("envelope: horizon exceeds sequence prefixes");
    TailSeries nu = tail_series(alpha, b, r, N);

    RateEnvelope env;
    env.beta.resize(N);
    env.ratio.resize(N);
    env.source = source;
    env.delta = delta;
    env.r = r;
    env.phi_label = phi.label();

    double running = 0.0;
    for (std::size_t k = 1; k <= N; ++k) {
        double nuk = nu.nu_upper(k);
        // nu = 0 past explicit support: phi(1/0)=phi(inf)=inf, inf^{-1/r}=0,
        // so the candidate vanishes and the envelope freezes, as it should.
        double candidate = b.term(k) * std::pow(phi(1.0 / nuk), -1.0 / r);
        running = std::max(running, candidate);
        env.beta[k - 1] = running;
        env.ratio[k - 1] = running / b.term(k);
    }

    std::size_t peak = 1;
    for (std::size_t k = 1; k <= N; ++k)
        if (env.ratio[k - 1] > env.ratio[peak - 1]) peak = k;
    env.ratio_peak_index = peak;
    env.ratio_eventually_decreasing = true;
    for (std::size_t k = peak; k < N; ++k)
        if (env.ratio[k] > env.ratio[k - 1] * (1.0 + 1e-12)) {
            env.ratio_eventually_decreasing = false;
            break;
        }
    // "eventually" must be visible inside the horizon
    if (peak > N / 2 && N >= 8) env.ratio_eventually_decreasing = false;

    double beta_half = env.beta[N / 2 - (N >= 2 ? 1 : 0)];
    env.bounded_branch = env.beta.back() <= beta_half * (1.0 + 1e-3);
    return env;
}

}  // namespace

RateEnvelope phi_envelope(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                          const PhiFunction& phi, std::size_t N) {
    PhiCertification cert = certify_phi(phi, 10000);
    if (!cert.certified)
        throw std::domain_error("phi_envelope: phi not certified (" + cert.detail + ")");
    return build_envelope(alpha, b, r, phi, N, EnvelopeSource::PhiTail, 0.0);
}

RateEnvelope hu_hu_envelope(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                            double delta, std::size_t N) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("hu_hu_envelope: need 0 < delta < 1");
    // b_k nu_k^{delta/r} written as b_k (phi(1/nu_k))^{-1/r} with phi = x^delta;
    // sharing the evaluation path keeps the two envelopes bit-identical.
    return build_envelope(alpha, b, r, PhiFunction::power(delta), N, EnvelopeSource::PowerTail,
                          delta);
}

WitnessReport lemma22_witness(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                              double delta, std::size_t N) {
    if (!b.certified_unbounded())
        throw std::invalid_argument("lemma22_witness: b must be certified unbounded");
    RateEnvelope env = hu_hu_envelope(alpha, b, r, delta, N);

    TailSeries nu = tail_series(alpha, b, r, N);
    KahanSum ratio_sum, dini_sum;
    bool dominated = true;
    std::vector<double> partial(N);
    for (std::size_t k = 1; k <= N; ++k) {
        double beta_k = env.term(k);
        double term = beta_k > 0.0 ? alpha.term(k) / std::pow(beta_k, r) : 0.0;
        ratio_sum.add(term);
        partial[k - 1] = ratio_sum.value();
        double nuk = nu.nu_upper(k);
        double majorant =
            nuk > 0.0 ? (alpha.term(k) / std::pow(b.term(k), r)) / std::pow(nuk, delta) : 0.0;
        dini_sum.add(majorant);
        if (term > majorant * (1.0 + 1e-9)) dominated = false;
    }

    WitnessReport rep{NormalizerSequence::from_values(env.beta, !env.bounded_branch),
                      partial.back(),
                      partial.back() - partial[N / 2 - (N >= 2 ? 1 : 0)],
                      dini_sum.value(),
                      dominated};
    return rep;
}

}  // namespace hrlab
