#include "hrlab/series.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hrlab {

std::string to_string(SeriesState s) {
    switch (s) {
        case SeriesState::Converged: return "Converged";
        case SeriesState::Diverged: return "Diverged";
        case SeriesState::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

struct TermAnalysis {
    bool has_majorant = false;
    bool divergent = false;   // provable from family exponents
    double tail_bound = 0.0;  // bound on sum_{l>N} alpha_l/b_l^r, valid if has_majorant
    bool exact = false;       // explicit alpha: zero beyond support by convention
    std::string detail;
};

// Closed-form analysis of term_l = alpha_l / b_l^r from the family tags.
TermAnalysis analyze_terms(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                           std::size_t N) {
    TermAnalysis out;
    // Explicit alpha lists are zero beyond their stored support.
    if (std::holds_alternative<std::monostate>(alpha.family())) {
        out.has_majorant = true;
        out.exact = true;
        out.tail_bound = 0.0;
        out.detail = "explicit alpha: zero beyond support";
        return out;
    }
    if (std::holds_alternative<std::monostate>(b.family())) {
        out.detail = "explicit-list normalizer: no tail majorant";
        return out;
    }

    const auto* ap = std::get_if<PowerForm>(&alpha.family());
    const auto* ag = std::get_if<GeometricForm>(&alpha.family());
    const auto* bp = std::get_if<PowerForm>(&b.family());
    double dn = static_cast<double>(N);

    if (ap && bp) {
        // term_l = (c_a / c_b^r) l^(e_a - r e_b)
        double coef = ap->c / std::pow(bp->c, r);
        double expo = ap->e - r * bp->e;
        if (coef == 0.0) {
            out.has_majorant = true;
            out.tail_bound = 0.0;
            out.detail = "zero weights";
            return out;
        }
        if (expo < -1.0) {
            out.has_majorant = true;
            // decreasing terms: sum_{l>N} l^e <= int_N^inf x^e dx
            out.tail_bound = coef * std::pow(dn, expo + 1.0) / (-1.0 - expo);
            out.detail = "power-term integral tail bound";
        } else {
            out.divergent = true;
            out.detail = "power terms with exponent >= -1 diverge";
        }
        return out;
    }
    if (ag && bp) {
        // term_l = (c_a / c_b^r) q^l l^(-r e_b); the power factor is
        // non-increasing (e_b >= 0), so the tail is dominated by the
        // geometric series started at N+1.
        double coef = ag->c / std::pow(bp->c, r);
        double qa = ag->q;
        if (coef == 0.0) {
            out.has_majorant = true;
            out.detail = "zero weights";
            return out;
        }
        out.has_majorant = true;
        out.tail_bound = coef * std::pow(dn + 1.0, -r * bp->e) * std::pow(qa, dn + 1.0) / (1.0 - qa);
        out.detail = "geometric tail bound";
        return out;
    }
    out.detail = "unsupported family combination";
    return out;
}

double ratio_term(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                  std::size_t l) {
    return alpha.term(l) / std::pow(b.term(l), r);
}

}  // namespace

SeriesResult series_ratio_sum(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                              std::size_t N) {
    if (!(r > 0.0)) throw std::invalid_argument("series_ratio_sum: r <= 0");
    if (N == 0 || alpha.size() < N || b.size() < N)
        throw std::invalid_argument("series_ratio_sum: horizon exceeds sequence prefixes");

    SeriesResult out;
    out.partial.resize(N);
    KahanSum acc;
    for (std::size_t l = 1; l <= N; ++l) {
        acc.add(ratio_term(alpha, b, r, l));
        out.partial[l - 1] = acc.value();
    }

    TermAnalysis ta = analyze_terms(alpha, b, r, N);
    auto& d = out.diagnosis;
    d.partial_sum = out.partial.back();
    d.detail = ta.detail;
    if (ta.divergent) {
        d.state = SeriesState::Diverged;
        d.limit_estimate = d.partial_sum;
    } else if (ta.has_majorant) {
        d.state = SeriesState::Converged;
        d.tail_bound = ta.tail_bound;
        d.limit_estimate = d.partial_sum + ta.tail_bound;
    } else {
        d.state = SeriesState::Inconclusive;
        d.limit_estimate = d.partial_sum;
    }
    return out;
}

TailSeries::TailSeries(std::vector<DD> nu, double tail_bound, bool exact)
    : nu_(std::move(nu)), tail_bound_(tail_bound), exact_(exact) {}

TailSeries tail_series(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                       std::size_t N, std::optional<double> tail_majorant) {
    if (!(r > 0.0)) throw std::invalid_argument("tail_series: r <= 0");
    if (N == 0 || alpha.size() < N || b.size() < N)
        throw std::invalid_argument("tail_series: horizon exceeds sequence prefixes");

    TermAnalysis ta = analyze_terms(alpha, b, r, N);
    if (ta.divergent) throw std::domain_error("tail_series: series diverges (" + ta.detail + ")");
    double bound;
    bool exact;
    if (tail_majorant) {
        bound = *tail_majorant;
        exact = false;
    } else if (ta.has_majorant) {
        bound = ta.tail_bound;
        exact = ta.exact;
    } else {
        throw std::invalid_argument("tail_series: no tail majorant (" + ta.detail + ")");
    }

    std::vector<DD> nu(N);
    DD suffix{};
    for (std::size_t k = N; k >= 1; --k) {
        suffix = dd_add(suffix, ratio_term(alpha, b, r, k));
        nu[k - 1] = suffix;
    }
    return TailSeries(std::move(nu), bound, exact);
}

AbelReport abel_condition_check(const WeightSequence& alpha, const NormalizerSequence& b, double r,
                                std::size_t N) {
    if (!(r > 0.0)) throw std::invalid_argument("abel_condition_check: r <= 0");
    if (N < 2 || alpha.size() < N || b.size() < N)
        throw std::invalid_argument("abel_condition_check: need prefix of length >= 2");

    std::vector<double> lambda = [&] {
        std::vector<double> out(N);
        KahanSum s;
        for (std::size_t l = 1; l <= N; ++l) {
            s.add(alpha.term(l));
            out[l - 1] = s.value();
        }
        return out;
    }();

    auto inv_pow = [&](std::size_t l) { return 1.0 / std::pow(b.term(l), r); };

    // (a) sum_l Lambda_l (1/b_l^r - 1/b_{l+1}^r), non-negative terms since b
    // is non-decreasing; trend = increment over the last horizon doubling.
    std::vector<double> cond_partial(N - 1);
    KahanSum cond;
    for (std::size_t l = 1; l < N; ++l) {
        cond.add(lambda[l - 1] * (inv_pow(l) - inv_pow(l + 1)));
        cond_partial[l - 1] = cond.value();
    }
    double at_half = cond_partial[(cond_partial.size() - 1) / 2];
    double at_full = cond_partial.back();
    double rel_inc = (at_full - at_half) / std::max(1.0, std::abs(at_full));

    // (b) sup_n Lambda_n / b_n^r, with the boundedness trend: the sup over
    // the second half must not exceed the sup over the first half.
    double sup_first = 0.0, sup_second = 0.0, sup_all = 0.0;
    for (std::size_t l = 1; l <= N; ++l) {
        double v = lambda[l - 1] * inv_pow(l);
        sup_all = std::max(sup_all, v);
        (l <= N / 2 ? sup_first : sup_second) = std::max(l <= N / 2 ? sup_first : sup_second, v);
    }

    // (c) Abel identity residual on every prefix.
    double max_resid = 0.0;
    KahanSum lhs;
    for (std::size_t l = 1; l <= N; ++l) {
        lhs.add(ratio_term(alpha, b, r, l));
        double rhs = lambda[l - 1] * inv_pow(l) + (l >= 2 ? cond_partial[l - 2] : 0.0);
        double resid = std::abs(lhs.value() - rhs) / std::max(1.0, std::abs(lhs.value()));
        max_resid = std::max(max_resid, resid);
    }

    AbelReport rep;
    rep.cond_sum_stabilizes = rel_inc < 1e-6;
    rep.cond_sup_bounded = sup_second <= sup_first * (1.0 + 1e-9) || sup_second == 0.0;
    rep.cond_sum_value = at_full;
    rep.cond_sup_value = sup_all;
    rep.max_identity_residual = max_resid;
    rep.ratio_state = series_ratio_sum(alpha, b, r, N).diagnosis.state;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "cond_sum_last_doubling_rel_inc=%.3g sup_first=%.6g sup_second=%.6g", rel_inc,
                  sup_first, sup_second);
    rep.detail = buf;
    return rep;
}

WeightSequence kounias_weng_alpha(const WeightSequence& a, double r) {
    if (!(r > 1.0))
        throw std::invalid_argument(
            "kounias_weng_alpha: defined for r > 1 (for r <= 1 use alpha_k = a_k^r directly)");
    std::vector<double> alpha(a.size());
    KahanSum acc;
    double prev_pow = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
        acc.add(a.term(k));
        double cur_pow = std::pow(acc.value(), r);
        alpha[k - 1] = cur_pow - prev_pow;
        prev_pow = cur_pow;
    }
    return WeightSequence::from_values(std::move(alpha));
}

KWDomination kw_domination(const WeightSequence& a, double r, const NormalizerSequence& beta,
                           std::size_t n) {
    if (n == 0 || a.size() < n || beta.size() < n)
        throw std::invalid_argument("kw_domination: horizon exceeds prefixes");
    WeightSequence alpha = kounias_weng_alpha(a, r);
    KahanSum lhs, rhs_base;
    for (std::size_t l = 1; l <= n; ++l) {
        lhs.add(alpha.term(l) / std::pow(beta.term(l), r));
        rhs_base.add(a.term(l) / beta.term(l));
    }
    KWDomination out;
    out.lhs = lhs.value();
    out.rhs = std::pow(rhs_base.value(), r);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

std::string to_string(TransferKind t) {
    switch (t) {
        case TransferKind::MomentFirst: return "moment_first";
        case TransferKind::MomentSecond: return "moment_second";
        case TransferKind::ProbFirst: return "prob_first";
        case TransferKind::ProbSecond: return "prob_second";
    }
    return "?";
}

double constant_transfer(double K, double r, TransferKind t) {
    if (!(K > 0.0)) throw std::invalid_argument("constant_transfer: K <= 0");
    if (!(r > 0.0)) throw std::invalid_argument("constant_transfer: r <= 0");
    switch (t) {
        case TransferKind::MomentFirst:
        case TransferKind::ProbFirst:
            return 4.0 * K;
        case TransferKind::MomentSecond: {
            double dr = r <= 1.0 ? 1.0 : std::exp2(r - 1.0);
            return 4.0 * dr * K;
        }
        case TransferKind::ProbSecond:
            return std::pow(1.0 + std::pow(4.0, 1.0 / r), r) * K;
    }
    throw std::logic_error("constant_transfer: bad kind");
}

}  // namespace hrlab
