#include "hrlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hrlab/numeric.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

std::string to_string(StatKind k) {
    switch (k) {
        case StatKind::MomentOfMax: return "moment_of_max";
        case StatKind::ProbOfMax: return "prob_of_max";
        case StatKind::WeightedMomentOfMax: return "weighted_moment_of_max";
        case StatKind::WeightedProbOfMax: return "weighted_prob_of_max";
        case StatKind::TwoSegment: return "two_segment";
    }
    return "?";
}

void MaxSpec::validate(std::size_t path_length) const {
    if (hi == 0 || hi > path_length) throw std::invalid_argument("MaxSpec: hi outside path");
    bool weighted = kind == StatKind::WeightedMomentOfMax ||
                    kind == StatKind::WeightedProbOfMax || kind == StatKind::TwoSegment;
    if (weighted) {
        if (beta.size() < hi) throw std::invalid_argument("MaxSpec: beta shorter than window");
        double prev = 0.0;
        for (std::size_t l = 0; l < hi; ++l) {
            if (!(beta[l] > 0.0)) throw std::invalid_argument("MaxSpec: beta must be positive");
            if (beta[l] < prev) throw std::invalid_argument("MaxSpec: beta must be non-decreasing");
            prev = beta[l];
        }
    } else if (lo >= hi) {
        throw std::invalid_argument("MaxSpec: empty window (lo >= hi)");
    }
    if (kind == StatKind::TwoSegment && (m < 1 || m > hi))
        throw std::invalid_argument("MaxSpec: segment start m outside [1, hi]");
}

std::string MaxSpec::label() const {
    char buf[96];
    switch (kind) {
        case StatKind::MomentOfMax:
        case StatKind::ProbOfMax:
            std::snprintf(buf, sizeof buf, "max_{%zu<l<=%zu}%s", lo, hi,
                          one_sided ? "(S_l-S_lo)" : "|S_l-S_lo|");
            return buf;
        case StatKind::WeightedMomentOfMax:
        case StatKind::WeightedProbOfMax:
            std::snprintf(buf, sizeof buf, "max_{l<=%zu}%s", hi,
                          one_sided ? "S_l/beta_l" : "|S_l|/beta_l");
            return buf;
        case StatKind::TwoSegment:
            std::snprintf(buf, sizeof buf, "max_{%zu<=l<=%zu}%s", m, hi,
                          one_sided ? "S_l/beta_l" : "|S_l|/beta_l");
            return buf;
    }
    return "?";
}

double max_base_value(std::span<const double> x, const MaxSpec& spec) {
    switch (spec.kind) {
        case StatKind::MomentOfMax:
        case StatKind::ProbOfMax: {
            double s = 0.0;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t l = spec.lo + 1; l <= spec.hi; ++l) {
                s += x[l - 1];
                best = std::max(best, spec.one_sided ? s : std::abs(s));
            }
            return best;
        }
        case StatKind::WeightedMomentOfMax:
        case StatKind::WeightedProbOfMax:
        case StatKind::TwoSegment: {
            std::size_t start = spec.kind == StatKind::TwoSegment ? spec.m : 1;
            double s = 0.0;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t l = 1; l <= spec.hi; ++l) {
                s += x[l - 1];
                if (l < start) continue;
                double v = (spec.one_sided ? s : std::abs(s)) / spec.beta[l - 1];
                best = std::max(best, v);
            }
            return best;
        }
    }
    throw std::logic_error("max_base_value: bad kind");
}

std::vector<double> base_values(const PathEnsemble& ens, const MaxSpec& spec) {
    spec.validate(ens.length());
    std::vector<double> out(ens.paths());
    for (std::size_t p = 0; p < ens.paths(); ++p)
        out[p] = max_base_value(ens.increments(p), spec);
    return out;
}

std::string MaxStatistic::label() const {
    char buf[160];
    if (moment)
        std::snprintf(buf, sizeof buf, "E[%s]^%g", spec.label().c_str(), r);
    else
        std::snprintf(buf, sizeof buf, "P(%s>=%.6g)", spec.label().c_str(), epsilon);
    return buf;
}

namespace {

MaxStatistic make_stat(const MaxSpec& spec, bool moment, double r, double eps, double est, CI ci,
                       bool exact) {
    MaxStatistic st;
    st.spec = spec;
    st.moment = moment;
    st.r = r;
    st.epsilon = eps;
    st.estimate = est;
    // the estimate must lie inside its interval even under percentile quirks
    st.ci = {std::min(ci.low, est), std::max(ci.high, est)};
    st.exact = exact;
    return st;
}

}  // namespace

StatBundle evaluate_stats(const std::vector<double>& values, const MaxSpec& spec,
                          std::optional<double> moment_r, const std::vector<double>& epsilons,
                          const BootstrapCfg& cfg) {
    if (values.empty()) throw std::invalid_argument("evaluate_stats: empty sample");
    const std::size_t P = values.size();
    const double dP = static_cast<double>(P);

    // powered values for the moment functional
    std::vector<double> w;
    if (moment_r) {
        w.resize(P);
        for (std::size_t i = 0; i < P; ++i) w[i] = std::pow(std::abs(values[i]), *moment_r);
    }
    // epsilon ranks: rank[i] = #{j : eps_sorted[j] <= v_i}; v_i >= eps_j
    // (original order j) iff rank[i] > pos(j)
    std::vector<double> eps_sorted(epsilons);
    std::sort(eps_sorted.begin(), eps_sorted.end());
    const std::size_t E = eps_sorted.size();
    std::vector<std::uint32_t> rank(P, 0);
    if (E > 0)
        for (std::size_t i = 0; i < P; ++i)
            rank[i] = static_cast<std::uint32_t>(
                std::upper_bound(eps_sorted.begin(), eps_sorted.end(), values[i]) -
                eps_sorted.begin());

    // full-sample estimates
    double moment_est = 0.0;
    if (moment_r) moment_est = kahan_total(w) / dP;
    std::vector<double> prob_est(E, 0.0);
    {
        std::vector<std::size_t> hist(E + 1, 0);
        for (std::uint32_t rk : rank) ++hist[rk];
        std::size_t seen = 0;  // #{i: rank > j} via suffix accumulation
        for (std::size_t j = E; j-- > 0;) {
            seen += hist[j + 1];
            prob_est[j] = static_cast<double>(seen) / dP;
        }
    }

    // bootstrap over path indices, one pass for all functionals
    const std::size_t B = cfg.resamples;
    std::vector<double> boot_moment(moment_r ? B : 0);
    std::vector<std::vector<double>> boot_prob(E, std::vector<double>(B));
    RngStream idx_stream(cfg.seed, stream_from_tag("bootstrap:" + cfg.salt));
    std::vector<std::size_t> hist(E + 1);
    for (std::size_t b = 0; b < B; ++b) {
        KahanSum msum;
        std::fill(hist.begin(), hist.end(), 0);
        for (std::size_t i = 0; i < P; ++i) {
            std::size_t idx =
                static_cast<std::size_t>(idx_stream.index(b * P + i, P));
            if (moment_r) msum.add(w[idx]);
            if (E > 0) ++hist[rank[idx]];
        }
        if (moment_r) boot_moment[b] = msum.value() / dP;
        std::size_t seen = 0;
        for (std::size_t j = E; j-- > 0;) {
            seen += hist[j + 1];
            boot_prob[j][b] = static_cast<double>(seen) / dP;
        }
    }

    double lo_q = (1.0 - cfg.level) / 2.0;
    double hi_q = 1.0 - lo_q;
    auto percentile_ci = [&](std::vector<double> xs) -> CI {
        std::sort(xs.begin(), xs.end());
        return {sorted_quantile(xs, lo_q), sorted_quantile(xs, hi_q)};
    };

    StatBundle bundle;
    if (moment_r)
        bundle.moment = make_stat(spec, true, *moment_r, 0.0, moment_est,
                                  percentile_ci(std::move(boot_moment)), false);
    // map back to the caller's epsilon order
    for (double eps : epsilons) {
        std::size_t j = static_cast<std::size_t>(
            std::lower_bound(eps_sorted.begin(), eps_sorted.end(), eps) - eps_sorted.begin());
        bundle.probs.push_back(
            make_stat(spec, false, 0.0, eps, prob_est[j], percentile_ci(boot_prob[j]), false));
    }
    return bundle;
}

StatBundle evaluate_exact(const std::vector<double>& values, const MaxSpec& spec,
                          std::optional<double> moment_r, const std::vector<double>& epsilons) {
    if (values.empty()) throw std::invalid_argument("evaluate_exact: empty population");
    const double dP = static_cast<double>(values.size());
    StatBundle bundle;
    if (moment_r) {
        KahanSum s;
        for (double v : values) s.add(std::pow(std::abs(v), *moment_r));
        double est = s.value() / dP;
        bundle.moment = make_stat(spec, true, *moment_r, 0.0, est, {est, est}, true);
    }
    for (double eps : epsilons) {
        std::size_t cnt = 0;
        for (double v : values)
            if (v >= eps) ++cnt;
        double est = static_cast<double>(cnt) / dP;
        bundle.probs.push_back(make_stat(spec, false, 0.0, eps, est, {est, est}, true));
    }
    return bundle;
}

MaxStatistic mc_max_statistic(const PathEnsemble& ens, const MaxSpec& spec, bool moment,
                              double r_or_eps, const BootstrapCfg& cfg) {
    std::vector<double> vals = base_values(ens, spec);
    if (moment) {
        StatBundle b = evaluate_stats(vals, spec, r_or_eps, {}, cfg);
        return *b.moment;
    }
    StatBundle b = evaluate_stats(vals, spec, std::nullopt, {r_or_eps}, cfg);
    return b.probs.front();
}

}  // namespace hrlab
