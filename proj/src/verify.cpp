#include "hrlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hrlab/exact.hpp"
#include "hrlab/numeric.hpp"
#include "hrlab/series.hpp"

namespace hrlab {

namespace {

std::string strf(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

constexpr double kExactSlack = 1e-12;

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::HoldsWithinCI: return "HoldsWithinCI";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
        case Verdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

Verdict verdict_from(const MaxStatistic& st, double bound) {
    double slack = bound + kExactSlack * std::max(1.0, std::abs(bound));
    if (st.exact) return st.estimate <= slack ? Verdict::Holds : Verdict::Violated;
    if (st.ci.low > slack) return Verdict::Violated;
    if (st.ci.high <= slack) return Verdict::Holds;
    if (st.estimate <= slack) return Verdict::HoldsWithinCI;
    return Verdict::Inconclusive;
}

double margin_of(double bound, double estimate) {
    if (estimate <= 0.0) return std::numeric_limits<double>::infinity();
    return bound / estimate;
}

std::vector<double> bound_anchored_epsilons(double total_bound, double r, std::size_t points,
                                            double bound_lo, double bound_hi) {
    if (points == 0) return {};
    if (!(bound_lo > 0.0) || !(bound_hi >= bound_lo))
        throw std::invalid_argument("bound_anchored_epsilons: bad anchor range");
    std::vector<double> eps(points);
    if (!(total_bound > 0.0) || !std::isfinite(total_bound)) {
        // zero or degenerate bound: fixed log grid, still monotone for the
        // epsilon-monotonicity property tests
        for (std::size_t j = 0; j < points; ++j) {
            double t = points == 1 ? 0.5 : static_cast<double>(j) / (points - 1);
            eps[j] = 0.25 * std::pow(16.0, t);
        }
        return eps;
    }
    for (std::size_t j = 0; j < points; ++j) {
        double t = points == 1 ? 0.5 : static_cast<double>(j) / (points - 1);
        double b = bound_hi * std::pow(bound_lo / bound_hi, t);  // descending
        eps[j] = std::pow(total_bound / b, 1.0 / r);
    }
    return eps;
}

// --- StatSource ---------------------------------------------------------------

StatSource StatSource::mc(const PathEnsemble& e) {
    StatSource s;
    s.ensemble = &e;
    return s;
}

StatSource StatSource::enumeration(std::size_t n, std::vector<double> scale) {
    StatSource s;
    s.exact_n = n;
    s.exact_scale = std::move(scale);
    return s;
}

std::size_t StatSource::length() const {
    if (exact()) return exact_n;
    if (ensemble == nullptr) throw std::logic_error("StatSource: empty source");
    return ensemble->length();
}

std::string StatSource::label() const {
    if (exact())
        return strf("rademacher_exact(n=%zu%s)", exact_n, exact_scale.empty() ? "" : ",scaled");
    if (ensemble == nullptr) throw std::logic_error("StatSource: empty source");
    return ensemble->model().label();
}

StatBundle source_stats(const StatSource& src, const MaxSpec& spec,
                        std::optional<double> moment_r, const std::vector<double>& epsilons,
                        const CheckContext& ctx, const std::string& salt) {
    if (src.exact()) return exact_rademacher_stats(src.exact_n, spec, moment_r, epsilons, src.exact_scale);
    if (src.ensemble == nullptr) throw std::logic_error("StatSource: empty source");
    std::vector<double> vals = base_values(*src.ensemble, spec);
    BootstrapCfg cfg = ctx.bootstrap;
    cfg.salt = cfg.salt.empty() ? salt : cfg.salt + "|" + salt;
    return evaluate_stats(vals, spec, moment_r, epsilons, cfg);
}

// --- record assembly ----------------------------------------------------------

namespace {

VerificationRecord assemble(std::string check_id, std::string model_id, std::string params,
                            MaxStatistic st, double bound, std::string source,
                            const CheckContext& ctx, std::string note = "") {
    VerificationRecord rec;
    rec.check_id = std::move(check_id);
    rec.model_id = std::move(model_id);
    rec.params = std::move(params);
    rec.bound_value = bound * ctx.bound_scale;
    rec.bound_source = std::move(source);
    rec.statistic = std::move(st);
    if (ctx.bound_scale != 1.0) {
        if (!note.empty()) note += "; ";
        note += strf("bound scaled by %g (negative control)", ctx.bound_scale);
    }
    rec.verdict = verdict_from(rec.statistic, rec.bound_value);
    rec.margin = margin_of(rec.bound_value, rec.statistic.estimate);
    rec.note = std::move(note);
    return rec;
}

VerificationRecord not_applicable(std::string check_id, std::string model_id, std::string params,
                                  std::string source, std::string note) {
    VerificationRecord rec;
    rec.check_id = std::move(check_id);
    rec.model_id = std::move(model_id);
    rec.params = std::move(params);
    rec.bound_source = std::move(source);
    rec.verdict = Verdict::NotApplicable;
    rec.margin = 0.0;
    rec.note = std::move(note);
    return rec;
}

// Window weight sum over (k, m] (1-based alpha).
double window_alpha_sum(const WeightSequence& alpha, std::size_t k, std::size_t m) {
    KahanSum s;
    for (std::size_t l = k + 1; l <= m; ++l) s.add(alpha.term(l));
    return s.value();
}

bool is_moment_kind(SchemeKind k) { return k == SchemeKind::Moment1 || k == SchemeKind::Moment2; }
bool is_prob_kind(SchemeKind k) { return k == SchemeKind::Prob1 || k == SchemeKind::Prob2; }
bool is_second_kind(SchemeKind k) { return k == SchemeKind::Moment2 || k == SchemeKind::Prob2; }

std::string transfer_citation(TransferKind t) {
    switch (t) {
        case TransferKind::MomentFirst: return "moment transfer C=4K (Fazekas-Klesov 2000 Thm 1.1)";
        case TransferKind::MomentSecond: return "two-segment moment transfer C=4*D_r*K";
        case TransferKind::ProbFirst: return "probability transfer C=4K (Tomacs-Libor 2006 Thm 2.1)";
        case TransferKind::ProbSecond: return "two-segment probability transfer C=(1+4^(1/r))^r*K";
    }
    return "?";
}

}  // namespace

// --- Kolmogorov-type checks -----------------------------------------------------

std::vector<VerificationRecord> check_kolmogorov(const StatSource& src, const BoundScheme& scheme,
                                                 std::size_t m, std::size_t k,
                                                 const CheckContext& ctx) {
    const std::size_t n = src.length();
    if (m == 0 || m > n) throw std::invalid_argument("check_kolmogorov: window end outside path");
    if (k >= m) throw std::invalid_argument("check_kolmogorov: empty window (k >= m)");
    if (scheme.alpha.size() < m)
        throw std::invalid_argument("check_kolmogorov: alpha shorter than window");
    if (scheme.K.estimated)
        throw std::invalid_argument(
            "check_kolmogorov: scheme constant is estimated; run estimate_implied_constant");
    if (!is_moment_kind(scheme.kind) && !is_prob_kind(scheme.kind))
        throw std::invalid_argument("check_kolmogorov: scheme is not a Kolmogorov form");
    if (k > 0 && !is_second_kind(scheme.kind))
        throw std::invalid_argument("check_kolmogorov: window start k>0 needs a second-kind scheme");

    const double sum_alpha = window_alpha_sum(scheme.alpha, k, m);
    const std::string model_id = src.label();
    std::vector<VerificationRecord> out;

    if (is_moment_kind(scheme.kind)) {
        MaxSpec spec;
        spec.kind = StatKind::MomentOfMax;
        spec.lo = k;
        spec.hi = m;
        std::string salt = strf("kolmogorov|moment|k=%zu|m=%zu|r=%g", k, m, scheme.r);
        StatBundle b = source_stats(src, spec, scheme.r, {}, ctx, salt);
        out.push_back(assemble("check_kolmogorov", model_id,
                               strf("form=moment;k=%zu;m=%zu;r=%g", k, m, scheme.r),
                               *b.moment, scheme.K.value * sum_alpha, scheme.source, ctx));
        return out;
    }

    const double total = scheme.K.value * sum_alpha;
    std::vector<double> eps = bound_anchored_epsilons(total, scheme.r, ctx.epsilon_points);
    MaxSpec spec;
    spec.kind = StatKind::ProbOfMax;
    spec.lo = k;
    spec.hi = m;
    std::string salt = strf("kolmogorov|prob|k=%zu|m=%zu|r=%g", k, m, scheme.r);
    StatBundle b = source_stats(src, spec, std::nullopt, eps, ctx, salt);
    for (const MaxStatistic& st : b.probs) {
        double bound = total / std::pow(st.epsilon, scheme.r);
        out.push_back(assemble("check_kolmogorov", model_id,
                               strf("form=prob;k=%zu;m=%zu;r=%g;eps=%.6g", k, m, scheme.r,
                                    st.epsilon),
                               st, bound, scheme.source, ctx));
    }
    return out;
}

std::vector<VerificationRecord> check_hajek_renyi(const StatSource& src, const BoundScheme& scheme,
                                                  const NormalizerSequence& beta, std::size_t m,
                                                  const CheckContext& ctx) {
    const std::size_t n = src.length();
    if (beta.size() < n) throw std::invalid_argument("check_hajek_renyi: beta shorter than path");
    if (scheme.alpha.size() < n)
        throw std::invalid_argument("check_hajek_renyi: alpha shorter than path");
    if (m > n) throw std::invalid_argument("check_hajek_renyi: segment start beyond path");
    if (scheme.K.estimated)
        throw std::invalid_argument(
            "check_hajek_renyi: scheme constant is estimated; run estimate_implied_constant");
    const bool moment = is_moment_kind(scheme.kind);
    if (!moment && !is_prob_kind(scheme.kind))
        throw std::invalid_argument("check_hajek_renyi: scheme is not a Kolmogorov form");
    if (m >= 1 && !is_second_kind(scheme.kind))
        throw std::invalid_argument(
            "check_hajek_renyi: two-segment form needs a second-kind scheme");

    const double r = scheme.r;
    TransferKind tk = m == 0 ? (moment ? TransferKind::MomentFirst : TransferKind::ProbFirst)
                             : (moment ? TransferKind::MomentSecond : TransferKind::ProbSecond);
    const double C = constant_transfer(scheme.K.value, r, tk);

    // base sum: first kind sum alpha_l/beta_l^r, second kind the two-segment RHS
    KahanSum base;
    if (m == 0) {
        for (std::size_t l = 1; l <= n; ++l)
            base.add(scheme.alpha.term(l) / std::pow(beta.term(l), r));
    } else {
        KahanSum head;
        for (std::size_t l = 1; l <= m; ++l) head.add(scheme.alpha.term(l));
        base.add(head.value() / std::pow(beta.term(m), r));
        for (std::size_t l = m + 1; l <= n; ++l)
            base.add(scheme.alpha.term(l) / std::pow(beta.term(l), r));
    }
    const double base_sum = base.value();

    MaxSpec spec;
    spec.hi = n;
    spec.beta.assign(beta.values().begin(), beta.values().begin() + n);
    if (m == 0) {
        spec.kind = moment ? StatKind::WeightedMomentOfMax : StatKind::WeightedProbOfMax;
    } else {
        spec.kind = StatKind::TwoSegment;
        spec.m = m;
    }

    const std::string model_id = src.label();
    const std::string source = scheme.source + " + " + transfer_citation(tk);
    std::vector<VerificationRecord> out;

    if (moment) {
        std::string salt = strf("hajek_renyi|moment|m=%zu|r=%g", m, r);
        StatBundle b = source_stats(src, spec, r, {}, ctx, salt);
        out.push_back(assemble("check_hajek_renyi", model_id,
                               strf("form=moment;m=%zu;r=%g;C=%.6g", m, r, C), *b.moment,
                               C * base_sum, source, ctx));
        return out;
    }

    const double total = C * base_sum;
    std::vector<double> eps = bound_anchored_epsilons(total, r, ctx.epsilon_points);
    std::string salt = strf("hajek_renyi|prob|m=%zu|r=%g", m, r);
    StatBundle b = source_stats(src, spec, std::nullopt, eps, ctx, salt);
    for (const MaxStatistic& st : b.probs) {
        double bound = total / std::pow(st.epsilon, r);
        out.push_back(assemble("check_hajek_renyi", model_id,
                               strf("form=prob;m=%zu;r=%g;C=%.6g;eps=%.6g", m, r, C, st.epsilon),
                               st, bound, source, ctx));
    }
    return out;
}

// --- model-specific checks ------------------------------------------------------

std::vector<VerificationRecord> check_kuczmaszewska_4th(const PathEnsemble& ens,
                                                        const CheckContext& ctx) {
    const ProcessModel& model = ens.model();
    const std::size_t n = ens.length();
    const std::string source = "Kuczmaszewska 2005 (as printed, no leading constant)";
    const double s2 = model.increment_variance();
    const double m4 = model.increment_abs_moment(4.0);
    if (!std::isfinite(s2) || !std::isfinite(m4))
        return {not_applicable("check_kuczmaszewska_4th", model.label(), strf("n=%zu", n), source,
                               "fourth moment of the increments is not finite")};

    // sum E X^4 + 2 sum_i E X_i^2 sum_{j<i} E X_j^2 with identical moments
    const double bound = static_cast<double>(n) * m4 +
                         s2 * s2 * static_cast<double>(n) * static_cast<double>(n - 1);
    MaxSpec spec;
    spec.kind = StatKind::MomentOfMax;
    spec.lo = 0;
    spec.hi = n;
    StatSource src = StatSource::mc(ens);
    StatBundle b = source_stats(src, spec, 4.0, {}, ctx, strf("kuczmaszewska|n=%zu", n));
    std::string note;
    if (model.kind != ProcessKind::NAGaussian)
        note = "model is not the NA Gaussian construction; result is informational";
    std::vector<VerificationRecord> out;
    out.push_back(assemble("check_kuczmaszewska_4th", model.label(), strf("n=%zu;r=4", n),
                           *b.moment, bound, source, ctx, note));
    return out;
}

std::vector<VerificationRecord> check_shao_na(const PathEnsemble& ens, double p,
                                              const CheckContext& ctx) {
    if (!(p > 1.0)) throw std::invalid_argument("check_shao_na: requires p > 1");
    const ProcessModel& model = ens.model();
    if (model.kind != ProcessKind::NAGaussian)
        throw std::invalid_argument("check_shao_na: model is not the NA Gaussian construction");
    BoundScheme scheme = theoretical_bound(model, p, /*moment_form=*/true);
    const std::size_t n = ens.length();
    const double bound = scheme.K.value * window_alpha_sum(scheme.alpha, 0, n);

    MaxSpec spec;
    spec.kind = StatKind::MomentOfMax;
    spec.lo = 0;
    spec.hi = n;
    StatSource src = StatSource::mc(ens);
    StatBundle b = source_stats(src, spec, p, {}, ctx, strf("shao_na|p=%g|n=%zu", p, n));
    std::vector<VerificationRecord> out;
    out.push_back(assemble("check_shao_na", model.label(), strf("p=%g;n=%zu", p, n), *b.moment,
                           bound, scheme.source, ctx));
    return out;
}

std::vector<VerificationRecord> check_chandra_ghosal(const PathEnsemble& ens,
                                                     const CheckContext& ctx) {
    const ProcessModel& model = ens.model();
    if (model.kind != ProcessKind::AANA)
        throw std::invalid_argument("check_chandra_ghosal: model is not the AANA construction");
    const std::size_t n = ens.length();
    const double A = model.q.a_sum(n);
    const double Kn = 2.0 * (A + std::sqrt(1.0 + A * A)) * (A + std::sqrt(1.0 + A * A));
    const double sum_var = static_cast<double>(n) * model.increment_variance();
    const double total = Kn * sum_var;
    const std::string source = "Chandra-Ghosal 1996 Thm 1";

    std::vector<double> eps = bound_anchored_epsilons(total, 2.0, ctx.epsilon_points);
    MaxSpec spec;
    spec.kind = StatKind::ProbOfMax;
    spec.lo = 0;
    spec.hi = n;
    StatSource src = StatSource::mc(ens);
    StatBundle b = source_stats(src, spec, std::nullopt, eps, ctx, strf("chandra|n=%zu", n));
    std::string note = strf("A_n=%.6g; K factor 2(A+sqrt(1+A^2))^2=%.6g", A, Kn);
    std::vector<VerificationRecord> out;
    for (const MaxStatistic& st : b.probs) {
        double bound = total / (st.epsilon * st.epsilon);
        out.push_back(assemble("check_chandra_ghosal", model.label(),
                               strf("n=%zu;eps=%.6g", n, st.epsilon), st, bound, source, ctx,
                               note));
        note.clear();  // emit the constants once
    }
    return out;
}

namespace {

// Closed-form E(S_l^+ - S_{l-1}^+) = (s_l - s_{l-1})/sqrt(2 pi) is valid when
// the partial sums are centered Gaussians.
bool gaussian_partial_sums(const ProcessModel& model) {
    switch (model.kind) {
        case ProcessKind::Demimartingale: return true;
        case ProcessKind::NAGaussian: return model.na_variant == NAVariant::Equicorrelated;
        case ProcessKind::IID: return model.marginal.kind == MarginalKind::Normal;
        default: return false;
    }
}

}  // namespace

std::vector<VerificationRecord> check_christofides(const PathEnsemble& ens,
                                                   const NormalizerSequence& beta,
                                                   const CheckContext& ctx) {
    const ProcessModel& model = ens.model();
    const std::size_t n = ens.length();
    if (beta.size() < n) throw std::invalid_argument("check_christofides: beta shorter than path");
    const std::string source = "Christofides 2000 Thm 2.1";

    // alpha_l = E(S_l^+ - S_{l-1}^+): closed form for Gaussian partial sums,
    // Monte Carlo estimate otherwise.
    std::vector<double> alpha(n);
    std::string alpha_note;
    if (gaussian_partial_sums(model)) {
        double prev = 0.0;
        for (std::size_t l = 1; l <= n; ++l) {
            double cur = gaussian_positive_part_mean(model.partial_sum_sd(l));
            alpha[l - 1] = cur - prev;
            prev = cur;
        }
        alpha_note = "alpha from Gaussian closed form";
    } else {
        BootstrapCfg cfg = ctx.bootstrap;
        cfg.resamples = 0;  // point estimates only; the bound itself is noisy enough to flag
        cfg.salt = cfg.salt.empty() ? "christofides-alpha" : cfg.salt + "|christofides-alpha";
        DemiAlphaReport rep = demimartingale_alpha(ens, cfg);
        alpha = rep.alpha.values();
        alpha_note = "alpha from MC estimates (no closed form for this model)";
    }

    KahanSum bsum;
    for (std::size_t l = 1; l <= n; ++l) bsum.add(alpha[l - 1] / beta.term(l));
    const double total = bsum.value();

    std::vector<double> eps = bound_anchored_epsilons(total, 1.0, ctx.epsilon_points);
    MaxSpec one_sided;
    one_sided.kind = StatKind::WeightedProbOfMax;
    one_sided.hi = n;
    one_sided.beta.assign(beta.values().begin(), beta.values().begin() + n);
    one_sided.one_sided = true;
    MaxSpec abs_spec = one_sided;
    abs_spec.one_sided = false;

    StatSource src = StatSource::mc(ens);
    StatBundle one = source_stats(src, one_sided, std::nullopt, eps, ctx,
                                  strf("christofides|one_sided|n=%zu", n));
    StatBundle both = source_stats(src, abs_spec, std::nullopt, eps, ctx,
                                   strf("christofides|abs|n=%zu", n));

    std::vector<VerificationRecord> out;
    for (std::size_t i = 0; i < one.probs.size(); ++i) {
        const MaxStatistic& st = one.probs[i];
        double bound = total / st.epsilon;
        std::string note = "one-sided max (the form the demisubmartingale argument proves)";
        if (!alpha_note.empty()) note += "; " + alpha_note;
        out.push_back(assemble("check_christofides", model.label(),
                               strf("form=one_sided;n=%zu;eps=%.6g", n, st.epsilon), st, bound,
                               source, ctx, note));
        alpha_note.clear();
    }
    for (std::size_t i = 0; i < both.probs.size(); ++i) {
        const MaxStatistic& st = both.probs[i];
        double bound = total / st.epsilon * ctx.bound_scale;
        VerificationRecord rec;
        rec.check_id = "check_christofides";
        rec.model_id = model.label();
        rec.params = strf("form=abs;n=%zu;eps=%.6g", n, st.epsilon);
        rec.statistic = st;
        rec.bound_value = bound;
        rec.bound_source = source;
        rec.verdict = Verdict::NotApplicable;
        rec.margin = margin_of(bound, st.estimate);
        rec.note = "absolute-value reading reported for comparison only; the printed |.| "
                   "is not established for demisubmartingales";
        if (st.estimate > bound) rec.note += "; estimate exceeds the one-sided bound here";
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<VerificationRecord> check_kounias_weng(const PathEnsemble& ens, double r,
                                                   const NormalizerSequence& beta,
                                                   const CheckContext& ctx) {
    if (!(r > 0.0)) throw std::invalid_argument("check_kounias_weng: requires r > 0");
    const ProcessModel& model = ens.model();
    const std::size_t n = ens.length();
    if (beta.size() < n) throw std::invalid_argument("check_kounias_weng: beta shorter than path");
    const std::string source = "Kounias-Weng 1969";

    const double v = model.increment_abs_moment(r);
    if (!std::isfinite(v))
        return {not_applicable("check_kounias_weng", model.label(), strf("r=%g;n=%zu", r, n),
                               source, strf("E|X|^%g is not finite for this marginal", r))};

    const double s = r <= 1.0 ? 1.0 : r;
    KahanSum inner;
    for (std::size_t l = 1; l <= n; ++l)
        inner.add(std::pow(v / std::pow(beta.term(l), r), 1.0 / s));
    const double total = std::pow(inner.value(), s);

    std::string note;
    if (r > 1.0) {
        // alpha-transformation route: sum alpha_l/beta_l^r <= (sum a_l/beta_l)^r
        WeightSequence a = WeightSequence::constant(std::pow(v, 1.0 / r), n);
        NormalizerSequence bseq = NormalizerSequence::from_values(
            std::vector<double>(beta.values().begin(), beta.values().begin() + n));
        KWDomination dom = kw_domination(a, r, bseq, n);
        note = strf("alpha-route domination %.6g <= %.6g: %s", dom.lhs, dom.rhs,
                    dom.holds ? "holds" : "FAILS");
    }

    std::vector<double> eps = bound_anchored_epsilons(total, r, ctx.epsilon_points);
    MaxSpec spec;
    spec.kind = StatKind::WeightedProbOfMax;
    spec.hi = n;
    spec.beta.assign(beta.values().begin(), beta.values().begin() + n);
    StatSource src = StatSource::mc(ens);
    StatBundle b =
        source_stats(src, spec, std::nullopt, eps, ctx, strf("kounias|r=%g|n=%zu", r, n));
    std::vector<VerificationRecord> out;
    for (const MaxStatistic& st : b.probs) {
        double bound = total / std::pow(st.epsilon, r);
        out.push_back(assemble("check_kounias_weng", model.label(),
                               strf("r=%g;n=%zu;eps=%.6g", r, n, st.epsilon), st, bound, source,
                               ctx, note));
        note.clear();
    }
    return out;
}

std::vector<VerificationRecord> check_serfling(const StatSource& src,
                                               const std::vector<SerflingWindow>& windows,
                                               const CheckContext& ctx) {
    if (windows.empty()) throw std::invalid_argument("check_serfling: no windows supplied");
    const std::size_t len = src.length();
    for (const SerflingWindow& w : windows) {
        if (w.n == 0 || w.a + w.n > len)
            throw std::invalid_argument("check_serfling: window outside path");
        if (!(w.g >= 0.0)) throw std::invalid_argument("check_serfling: negative g value");
    }
    const std::string source = "Serfling 1970 (Stout 1974 Thm 2.4.1)";

    // superadditivity sanity on adjacent supplied windows:
    // g(F_{a,k}) + g(F_{a+k,m}) <= g(F_{a,k+m})
    std::size_t pairs = 0;
    std::string bad;
    for (const SerflingWindow& u : windows)
        for (const SerflingWindow& w : windows) {
            if (w.a != u.a + u.n) continue;
            for (const SerflingWindow& t : windows) {
                if (t.a != u.a || t.n != u.n + w.n) continue;
                ++pairs;
                if (u.g + w.g > t.g * (1.0 + 1e-12))
                    bad = strf("superadditivity fails: g(%zu,%zu)+g(%zu,%zu) > g(%zu,%zu)", u.a,
                               u.n, w.a, w.n, t.a, t.n);
            }
        }
    std::string sanity = bad.empty() ? strf("superadditivity verified on %zu adjacent pairs", pairs)
                                     : bad;

    const std::string model_id = src.label();
    std::vector<VerificationRecord> out;
    for (const SerflingWindow& w : windows) {
        double lg = std::log(2.0 * static_cast<double>(w.n)) / std::log(2.0);
        double bound = lg * lg * w.g;
        MaxSpec spec;
        spec.kind = StatKind::MomentOfMax;
        spec.lo = w.a;
        spec.hi = w.a + w.n;
        spec.one_sided = true;  // max of the signed partial sums
        StatBundle b =
            source_stats(src, spec, 2.0, {}, ctx, strf("serfling|a=%zu|n=%zu", w.a, w.n));
        VerificationRecord rec =
            assemble("check_serfling", model_id, strf("a=%zu;n=%zu;g=%.6g", w.a, w.n, w.g),
                     *b.moment, bound, source, ctx, sanity);
        if (!bad.empty()) rec.verdict = Verdict::NotApplicable;
        out.push_back(std::move(rec));
    }
    return out;
}

// --- implied constant (rho-mixing) ----------------------------------------------

ImpliedConstantReport estimate_implied_constant(const ProcessModel& base_model,
                                                const std::vector<std::size_t>& horizons,
                                                std::size_t paths, std::uint64_t seed,
                                                double tolerance, unsigned threads) {
    if (base_model.kind != ProcessKind::AR1)
        throw std::invalid_argument("estimate_implied_constant: model must be AR1 (rho-mixing)");
    if (horizons.size() < 5)
        throw std::invalid_argument("estimate_implied_constant: need at least 4 doublings");
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (horizons[i] <= horizons[i - 1])
            throw std::invalid_argument("estimate_implied_constant: horizons must increase");
    if (paths == 0) throw std::invalid_argument("estimate_implied_constant: no paths");

    ProcessModel model = base_model;
    model.n = horizons.back();
    model.validate();

    const std::size_t G = horizons.size();
    std::vector<double> sum_sq(G * paths, 0.0);  // per (horizon, path) max^2
    EnsembleSpec espec{model, paths, seed, threads};
    for_each_path(espec, [&](std::size_t p, std::span<const double> x) {
        double s = 0.0, best = 0.0;
        std::size_t g = 0;
        for (std::size_t l = 1; l <= x.size(); ++l) {
            s += x[l - 1];
            best = std::max(best, std::abs(s));
            while (g < G && horizons[g] == l) {
                sum_sq[g * paths + p] = best * best;
                ++g;
            }
        }
    });

    const double var = model.increment_variance();
    ImpliedConstantReport rep;
    rep.horizons = horizons;
    rep.tolerance = tolerance;
    rep.k_hat.resize(G);
    for (std::size_t g = 0; g < G; ++g) {
        double mean = kahan_total({sum_sq.data() + g * paths, paths}) / static_cast<double>(paths);
        rep.k_hat[g] = mean / (static_cast<double>(horizons[g]) * var);
    }
    rep.bounded = true;
    for (std::size_t g = 1; g < G; ++g) {
        double ratio = rep.k_hat[g] / rep.k_hat[g - 1];
        rep.ratios.push_back(ratio);
        if (ratio > 1.0 + tolerance) rep.bounded = false;
    }
    return rep;
}

std::vector<VerificationRecord> implied_constant_records(const ImpliedConstantReport& rep,
                                                         const std::string& model_id) {
    const std::string source = "Shao 1995 (rho-mixing q=2; theta unspecified)";
    std::vector<VerificationRecord> out;
    for (std::size_t g = 0; g < rep.horizons.size(); ++g) {
        VerificationRecord rec;
        rec.check_id = "estimate_implied_constant";
        rec.model_id = model_id;
        rec.params = strf("n=%zu", rep.horizons[g]);
        rec.statistic.spec.kind = StatKind::MomentOfMax;
        rec.statistic.spec.lo = 0;
        rec.statistic.spec.hi = rep.horizons[g];
        rec.statistic.moment = true;
        rec.statistic.r = 2.0;
        rec.statistic.estimate = rep.k_hat[g];
        rec.statistic.ci = {rep.k_hat[g], rep.k_hat[g]};
        rec.bound_value = 0.0;
        rec.bound_source = source;
        rec.verdict = Verdict::Inconclusive;
        rec.margin = 0.0;
        rec.note = "K-hat(n) = E[max|S_l|^2]/(n max E X^2); theory names no explicit constant";
        out.push_back(std::move(rec));
    }
    VerificationRecord trend;
    trend.check_id = "estimate_implied_constant";
    trend.model_id = model_id;
    trend.params = "trend";
    trend.statistic.spec.kind = StatKind::MomentOfMax;
    trend.statistic.spec.lo = 0;
    trend.statistic.spec.hi = rep.horizons.back();
    trend.statistic.moment = true;
    trend.statistic.r = 2.0;
    double worst = 0.0;
    for (double x : rep.ratios) worst = std::max(worst, x);
    trend.statistic.estimate = worst;
    trend.statistic.ci = {worst, worst};
    trend.bound_value = 1.0 + rep.tolerance;
    trend.bound_source = source;
    trend.verdict = rep.bounded ? Verdict::Holds : Verdict::Inconclusive;
    trend.margin = margin_of(trend.bound_value, worst);
    trend.note = strf("worst K-hat doubling ratio over %zu horizons", rep.horizons.size());
    out.push_back(std::move(trend));
    return out;
}

// --- demimartingale alpha weights -----------------------------------------------

DemiAlphaReport demimartingale_alpha(const PathEnsemble& ens, const BootstrapCfg& cfg) {
    const std::size_t P = ens.paths();
    const std::size_t n = ens.length();
    if (P == 0) throw std::invalid_argument("demimartingale_alpha: empty ensemble");

    // D[p*n + (l-1)] = S_l^+ - S_{l-1}^+ for path p
    std::vector<double> D(P * n);
    for (std::size_t p = 0; p < P; ++p) {
        std::span<const double> x = ens.increments(p);
        double s = 0.0, prev = 0.0;
        for (std::size_t l = 1; l <= n; ++l) {
            s += x[l - 1];
            double pos = s > 0.0 ? s : 0.0;
            D[p * n + (l - 1)] = pos - prev;
            prev = pos;
        }
    }

    std::vector<double> mean(n, 0.0);
    {
        std::vector<KahanSum> acc(n);
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t l = 0; l < n; ++l) acc[l].add(D[p * n + l]);
        for (std::size_t l = 0; l < n; ++l) mean[l] = acc[l].value() / static_cast<double>(P);
    }

    DemiAlphaReport rep;
    rep.ci.assign(n, CI{});
    if (cfg.resamples > 0) {
        std::vector<std::vector<double>> boot(n, std::vector<double>(cfg.resamples));
        RngStream rs(cfg.seed, stream_from_tag("demi-alpha:" + cfg.salt));
        std::vector<double> acc(n);
        for (std::size_t b = 0; b < cfg.resamples; ++b) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t i = 0; i < P; ++i) {
                std::size_t idx = static_cast<std::size_t>(rs.index(b * P + i, P));
                const double* row = D.data() + idx * n;
                for (std::size_t l = 0; l < n; ++l) acc[l] += row[l];
            }
            for (std::size_t l = 0; l < n; ++l) boot[l][b] = acc[l] / static_cast<double>(P);
        }
        double lo_q = (1.0 - cfg.level) / 2.0;
        for (std::size_t l = 0; l < n; ++l) {
            std::sort(boot[l].begin(), boot[l].end());
            rep.ci[l] = {std::min(sorted_quantile(boot[l], lo_q), mean[l]),
                         std::max(sorted_quantile(boot[l], 1.0 - lo_q), mean[l])};
        }
    } else {
        for (std::size_t l = 0; l < n; ++l) rep.ci[l] = {mean[l], mean[l]};
    }

    if (gaussian_partial_sums(ens.model())) {
        rep.closed_form.resize(n);
        double prev = 0.0;
        for (std::size_t l = 1; l <= n; ++l) {
            double cur = gaussian_positive_part_mean(ens.model().partial_sum_sd(l));
            rep.closed_form[l - 1] = cur - prev;
            prev = cur;
        }
        for (std::size_t l = 0; l < n; ++l)
            rep.max_abs_deviation =
                std::max(rep.max_abs_deviation, std::abs(mean[l] - rep.closed_form[l]));
    }

    // theory guarantees non-negative entries; clamp MC noise for the weight API
    for (double& x : mean) x = std::max(x, 0.0);
    rep.alpha = WeightSequence::from_values(std::move(mean));
    return rep;
}

// --- randomized transfer trials ---------------------------------------------------

namespace {

// sup_{eps>0} eps^r P(X >= eps) for a population of non-negative atoms;
// attained at an atom since P is a right-continuous step function.
double sup_eps_ratio(std::vector<double>& pop, double r) {
    std::sort(pop.begin(), pop.end());
    const std::size_t N = pop.size();
    double best = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        if (i > 0 && pop[i] == pop[i - 1]) continue;
        double p = static_cast<double>(N - i) / static_cast<double>(N);
        best = std::max(best, std::pow(pop[i], r) * p);
    }
    return best;
}

double mean_pow(const std::vector<double>& pop, double r) {
    KahanSum s;
    for (double v : pop) s.add(std::pow(std::abs(v), r));
    return s.value() / static_cast<double>(pop.size());
}

}  // namespace

TransferTrial transfer_implication_trial(std::uint64_t seed, std::uint64_t index) {
    RngStream rs(seed, stream_from_tag(strf("transfer:%llu", static_cast<unsigned long long>(index))));

    TransferTrial t;
    t.n = 4 + static_cast<std::size_t>(rs.index(0, 11));  // 4..14
    t.r = 0.5 + 2.5 * rs.uniform(1);
    t.m = 1 + static_cast<std::size_t>(rs.index(2, t.n));
    const std::size_t n = t.n;
    const double r = t.r;

    std::vector<double> scale(n), alpha(n), beta(n);
    for (std::size_t i = 0; i < n; ++i) scale[i] = 0.2 + 1.8 * rs.uniform(10 + i);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = 0.05 + 1.95 * rs.uniform(100 + i);
    beta[0] = 0.2 + rs.uniform(300);
    for (std::size_t i = 1; i < n; ++i) beta[i] = beta[i - 1] + 0.6 * rs.uniform(300 + i);

    const std::size_t total = std::size_t{1} << n;

    // tight premise constants over every window (k exclusive, m' inclusive)
    std::vector<double> alpha_prefix(n + 1, 0.0);
    {
        KahanSum s;
        for (std::size_t l = 1; l <= n; ++l) {
            s.add(alpha[l - 1]);
            alpha_prefix[l] = s.value();
        }
    }
    std::vector<std::vector<double>> pop(n + 1);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t mm = k + 1; mm <= n; ++mm) {
            pop[mm].clear();
            pop[mm].resize(total);
        }
        for (std::size_t mask = 0; mask < total; ++mask) {
            for (std::size_t i = k; i < n; ++i)
                x[i] = (mask >> i) & 1 ? scale[i] : -scale[i];
            double s = 0.0, best = 0.0;
            for (std::size_t l = k + 1; l <= n; ++l) {
                s += x[l - 1];
                best = std::max(best, std::abs(s));
                pop[l][mask] = best;
            }
        }
        for (std::size_t mm = k + 1; mm <= n; ++mm) {
            double asum = alpha_prefix[mm] - alpha_prefix[k];
            double mom = mean_pow(pop[mm], r) / asum;
            double prob = sup_eps_ratio(pop[mm], r) / asum;
            t.K_mom2 = std::max(t.K_mom2, mom);
            t.K_prob = std::max(t.K_prob, prob);
            if (k == 0) t.K_mom1 = std::max(t.K_mom1, mom);
        }
    }

    // conclusion populations
    std::vector<double> W(total), V(total);
    for (std::size_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? scale[i] : -scale[i];
        double s = 0.0, w = 0.0, v = 0.0;
        for (std::size_t l = 1; l <= n; ++l) {
            s += x[l - 1];
            double y = std::abs(s) / beta[l - 1];
            w = std::max(w, y);
            if (l >= t.m) v = std::max(v, y);
        }
        W[mask] = w;
        V[mask] = v;
    }

    KahanSum first_rhs;
    for (std::size_t l = 1; l <= n; ++l) first_rhs.add(alpha[l - 1] / std::pow(beta[l - 1], r));
    KahanSum second_rhs;
    second_rhs.add(alpha_prefix[t.m] / std::pow(beta[t.m - 1], r));
    for (std::size_t l = t.m + 1; l <= n; ++l)
        second_rhs.add(alpha[l - 1] / std::pow(beta[l - 1], r));

    t.prob_first_C = constant_transfer(t.K_prob, r, TransferKind::ProbFirst);
    t.prob_second_C = constant_transfer(t.K_prob, r, TransferKind::ProbSecond);
    t.mom_first_C = constant_transfer(t.K_mom1, r, TransferKind::MomentFirst);
    t.mom_second_C = constant_transfer(t.K_mom2, r, TransferKind::MomentSecond);

    t.prob_first_ratio = sup_eps_ratio(W, r) / first_rhs.value();
    t.mom_first_ratio = mean_pow(W, r) / first_rhs.value();
    t.prob_second_ratio = sup_eps_ratio(V, r) / second_rhs.value();
    t.mom_second_ratio = mean_pow(V, r) / second_rhs.value();

    auto ok = [](double ratio, double allowed) { return ratio <= allowed * (1.0 + 1e-9); };
    t.all_hold = ok(t.prob_first_ratio, t.prob_first_C) &&
                 ok(t.prob_second_ratio, t.prob_second_C) &&
                 ok(t.mom_first_ratio, t.mom_first_C) && ok(t.mom_second_ratio, t.mom_second_C);
    return t;
}

}  // namespace hrlab
