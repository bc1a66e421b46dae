#include "hrlab/slln.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "hrlab/numeric.hpp"
#include "hrlab/series.hpp"

namespace hrlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

std::string strf(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

void validate_grid(const std::vector<std::size_t>& grid, std::size_t path_length) {
    if (grid.empty()) throw std::invalid_argument("horizon grid is empty");
    if (grid.front() == 0) throw std::invalid_argument("horizon grid starts at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("horizon grid must be strictly increasing");
    if (grid.back() > path_length)
        throw std::invalid_argument("horizon grid exceeds the simulated path length");
}

void validate_levels(const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("no quantile levels configured");
    for (double q : levels)
        if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("quantile level outside (0,1)");
}

std::size_t level_index_near(const std::vector<double>& levels, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (std::abs(levels[i] - target) < std::abs(levels[best] - target)) best = i;
    return best;
}

// stat is row-major [grid point][path]; returns rows [level][grid point].
std::vector<std::vector<double>> quantile_rows(std::vector<double>& stat, std::size_t G,
                                               std::size_t P, const std::vector<double>& levels) {
    std::vector<std::vector<double>> rows(levels.size(), std::vector<double>(G));
    for (std::size_t g = 0; g < G; ++g) {
        std::sort(stat.begin() + static_cast<std::ptrdiff_t>(g * P),
                  stat.begin() + static_cast<std::ptrdiff_t>((g + 1) * P));
        std::span<const double> sorted{stat.data() + g * P, P};
        for (std::size_t i = 0; i < levels.size(); ++i)
            rows[i][g] = sorted_quantile(sorted, levels[i]);
    }
    return rows;
}

bool row_decays(const std::vector<double>& row, double factor) {
    return row.back() * factor <= row.front();
}

}  // namespace

std::string to_string(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::Decaying: return "Decaying";
        case TrendVerdict::NotDecaying: return "NotDecaying";
        case TrendVerdict::Bounded: return "Bounded";
        case TrendVerdict::Unbounded: return "Unbounded";
        case TrendVerdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

RateCheckReport slln_decay(const EnsembleSpec& ens, const BoundScheme& scheme,
                           const NormalizerSequence& b, const std::vector<std::size_t>& grid,
                           const RateCfg& cfg) {
    ens.validate();
    validate_grid(grid, ens.model.n);
    validate_levels(cfg.levels);
    const std::size_t N = grid.back();
    if (b.size() < N) throw std::invalid_argument("slln_decay: normalizer shorter than grid");
    if (scheme.alpha.size() < N) throw std::invalid_argument("slln_decay: alpha shorter than grid");

    RateCheckReport rep;
    rep.check_id = "slln_decay";
    rep.model_id = ens.model.label();
    rep.grid = grid;
    rep.levels = cfg.levels;
    rep.primary_label = "|S_n/b_n|";

    SeriesResult series = series_ratio_sum(scheme.alpha, b, scheme.r, N);
    if (series.diagnosis.state != SeriesState::Converged) {
        rep.verdict = TrendVerdict::NotApplicable;
        rep.note = "normalizer series sum alpha_l/b_l^r not certified convergent: " +
                   series.diagnosis.detail;
        return rep;
    }

    const std::size_t G = grid.size();
    const std::size_t P = ens.paths;
    std::vector<double> stat(G * P, 0.0);
    for_each_path(ens, [&](std::size_t p, std::span<const double> x) {
        double s = 0.0;
        std::size_t g = 0;
        for (std::size_t l = 1; l <= N; ++l) {
            s += x[l - 1];
            while (g < G && grid[g] == l) {
                stat[g * P + p] = std::abs(s) / b.term(l);
                ++g;
            }
        }
    });
    rep.primary = quantile_rows(stat, G, P, cfg.levels);

    bool decays = G >= 2;
    for (const auto& row : rep.primary) decays = decays && row_decays(row, cfg.decay_factor);
    rep.verdict = decays ? TrendVerdict::Decaying : TrendVerdict::NotDecaying;
    rep.note = strf("horizon %zu; decay factor %g over the grid; series value %.6g", N,
                    cfg.decay_factor, series.diagnosis.partial_sum);
    return rep;
}

RateCheckReport rate_envelope_check(const EnsembleSpec& ens, const RateEnvelope& envelope,
                                    const std::vector<std::size_t>& grid, const RateCfg& cfg) {
    ens.validate();
    validate_grid(grid, ens.model.n);
    validate_levels(cfg.levels);
    const std::size_t N = grid.back();
    if (envelope.size() < N)
        throw std::invalid_argument("rate_envelope_check: envelope horizon shorter than grid");

    RateCheckReport rep;
    rep.check_id = "rate_envelope_check";
    rep.model_id = ens.model.label();
    rep.grid = grid;
    rep.levels = cfg.levels;
    rep.primary_label = strf("sup_{%zu<=k<=n} |S_k|/beta_k", grid.front());

    const std::size_t G = grid.size();
    const std::size_t P = ens.paths;
    std::vector<double> stat(G * P, 0.0);
    for_each_path(ens, [&](std::size_t p, std::span<const double> x) {
        double s = 0.0, sup = 0.0;
        std::size_t g = 0;
        for (std::size_t k = 1; k <= N; ++k) {
            s += x[k - 1];
            if (k >= grid.front()) sup = std::max(sup, std::abs(s) / envelope.term(k));
            while (g < G && grid[g] == k) {
                stat[g * P + p] = sup;
                ++g;
            }
        }
    });
    rep.primary = quantile_rows(stat, G, P, cfg.levels);

    if (G < 2) {
        rep.verdict = TrendVerdict::NotApplicable;
        rep.note = "single grid point; boundedness trend not assessable";
        return rep;
    }
    const auto& row = rep.primary[level_index_near(cfg.levels, 0.9)];
    bool bounded = row[G - 1] <= row[G - 2] * (1.0 + cfg.growth_tolerance);
    rep.verdict = bounded ? TrendVerdict::Bounded : TrendVerdict::Unbounded;
    rep.note = strf("horizon %zu; last-doubling growth %.4g (tolerance %g); envelope %s", N,
                    row[G - 2] > 0.0 ? row[G - 1] / row[G - 2] - 1.0 : 0.0, cfg.growth_tolerance,
                    envelope.bounded_branch ? "bounded branch" : "unbounded branch");
    return rep;
}

RateCheckReport log_slln_check(const EnsembleSpec& ens, double delta,
                               const std::vector<std::size_t>& grid, const RateCfg& cfg) {
    ens.validate();
    validate_grid(grid, ens.model.n);
    validate_levels(cfg.levels);
    if (!(delta >= 0.0)) throw std::invalid_argument("log_slln_check: delta must be >= 0");
    if (delta >= 0.5) throw std::invalid_argument("log_slln_check: requires delta < 1/2");
    if (grid.front() < 2) throw std::invalid_argument("log_slln_check: grid must start at n >= 2");

    RateCheckReport rep;
    rep.check_id = "log_slln_check";
    rep.model_id = ens.model.label();
    rep.grid = grid;
    rep.levels = cfg.levels;
    rep.primary_label = "|T_n|";
    rep.secondary_label = strf("(log n)^%g |T_n|", delta);

    const std::size_t N = grid.back();
    const std::size_t G = grid.size();
    const std::size_t P = ens.paths;
    std::vector<double> stat(G * P, 0.0);
    for_each_path(ens, [&](std::size_t p, std::span<const double> x) {
        KahanSum w;  // sum_{k<=n} X_k / k (zero-mean models; analytic centering)
        std::size_t g = 0;
        for (std::size_t k = 1; k <= N; ++k) {
            w.add(x[k - 1] / static_cast<double>(k));
            while (g < G && grid[g] == k) {
                stat[g * P + p] = std::abs(w.value()) / std::log(static_cast<double>(k));
                ++g;
            }
        }
    });
    rep.primary = quantile_rows(stat, G, P, cfg.levels);
    // (log n)^delta |T_n| is a per-grid-point scalar multiple, so its
    // quantiles are the scaled primary quantiles exactly.
    rep.secondary = rep.primary;
    for (auto& row : rep.secondary)
        for (std::size_t g = 0; g < G; ++g)
            row[g] *= std::pow(std::log(static_cast<double>(grid[g])), delta);

    if (G < 2) {
        rep.verdict = TrendVerdict::NotApplicable;
        rep.secondary_verdict = TrendVerdict::NotApplicable;
        rep.note = "single grid point; trends not assessable";
        return rep;
    }
    const std::size_t med = level_index_near(cfg.levels, 0.5);
    bool decreasing = true;
    for (std::size_t g = 1; g < G; ++g)
        decreasing = decreasing && rep.primary[med][g] < rep.primary[med][g - 1];
    rep.verdict = decreasing ? TrendVerdict::Decaying : TrendVerdict::NotDecaying;
    bool bounded = true;
    for (std::size_t g = 1; g < G; ++g)
        bounded = bounded &&
                  rep.secondary[med][g] <= rep.secondary[med][g - 1] * (1.0 + cfg.growth_tolerance);
    rep.secondary_verdict = bounded ? TrendVerdict::Bounded : TrendVerdict::Unbounded;
    rep.note = strf("horizon %zu; median trends; growth tolerance %g", N, cfg.growth_tolerance);
    if (ens.model.kind != ProcessKind::LogOU)
        rep.note += "; covariance premise not certified for this model (informational)";
    return rep;
}

TruncationTriple truncate(std::span<const double> x, double p, std::size_t first_index) {
    if (!(p > 0.0) || !(p < 2.0)) throw std::invalid_argument("truncate: p outside (0,2)");
    if (first_index == 0) throw std::invalid_argument("truncate: indices are 1-based");
    TruncationTriple t;
    t.p = p;
    t.y.resize(x.size());
    t.z.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double level = std::pow(static_cast<double>(first_index + i), 1.0 / p);
        t.y[i] = std::clamp(x[i], -level, level);
        t.z[i] = std::abs(x[i]) <= level ? x[i] : 0.0;
    }
    return t;
}

GFunction g_function(const MarginalSpec& marginal, std::vector<double> y_grid,
                     std::size_t n_window) {
    marginal.validate();
    if (y_grid.empty()) throw std::invalid_argument("g_function: empty grid");
    if (n_window == 0) throw std::invalid_argument("g_function: zero window");
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        if (!(y_grid[i] >= 0.0)) throw std::invalid_argument("g_function: negative y");
        if (i > 0 && y_grid[i] <= y_grid[i - 1])
            throw std::invalid_argument("g_function: grid must be strictly increasing");
    }
    GFunction gf;
    gf.n_window = n_window;
    gf.g.resize(y_grid.size());
    for (std::size_t i = 0; i < y_grid.size(); ++i) gf.g[i] = marginal.tail_prob(y_grid[i]);
    gf.y = std::move(y_grid);
    return gf;
}

PMomentReport p_moment_check(const MarginalSpec& marginal, double p, std::size_t horizon) {
    if (!(p > 0.0) || !(p < 2.0)) throw std::invalid_argument("p_moment_check: p outside (0,2)");
    if (horizon == 0) throw std::invalid_argument("p_moment_check: zero horizon");
    marginal.validate();

    PMomentReport rep;
    rep.p = p;
    rep.integral_converges = marginal.has_abs_moment(p);
    rep.integral_value = rep.integral_converges ? marginal.abs_moment(p) / p : kInf;

    KahanSum s;
    double last = 0.0;
    std::size_t k_stop = horizon;
    for (std::size_t k = 1; k <= horizon; ++k) {
        last = marginal.tail_prob(std::pow(static_cast<double>(k), 1.0 / p));
        s.add(last);
        if (last < 1e-300) {
            k_stop = k;
            break;
        }
    }
    rep.sum_partial = s.value();

    const double N = static_cast<double>(k_stop);
    switch (marginal.kind) {
        case MarginalKind::Zero:
        case MarginalKind::Rademacher:
        case MarginalKind::Normal:
            // terms vanish (Rademacher/Zero exactly; Normal below 1e-300)
            rep.sum_converges = true;
            rep.sum_tail_bound = last;
            break;
        case MarginalKind::ParetoSym: {
            double e = marginal.gamma / p;  // term ~ k^-e
            rep.sum_converges = e > 1.0;
            rep.sum_tail_bound =
                rep.sum_converges ? std::pow(N, 1.0 - e) / (e - 1.0) : kInf;
            break;
        }
        case MarginalKind::Cauchy: {
            double e = 1.0 / p;  // tail_prob(y) <= (2/pi)/y, term majorant ~ k^-e
            rep.sum_converges = e > 1.0;
            rep.sum_tail_bound = rep.sum_converges
                                     ? (2.0 / kPi) * std::pow(N, 1.0 - e) / (e - 1.0)
                                     : kInf;
            break;
        }
    }

    rep.holds = rep.integral_converges && rep.sum_converges;
    if (!rep.integral_converges)
        rep.detail = strf("(6.1) fails: integral y^{p-1}G(y)dy = E|X|^%g/%g diverges", p, p);
    else if (!rep.sum_converges)
        rep.detail = strf("(6.1) fails: sum P(|X_k|^%g > k) diverges", p);
    return rep;
}

MzReport mz_slln_check(const EnsembleSpec& ens, double p, const std::vector<std::size_t>& grid,
                       const MzCfg& cfg) {
    ens.validate();
    validate_grid(grid, ens.model.n);
    validate_levels(cfg.rate.levels);
    if (!(p > 0.0) || !(p < 2.0)) throw std::invalid_argument("mz_slln_check: p outside (0,2)");
    if (ens.model.kind != ProcessKind::IID)
        throw std::invalid_argument("mz_slln_check: needs iid paths (analytic marginal route)");
    const MarginalSpec& marginal = ens.model.marginal;

    MzReport rep;
    rep.rate.check_id = "mz_slln_check";
    rep.rate.model_id = ens.model.label();
    rep.rate.grid = grid;
    rep.rate.levels = cfg.rate.levels;
    rep.rate.primary_label = strf("|S_n|/n^{1/%g}", p);
    rep.pmoment = p_moment_check(marginal, p);
    if (!rep.pmoment.holds) {
        rep.applicable = false;
        rep.failing_condition = rep.pmoment.detail;
        rep.rate.verdict = TrendVerdict::NotApplicable;
        rep.rate.note = rep.failing_condition;
        return rep;
    }

    const std::size_t P = ens.paths;

    // (6.2): Kolmogorov probability inequality for the centered truncated
    // sums, on the clipped (Y) and zeroed (Z) routes, K = 1 independent case.
    if (p >= 1.0) {
        const std::size_t ny = std::min(cfg.truncation_window, grid.front());
        std::vector<double> alpha_y(ny), alpha_z(ny);
        KahanSum by, bz;
        for (std::size_t i = 1; i <= ny; ++i) {
            double c = std::pow(static_cast<double>(i), 1.0 / p);
            double t2 = marginal.truncated_second_moment(c);
            alpha_z[i - 1] = t2;
            alpha_y[i - 1] = t2 + c * c * marginal.tail_prob(c);
            by.add(alpha_y[i - 1]);
            bz.add(alpha_z[i - 1]);
        }
        std::vector<double> vy(P), vz(P);
        EnsembleSpec trunc_spec = ens;
        trunc_spec.model.n = ny;
        for_each_path(trunc_spec, [&](std::size_t q, std::span<const double> x) {
            double sy = 0.0, sz = 0.0, my = 0.0, mz = 0.0;
            for (std::size_t i = 1; i <= ny; ++i) {
                double c = std::pow(static_cast<double>(i), 1.0 / p);
                sy += std::clamp(x[i - 1], -c, c);  // E Y = 0: symmetric marginal
                sz += std::abs(x[i - 1]) <= c ? x[i - 1] : 0.0;
                my = std::max(my, std::abs(sy));
                mz = std::max(mz, std::abs(sz));
            }
            vy[q] = my;
            vz[q] = mz;
        });
        struct Route {
            const char* name;
            std::vector<double>* vals;
            double total;
        } routes[2] = {{"Y", &vy, by.value()}, {"Z", &vz, bz.value()}};
        MaxSpec spec;
        spec.kind = StatKind::ProbOfMax;
        spec.lo = 0;
        spec.hi = ny;
        for (const Route& route : routes) {
            std::vector<double> eps = bound_anchored_epsilons(route.total, 2.0,
                                                              cfg.epsilon_points);
            BootstrapCfg bcfg = cfg.bootstrap;
            bcfg.salt = (bcfg.salt.empty() ? std::string("mz") : bcfg.salt + "|mz") + "|" +
                        route.name;
            StatBundle bundle = evaluate_stats(*route.vals, spec, std::nullopt, eps, bcfg);
            for (const MaxStatistic& st : bundle.probs) {
                VerificationRecord rec;
                rec.check_id = "mz_slln_check";
                rec.model_id = ens.model.label();
                rec.params = strf("route=%s;n=%zu;eps=%.6g", route.name, ny, st.epsilon);
                rec.statistic = st;
                rec.bound_value = route.total / (st.epsilon * st.epsilon);
                rec.bound_source = "Kolmogorov inequality (independent truncated sums, K=1)";
                rec.verdict = verdict_from(st, rec.bound_value);
                rec.margin = margin_of(rec.bound_value, st.estimate);
                rep.truncated_kolmogorov.push_back(std::move(rec));
            }
        }
        for (const VerificationRecord& rec : rep.truncated_kolmogorov) {
            if (rec.verdict == Verdict::Violated) {
                rep.applicable = false;
                rep.failing_condition =
                    "(6.2) Kolmogorov inequality violated on the truncated sums (" + rec.params +
                    ")";
                rep.rate.verdict = TrendVerdict::NotApplicable;
                rep.rate.note = rep.failing_condition;
                return rep;
            }
        }
    }

    // rate quantiles of |S_n|/n^{1/p} plus the Y-vs-Z route agreement
    const std::size_t N = grid.back();
    const std::size_t G = grid.size();
    std::vector<double> stat(G * P, 0.0), gap(P, 0.0);
    for_each_path(ens, [&](std::size_t q, std::span<const double> x) {
        double s = 0.0, sy = 0.0, sz = 0.0;
        std::size_t g = 0;
        for (std::size_t k = 1; k <= N; ++k) {
            double c = std::pow(static_cast<double>(k), 1.0 / p);
            s += x[k - 1];
            sy += std::clamp(x[k - 1], -c, c);
            sz += std::abs(x[k - 1]) <= c ? x[k - 1] : 0.0;
            while (g < G && grid[g] == k) {
                stat[g * P + q] = std::abs(s) / c;  // c = n_g^{1/p} here
                ++g;
            }
        }
        gap[q] = std::abs(sy - sz) / std::pow(static_cast<double>(N), 1.0 / p);
    });
    rep.rate.primary = quantile_rows(stat, G, P, cfg.rate.levels);
    rep.y_z_gap = median(std::move(gap));

    rep.applicable = true;
    if (G < 2) {
        rep.rate.verdict = TrendVerdict::NotApplicable;
        rep.rate.note = "single grid point; decay trend not assessable";
        return rep;
    }
    const std::size_t med = level_index_near(cfg.rate.levels, 0.5);
    rep.rate.verdict = row_decays(rep.rate.primary[med], cfg.rate.decay_factor)
                           ? TrendVerdict::Decaying
                           : TrendVerdict::NotDecaying;
    rep.rate.note = strf("horizon %zu; median decay factor required %g; Y-Z gap %.6g", N,
                         cfg.rate.decay_factor, rep.y_z_gap);
    return rep;
}

}  // namespace hrlab
