#include "hrlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hrlab/envelope.hpp"
#include "hrlab/exact.hpp"
#include "hrlab/slln.hpp"

namespace hrlab {

using nlohmann::json;

namespace {

std::string strf(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

// --- catalog -------------------------------------------------------------------

const std::vector<CatalogEntry>& catalog_impl() {
    static const std::vector<CatalogEntry> entries = {
        {"check_chandra_ghosal", "Chandra-Ghosal 1996 Thm 1, bound (5.4)",
         "AANA maximal probability bound with K_n = 2(A_n + sqrt(1+A_n^2))^2"},
        {"check_christofides", "Christofides 2000 Thm 2.1, bound (5.6)",
         "demisubmartingale bound, one-sided max plus absolute-value companion"},
        {"check_hajek_renyi",
         "Hajek-Renyi forms (2.2)/(2.6)/(4.2)/(4.6); constants via Fazekas-Klesov 2000 Thm 1.1 "
         "and Tomacs-Libor 2006 Thm 2.1 with the two-segment transfers",
         "weighted maximal inequality with transferred constant C"},
        {"check_kolmogorov", "Kolmogorov forms (2.1)/(2.5)/(4.1)/(4.5)",
         "windowed moment/probability maximal inequality with constant K"},
        {"check_kounias_weng", "Kounias-Weng 1969, bound (5.1)",
         "universal weighted bound, no dependence assumptions"},
        {"check_kuczmaszewska_4th", "Kuczmaszewska 2005, bound (3.4) as printed",
         "fourth-moment maximal bound without leading constant"},
        {"check_serfling", "Serfling 1970 via Stout 1974 Thm 2.4.1, bound (7.1)",
         "log^2-factor bound from superadditive g"},
        {"check_shao_na", "Shao 2000 Thm 2, bounds (3.2)/(3.3); p=2 case Matula 1992",
         "negatively associated moment maximal bounds"},
        {"demimartingale_alpha", "Christofides 2000 weights alpha_l = E(S_l^+ - S_{l-1}^+)",
         "MC estimate of the demimartingale weights vs the Gaussian closed form"},
        {"estimate_implied_constant", "Shao 1995 rho-mixing bound (3.6); theta unspecified",
         "doubling-horizon trend of K-hat(n) for the AR(1) model"},
        {"log_slln_check", "Hu-Hu 2006 Thm 2.5, (3.8) with rate (3.9)",
         "logarithmic-normalization SLLN trend on T_n"},
        {"mz_slln_check", "Marcinkiewicz-Zygmund SLLN, Thm 6.1 under (6.1)/(6.2)",
         "|S_n|/n^{1/p} decay gated on truncation conditions"},
        {"p_moment_check", "integrability condition (6.1)",
         "integral y^{p-1}G(y)dy and sum P(|X_k|^p > k), analytic tails"},
        {"rademacher_battery", "exact enumeration oracle for (4.1)/(4.2)/(4.5)/(4.6)",
         "all probability inequalities on full sign enumerations"},
        {"rate_envelope_check", "Hu-Hu 2006 envelope, Thm 3.2; probability side Thm 5.2",
         "running sup |S_k|/beta_k boundedness trend"},
        {"slln_decay", "abstract SLLNs: Fazekas-Klesov 2000 Thm 2.1; Tomacs-Libor 2006 Thm 2.4",
         "|S_n/b_n| quantile decay, gated on sum alpha_l/b_l^r < inf"},
        {"transfer_trials", "transfer constants 4K, 4 D_r K, (1+4^{1/r})^r K",
         "randomized exact configurations stress-testing the transfer theorems"},
    };
    return entries;
}

// sets needing a materialized ensemble vs streaming vs none
bool needs_ensemble(const std::string& op) {
    static const std::set<std::string> ops = {
        "check_kolmogorov",     "check_hajek_renyi",  "check_kuczmaszewska_4th",
        "check_shao_na",        "check_chandra_ghosal", "check_christofides",
        "check_kounias_weng",   "check_serfling",     "demimartingale_alpha"};
    return ops.count(op) > 0;
}

bool needs_model(const std::string& op) {
    return op != "rademacher_battery" && op != "transfer_trials";
}

bool statistical_op(const std::string& op) {
    return needs_model(op) && op != "p_moment_check";
}

// --- config parsing helpers ------------------------------------------------------

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) fail(where + ": expected an object");
    for (const auto& item : j.items())
        if (allowed.count(item.key()) == 0) fail(where + ": unknown key '" + item.key() + "'");
}

double num_at(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where + ": missing '" + std::string(key) + "'");
    if (!j.at(key).is_number()) fail(where + ": '" + std::string(key) + "' must be a number");
    return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double def, const std::string& where) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number()) fail(where + ": '" + std::string(key) + "' must be a number");
    return j.at(key).get<double>();
}

std::size_t index_at(const json& j, const char* key, const std::string& where) {
    double v = num_at(j, key, where);
    if (v < 0 || v != std::floor(v)) fail(where + ": '" + std::string(key) + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::size_t index_or(const json& j, const char* key, std::size_t def, const std::string& where) {
    if (!j.contains(key)) return def;
    return index_at(j, key, where);
}

std::string str_or(const json& j, const char* key, const std::string& def,
                   const std::string& where) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) fail(where + ": '" + std::string(key) + "' must be a string");
    return j.at(key).get<std::string>();
}

std::vector<std::size_t> grid_at(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty())
        fail(where + ": '" + std::string(key) + "' must be a non-empty array");
    std::vector<std::size_t> out;
    for (const json& v : j.at(key)) {
        if (!v.is_number()) fail(where + ": grid entries must be numbers");
        double d = v.get<double>();
        if (d < 1 || d != std::floor(d)) fail(where + ": grid entries must be positive integers");
        out.push_back(static_cast<std::size_t>(d));
    }
    return out;
}

MarginalSpec parse_marginal(const json& j, const std::string& where) {
    require_keys(j, {"kind", "sigma", "gamma"}, where);
    MarginalSpec m;
    std::string kind = str_or(j, "kind", "normal", where);
    if (kind == "normal") m.kind = MarginalKind::Normal;
    else if (kind == "rademacher") m.kind = MarginalKind::Rademacher;
    else if (kind == "pareto_sym") m.kind = MarginalKind::ParetoSym;
    else if (kind == "cauchy") m.kind = MarginalKind::Cauchy;
    else if (kind == "zero") m.kind = MarginalKind::Zero;
    else fail(where + ": unknown marginal kind '" + kind + "'");
    m.sigma = num_or(j, "sigma", 1.0, where);
    m.gamma = num_or(j, "gamma", 1.8, where);
    m.validate();
    return m;
}

struct ParsedModel {
    ProcessModel model;
    std::size_t paths = 0;  // 0 = use global
};

ParsedModel parse_model(const json& j) {
    std::string id = str_or(j, "id", "", "models[]");
    if (id.empty()) fail("models[]: every model needs a non-empty 'id'");
    const std::string where = "model '" + id + "'";
    require_keys(j,
                 {"id", "kind", "n", "paths", "marginal", "a", "beta", "q", "c", "variant", "rho"},
                 where);
    ParsedModel pm;
    ProcessModel& m = pm.model;
    m.id = id;
    std::string kind = str_or(j, "kind", "", where);
    if (kind == "iid") m.kind = ProcessKind::IID;
    else if (kind == "martingale_diff") m.kind = ProcessKind::MartingaleDiff;
    else if (kind == "na_gaussian") m.kind = ProcessKind::NAGaussian;
    else if (kind == "ar1") m.kind = ProcessKind::AR1;
    else if (kind == "aana") m.kind = ProcessKind::AANA;
    else if (kind == "logou") m.kind = ProcessKind::LogOU;
    else if (kind == "demimartingale") m.kind = ProcessKind::Demimartingale;
    else fail(where + ": unknown kind '" + kind + "'");
    m.n = index_at(j, "n", where);
    if (j.contains("marginal")) m.marginal = parse_marginal(j.at("marginal"), where);
    m.ar_a = num_or(j, "a", m.ar_a, where);
    m.logou_beta = num_or(j, "beta", m.logou_beta, where);
    m.na_c = num_or(j, "c", m.na_c, where);
    m.demi_rho = num_or(j, "rho", m.demi_rho, where);
    if (j.contains("q")) {
        require_keys(j.at("q"), {"c", "s"}, where + ".q");
        m.q.c = num_or(j.at("q"), "c", 1.0, where);
        m.q.s = num_or(j.at("q"), "s", 1.0, where);
    }
    std::string variant = str_or(j, "variant", "equicorrelated", where);
    if (variant == "equicorrelated") m.na_variant = NAVariant::Equicorrelated;
    else if (variant == "antithetic") m.na_variant = NAVariant::AntitheticPairs;
    else fail(where + ": unknown variant '" + variant + "'");
    pm.paths = index_or(j, "paths", 0, where);
    m.validate();
    return pm;
}

WeightSequence parse_weights(const json& j, std::size_t n, const std::string& where) {
    require_keys(j, {"family", "c", "e", "q", "values"}, where);
    if (j.contains("values")) {
        std::vector<double> v = j.at("values").get<std::vector<double>>();
        if (v.size() < n) fail(where + ": explicit values shorter than required horizon");
        return WeightSequence::from_values(std::move(v));
    }
    std::string family = str_or(j, "family", "power", where);
    double c = num_or(j, "c", 1.0, where);
    if (family == "power") return WeightSequence::power(c, num_or(j, "e", 0.0, where), n);
    if (family == "constant") return WeightSequence::constant(c, n);
    if (family == "geometric") return WeightSequence::geometric(c, num_or(j, "q", 0.5, where), n);
    fail(where + ": unknown weight family '" + family + "'");
}

NormalizerSequence parse_normalizer(const json& j, std::size_t n, const std::string& where) {
    require_keys(j, {"family", "c", "e", "values"}, where);
    if (j.contains("values")) {
        std::vector<double> v = j.at("values").get<std::vector<double>>();
        if (v.size() < n) fail(where + ": explicit values shorter than required horizon");
        return NormalizerSequence::from_values(std::move(v));
    }
    std::string family = str_or(j, "family", "power", where);
    double c = num_or(j, "c", 1.0, where);
    if (family == "power") return NormalizerSequence::power(c, num_or(j, "e", 1.0, where), n);
    if (family == "constant") return NormalizerSequence::constant(c, n);
    fail(where + ": unknown normalizer family '" + family + "'");
}

// --- runner ----------------------------------------------------------------------

struct Runner {
    std::uint64_t seed = 0;
    std::size_t paths = 1000;
    unsigned threads = 1;
    bool timing = false;
    double bound_scale = 1.0;
    std::size_t epsilon_points = 10;
    std::size_t resamples = 1000;
    double level = 0.99;
    Report report;

    CheckContext context(std::size_t check_idx) const {
        CheckContext ctx;
        ctx.bootstrap.resamples = resamples;
        ctx.bootstrap.level = level;
        ctx.bootstrap.seed = seed;
        ctx.bootstrap.salt = strf("cfg%03zu", check_idx);
        ctx.bound_scale = bound_scale;
        ctx.epsilon_points = epsilon_points;
        return ctx;
    }

    RateCfg rate_cfg(const json& j, const std::string& where) const {
        RateCfg cfg;
        if (j.contains("levels")) cfg.levels = j.at("levels").get<std::vector<double>>();
        cfg.decay_factor = num_or(j, "decay_factor", cfg.decay_factor, where);
        cfg.growth_tolerance = num_or(j, "tolerance", cfg.growth_tolerance, where);
        return cfg;
    }

    void run_check(const json& j, std::size_t idx, const ParsedModel* pm,
                   const PathEnsemble* ens) {
        const std::string op = j.at("op").get<std::string>();
        const std::string where = "checks[" + std::to_string(idx) + "] (" + op + ")";
        CheckContext ctx = context(idx);
        const std::size_t row_start = report.rows.size();
        const auto t0 = std::chrono::steady_clock::now();

        if (op == "check_kolmogorov") {
            require_keys(j, {"op", "model", "p", "form", "m", "k"}, where);
            BoundScheme scheme = theoretical_bound(
                pm->model, num_or(j, "p", 2.0, where),
                str_or(j, "form", "prob", where) == "moment");
            append_records(report,
                           check_kolmogorov(StatSource::mc(*ens), scheme,
                                            index_or(j, "m", ens->length(), where),
                                            index_or(j, "k", 0, where), ctx));
        } else if (op == "check_hajek_renyi") {
            require_keys(j, {"op", "model", "p", "form", "m", "beta"}, where);
            BoundScheme scheme = theoretical_bound(
                pm->model, num_or(j, "p", 2.0, where),
                str_or(j, "form", "prob", where) == "moment");
            NormalizerSequence beta =
                parse_normalizer(j.at("beta"), ens->length(), where + ".beta");
            append_records(report, check_hajek_renyi(StatSource::mc(*ens), scheme, beta,
                                                     index_or(j, "m", 0, where), ctx));
        } else if (op == "check_kuczmaszewska_4th") {
            require_keys(j, {"op", "model"}, where);
            append_records(report, check_kuczmaszewska_4th(*ens, ctx));
        } else if (op == "check_shao_na") {
            require_keys(j, {"op", "model", "p"}, where);
            append_records(report, check_shao_na(*ens, num_at(j, "p", where), ctx));
        } else if (op == "check_chandra_ghosal") {
            require_keys(j, {"op", "model"}, where);
            append_records(report, check_chandra_ghosal(*ens, ctx));
        } else if (op == "check_christofides") {
            require_keys(j, {"op", "model", "beta"}, where);
            NormalizerSequence beta =
                parse_normalizer(j.at("beta"), ens->length(), where + ".beta");
            append_records(report, check_christofides(*ens, beta, ctx));
        } else if (op == "check_kounias_weng") {
            require_keys(j, {"op", "model", "r", "beta"}, where);
            NormalizerSequence beta =
                parse_normalizer(j.at("beta"), ens->length(), where + ".beta");
            append_records(report, check_kounias_weng(*ens, num_or(j, "r", 2.0, where), beta, ctx));
        } else if (op == "check_serfling") {
            require_keys(j, {"op", "model", "windows"}, where);
            if (!j.contains("windows") || !j.at("windows").is_array() || j.at("windows").empty())
                fail(where + ": 'windows' must be a non-empty array");
            std::vector<SerflingWindow> windows;
            for (const json& w : j.at("windows")) {
                require_keys(w, {"a", "n", "g"}, where + ".windows[]");
                SerflingWindow sw;
                sw.a = index_or(w, "a", 0, where);
                sw.n = index_at(w, "n", where);
                if (w.contains("g")) {
                    sw.g = num_at(w, "g", where);
                } else {
                    ProcessKind k = pm->model.kind;
                    if (k != ProcessKind::IID && k != ProcessKind::MartingaleDiff)
                        fail(where + ": automatic g needs orthogonal increments; supply 'g'");
                    sw.g = static_cast<double>(sw.n) * pm->model.increment_variance();
                }
                windows.push_back(sw);
            }
            append_records(report, check_serfling(StatSource::mc(*ens), windows, ctx));
        } else if (op == "demimartingale_alpha") {
            require_keys(j, {"op", "model", "tolerance"}, where);
            double tol = num_or(j, "tolerance", 0.05, where);
            DemiAlphaReport rep = demimartingale_alpha(*ens, ctx.bootstrap);
            VerificationRecord rec;
            rec.check_id = "demimartingale_alpha";
            rec.model_id = pm->model.label();
            rec.params = strf("n=%zu;tolerance=%g", ens->length(), tol);
            rec.statistic.spec.kind = StatKind::MomentOfMax;
            rec.statistic.spec.hi = ens->length();
            rec.statistic.moment = true;
            rec.statistic.r = 1.0;
            rec.statistic.estimate = rep.max_abs_deviation;
            rec.statistic.ci = {rep.max_abs_deviation, rep.max_abs_deviation};
            rec.bound_value = tol;
            rec.bound_source = "Christofides 2000 weights (Gaussian closed form)";
            if (rep.closed_form.empty()) {
                rec.verdict = Verdict::Inconclusive;
                rec.note = "no closed form for this model; MC weights reported only";
            } else if (rep.max_abs_deviation <= tol) {
                rec.verdict = Verdict::Holds;
                rec.note = strf("max |alpha_hat - closed form| = %.6g", rep.max_abs_deviation);
            } else {
                rec.verdict = Verdict::Inconclusive;
                rec.note = strf("deviation %.6g above tolerance (MC noise, not a theorem bound)",
                                rep.max_abs_deviation);
            }
            rec.margin = margin_of(rec.bound_value, rec.statistic.estimate);
            report.rows.push_back(row_from_record(rec, seed));
        } else if (op == "estimate_implied_constant") {
            require_keys(j, {"op", "model", "horizons", "tolerance", "paths"}, where);
            std::vector<std::size_t> horizons = grid_at(j, "horizons", where);
            std::size_t run_paths = index_or(j, "paths", effective_paths(pm), where);
            ImpliedConstantReport rep = estimate_implied_constant(
                pm->model, horizons, run_paths, seed, num_or(j, "tolerance", 0.2, where),
                threads);
            append_records(report, implied_constant_records(rep, pm->model.label()));
        } else if (op == "p_moment_check") {
            require_keys(j, {"op", "model", "p", "horizon"}, where);
            PMomentReport rep = p_moment_check(pm->model.marginal, num_at(j, "p", where),
                                               index_or(j, "horizon", 100000, where));
            VerificationRecord rec;
            rec.check_id = "p_moment_check";
            rec.model_id = pm->model.label();
            rec.params = strf("p=%g", rep.p);
            rec.statistic.spec.kind = StatKind::MomentOfMax;
            rec.statistic.spec.hi = 1;
            rec.statistic.moment = true;
            rec.statistic.r = rep.p;
            rec.statistic.estimate = rep.integral_value;
            rec.statistic.ci = {rep.integral_value, rep.integral_value};
            rec.statistic.exact = true;
            rec.bound_source = "integrability condition (6.1)";
            rec.verdict = rep.holds ? Verdict::Holds : Verdict::NotApplicable;
            rec.note = rep.holds
                           ? strf("integral=%.6g; sum partial=%.6g tail<=%.3g", rep.integral_value,
                                  rep.sum_partial, rep.sum_tail_bound)
                           : rep.detail;
            report.rows.push_back(row_from_record(rec, seed));
        } else if (op == "slln_decay") {
            require_keys(j, {"op", "model", "grid", "b", "alpha", "r", "decay_factor",
                             "tolerance", "levels"},
                         where);
            std::vector<std::size_t> grid = grid_at(j, "grid", where);
            BoundScheme scheme;
            if (j.contains("alpha")) {
                scheme.alpha = parse_weights(j.at("alpha"), grid.back(), where + ".alpha");
                scheme.r = num_or(j, "r", 2.0, where);
                scheme.source = "config";
            } else {
                scheme = theoretical_bound(pm->model, num_or(j, "r", 2.0, where));
            }
            NormalizerSequence b = parse_normalizer(j.at("b"), grid.back(), where + ".b");
            append_rate_report(report, slln_decay(spec_of(pm), scheme, b, grid,
                                                  rate_cfg(j, where)));
        } else if (op == "rate_envelope_check") {
            require_keys(j, {"op", "model", "grid", "b", "alpha", "r", "delta", "tolerance",
                             "levels"},
                         where);
            std::vector<std::size_t> grid = grid_at(j, "grid", where);
            WeightSequence alpha =
                j.contains("alpha")
                    ? parse_weights(j.at("alpha"), grid.back(), where + ".alpha")
                    : theoretical_bound(pm->model, num_or(j, "r", 2.0, where)).alpha;
            NormalizerSequence b = parse_normalizer(j.at("b"), grid.back(), where + ".b");
            RateEnvelope env = hu_hu_envelope(alpha, b, num_or(j, "r", 2.0, where),
                                              num_or(j, "delta", 0.5, where), grid.back());
            append_rate_report(report,
                               rate_envelope_check(spec_of(pm), env, grid, rate_cfg(j, where)));
        } else if (op == "log_slln_check") {
            require_keys(j, {"op", "model", "grid", "delta", "tolerance", "levels"}, where);
            append_rate_report(report,
                               log_slln_check(spec_of(pm), num_or(j, "delta", 0.45, where),
                                              grid_at(j, "grid", where), rate_cfg(j, where)));
        } else if (op == "mz_slln_check") {
            require_keys(j, {"op", "model", "grid", "p", "decay_factor", "tolerance", "levels",
                             "epsilon_points", "truncation_window"},
                         where);
            MzCfg cfg;
            cfg.rate = rate_cfg(j, where);
            cfg.bootstrap = ctx.bootstrap;
            cfg.epsilon_points = index_or(j, "epsilon_points", epsilon_points, where);
            cfg.truncation_window = index_or(j, "truncation_window", 1000, where);
            MzReport rep =
                mz_slln_check(spec_of(pm), num_at(j, "p", where), grid_at(j, "grid", where), cfg);
            VerificationRecord prec;
            prec.check_id = "mz_slln_check";
            prec.model_id = pm->model.label();
            prec.params = strf("pmoment;p=%g", rep.pmoment.p);
            prec.statistic.spec.kind = StatKind::MomentOfMax;
            prec.statistic.spec.hi = 1;
            prec.statistic.moment = true;
            prec.statistic.r = rep.pmoment.p;
            prec.statistic.estimate = rep.pmoment.integral_value;
            prec.statistic.ci = {rep.pmoment.integral_value, rep.pmoment.integral_value};
            prec.statistic.exact = true;
            prec.bound_source = "integrability condition (6.1)";
            prec.verdict = rep.pmoment.holds ? Verdict::Holds : Verdict::NotApplicable;
            prec.note = rep.pmoment.holds ? "both (6.1) conditions hold" : rep.pmoment.detail;
            report.rows.push_back(row_from_record(prec, seed));
            append_records(report, rep.truncated_kolmogorov);
            append_rate_report(report, rep.rate);
        } else if (op == "rademacher_battery") {
            require_keys(j, {"op", "n_min", "n_max"}, where);
            run_rademacher_battery(index_or(j, "n_min", 3, where),
                                   index_or(j, "n_max", 14, where), ctx, where);
        } else if (op == "transfer_trials") {
            require_keys(j, {"op", "count"}, where);
            run_transfer_trials(index_or(j, "count", 200, where));
        } else {
            fail(where + ": unknown check");
        }

        if (timing) {
            double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
            for (std::size_t i = row_start; i < report.rows.size(); ++i)
                report.rows[i].wall_ms = ms;
        }
    }

    EnsembleSpec spec_of(const ParsedModel* pm) const {
        EnsembleSpec s;
        s.model = pm->model;
        s.paths = effective_paths(pm);
        s.seed = seed;
        s.threads = threads;
        return s;
    }

    std::size_t effective_paths(const ParsedModel* pm) const {
        return pm != nullptr && pm->paths > 0 ? pm->paths : paths;
    }

    void run_rademacher_battery(std::size_t n_min, std::size_t n_max, const CheckContext& ctx,
                                const std::string& where) {
        if (n_min == 0 || n_min > n_max || n_max > kExactEnumerationCap)
            fail(where + ": need 1 <= n_min <= n_max <= 22");
        for (std::size_t n = n_min; n <= n_max; ++n) {
            StatSource src = StatSource::enumeration(n);
            BoundScheme scheme;
            scheme.alpha = WeightSequence::constant(1.0, n);
            scheme.r = 2.0;
            scheme.K = {1.0, false};
            scheme.kind = SchemeKind::Prob2;
            scheme.source = "Kolmogorov inequality (independent, unit variance)";
            NormalizerSequence beta = NormalizerSequence::power(1.0, 1.0, n);
            append_records(report, check_kolmogorov(src, scheme, n, 0, ctx));
            if (n >= 2) append_records(report, check_kolmogorov(src, scheme, n, n / 2, ctx));
            append_records(report, check_hajek_renyi(src, scheme, beta, 0, ctx));
            append_records(report, check_hajek_renyi(src, scheme, beta, (n + 1) / 2, ctx));
        }
    }

    void run_transfer_trials(std::size_t count) {
        if (count == 0) fail("transfer_trials: count must be positive");
        for (std::size_t i = 0; i < count; ++i) {
            TransferTrial t = transfer_implication_trial(seed, i);
            double worst = 0.0;
            worst = std::max(worst, t.prob_first_ratio / t.prob_first_C);
            worst = std::max(worst, t.prob_second_ratio / t.prob_second_C);
            worst = std::max(worst, t.mom_first_ratio / t.mom_first_C);
            worst = std::max(worst, t.mom_second_ratio / t.mom_second_C);
            VerificationRecord rec;
            rec.check_id = "transfer_trials";
            rec.model_id = strf("rademacher_exact(n=%zu,scaled)", t.n);
            rec.params = strf("trial=%03zu;n=%zu;m=%zu;r=%.4g", i, t.n, t.m, t.r);
            rec.statistic.spec.kind = StatKind::WeightedProbOfMax;
            rec.statistic.spec.hi = t.n;
            rec.statistic.spec.beta.assign(t.n, 1.0);
            rec.statistic.moment = false;
            rec.statistic.r = t.r;
            rec.statistic.estimate = worst;
            rec.statistic.ci = {worst, worst};
            rec.statistic.exact = true;
            rec.bound_value = 1.0;
            rec.bound_source = "transfer constants 4K, 4 D_r K, (1+4^{1/r})^r K";
            rec.verdict = t.all_hold ? Verdict::Holds : Verdict::Violated;
            rec.margin = margin_of(1.0, worst);
            rec.note = strf("K_prob=%.4g K_mom1=%.4g K_mom2=%.4g", t.K_prob, t.K_mom1, t.K_mom2);
            report.rows.push_back(row_from_record(rec, seed));
        }
    }
};

}  // namespace

const std::vector<CatalogEntry>& check_catalog() { return catalog_impl(); }

const CatalogEntry* find_check(const std::string& name) {
    for (const CatalogEntry& e : check_catalog())
        if (e.name == name) return &e;
    return nullptr;
}

RunResult run_experiment(const std::string& config_text, const RunOptions& opts) {
    RunResult result;
    try {
        json cfg = json::parse(config_text);
        require_keys(cfg,
                     {"seed", "paths", "threads", "timing", "bound_scale", "epsilon_points",
                      "bootstrap", "report", "models", "checks"},
                     "config");

        Runner runner;
        if (opts.seed.has_value()) runner.seed = *opts.seed;
        else if (cfg.contains("seed")) runner.seed = cfg.at("seed").get<std::uint64_t>();
        else fail("config: 'seed' is mandatory (or pass --seed)");
        runner.paths = opts.paths.has_value() ? *opts.paths
                                              : index_or(cfg, "paths", 1000, "config");
        runner.threads = opts.threads.has_value()
                             ? *opts.threads
                             : static_cast<unsigned>(index_or(cfg, "threads", 1, "config"));
        if (runner.threads == 0) fail("config: threads must be >= 1");
        runner.timing = opts.timing.has_value()
                            ? *opts.timing
                            : (cfg.contains("timing") && cfg.at("timing").get<bool>());
        runner.bound_scale = num_or(cfg, "bound_scale", 1.0, "config");
        if (!(runner.bound_scale > 0)) fail("config: bound_scale must be positive");
        runner.epsilon_points = index_or(cfg, "epsilon_points", 10, "config");
        if (runner.epsilon_points == 0) fail("config: epsilon_points must be >= 1");
        if (cfg.contains("bootstrap")) {
            require_keys(cfg.at("bootstrap"), {"resamples", "level"}, "bootstrap");
            runner.resamples = index_or(cfg.at("bootstrap"), "resamples", 1000, "bootstrap");
            runner.level = num_or(cfg.at("bootstrap"), "level", 0.99, "bootstrap");
            if (!(runner.level > 0.0) || !(runner.level < 1.0))
                fail("bootstrap: level outside (0,1)");
        }
        if (cfg.contains("report")) {
            require_keys(cfg.at("report"), {"out", "formats"}, "report");
            result.out_dir = str_or(cfg.at("report"), "out", ".", "report");
            if (cfg.at("report").contains("formats"))
                result.formats = cfg.at("report").at("formats").get<std::vector<std::string>>();
        }
        if (result.formats.empty()) result.formats = {"table", "structured"};
        for (const std::string& f : result.formats)
            if (f != "table" && f != "structured")
                fail("report: unknown format '" + f + "' (use table/structured)");

        // models
        std::vector<ParsedModel> models;
        std::map<std::string, std::size_t> model_index;
        if (cfg.contains("models")) {
            if (!cfg.at("models").is_array()) fail("config: 'models' must be an array");
            for (const json& mj : cfg.at("models")) {
                ParsedModel pm = parse_model(mj);
                if (model_index.count(pm.model.id) > 0)
                    fail("config: duplicate model id '" + pm.model.id + "'");
                model_index[pm.model.id] = models.size();
                models.push_back(std::move(pm));
            }
        }

        // checks: validate everything before running anything
        if (!cfg.contains("checks") || !cfg.at("checks").is_array() || cfg.at("checks").empty())
            fail("config: 'checks' must be a non-empty array");
        std::vector<json> checks;
        bool any_statistical = false;
        for (const json& cj : cfg.at("checks")) {
            if (!cj.is_object() || !cj.contains("op") || !cj.at("op").is_string())
                fail("checks[]: every check needs an 'op' name");
            std::string op = cj.at("op").get<std::string>();
            if (find_check(op) == nullptr) fail("checks[]: unknown check '" + op + "'");
            if (needs_model(op)) {
                std::string id = str_or(cj, "model", "", "checks[]");
                if (id.empty()) fail("checks[] (" + op + "): missing 'model'");
                if (model_index.count(id) == 0)
                    fail("checks[] (" + op + "): unknown model '" + id + "'");
                if (statistical_op(op)) any_statistical = true;
            }
            checks.push_back(cj);
        }
        if (any_statistical) {
            std::size_t min_paths = runner.paths;
            for (const ParsedModel& pm : models)
                if (pm.paths > 0) min_paths = std::min(min_paths, pm.paths);
            if (min_paths < 100) fail("config: statistical checks require paths >= 100");
        }

        runner.report.seed = runner.seed;
        runner.report.timing = runner.timing;

        // run model-bound checks grouped per model (one ensemble alive at a time)
        for (std::size_t mi = 0; mi < models.size(); ++mi) {
            const ParsedModel& pm = models[mi];
            std::unique_ptr<PathEnsemble> ens;
            for (std::size_t ci = 0; ci < checks.size(); ++ci) {
                const json& cj = checks[ci];
                std::string op = cj.at("op").get<std::string>();
                if (!needs_model(op) || str_or(cj, "model", "", "") != pm.model.id) continue;
                if (needs_ensemble(op) && ens == nullptr)
                    ens = std::make_unique<PathEnsemble>(PathEnsemble::generate(
                        pm.model, runner.effective_paths(&pm), runner.seed, runner.threads));
                runner.run_check(cj, ci, &pm, ens.get());
            }
        }
        // model-free checks
        for (std::size_t ci = 0; ci < checks.size(); ++ci) {
            const json& cj = checks[ci];
            if (!needs_model(cj.at("op").get<std::string>()))
                runner.run_check(cj, ci, nullptr, nullptr);
        }

        sort_report(runner.report);
        result.report = std::move(runner.report);
        result.exit_code = any_violated(result.report) ? 1 : 0;
        return result;
    } catch (const std::exception& e) {
        result.exit_code = 2;
        result.error = e.what();
        return result;
    }
}

RunResult run_experiment_file(const std::string& config_path, const RunOptions& opts,
                              const std::string& out_override,
                              const std::vector<std::string>& format_override) {
    RunResult result;
    std::ifstream in(config_path);
    if (!in) {
        result.exit_code = 2;
        result.error = "cannot read config file: " + config_path;
        return result;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    result = run_experiment(buf.str(), opts);
    if (result.exit_code == 2) return result;
    if (!out_override.empty()) result.out_dir = out_override;
    if (!format_override.empty()) result.formats = format_override;
    try {
        std::filesystem::create_directories(result.out_dir);
        for (const std::string& f : result.formats) {
            std::string path = result.out_dir + (f == "table" ? "/report.tsv" : "/report.json");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path);
            out << (f == "table" ? to_tsv(result.report) : to_json(result.report));
            result.written.push_back(path);
        }
    } catch (const std::exception& e) {
        result.exit_code = 2;
        result.error = e.what();
    }
    return result;
}

}  // namespace hrlab
