// Rate harness: truncation identities and integrability conditions are exact;
// quantile-trend verdicts are frozen against fixed-seed ensembles small enough
// to run in seconds.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hrlab/slln.hpp"

using namespace hrlab;

namespace {

ProcessModel iid_model(std::size_t n, MarginalKind kind = MarginalKind::Normal) {
    ProcessModel m;
    m.kind = ProcessKind::IID;
    m.n = n;
    m.marginal.kind = kind;
    return m;
}

}  // namespace

TEST_CASE("truncation routes: clamp vs zero at k^{1/p}") {
    std::vector<double> x = {0.5, -3.0, 1.2, 9.0};
    auto t = truncate(x, 1.5);
    REQUIRE(t.y.size() == 4);
    REQUIRE(t.z.size() == 4);
    CHECK(t.p == 1.5);
    double c2 = std::pow(2.0, 1.0 / 1.5);
    double c4 = std::pow(4.0, 1.0 / 1.5);
    // inside the threshold both routes keep the sample
    CHECK(t.y[0] == 0.5);
    CHECK(t.z[0] == 0.5);
    CHECK(t.y[2] == 1.2);
    CHECK(t.z[2] == 1.2);
    // outside: y clamps, z zeroes
    CHECK(t.y[1] == -c2);
    CHECK(t.z[1] == 0.0);
    CHECK(t.y[3] == c4);
    CHECK(t.z[3] == 0.0);

    // first_index shifts the thresholds
    auto off = truncate(x, 1.5, 3);
    CHECK(off.y[0] == 0.5);
    CHECK(off.y[1] == -std::pow(4.0, 1.0 / 1.5));  // k = 4 now
    CHECK(off.z[1] == 0.0);

    CHECK_THROWS_AS((void)truncate(x, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)truncate(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)truncate(x, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)truncate(x, 1.5, 0), std::invalid_argument);
}

TEST_CASE("g function equals the single-variable tail for identical marginals") {
    MarginalSpec normal;
    normal.kind = MarginalKind::Normal;
    auto gf = g_function(normal, {0.5, 1.0, 2.0}, 64);
    REQUIRE(gf.y.size() == 3);
    REQUIRE(gf.g.size() == 3);
    CHECK(gf.n_window == 64);
    for (std::size_t i = 0; i < 3; ++i) CHECK(gf.g[i] == normal.tail_prob(gf.y[i]));
    CHECK(gf.g[0] > gf.g[1]);
    CHECK(gf.g[1] > gf.g[2]);

    MarginalSpec pareto;
    pareto.kind = MarginalKind::ParetoSym;
    pareto.gamma = 1.8;
    auto gp = g_function(pareto, {0.5, 2.0});
    CHECK(gp.g[0] == 1.0);  // support starts at |x| = 1
    CHECK(gp.g[1] == std::pow(2.0, -1.8));

    CHECK_THROWS_AS((void)g_function(normal, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)g_function(normal, {1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)g_function(normal, {-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)g_function(normal, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("p-moment condition: pareto passes below its tail index") {
    MarginalSpec pareto;
    pareto.kind = MarginalKind::ParetoSym;
    pareto.gamma = 1.8;
    auto rep = p_moment_check(pareto, 1.5);
    CHECK(rep.holds);
    CHECK(rep.integral_converges);
    CHECK(rep.sum_converges);
    // integral = E|X|^p / p = (gamma/(gamma-p)) / p = 4
    CHECK(rep.integral_value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.sum_partial > 0.0);
    CHECK(std::isfinite(rep.sum_tail_bound));
    CHECK(rep.detail.empty());

    // p above the tail index: the moment integral diverges
    auto fail = p_moment_check(pareto, 1.9);
    CHECK_FALSE(fail.holds);
    CHECK_FALSE(fail.integral_converges);
    CHECK(fail.integral_value == std::numeric_limits<double>::infinity());
    CHECK(fail.detail.find("(6.1) fails: integral") != std::string::npos);
}

TEST_CASE("p-moment condition: cauchy fails at p >= 1, light tails pass trivially") {
    MarginalSpec cauchy;
    cauchy.kind = MarginalKind::Cauchy;
    auto rep = p_moment_check(cauchy, 1.5);
    CHECK_FALSE(rep.holds);
    CHECK_FALSE(rep.integral_converges);
    CHECK_FALSE(rep.sum_converges);
    CHECK(rep.detail.find("(6.1) fails: integral") != std::string::npos);
    // but p < 1 is fine: E|X|^0.9 finite and the tail sum is summable
    auto ok = p_moment_check(cauchy, 0.9);
    CHECK(ok.holds);

    MarginalSpec rad;
    rad.kind = MarginalKind::Rademacher;
    auto r = p_moment_check(rad, 1.5);
    CHECK(r.holds);
    CHECK(r.integral_value == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
    CHECK(r.sum_partial == 0.0);  // |X|^p = 1 never exceeds k >= 1

    MarginalSpec normal;
    normal.kind = MarginalKind::Normal;
    auto nrep = p_moment_check(normal, 1.0);
    CHECK(nrep.holds);
    CHECK(nrep.integral_value == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));

    CHECK_THROWS_AS((void)p_moment_check(rad, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)p_moment_check(rad, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)p_moment_check(rad, 1.0, 0), std::invalid_argument);
}

TEST_CASE("slln decay: iid partial sums over n shrink across doublings") {
    EnsembleSpec ens{iid_model(4096), 2000, 101, 1};
    BoundScheme scheme;
    scheme.alpha = WeightSequence::constant(1.0, 4096);
    scheme.r = 2.0;
    scheme.K = {1.0, false};
    scheme.kind = SchemeKind::Prob2;
    auto b = NormalizerSequence::power(1.0, 1.0, 4096);
    std::vector<std::size_t> grid = {512, 1024, 2048, 4096};

    auto rep = slln_decay(ens, scheme, b, grid);
    CHECK(rep.check_id == "slln_decay");
    CHECK(rep.grid == grid);
    CHECK(rep.primary_label == "|S_n/b_n|");
    REQUIRE(rep.levels.size() == 3);
    REQUIRE(rep.primary.size() == 3);
    CHECK(rep.verdict == TrendVerdict::Decaying);
    CHECK(rep.note.find("series value") != std::string::npos);
    for (const auto& row : rep.primary) {
        REQUIRE(row.size() == grid.size());
        CHECK(std::is_sorted(row.rbegin(), row.rend()));  // monotone shrink on this seed
        // |S_n|/n ~ n^{-1/2}: three doublings give a factor near sqrt(8) = 2.83
        CHECK(row.front() / row.back() > 2.5);
        CHECK(row.front() / row.back() < 3.3);
    }
    // quantile rows are ordered across levels
    for (std::size_t g = 0; g < grid.size(); ++g) {
        CHECK(rep.primary[0][g] < rep.primary[1][g]);
        CHECK(rep.primary[1][g] < rep.primary[2][g]);
    }
}

TEST_CASE("slln decay gates on the certified normalizer series") {
    EnsembleSpec ens{iid_model(256), 200, 101, 1};
    BoundScheme scheme;
    scheme.alpha = WeightSequence::constant(1.0, 256);
    scheme.r = 2.0;
    scheme.K = {1.0, false};
    scheme.kind = SchemeKind::Prob2;
    // b_l = sqrt(l): sum 1/l has no finite majorant -> gate, not error
    auto slow = NormalizerSequence::power(1.0, 0.5, 256);
    auto rep = slln_decay(ens, scheme, slow, {64, 128, 256});
    CHECK(rep.verdict == TrendVerdict::NotApplicable);
    CHECK(rep.note.find("not certified convergent") != std::string::npos);
    CHECK(rep.primary.empty());
}

TEST_CASE("slln decay input validation") {
    EnsembleSpec ens{iid_model(128), 200, 1, 1};
    BoundScheme scheme;
    scheme.alpha = WeightSequence::constant(1.0, 128);
    scheme.r = 2.0;
    scheme.K = {1.0, false};
    scheme.kind = SchemeKind::Prob2;
    auto b = NormalizerSequence::power(1.0, 1.0, 128);
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {0, 64}), std::invalid_argument);
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {64, 64}), std::invalid_argument);
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {64, 256}), std::invalid_argument);
    auto short_b = NormalizerSequence::power(1.0, 1.0, 64);
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, short_b, {64, 128}), std::invalid_argument);
    BoundScheme short_alpha = scheme;
    short_alpha.alpha = WeightSequence::constant(1.0, 64);
    CHECK_THROWS_AS((void)slln_decay(ens, short_alpha, b, {64, 128}), std::invalid_argument);
    RateCfg bad;
    bad.levels = {0.5, 1.0};
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {64, 128}, bad), std::invalid_argument);
    RateCfg empty;
    empty.levels = {};
    CHECK_THROWS_AS((void)slln_decay(ens, scheme, b, {64, 128}, empty), std::invalid_argument);
}

TEST_CASE("rate envelope: running sup against the n^{3/4}-type envelope is bounded") {
    EnsembleSpec ens{iid_model(4096), 2000, 103, 1};
    auto b = NormalizerSequence::power(1.0, 1.0, 4096);
    auto env = hu_hu_envelope(WeightSequence::constant(1.0, 4096), b, 2.0, 0.5, 4096);
    std::vector<std::size_t> grid = {512, 1024, 2048, 4096};
    auto rep = rate_envelope_check(ens, env, grid);
    CHECK(rep.check_id == "rate_envelope_check");
    CHECK(rep.verdict == TrendVerdict::Bounded);
    CHECK(rep.note.find("unbounded branch") != std::string::npos);
    const auto& q90 = rep.primary[1];
    REQUIRE(q90.size() == 4);
    // the sup statistic is non-decreasing in n but settles fast
    CHECK(q90[3] >= q90[2]);
    CHECK(q90[3] <= q90[2] * 1.01);
    CHECK(rep.primary_label.find("sup") != std::string::npos);

    // envelope horizon shorter than the grid is a hard error
    auto short_env = hu_hu_envelope(WeightSequence::constant(1.0, 1024),
                                    NormalizerSequence::power(1.0, 1.0, 1024), 2.0, 0.5, 1024);
    CHECK_THROWS_AS((void)rate_envelope_check(ens, short_env, grid), std::invalid_argument);

    // a single grid point cannot support a trend verdict
    auto single = rate_envelope_check(ens, env, {512});
    CHECK(single.verdict == TrendVerdict::NotApplicable);
    CHECK(single.note.find("single grid point") != std::string::npos);
}

TEST_CASE("log-normalized slln on the logarithmic ou model") {
    ProcessModel lo;
    lo.kind = ProcessKind::LogOU;
    lo.n = 4096;
    lo.logou_beta = 1.0;
    EnsembleSpec ens{lo, 500, 107, 1};
    std::vector<std::size_t> grid = {16, 256, 4096};
    auto rep = log_slln_check(ens, 0.45, grid);
    CHECK(rep.check_id == "log_slln_check");
    CHECK(rep.verdict == TrendVerdict::Decaying);
    CHECK(rep.secondary_verdict == TrendVerdict::Bounded);
    CHECK(rep.primary_label == "|T_n|");
    CHECK(rep.secondary_label.find("0.45") != std::string::npos);
    CHECK(rep.note.find("covariance premise") == std::string::npos);  // certified model
    REQUIRE(rep.secondary.size() == rep.primary.size());
    // the secondary row is exactly the primary row scaled by (log n)^delta
    for (std::size_t i = 0; i < rep.primary.size(); ++i)
        for (std::size_t g = 0; g < grid.size(); ++g)
            CHECK(rep.secondary[i][g] ==
                  rep.primary[i][g] * std::pow(std::log(static_cast<double>(grid[g])), 0.45));
    // median |T_n| strictly decreasing on this seed
    CHECK(rep.primary[0][0] > rep.primary[0][1]);
    CHECK(rep.primary[0][1] > rep.primary[0][2]);
}

TEST_CASE("log-normalized slln: validation and the informational iid path") {
    EnsembleSpec ens{iid_model(256), 500, 109, 1};
    auto rep = log_slln_check(ens, 0.0, {4, 16, 256});
    CHECK(rep.verdict == TrendVerdict::Decaying);
    CHECK(rep.note.find("covariance premise not certified") != std::string::npos);

    CHECK_THROWS_AS((void)log_slln_check(ens, 0.5, {4, 16}), std::invalid_argument);
    CHECK_THROWS_AS((void)log_slln_check(ens, -0.1, {4, 16}), std::invalid_argument);
    CHECK_THROWS_AS((void)log_slln_check(ens, 0.2, {1, 16}), std::invalid_argument);
}

TEST_CASE("mz slln on symmetric pareto: gates pass, trend is honest") {
    ProcessModel par = iid_model(4096, MarginalKind::ParetoSym);
    par.marginal.gamma = 1.8;
    EnsembleSpec ens{par, 400, 113, 1};
    MzCfg cfg;
    cfg.bootstrap = {200, 0.99, 113, "mzprobe"};
    std::vector<std::size_t> grid = {256, 1024, 4096};

    auto rep = mz_slln_check(ens, 1.5, grid, cfg);
    CHECK(rep.applicable);
    CHECK(rep.failing_condition.empty());
    CHECK(rep.pmoment.holds);
    CHECK(rep.pmoment.integral_value == doctest::Approx(4.0).epsilon(1e-12));

    // (6.2) runs both truncation routes over the epsilon grid
    REQUIRE(rep.truncated_kolmogorov.size() == 2 * cfg.epsilon_points);
    std::size_t y_routes = 0, z_routes = 0;
    for (const auto& rec : rep.truncated_kolmogorov) {
        CHECK(rec.verdict != Verdict::Violated);
        CHECK(rec.bound_source.find("truncated sums") != std::string::npos);
        if (rec.params.find("route=Y") != std::string::npos) ++y_routes;
        if (rec.params.find("route=Z") != std::string::npos) ++z_routes;
    }
    CHECK(y_routes == cfg.epsilon_points);
    CHECK(z_routes == cfg.epsilon_points);

    // the two truncation routes agree at the horizon scale
    CHECK(rep.y_z_gap > 0.0);
    CHECK(rep.y_z_gap < 1.0);
    CHECK(rep.rate.note.find("Y-Z gap") != std::string::npos);

    // |S_n|/n^{2/3} ~ n^{-1/9}: four doublings shrink by ~1.2, far from the
    // default factor 2 -> the honest verdict is NotDecaying
    CHECK(rep.rate.verdict == TrendVerdict::NotDecaying);
    CHECK(rep.rate.primary[0].front() > rep.rate.primary[0].back());

    // with a factor matched to the n^{-1/9} rate the same data passes
    MzCfg lenient = cfg;
    lenient.rate.decay_factor = 1.05;
    auto rep2 = mz_slln_check(ens, 1.5, grid, lenient);
    CHECK(rep2.rate.verdict == TrendVerdict::Decaying);
    // identical seed and salt: the measured rows agree bitwise
    CHECK(rep2.rate.primary[0] == rep.rate.primary[0]);
    CHECK(rep2.y_z_gap == rep.y_z_gap);
}

TEST_CASE("mz slln: cauchy is rejected by the integrability gate") {
    EnsembleSpec ens{iid_model(512, MarginalKind::Cauchy), 200, 113, 1};
    auto rep = mz_slln_check(ens, 1.5, {128, 512});
    CHECK_FALSE(rep.applicable);
    CHECK(rep.failing_condition.find("(6.1) fails") != std::string::npos);
    CHECK(rep.rate.verdict == TrendVerdict::NotApplicable);
    CHECK(rep.truncated_kolmogorov.empty());
    CHECK(rep.rate.note == rep.failing_condition);
}

TEST_CASE("mz slln: p below one skips the truncated-kolmogorov premise") {
    ProcessModel par = iid_model(256, MarginalKind::ParetoSym);
    par.marginal.gamma = 1.8;
    EnsembleSpec ens{par, 200, 127, 1};
    auto rep = mz_slln_check(ens, 0.8, {64, 256});
    CHECK(rep.applicable);
    CHECK(rep.truncated_kolmogorov.empty());
    REQUIRE(rep.rate.primary.size() == 3);
    // n^{1/0.8} dwarfs S_n ~ n^{5/9}: decay is steep
    CHECK(rep.rate.verdict == TrendVerdict::Decaying);
}

TEST_CASE("mz slln input validation") {
    EnsembleSpec ens{iid_model(128), 200, 1, 1};
    CHECK_THROWS_AS((void)mz_slln_check(ens, 2.0, {64, 128}), std::invalid_argument);
    CHECK_THROWS_AS((void)mz_slln_check(ens, 0.0, {64, 128}), std::invalid_argument);
    ProcessModel ar;
    ar.kind = ProcessKind::AR1;
    ar.n = 128;
    ar.ar_a = 0.5;
    EnsembleSpec dep{ar, 200, 1, 1};
    CHECK_THROWS_AS((void)mz_slln_check(dep, 1.5, {64, 128}), std::invalid_argument);
    CHECK_THROWS_AS((void)mz_slln_check(ens, 1.5, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)mz_slln_check(ens, 1.5, {64, 256}), std::invalid_argument);
}

TEST_CASE("trend verdict names round-trip") {
    CHECK(to_string(TrendVerdict::Decaying) == "Decaying");
    CHECK(to_string(TrendVerdict::NotDecaying) == "NotDecaying");
    CHECK(to_string(TrendVerdict::Bounded) == "Bounded");
    CHECK(to_string(TrendVerdict::Unbounded) == "Unbounded");
    CHECK(to_string(TrendVerdict::NotApplicable) == "NotApplicable");
}
