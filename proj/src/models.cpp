#include "hrlab/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hrlab/numeric.hpp"

namespace hrlab {

// --- MarginalSpec -----------------------------------------------------------

void MarginalSpec::validate() const {
    switch (kind) {
        case MarginalKind::Normal:
            if (!(sigma > 0.0)) throw std::invalid_argument("Normal marginal: sigma <= 0");
            break;
        case MarginalKind::ParetoSym:
            if (!(gamma > 0.0)) throw std::invalid_argument("ParetoSym marginal: gamma <= 0");
            break;
        case MarginalKind::Rademacher:
        case MarginalKind::Cauchy:
        case MarginalKind::Zero:
            break;
    }
}

double MarginalSpec::draw(const RngStream& rs, std::uint64_t step) const {
    switch (kind) {
        case MarginalKind::Normal:
            return sigma * rs.normal(step);
        case MarginalKind::Rademacher:
            return rs.rademacher(step);
        case MarginalKind::ParetoSym: {
            Counter4 w = rs.quad(step);
            std::uint64_t bits = (static_cast<std::uint64_t>(w[1]) << 32) | w[0];
            double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
            double mag = std::pow(u, -1.0 / gamma);  // P(|X|>y) = y^-gamma, y >= 1
            return (w[2] & 1u) ? mag : -mag;
        }
        case MarginalKind::Cauchy:
            return std::tan(M_PI * (rs.uniform(step) - 0.5));
        case MarginalKind::Zero:
            return 0.0;
    }
    throw std::logic_error("MarginalSpec::draw: bad kind");
}

bool MarginalSpec::has_abs_moment(double p) const {
    switch (kind) {
        case MarginalKind::Normal:
        case MarginalKind::Rademacher:
        case MarginalKind::Zero:
            return true;
        case MarginalKind::ParetoSym:
            return p < gamma;
        case MarginalKind::Cauchy:
            return p < 1.0;
    }
    return false;
}

double MarginalSpec::abs_moment(double p) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (kind) {
        case MarginalKind::Normal:
            return std::pow(sigma, p) * gaussian_abs_moment(p);
        case MarginalKind::Rademacher:
            return 1.0;
        case MarginalKind::Zero:
            return p == 0.0 ? 1.0 : 0.0;
        case MarginalKind::ParetoSym:
            // E|X|^p = gamma/(gamma-p) for p < gamma (density gamma y^-(gamma+1), y>=1).
            return p < gamma ? gamma / (gamma - p) : inf;
        case MarginalKind::Cauchy:
            // E|X|^p = 1/cos(pi p/2) for |p| < 1.
            return p < 1.0 ? 1.0 / std::cos(M_PI * p / 2.0) : inf;
    }
    throw std::logic_error("MarginalSpec::abs_moment: bad kind");
}

double MarginalSpec::variance() const {
    // exact for the Gaussian: pow/tgamma round-trip in gaussian_abs_moment
    // would lose the last bit of sigma^2
    if (kind == MarginalKind::Normal) return sigma * sigma;
    return abs_moment(2.0);
}

double MarginalSpec::fourth_moment() const {
    if (kind == MarginalKind::Normal) return 3.0 * std::pow(sigma, 4.0);
    return abs_moment(4.0);
}

double MarginalSpec::tail_prob(double y) const {
    if (y < 0.0) throw std::invalid_argument("tail_prob: y < 0");
    switch (kind) {
        case MarginalKind::Normal:
            return 2.0 * (1.0 - std_normal_cdf(y / sigma));
        case MarginalKind::Rademacher:
            return y < 1.0 ? 1.0 : 0.0;
        case MarginalKind::ParetoSym:
            return y <= 1.0 ? 1.0 : std::pow(y, -gamma);
        case MarginalKind::Cauchy:
            return y == 0.0 ? 1.0 : (2.0 / M_PI) * std::atan(1.0 / y);
        case MarginalKind::Zero:
            return 0.0;
    }
    throw std::logic_error("MarginalSpec::tail_prob: bad kind");
}

double MarginalSpec::truncated_second_moment(double c) const {
    if (!(c >= 0.0)) throw std::invalid_argument("truncated_second_moment: c < 0");
    switch (kind) {
        case MarginalKind::Normal: {
            // E[X^2 1{|X|<=c}] = sigma^2 (1 - 2 Phi_c(t) - 2 t phi(t)), t = c/sigma.
            double t = c / sigma;
            double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
            double tail = 1.0 - std_normal_cdf(t);
            return sigma * sigma * (1.0 - 2.0 * tail - 2.0 * t * phi);
        }
        case MarginalKind::Rademacher:
            return c >= 1.0 ? 1.0 : 0.0;
        case MarginalKind::ParetoSym: {
            if (c <= 1.0) return 0.0;
            // int_1^c y^2 gamma y^-(gamma+1) dy
            if (gamma == 2.0) return 2.0 * std::log(c);
            return gamma * (std::pow(c, 2.0 - gamma) - 1.0) / (2.0 - gamma);
        }
        case MarginalKind::Cauchy:
            // int_{-c}^{c} x^2/(pi(1+x^2)) dx = (2/pi)(c - atan c)
            return (2.0 / M_PI) * (c - std::atan(c));
        case MarginalKind::Zero:
            return 0.0;
    }
    throw std::logic_error("MarginalSpec::truncated_second_moment: bad kind");
}

std::string MarginalSpec::label() const {
    char buf[64];
    switch (kind) {
        case MarginalKind::Normal:
            std::snprintf(buf, sizeof buf, "normal(sigma=%g)", sigma);
            return buf;
        case MarginalKind::Rademacher:
            return "rademacher";
        case MarginalKind::ParetoSym:
            std::snprintf(buf, sizeof buf, "pareto_sym(gamma=%g)", gamma);
            return buf;
        case MarginalKind::Cauchy:
            return "cauchy";
        case MarginalKind::Zero:
            return "zero";
    }
    return "?";
}

// --- QSchedule ---------------------------------------------------------------

double QSchedule::q(std::size_t l) const {
    if (l == 0) throw std::invalid_argument("QSchedule::q: 1-based index");
    return c * std::pow(static_cast<double>(l), -s);
}

double QSchedule::a_sum(std::size_t n) const {
    KahanSum acc;
    for (std::size_t l = 1; l + 1 <= n; ++l) {
        double ql = q(l);
        acc.add(ql * ql);
    }
    return acc.value();
}

std::string QSchedule::label() const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "q_l=%g*l^-%g", c, s);
    return buf;
}

// --- ProcessModel ------------------------------------------------------------

std::string to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::IID: return "iid";
        case ProcessKind::MartingaleDiff: return "martingale_diff";
        case ProcessKind::NAGaussian: return "na_gaussian";
        case ProcessKind::AR1: return "ar1";
        case ProcessKind::AANA: return "aana";
        case ProcessKind::LogOU: return "log_ou";
        case ProcessKind::Demimartingale: return "demimartingale";
    }
    return "?";
}

void ProcessModel::validate() const {
    if (n == 0) throw std::invalid_argument("ProcessModel: n == 0");
    marginal.validate();
    bool unit_gaussian = marginal.kind == MarginalKind::Normal && marginal.sigma == 1.0;
    switch (kind) {
        case ProcessKind::IID:
            break;
        case ProcessKind::MartingaleDiff:
            if (!marginal.symmetric())
                throw std::invalid_argument("MartingaleDiff: marginal must be symmetric");
            break;
        case ProcessKind::NAGaussian:
            if (!(na_c > 0.0 && na_c < 1.0))
                throw std::invalid_argument("NAGaussian: need 0 < c < 1");
            if (!unit_gaussian) throw std::invalid_argument("NAGaussian: unit normal marginal only");
            break;
        case ProcessKind::AR1:
            if (!(std::abs(ar_a) < 1.0)) throw std::invalid_argument("AR1: need |a| < 1");
            if (!unit_gaussian) throw std::invalid_argument("AR1: unit normal marginal only");
            break;
        case ProcessKind::AANA:
            if (!(q.c >= 0.0)) throw std::invalid_argument("AANA: q amplitude < 0");
            if (q.c > 0.0 && !(q.s > 0.0))
                throw std::invalid_argument("AANA: q must decay to 0 (need s > 0)");
            if (!unit_gaussian) throw std::invalid_argument("AANA: unit normal marginal only");
            break;
        case ProcessKind::LogOU:
            if (!(logou_beta > 0.0)) throw std::invalid_argument("LogOU: need beta > 0");
            if (!unit_gaussian) throw std::invalid_argument("LogOU: unit normal marginal only");
            break;
        case ProcessKind::Demimartingale:
            if (!(demi_rho >= 0.0 && demi_rho < 1.0))
                throw std::invalid_argument("Demimartingale: need 0 <= rho < 1");
            if (!unit_gaussian)
                throw std::invalid_argument("Demimartingale: unit normal marginal only");
            break;
    }
}

std::string ProcessModel::label() const {
    if (!id.empty()) return id;
    char buf[128];
    switch (kind) {
        case ProcessKind::IID:
            std::snprintf(buf, sizeof buf, "iid[%s,n=%zu]", marginal.label().c_str(), n);
            break;
        case ProcessKind::MartingaleDiff:
            std::snprintf(buf, sizeof buf, "mdiff[%s,n=%zu]", marginal.label().c_str(), n);
            break;
        case ProcessKind::NAGaussian:
            std::snprintf(buf, sizeof buf, "na_gaussian[c=%g,%s,n=%zu]", na_c,
                          na_variant == NAVariant::Equicorrelated ? "equi" : "antithetic", n);
            break;
        case ProcessKind::AR1:
            std::snprintf(buf, sizeof buf, "ar1[a=%g,n=%zu]", ar_a, n);
            break;
        case ProcessKind::AANA:
            std::snprintf(buf, sizeof buf, "aana[%s,n=%zu]", q.label().c_str(), n);
            break;
        case ProcessKind::LogOU:
            std::snprintf(buf, sizeof buf, "log_ou[beta=%g,n=%zu]", logou_beta, n);
            break;
        case ProcessKind::Demimartingale:
            std::snprintf(buf, sizeof buf, "demimartingale[rho=%g,n=%zu]", demi_rho, n);
            break;
        default:
            return "?";
    }
    return buf;
}

namespace {

// Shared equicorrelation transform: given iid normals z, produce a jointly
// Gaussian vector with unit variances and pairwise correlation rho via
// x_i = s z_i + c0 sum_j z_j, s = sqrt(1-rho), c0 = (sqrt(1+(n-1)rho) - s)/n.
void equicorrelated_transform(std::span<double> out, std::span<const double> z, double rho) {
    std::size_t n = out.size();
    if (n == 1 || rho == 0.0) {
        out[0] = z[0];
        for (std::size_t i = 1; i < n; ++i) out[i] = z[i];
        return;
    }
    double s = std::sqrt(1.0 - rho);
    double t = std::sqrt(1.0 + (static_cast<double>(n) - 1.0) * rho);
    double c0 = (t - s) / static_cast<double>(n);
    KahanSum sum;
    for (double v : z) sum.add(v);
    double shift = c0 * sum.value();
    for (std::size_t i = 0; i < n; ++i) out[i] = s * z[i] + shift;
}

void fill_normals(const RngStream& rs, std::vector<double>& z, std::size_t count) {
    z.resize(count);
    for (std::size_t j = 0; 2 * j < count; ++j) {
        auto [a, b] = rs.normal_pair(j);
        z[2 * j] = a;
        if (2 * j + 1 < count) z[2 * j + 1] = b;
    }
}

}  // namespace

void ProcessModel::sample_path(const RngStream& rs, std::span<double> out,
                               std::vector<double>& scratch) const {
    std::size_t len = out.size();
    switch (kind) {
        case ProcessKind::IID:
            for (std::size_t k = 0; k < len; ++k) out[k] = marginal.draw(rs, k);
            return;
        case ProcessKind::MartingaleDiff: {
            double s = 0.0;
            for (std::size_t k = 0; k < len; ++k) {
                double eps = marginal.draw(rs, k);
                out[k] = (s >= 0.0) ? eps : -eps;  // sign(S_0) := +1
                s += out[k];
            }
            return;
        }
        case ProcessKind::NAGaussian: {
            if (na_variant == NAVariant::AntitheticPairs) {
                fill_normals(rs, scratch, (len + 1) / 2);
                for (std::size_t j = 0; j < (len + 1) / 2; ++j) {
                    out[2 * j] = scratch[j];
                    if (2 * j + 1 < len) out[2 * j + 1] = -scratch[j];
                }
                return;
            }
            fill_normals(rs, scratch, len);
            double rho = len > 1 ? -na_c / (static_cast<double>(len) - 1.0) : 0.0;
            equicorrelated_transform(out, scratch, rho);
            return;
        }
        case ProcessKind::AR1: {
            double f = std::sqrt(1.0 - ar_a * ar_a);
            fill_normals(rs, scratch, len);
            double x = scratch[0];  // stationary start: X_1 ~ N(0,1)
            out[0] = x;
            for (std::size_t k = 1; k < len; ++k) {
                x = ar_a * x + f * scratch[k];
                out[k] = x;
            }
            return;
        }
        case ProcessKind::AANA: {
            fill_normals(rs, scratch, len + 1);
            for (std::size_t k = 0; k < len; ++k) {
                double ql = q.q(k + 1);
                out[k] = (scratch[k] + ql * scratch[k + 1]) / std::sqrt(1.0 + ql * ql);
            }
            return;
        }
        case ProcessKind::LogOU: {
            fill_normals(rs, scratch, len);
            double x = scratch[0];
            out[0] = x;
            for (std::size_t k = 1; k < len; ++k) {
                // transition from time log k to log(k+1):
                // corr = ((k)/(k+1))^beta in 1-based terms ((l-1)/l)^beta
                double c = std::pow(static_cast<double>(k) / (static_cast<double>(k) + 1.0),
                                    logou_beta);
                x = c * x + std::sqrt(1.0 - c * c) * scratch[k];
                out[k] = x;
            }
            return;
        }
        case ProcessKind::Demimartingale: {
            fill_normals(rs, scratch, len);
            equicorrelated_transform(out, scratch, demi_rho);
            return;
        }
    }
    throw std::logic_error("sample_path: bad kind");
}

double ProcessModel::increment_variance() const {
    if (kind == ProcessKind::IID || kind == ProcessKind::MartingaleDiff)
        return marginal.variance();
    return 1.0;
}

double ProcessModel::increment_abs_moment(double p) const {
    if (kind == ProcessKind::IID || kind == ProcessKind::MartingaleDiff)
        return marginal.abs_moment(p);
    return gaussian_abs_moment(p);
}

double ProcessModel::partial_sum_sd(std::size_t l) const {
    double dl = static_cast<double>(l);
    switch (kind) {
        case ProcessKind::IID:
        case ProcessKind::MartingaleDiff:
            return std::sqrt(dl * marginal.variance());
        case ProcessKind::Demimartingale:
            // Var S_l = l + rho l(l-1)
            return std::sqrt(dl * (1.0 + demi_rho * (dl - 1.0)));
        case ProcessKind::NAGaussian: {
            if (na_variant == NAVariant::AntitheticPairs) {
                // consecutive increments cancel pairwise: Var S_l = l mod 2 in
                // full pairs, i.e. 1 for odd l within a pair, 0 after it
                return (l % 2 == 1) ? 1.0 : 0.0;
            }
            double rho = n > 1 ? -na_c / (static_cast<double>(n) - 1.0) : 0.0;
            return std::sqrt(dl * (1.0 + rho * (dl - 1.0)));
        }
        case ProcessKind::LogOU: {
            // Var S_l = sum_{j,k<=l} (min/max)^beta, accumulated row by row
            KahanSum var;
            for (std::size_t j = 1; j <= l; ++j) {
                var.add(1.0);
                for (std::size_t k = 1; k < j; ++k)
                    var.add(2.0 * std::pow(static_cast<double>(k) / static_cast<double>(j),
                                           logou_beta));
            }
            return std::sqrt(var.value());
        }
        default:
            throw std::invalid_argument("partial_sum_sd: no closed form for " + to_string(kind));
    }
}

// --- theoretical bound schemes ------------------------------------------------

BoundScheme theoretical_bound(const ProcessModel& model, double p, bool moment_form) {
    model.validate();
    std::size_t n = model.n;
    switch (model.kind) {
        case ProcessKind::IID:
        case ProcessKind::MartingaleDiff: {
            if (p != 2.0)
                throw std::invalid_argument("theoretical_bound: iid/mdiff schemes are p=2 only");
            double var = model.increment_variance();
            if (!std::isfinite(var))
                throw std::invalid_argument("theoretical_bound: infinite increment variance");
            if (moment_form)
                return {WeightSequence::constant(var, n), 2.0, {4.0, false}, SchemeKind::Moment2,
                        "Doob L2 maximal inequality"};
            return {WeightSequence::constant(var, n), 2.0, {1.0, false}, SchemeKind::Prob2,
                    "Kolmogorov inequality"};
        }
        case ProcessKind::NAGaussian: {
            if (p > 1.0 && p <= 2.0) {
                double ap = model.increment_abs_moment(p);
                return {WeightSequence::constant(ap, n), p,
                        {std::pow(2.0, 3.0 - p), false}, SchemeKind::Moment2,
                        "Shao 2000 Thm 2 (1<p<=2; p=2 Matula 1992)"};
            }
            if (p > 2.0) {
                double var = model.increment_variance();
                double ap = model.increment_abs_moment(p);
                double sum_var = var * static_cast<double>(n);
                // Horizon-pinned composite weights: for m <= n they dominate
                // (sum_{l<=m} var)^{p/2} + sum_{l<=m} E|X|^p term-wise, so the
                // first-kind inequality holds at every m with the same K.
                double al = var * std::pow(sum_var, p / 2.0 - 1.0) + ap;
                double K = 2.0 * std::pow(15.0 * p / std::log(p), p);
                return {WeightSequence::constant(al, n), p, {K, false}, SchemeKind::Moment1,
                        "Shao 2000 Thm 2 (p>2)"};
            }
            throw std::invalid_argument("theoretical_bound: NA scheme needs p > 1");
        }
        case ProcessKind::AANA: {
            if (p != 2.0)
                throw std::invalid_argument("theoretical_bound: AANA scheme is p=2 only");
            double A = model.q.a_sum(n);
            double K = 2.0 * std::pow(A + std::sqrt(1.0 + A * A), 2.0);
            return {WeightSequence::constant(1.0, n), 2.0, {K, false}, SchemeKind::Prob1,
                    "Chandra-Ghosal 1996 Thm 1"};
        }
        case ProcessKind::AR1: {
            if (p != 2.0)
                throw std::invalid_argument("theoretical_bound: AR1 scheme is p=2 (q=2) only");
            return {WeightSequence::constant(1.0, n), 2.0, {1.0, true}, SchemeKind::Moment1,
                    "Shao 1995 rho-mixing (constant unspecified)"};
        }
        case ProcessKind::Demimartingale: {
            if (p != 1.0)
                throw std::invalid_argument("theoretical_bound: demimartingale scheme is r=1");
            std::vector<double> alpha(n);
            double prev = 0.0;
            for (std::size_t l = 1; l <= n; ++l) {
                double sd = model.partial_sum_sd(l);
                alpha[l - 1] = gaussian_positive_part_mean(sd) - gaussian_positive_part_mean(prev);
                prev = sd;
            }
            return {WeightSequence::from_values(std::move(alpha)), 1.0, {1.0, false},
                    SchemeKind::Demi, "Christofides 2000 Thm 2.1"};
        }
        case ProcessKind::LogOU:
            throw std::invalid_argument(
                "theoretical_bound: LogOU has no packaged scheme (rate theorem only)");
    }
    throw std::logic_error("theoretical_bound: bad kind");
}

RhoSchedule rho_schedule(const ProcessModel& model, std::size_t terms) {
    if (model.kind != ProcessKind::AR1)
        throw std::invalid_argument("rho_schedule: AR1 models only");
    // For stationary Gaussian AR(1) the Kolmogorov-Rozanov coefficient equals
    // the absolute lag correlation: rho(m) = |a|^m (Gaussian maximal
    // correlation, Kolmogorov & Rozanov 1960).
    RhoSchedule out;
    double a = std::abs(model.ar_a);
    KahanSum sum;
    for (std::size_t i = 0; i < terms; ++i) {
        double m = std::pow(2.0, static_cast<double>(i));
        double r = a == 0.0 ? 0.0 : std::pow(a, m);
        out.rho.push_back(r);
        sum.add(r);
    }
    out.sum = sum.value();
    // extend until additions vanish: terms decay double-exponentially
    double extra = out.rho.empty() ? 0.0 : out.rho.back();
    double limit = out.sum;
    double m = std::pow(2.0, static_cast<double>(terms));
    while (a > 0.0 && extra > 0.0) {
        extra = std::pow(a, m);
        if (limit + extra == limit) break;
        limit += extra;
        m *= 2.0;
    }
    out.limit = limit;
    return out;
}

}  // namespace hrlab
