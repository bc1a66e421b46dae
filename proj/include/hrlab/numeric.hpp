#pragma once
// Low-level numeric kernels shared by every module: compensated summation,
// double-double arithmetic for telescoping-sensitive tail sums, quantiles,
// and closed-form Gaussian moment helpers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hrlab {

// ---------------------------------------------------------------------------
// Compensated summation (Neumaier variant of Kahan).  Keeps partial sums
// accurate to a few ulps even for ill-conditioned alternating series.
// ---------------------------------------------------------------------------
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

// ---------------------------------------------------------------------------
// Double-double ("dd") arithmetic: an unevaluated sum hi + lo with
// |lo| <= ulp(hi)/2.  Used where a telescoping identity must hold to within
// a few ulps across hundreds of thousands of terms (suffix tail sums).
// ---------------------------------------------------------------------------
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

// Error-free transformation of a + b (Knuth two-sum).
inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD dd_add(DD a, double b) {
    DD s = two_sum(a.hi, b);
    s.lo += a.lo;
    DD r = two_sum(s.hi, s.lo);
    return r;
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
}

inline double dd_value(DD a) { return a.hi + a.lo; }

// ---------------------------------------------------------------------------
// Order statistics.
// ---------------------------------------------------------------------------

// Quantile on an already-sorted ascending range, with linear interpolation
// between order statistics (the common "type 7" rule).  q in [0,1].
inline double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("sorted_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("sorted_quantile: q outside [0,1]");
    if (sorted.size() == 1) return sorted[0];
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Copying convenience wrapper.
inline double quantile(std::vector<double> xs, double q) {
    std::sort(xs.begin(), xs.end());
    return sorted_quantile(xs, q);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

// ---------------------------------------------------------------------------
// Gaussian helpers.
// ---------------------------------------------------------------------------

// P(Z <= x) for Z ~ N(0,1).
inline double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// E|Z|^p for Z ~ N(0,1): 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
inline double gaussian_abs_moment(double p) {
    if (p < 0.0) throw std::invalid_argument("gaussian_abs_moment: p < 0");
    return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI);
}

// E (sigma Z)^+ = sigma / sqrt(2 pi): mean positive part of a centered
// Gaussian with standard deviation sigma.
inline double gaussian_positive_part_mean(double sigma) {
    return sigma / std::sqrt(2.0 * M_PI);
}

// ---------------------------------------------------------------------------
// Tolerance helpers.
// ---------------------------------------------------------------------------
inline bool approx_rel(double a, double b, double rel) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= rel * scale;
}

// |a-b| measured in units of ulp(max(|a|,|b|)).
inline double ulp_distance(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return std::abs(a - b) > 0 ? 1e308 : 0.0;
    double u = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
    return std::abs(a - b) / u;
}

}  // namespace hrlab
