#pragma once
// Dini-type convergence transforms: for a convergent series sum c_k with
// tails nu_n = sum_{k>=n} c_k, the transformed series sum c_n/nu_n^delta
// (0<delta<1) converges (Dini), and more generally sum c_n phi(1/nu_n)
// converges for any phi with sum phi(n)/n^2 < infinity and phi increasing to
// infinity (Sung, Hu & Volodin 2008, Lemma 1).

#include <cstddef>
#include <string>
#include <vector>

#include "hrlab/sequences.hpp"
#include "hrlab/series.hpp"

namespace hrlab {

class PhiFunction {
public:
    enum class Kind { Power, PowerLog, Table };

    // phi(x) = x^delta; certifiable when 0 < delta < 1.
    static PhiFunction power(double delta);
    // phi(x) = x / log(e + x)^2.
    static PhiFunction power_log();
    // Piecewise-linear table on increasing x grid (clamped outside);
    // certification is refused for tables (trend evidence only).
    static PhiFunction table(std::vector<double> x, std::vector<double> y);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double delta() const { return delta_; }
    [[nodiscard]] std::string label() const;

private:
    PhiFunction() = default;
    Kind kind_ = Kind::Power;
    double delta_ = 0.5;
    std::vector<double> tx_, ty_;
};

// Certificate for the side conditions: sum_{n} phi(n)/n^2 < infinity (partial
// sums plus an analytic integral tail bound) and phi increasing without
// bound.  Tables are never certified.
struct PhiCertification {
    bool certified = false;
    double sum_partial = 0.0;
    double tail_bound = 0.0;
    std::string detail;
};
[[nodiscard]] PhiCertification certify_phi(const PhiFunction& phi, std::size_t horizon = 1000000);

struct DiniResult {
    std::vector<double> partial;     // partial sums of the transformed series
    double value = 0.0;              // partial sum at the horizon
    double last_doubling_increment;  // partial[N-1] - partial[N/2-1]
    double nu1 = 0.0;                // total mass of c (upper value)
};

// sum_{n<=N} c_n / nu_n^delta, 0 < delta < 1.  Throws std::domain_error if
// every c_n is zero (the lemma requires nu_n > 0).
[[nodiscard]] DiniResult dini_transform(const WeightSequence& c, double delta, std::size_t N);

// sum_{n<=N} c_n phi(1/nu_n) for certified phi.  With phi(x) = x^delta this
// is bit-for-bit the dini_transform output (dini_transform delegates here).
[[nodiscard]] DiniResult phi_dini_transform(const WeightSequence& c, const PhiFunction& phi,
                                            std::size_t N);

}  // namespace hrlab
