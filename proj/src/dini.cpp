#include "hrlab/dini.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hrlab/numeric.hpp"

namespace hrlab {

PhiFunction PhiFunction::power(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("PhiFunction::power: delta <= 0");
    PhiFunction f;
    f.kind_ = Kind::Power;
    f.delta_ = delta;
    return f;
}

PhiFunction PhiFunction::power_log() {
    PhiFunction f;
    f.kind_ = Kind::PowerLog;
    return f;
}

PhiFunction PhiFunction::table(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("PhiFunction::table: need >= 2 matching points");
    if (!std::is_sorted(x.begin(), x.end()))
        throw std::invalid_argument("PhiFunction::table: x grid must be increasing");
    for (double v : y)
        if (!(v > 0.0)) throw std::invalid_argument("PhiFunction::table: phi must be positive");
    PhiFunction f;
    f.kind_ = Kind::Table;
    f.tx_ = std::move(x);
    f.ty_ = std::move(y);
    return f;
}

double PhiFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::Power:
            return std::pow(x, delta_);
        case Kind::PowerLog: {
            double lg = std::log(M_E + x);
            return x / (lg * lg);
        }
        case Kind::Table: {
            if (x <= tx_.front()) return ty_.front();
            if (x >= tx_.back()) return ty_.back();
            auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
            std::size_t i = static_cast<std::size_t>(it - tx_.begin());
            double f = (x - tx_[i - 1]) / (tx_[i] - tx_[i - 1]);
            return ty_[i - 1] + f * (ty_[i] - ty_[i - 1]);
        }
    }
    throw std::logic_error("PhiFunction: bad kind");
}

std::string PhiFunction::label() const {
    char buf[48];
    switch (kind_) {
        case Kind::Power:
            std::snprintf(buf, sizeof buf, "phi(x)=x^%g", delta_);
            return buf;
        case Kind::PowerLog:
            return "phi(x)=x/log(e+x)^2";
        case Kind::Table:
            return "phi=table";
    }
    return "?";
}

PhiCertification certify_phi(const PhiFunction& phi, std::size_t horizon) {
    PhiCertification out;
    if (phi.kind() == PhiFunction::Kind::Table) {
        out.detail = "tables are clamped (bounded), never certified";
        return out;
    }
    if (phi.kind() == PhiFunction::Kind::Power && !(phi.delta() < 1.0)) {
        // sum n^{delta-2} needs delta - 2 < -1
        out.detail = "phi(x)=x^delta with delta >= 1: sum phi(n)/n^2 diverges";
        return out;
    }

    KahanSum s;
    for (std::size_t n = 1; n <= horizon; ++n) {
        double dn = static_cast<double>(n);
        s.add(phi(dn) / (dn * dn));
    }
    out.sum_partial = s.value();
    double N = static_cast<double>(horizon);
    if (phi.kind() == PhiFunction::Kind::Power) {
        // integral tail: int_N^inf x^{delta-2} dx = N^{delta-1}/(1-delta)
        out.tail_bound = std::pow(N, phi.delta() - 1.0) / (1.0 - phi.delta());
        out.detail = "power integral tail bound";
    } else {
        // phi(x)/x^2 = 1/(x log(e+x)^2) <= 1/(x log(x)^2): tail <= 1/log N
        out.tail_bound = 1.0 / std::log(N);
        out.detail = "log-integral tail bound";
    }
    out.certified = true;
    return out;
}

DiniResult phi_dini_transform(const WeightSequence& c, const PhiFunction& phi, std::size_t N) {
    if (N == 0 || c.size() < N)
        throw std::invalid_argument("phi_dini_transform: horizon exceeds prefix");
    PhiCertification cert = certify_phi(phi, 10000);
    if (!cert.certified)
        throw std::domain_error("phi_dini_transform: phi not certified (" + cert.detail + ")");

    NormalizerSequence ones = NormalizerSequence::constant(1.0, N);
    TailSeries nu = tail_series(c, ones, 1.0, N);
    if (nu.nu_upper(1) <= 0.0)
        throw std::domain_error("phi_dini_transform: nu_1 = 0 (all weights zero)");

    DiniResult out;
    out.partial.resize(N);
    out.nu1 = nu.nu_upper(1);
    KahanSum s;
    for (std::size_t n = 1; n <= N; ++n) {
        double cn = c.term(n);
        if (cn != 0.0) {
            // nu_upper carries the analytic tail, exact for geometric/power
            // families; zero-tail explicit lists hit nu = 0 past their
            // support together with c_n = 0, so no 1/0 arises here.
            s.add(cn * phi(1.0 / nu.nu_upper(n)));
        }
        out.partial[n - 1] = s.value();
    }
    out.value = out.partial.back();
    out.last_doubling_increment = out.value - out.partial[N / 2 - (N >= 2 ? 1 : 0)];
    return out;
}

DiniResult dini_transform(const WeightSequence& c, double delta, std::size_t N) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("dini_transform: need 0 < delta < 1");
    return phi_dini_transform(c, PhiFunction::power(delta), N);
}

}  // namespace hrlab
