#include "hrlab/sequences.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hrlab/numeric.hpp"

namespace hrlab {

double family_term(const FamilyTag& tag, std::size_t l) {
    if (const auto* p = std::get_if<PowerForm>(&tag))
        return p->c * std::pow(static_cast<double>(l), p->e);
    if (const auto* g = std::get_if<GeometricForm>(&tag))
        return g->c * std::pow(g->q, static_cast<double>(l));
    throw std::logic_error("family_term: explicit list has no closed form");
}

std::string family_label(const FamilyTag& tag) {
    char buf[64];
    if (const auto* p = std::get_if<PowerForm>(&tag)) {
        std::snprintf(buf, sizeof buf, "power(c=%g,e=%g)", p->c, p->e);
        return buf;
    }
    if (const auto* g = std::get_if<GeometricForm>(&tag)) {
        std::snprintf(buf, sizeof buf, "geometric(c=%g,q=%g)", g->c, g->q);
        return buf;
    }
    return "explicit";
}

namespace {

std::vector<double> materialize(const FamilyTag& tag, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t l = 1; l <= n; ++l) v[l - 1] = family_term(tag, l);
    return v;
}

}  // namespace

// --- WeightSequence --------------------------------------------------------

WeightSequence::WeightSequence(std::vector<double> v, FamilyTag tag)
    : values_(std::move(v)), family_(tag) {
    if (values_.empty()) throw std::invalid_argument("WeightSequence: empty");
    for (double x : values_)
        if (!(x >= 0.0)) throw std::invalid_argument("WeightSequence: negative or NaN entry");
}

WeightSequence WeightSequence::power(double c, double e, std::size_t n) {
    if (c < 0.0) throw std::invalid_argument("WeightSequence::power: c < 0");
    FamilyTag tag = PowerForm{c, e};
    return WeightSequence(materialize(tag, n), tag);
}

WeightSequence WeightSequence::constant(double c, std::size_t n) { return power(c, 0.0, n); }

WeightSequence WeightSequence::geometric(double c, double q, std::size_t n) {
    if (c < 0.0) throw std::invalid_argument("WeightSequence::geometric: c < 0");
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("WeightSequence::geometric: need 0 < q < 1");
    FamilyTag tag = GeometricForm{c, q};
    return WeightSequence(materialize(tag, n), tag);
}

WeightSequence WeightSequence::from_values(std::vector<double> v) {
    return WeightSequence(std::move(v), std::monostate{});
}

std::vector<double> WeightSequence::partial_sums() const {
    std::vector<double> out(values_.size());
    KahanSum s;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        s.add(values_[i]);
        out[i] = s.value();
    }
    return out;
}

// --- NormalizerSequence ----------------------------------------------------

NormalizerSequence::NormalizerSequence(std::vector<double> v, FamilyTag tag, bool unbounded)
    : values_(std::move(v)), family_(tag), certified_unbounded_(unbounded) {
    if (values_.empty()) throw std::invalid_argument("NormalizerSequence: empty");
    double prev = 0.0;
    for (double x : values_) {
        if (!(x > 0.0)) throw std::invalid_argument("NormalizerSequence: entries must be > 0");
        if (x < prev) throw std::invalid_argument("NormalizerSequence: must be non-decreasing");
        prev = x;
    }
}

NormalizerSequence NormalizerSequence::power(double c, double e, std::size_t n) {
    if (!(c > 0.0)) throw std::invalid_argument("NormalizerSequence::power: c <= 0");
    if (e < 0.0) throw std::invalid_argument("NormalizerSequence::power: decreasing family");
    FamilyTag tag = PowerForm{c, e};
    return NormalizerSequence(materialize(tag, n), tag, e > 0.0);
}

NormalizerSequence NormalizerSequence::constant(double c, std::size_t n) {
    if (!(c > 0.0)) throw std::invalid_argument("NormalizerSequence::constant: c <= 0");
    FamilyTag tag = PowerForm{c, 0.0};
    return NormalizerSequence(materialize(tag, n), tag, false);
}

NormalizerSequence NormalizerSequence::from_values(std::vector<double> v, bool certified_unbounded) {
    return NormalizerSequence(std::move(v), std::monostate{}, certified_unbounded);
}

}  // namespace hrlab
