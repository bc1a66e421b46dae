#pragma once
// Finite prefixes of the weight sequences (alpha_l) and normalizer sequences
// (b_l, beta_l) that parametrize the maximal inequalities.  A sequence may
// carry a closed-form family tag (power law or geometric); tagged families
// admit analytic tail majorants, explicit lists are exact on their support
// and zero beyond it.
//
// Accessors are 1-based to mirror the usual mathematical indexing.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hrlab {

// c * l^e
struct PowerForm {
    double c;
    double e;
};

// c * q^l
struct GeometricForm {
    double c;
    double q;
};

using FamilyTag = std::variant<std::monostate, PowerForm, GeometricForm>;

[[nodiscard]] double family_term(const FamilyTag& tag, std::size_t l);
[[nodiscard]] std::string family_label(const FamilyTag& tag);

class WeightSequence {
public:
    WeightSequence() = default;  // empty; fill via a factory before use
    static WeightSequence power(double c, double e, std::size_t n);
    static WeightSequence constant(double c, std::size_t n);
    static WeightSequence geometric(double c, double q, std::size_t n);
    static WeightSequence from_values(std::vector<double> v);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double term(std::size_t l) const { return values_[l - 1]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const FamilyTag& family() const { return family_; }

    // Partial sums Lambda_k = alpha_1 + ... + alpha_k, compensated.
    [[nodiscard]] std::vector<double> partial_sums() const;

private:
    WeightSequence(std::vector<double> v, FamilyTag tag);
    std::vector<double> values_;
    FamilyTag family_;
};

class NormalizerSequence {
public:
    NormalizerSequence() = default;  // empty; fill via a factory before use
    static NormalizerSequence power(double c, double e, std::size_t n);
    static NormalizerSequence constant(double c, std::size_t n);
    // Explicit values; set certified_unbounded only if the caller knows the
    // generating rule keeps growing beyond the stored prefix.
    static NormalizerSequence from_values(std::vector<double> v, bool certified_unbounded = false);

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double term(std::size_t l) const { return values_[l - 1]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const FamilyTag& family() const { return family_; }
    [[nodiscard]] bool certified_unbounded() const { return certified_unbounded_; }

private:
    NormalizerSequence(std::vector<double> v, FamilyTag tag, bool unbounded);
    std::vector<double> values_;
    FamilyTag family_;
    bool certified_unbounded_ = false;
};

}  // namespace hrlab
