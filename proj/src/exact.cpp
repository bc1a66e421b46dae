#include "hrlab/exact.hpp"

#include <stdexcept>

namespace hrlab {

std::vector<double> rademacher_base_values(std::size_t n, const MaxSpec& spec,
                                           std::span<const double> scale) {
    if (n == 0) throw std::invalid_argument("rademacher_base_values: n = 0");
    if (n > kExactEnumerationCap)
        throw std::invalid_argument("rademacher_base_values: n > enumeration cap (22)");
    if (!scale.empty() && scale.size() < n)
        throw std::invalid_argument("rademacher_base_values: scale shorter than n");
    spec.validate(n);

    const std::size_t total = std::size_t{1} << n;
    std::vector<double> values(total);
    std::vector<double> x(n);
    for (std::size_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = scale.empty() ? 1.0 : scale[i];
            x[i] = (mask >> i) & 1 ? s : -s;
        }
        values[mask] = max_base_value(x, spec);
    }
    return values;
}

StatBundle exact_rademacher_stats(std::size_t n, const MaxSpec& spec,
                                  std::optional<double> moment_r,
                                  const std::vector<double>& epsilons,
                                  std::span<const double> scale) {
    std::vector<double> values = rademacher_base_values(n, spec, scale);
    return evaluate_exact(values, spec, moment_r, epsilons);
}

}  // namespace hrlab
