#include "hrlab/ensemble.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace hrlab {

void EnsembleSpec::validate() const {
    model.validate();
    if (paths == 0) throw std::invalid_argument("EnsembleSpec: paths == 0");
    if (threads == 0) throw std::invalid_argument("EnsembleSpec: threads == 0");
}

void for_each_path(const EnsembleSpec& spec,
                   const std::function<void(std::size_t, std::span<const double>)>& fn) {
    spec.validate();
    const std::size_t n = spec.model.n;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(spec.threads, spec.paths));

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> row(n);
        std::vector<double> scratch;
        for (std::size_t p = lo; p < hi; ++p) {
            RngStream rs(spec.seed, p);
            spec.model.sample_path(rs, row, scratch);
            fn(p, std::span<const double>(row));
        }
    };

    if (workers <= 1) {
        run_range(0, spec.paths);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (spec.paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(spec.paths, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
}

PathEnsemble::PathEnsemble(ProcessModel m, std::size_t paths, std::uint64_t seed)
    : model_(std::move(m)), paths_(paths), seed_(seed), data_(paths * model_.n) {}

PathEnsemble PathEnsemble::generate(const ProcessModel& model, std::size_t paths,
                                    std::uint64_t seed, unsigned threads) {
    PathEnsemble out(model, paths, seed);
    EnsembleSpec spec{out.model_, paths, seed, threads};
    double* base = out.data_.data();
    std::size_t n = out.model_.n;
    for_each_path(spec, [base, n](std::size_t p, std::span<const double> row) {
        std::copy(row.begin(), row.end(), base + p * n);
    });
    return out;
}

}  // namespace hrlab
