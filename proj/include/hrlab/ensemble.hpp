#pragma once
// Path ensembles: P independent paths of a ProcessModel, each generated from
// the counter stream (seed, path index), so output is bit-identical for any
// thread count or execution order.
//
// Two access modes:
//   - PathEnsemble materializes the P x n increment matrix (battery-scale
//     checks that revisit paths many times);
//   - for_each_path streams one path at a time (horizon-scale SLLN runs
//     where P x n would not fit comfortably in memory).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hrlab/models.hpp"

namespace hrlab {

struct EnsembleSpec {
    ProcessModel model;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
};

// Calls fn(p, increments of path p) for every p in [0, paths).  fn runs
// concurrently on up to `threads` workers; distinct calls get distinct p, so
// writing to caller-owned slot p needs no locking.  The span is only valid
// during the call.
void for_each_path(const EnsembleSpec& spec,
                   const std::function<void(std::size_t, std::span<const double>)>& fn);

class PathEnsemble {
public:
    static PathEnsemble generate(const ProcessModel& model, std::size_t paths,
                                 std::uint64_t seed, unsigned threads = 1);

    [[nodiscard]] std::span<const double> increments(std::size_t p) const {
        return {data_.data() + p * model_.n, model_.n};
    }
    [[nodiscard]] const ProcessModel& model() const { return model_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::size_t paths() const { return paths_; }
    [[nodiscard]] std::size_t length() const { return model_.n; }

private:
    PathEnsemble(ProcessModel m, std::size_t paths, std::uint64_t seed);
    ProcessModel model_;
    std::size_t paths_;
    std::uint64_t seed_;
    std::vector<double> data_;  // row-major P x n
};

}  // namespace hrlab
