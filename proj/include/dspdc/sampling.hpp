#pragma once

#include <cstddef>
#include <vector>

#include "dspdc/rng.hpp"

namespace dspdc {

// A uniformly drawn size-subset of {0, ..., universe-1}.
struct IndexSample {
    std::vector<std::size_t> indices;  // sorted, distinct
    std::size_t universe = 0;
    std::size_t size = 0;
};

// Uniform sampling without replacement via partial Fisher-Yates shuffle.
// Deterministic given the generator state and call order.
IndexSample sample_subset(Rng& rng, std::size_t universe, std::size_t size);

// Reusable sampler that keeps its identity permutation across draws so a draw
// costs O(size) after O(universe) setup (the partial shuffle is undone).
class SubsetSampler {
public:
    explicit SubsetSampler(std::size_t universe);
    // Fills `out` (resized to `size`) with a sorted uniform subset.
    void draw(Rng& rng, std::size_t size, std::vector<std::size_t>& out);

private:
    std::vector<std::size_t> perm_;
    std::vector<std::size_t> swapped_with_;  // undo log for one draw
};

}  // namespace dspdc
