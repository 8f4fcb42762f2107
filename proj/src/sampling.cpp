#include "dspdc/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dspdc {

SubsetSampler::SubsetSampler(std::size_t universe) : perm_(universe) {
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
}

void SubsetSampler::draw(Rng& rng, std::size_t size, std::vector<std::size_t>& out) {
    const std::size_t universe = perm_.size();
    if (size == 0 || size > universe)
        throw std::invalid_argument("sample_subset: size must satisfy 1 <= size <= universe (size=" +
                                    std::to_string(size) + ", universe=" + std::to_string(universe) + ")");
    swapped_with_.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rng.next_below(universe - k));
        std::swap(perm_[k], perm_[j]);
        swapped_with_[k] = j;
    }
    out.assign(perm_.begin(), perm_.begin() + static_cast<std::ptrdiff_t>(size));
    // Undo so perm_ stays the identity for the next draw.
    for (std::size_t k = size; k-- > 0;) std::swap(perm_[k], perm_[swapped_with_[k]]);
    std::sort(out.begin(), out.end());
}

IndexSample sample_subset(Rng& rng, std::size_t universe, std::size_t size) {
    SubsetSampler sampler(universe);
    IndexSample s;
    s.universe = universe;
    s.size = size;
    sampler.draw(rng, size, s.indices);
    return s;
}

}  // namespace dspdc
