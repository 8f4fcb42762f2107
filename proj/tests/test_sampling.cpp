#include <map>
#include <vector>

#include "doctest.h"

#include "dspdc/rng.hpp"
#include "dspdc/sampling.hpp"

using namespace dspdc;

TEST_CASE("subsets are sorted, distinct, in range") {
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const IndexSample s = sample_subset(rng, 9, 4);
        REQUIRE(s.indices.size() == 4);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(s.indices[k] < 9);
            if (k > 0) CHECK(s.indices[k] > s.indices[k - 1]);
        }
    }
}

TEST_CASE("sampling is deterministic given the seed") {
    Rng a(99), b(99);
    for (int rep = 0; rep < 50; ++rep) {
        CHECK(sample_subset(a, 12, 5).indices == sample_subset(b, 12, 5).indices);
    }
}

TEST_CASE("full and singleton draws") {
    Rng rng(1);
    const IndexSample full = sample_subset(rng, 6, 6);
    for (std::size_t k = 0; k < 6; ++k) CHECK(full.indices[k] == k);
    const IndexSample one = sample_subset(rng, 6, 1);
    CHECK(one.indices.size() == 1);
    CHECK_THROWS_AS(sample_subset(rng, 3, 4), std::invalid_argument);
}

TEST_CASE("every k-subset appears with roughly uniform frequency") {
    // C(5,2) = 10 subsets; 10000 draws, expect ~1000 each. A +-25% envelope
    // is about 8 sigma, so flakes are effectively impossible.
    Rng rng(5);
    std::map<std::vector<std::size_t>, int> counts;
    for (int rep = 0; rep < 10000; ++rep) counts[sample_subset(rng, 5, 2).indices]++;
    CHECK(counts.size() == 10);
    for (const auto& [k, c] : counts) {
        CHECK(c > 750);
        CHECK(c < 1250);
    }
}

TEST_CASE("subset sampler restores its permutation between draws") {
    // A reused sampler must produce the same draw a fresh one would for the
    // same generator state, regardless of how many draws happened before.
    SubsetSampler reused(11);
    std::vector<std::size_t> out, fresh_out;
    Rng warm(4);
    for (int rep = 0; rep < 25; ++rep) reused.draw(warm, 3, out);

    Rng a(123), b(123);
    for (int rep = 0; rep < 25; ++rep) {
        SubsetSampler fresh(11);
        reused.draw(a, 4, out);
        fresh.draw(b, 4, fresh_out);
        CHECK(out == fresh_out);
        for (std::size_t k = 0; k < out.size(); ++k) {
            CHECK(out[k] < 11);
            if (k > 0) CHECK(out[k] > out[k - 1]);
        }
    }
}

TEST_CASE("subset sampler matches sample_subset") {
    Rng a(31), b(31);
    SubsetSampler sampler(8);
    std::vector<std::size_t> out;
    for (int rep = 0; rep < 40; ++rep) {
        sampler.draw(a, 3, out);
        CHECK(out == sample_subset(b, 8, 3).indices);
    }
}

TEST_CASE("rng bounded draws are in range and deterministic") {
    Rng a(2), b(2);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::uint64_t v = a.next_below(7);
        CHECK(v < 7);
        CHECK(v == b.next_below(7));
    }
    CHECK_THROWS_AS(a.next_below(0), std::invalid_argument);
    for (int rep = 0; rep < 1000; ++rep) {
        const double u = a.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
