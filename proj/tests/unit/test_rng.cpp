#include <doctest.h>

#include <array>
#include <set>

#include "evpipe/rng.hpp"

using namespace evpipe;

TEST_SUITE("rng") {

TEST_CASE("fnv1a64 matches the published vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("derive_stream_seed separates recordings and seeds") {
    CHECK(derive_stream_seed(1, "a/b.evt") == derive_stream_seed(1, "a/b.evt"));
    CHECK(derive_stream_seed(1, "a/b.evt") != derive_stream_seed(2, "a/b.evt"));
    CHECK(derive_stream_seed(1, "a/b.evt") != derive_stream_seed(1, "a/c.evt"));
}

TEST_CASE("bounded draws stay in range and are deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        uint64_t n = 1 + (uint64_t(i) % 97);
        uint64_t v = a.bounded(n);
        CHECK(v < n);
        CHECK(v == b.bounded(n));
    }
    Rng c(7);
    CHECK(c.bounded(1) == 0);
}

TEST_CASE("bounded(6) covers all faces roughly evenly") {
    Rng rng(123);
    std::array<int, 6> counts{};
    const int draws = 60'000;
    for (int i = 0; i < draws; ++i) ++counts[rng.bounded(6)];
    for (int face = 0; face < 6; ++face) {
        CHECK(counts[face] > draws / 6 - 600);
        CHECK(counts[face] < draws / 6 + 600);
    }
}

TEST_CASE("mix64 disperses nearby inputs") {
    std::set<uint64_t> seen;
    for (uint64_t i = 0; i < 1000; ++i) seen.insert(mix64(i));
    CHECK(seen.size() == 1000);
}

}
