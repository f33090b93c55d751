#include "checkshrink/rng.hpp"

#include "checkshrink/stats.hpp"

namespace checkshrink {

namespace {

// splitmix64 finalizer; full-period mixing of 64-bit keys.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

RngSeed RngSeed::substream(std::uint64_t key) const {
    return RngSeed{seed, mix64(stream_id ^ mix64(key))};
}

RngSeed RngSeed::substream(std::uint64_t key_a, std::uint64_t key_b) const {
    return substream(mix64(key_a) ^ (key_b * 0x9e3779b97f4a7c15ULL));
}

RngStream::RngStream(RngSeed s) {
    std::seed_seq seq{s.seed, s.stream_id, mix64(s.seed ^ s.stream_id)};
    gen_.seed(seq);
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform01() {
    // 53 random bits into (0,1); offset by half an ulp so 0 is unreachable.
    const std::uint64_t bits = gen_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RngStream::normal() {
    return stats::norm_quantile(uniform01());
}

} // namespace checkshrink
