#ifndef CHECKSHRINK_RNG_HPP
#define CHECKSHRINK_RNG_HPP

#include <cstdint>
#include <random>

namespace checkshrink {

// Splittable seed. Equal (seed, stream_id) pairs give bit-identical
// sequences; substream() derives statistically independent streams so
// parallel work (coordinates, replications) can own private generators
// without coordination.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngSeed substream(std::uint64_t key) const;
    RngSeed substream(std::uint64_t key_a, std::uint64_t key_b) const;
};

class RngStream {
public:
    explicit RngStream(RngSeed s);

    std::uint64_t next_u64();

    // Uniform on (0,1), never exactly 0 or 1.
    double uniform01();
    double uniform(double lo, double hi);

    // Standard normal via inverse-CDF transform. Slower than ziggurat but
    // the draw is a pure function of the stream state, so sequences are
    // stable across platforms and standard libraries.
    double normal();

private:
    std::mt19937_64 gen_;
};

} // namespace checkshrink

#endif
