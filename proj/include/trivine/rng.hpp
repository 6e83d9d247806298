#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// A generator is fully described by (seed, stream, position): the seed is
// the Philox key and the counter is (block index, stream). Distinct
// streams never overlap, so replications can run on separate streams in
// any order and still reproduce bit for bit.

#include <array>
#include <cstdint>
#include <limits>

namespace trivine {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    // Independent child generator; the child stream id is a hash of
    // (stream, index).
    CounterRng split(std::uint64_t index) const;

    std::uint64_t next_u64();
    result_type operator()() { return next_u64(); }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;  // 32-bit words consumed from buffer_
};

}  // namespace trivine
