#pragma once

#include <cstdint>

namespace rfs {

// xoshiro256++ with splitmix64 seeding. Self-contained so that seeded runs
// reproduce bit-identically across standard libraries (std:: distributions
// are implementation-defined). fork() derives independent streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform01();  // in (0, 1), 53-bit
    double normal(double mean = 0.0, double sigma = 1.0);
    std::uint64_t poisson(double mean);

    Rng fork(std::uint64_t stream) const;

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rfs
