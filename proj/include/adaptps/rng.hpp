#ifndef ADAPTPS_RNG_HPP
#define ADAPTPS_RNG_HPP

#include <cstdint>

namespace adaptps {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
/// independent sequence, so parallel replicates draw from disjoint streams
/// and every draw is reproducible across platforms.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal via the inverse-CDF transform (deterministic across
    /// platforms, unlike the std:: distributions).
    double normal();
    double normal(double mean, double sd);

    bool bernoulli(double p);

private:
    void advance();

    std::uint32_t key_[2];
    std::uint64_t counter_ = 0;
    std::uint32_t block_[4];
    int cursor_ = 4;
};

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double inverse_normal_cdf(double p);

}  // namespace adaptps

#endif
