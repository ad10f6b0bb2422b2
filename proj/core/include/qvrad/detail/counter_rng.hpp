#pragma once

#include <cmath>
#include <cstdint>

namespace qvrad::detail {

//! Counter-based random stream: every draw is a pure function of
//! (seed, sample index, slot), so any partition of the sample range over
//! workers reproduces the serial stream exactly.
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t sample) noexcept
        : key_(mix(seed ^ 0x6a09e667f3bcc909ULL) ^ mix(sample + 0x9e3779b97f4a7c15ULL))
    {
    }

    //! Uniform in the open interval (0, 1).
    double uniform() noexcept
    {
        std::uint64_t bits = mix(key_ + 0x9e3779b97f4a7c15ULL * (++slot_));
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    //! Standard normal via Box-Muller; the sine branch is cached.
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phase = 6.283185307179586 * u2;
        spare_ = r * std::sin(phase);
        has_spare_ = true;
        return r * std::cos(phase);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) noexcept
    {
        // splitmix64 finalizer
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t slot_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qvrad::detail
