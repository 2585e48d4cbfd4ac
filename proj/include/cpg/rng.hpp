#pragma once

#include <cmath>
#include <cstdint>

namespace cpg {

// Deterministic stream generator (splitmix64). One stream per task; never
// shared across threads. fork() advances the parent and seeds an independent
// child, which is how parallel fill kernels stay reproducible regardless of
// thread count.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on the open interval (0,1); never returns 0 or 1
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    RngStream fork() { return RngStream(next_u64()); }

  private:
    std::uint64_t state_;
};

}  // namespace cpg
