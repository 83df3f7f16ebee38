#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mvclust {

/// Seeded generator with a fixed, platform-independent output stream.
///
/// The engine is std::mt19937_64 (its output sequence is fully specified by
/// the standard). The standard distributions are implementation-defined, so
/// uniforms and normals are derived here explicitly: uniforms take the top 53
/// bits, normals use the Marsaglia polar method.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64+u53+marsaglia-polar";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling for an unbiased draw
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Standard normal.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mvclust
