#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rsslab {

/// Derives an independent stream seed from (base seed, stream name, index).
/// FNV-1a over the name, splitmix64 finalizer over the combination. All
/// randomness in the project flows from one global seed through this hash,
/// so results are reproducible regardless of evaluation order or worker
/// count.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view name,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (h ^ (index + 0x2545f4914f6cdd1dull));
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

/// Deterministic RNG: mt19937_64 engine (bit-exact per the standard) with
/// hand-rolled distribution transforms, since the std distributions are
/// implementation-defined and would break cross-build reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; second value cached.
    double normal() {
        if (has_cache_) {
            has_cache_ = false;
            return cache_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cache_ = r * std::sin(a);
        has_cache_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Unbiased integer in [0, n).
    std::size_t uniform_index(std::size_t n) {
        if (n <= 1) return 0;
        const std::uint64_t bound = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x = gen_();
        while (x >= bound) x = gen_();
        return static_cast<std::size_t>(x % n);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
    double cache_ = 0.0;
    bool has_cache_ = false;
};

}  // namespace rsslab
