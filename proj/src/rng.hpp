#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace sb {

// Seeded RNG with hand-rolled samplers. mt19937_64 output is pinned by the
// standard, but the std distributions are not, and reports must be
// bit-identical across platforms and rerun counts.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // derive an independent stream, e.g. per restart or per fold
    static Rng derive(uint64_t seed, uint64_t stream) {
        return Rng(mix(seed, stream));
    }

    uint64_t next_u64() { return eng_(); }

    // unbiased integer in [0, bound) via rejection
    uint64_t next_below(uint64_t bound) {
        if (bound < 2) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    // uniform in [0,1) with 53 random bits
    double next_double() { return (eng_() >> 11) * 0x1.0p-53; }

    // Box-Muller, deterministic pair caching
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = next_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct values from [0, n), in selection order
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k; ++i) {
            size_t j = static_cast<size_t>(next_below(n - i));
            out.push_back(pool[j]);
            std::swap(pool[j], pool[n - 1 - i]);
        }
        return out;
    }

private:
    static uint64_t mix(uint64_t a, uint64_t b) {
        // splitmix64 over the pair
        uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sb
