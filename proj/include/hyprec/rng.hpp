#pragma once
// Deterministic, platform-independent RNG. std::random distributions are not
// required to produce identical streams across standard libraries, and several
// outputs of this project are gated on byte-identical reruns, so the generator
// and all derived distributions are hand-rolled (splitmix64 core, 53-bit
// uniforms, Box-Muller normals).

#include <cstdint>
#include <cmath>
#include <vector>

namespace hyprec {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derived streams: same seed + same tags -> same stream, independent of
    // how many draws other streams have made. Used per (seed, purpose, user),
    // per bootstrap replicate, etc.
    Rng(std::uint64_t seed, std::uint64_t a) : state_(combine(seed, a)) {}
    Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
        : state_(combine(combine(seed, a), b)) {}
    Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
        : state_(combine(combine(combine(seed, a), b), c)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // unbiased integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t t = (0u - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= t) return r % n;
        }
    }

    // standard normal via Box-Muller (pairs cached)
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static std::uint64_t combine(std::uint64_t s, std::uint64_t t) {
        // one splitmix64 round over the xor-folded pair
        std::uint64_t z = s ^ (t + 0x9E3779B97F4A7C15ull + (s << 6) + (s >> 2));
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// stream tags (arbitrary distinct constants)
namespace rng_stream {
constexpr std::uint64_t init = 0x11;
constexpr std::uint64_t epoch_shuffle = 0x22;
constexpr std::uint64_t train_negatives = 0x33;
constexpr std::uint64_t eval_negatives = 0x44;
constexpr std::uint64_t bootstrap = 0x55;
}  // namespace rng_stream

}  // namespace hyprec
