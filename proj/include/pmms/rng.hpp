#ifndef PMMS_RNG_HPP
#define PMMS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace pmms {

// Deterministic random stream. The mt19937_64 engine sequence is pinned by
// the standard; all value transformations are done by hand so that draws are
// identical across standard library implementations (std::uniform_*_distribution
// and std::normal_distribution are not).
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // inclusive bounds
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const double span = static_cast<double>(hi - lo) + 1.0;
        auto offset = static_cast<std::int64_t>(next_double() * span);
        if (offset > hi - lo) offset = hi - lo;
        return lo + offset;
    }

    // standard normal via Box-Muller, spare cached
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Knuth's product method; fine for the small rates used here
    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        double p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 finalizer; decorrelates streams derived from one root seed
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t tag) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline rng derive_rng(std::uint64_t root, std::uint64_t tag) { return rng(mix_seed(root, tag)); }

} // namespace pmms

#endif
