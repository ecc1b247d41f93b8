#ifndef NOF1_RNG_HPP
#define NOF1_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace nof1 {

// Stateless seed mixing (splitmix64 finalizer). Replicate r of a run with master
// seed s draws from Rng(derive_seed(s, r)), so results do not depend on the order
// in which replicates execute.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 stream with hand-rolled variate transforms. The standard library's
// distribution objects are implementation-defined, so we keep the mapping from
// raw bits to variates in our own code to make seeded runs stable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal, Marsaglia polar method
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::uint64_t integer() { return gen_(); }

    // index drawn from an (unnormalized is not allowed) probability vector
    int categorical(std::span<const double> probs) {
        return categorical_from_uniform(probs, uniform());
    }

    // inverse-transform lookup shared with counterfactual evaluation
    static int categorical_from_uniform(std::span<const double> probs, double u) {
        double cum = 0.0;
        const int n = static_cast<int>(probs.size());
        for (int i = 0; i < n; ++i) {
            cum += probs[i];
            if (u < cum) return i;
        }
        return n - 1; // u landed in the rounding slack at the top
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace nof1

#endif
