#ifndef KMSLAB_RNG_HPP
#define KMSLAB_RNG_HPP

#include <cstdint>
#include <random>

#include "kmslab/types.hpp"

namespace kmslab {

// Deterministic random source. std::*_distribution is implementation-defined,
// so uniforms and normals are produced from raw mt19937_64 bits directly;
// identical seeds give identical streams on every platform.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex cnormal() { return Complex(normal(), normal()) * M_SQRT1_2; }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64, used to derive independent per-trial seeds from a master seed
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

CMatrix random_matrix(int dim, RandomSource& rng);
CMatrix random_hermitian(int dim, RandomSource& rng);
CMatrix random_unitary(int dim, RandomSource& rng);
// faithful density with spectrum drawn from [0.2, 1] before normalization,
// so condition numbers stay mild (kappa <= 5*dim-ish)
CMatrix random_density(int dim, RandomSource& rng);

}  // namespace kmslab

#endif
