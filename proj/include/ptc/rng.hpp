#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ptc {

/// Seeded generator with fixed variate transforms. The transforms are
/// written out (instead of using std::*_distribution) so that a given
/// seed produces the same stream on every platform and toolchain.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1], safe inside logarithms.
    double uniform01_open_low() { return 1.0 - uniform01(); }

    /// Standard normal via Box-Muller; the sine partner is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u = uniform01_open_low();
        const double v = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u));
        const double angle = 2.0 * M_PI * v;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Standard Student-t with `dof` degrees of freedom via the exact polar
    /// transform sqrt(dof*(U^{-2/dof}-1))*cos(2*pi*V); dof=1 is Cauchy.
    double student_t(double dof) {
        const double u = uniform01_open_low();
        const double v = uniform01();
        const double radius = std::sqrt(dof * (std::pow(u, -2.0 / dof) - 1.0));
        return radius * std::cos(2.0 * M_PI * v);
    }

    /// Index in [0, n) with rejection to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ptc
