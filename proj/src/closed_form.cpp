#include "qwts/closed_form.hpp"

#include "qwts/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qwts::closed_form {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

AngleParams::AngleParams(double theta_, double xi_) : theta(theta_), xi(xi_) {
    if (!(theta >= 0.0 && theta <= kHalfPi)) throw DomainError("theta outside [0, pi/2]");
    if (!(xi >= 0.0 && xi <= kHalfPi)) throw DomainError("xi outside [0, pi/2]");
}

double v1(double x1, const AngleParams& p) {
    return x1 * x1 + 2.0 * std::cos(2.0 * p.theta) * std::cos(2.0 * p.xi) * x1 + 1.0;
}

double e2(const AngleParams& p) {
    const double c = std::cos(p.theta);
    return -2.0 * c * c * std::cos(2.0 * p.theta) * std::cos(2.0 * p.xi);
}

double e3(const AngleParams& p) {
    const double c2 = std::pow(std::cos(p.theta), 2);
    const double s2 = std::pow(std::sin(p.theta), 2);
    const double s2t = std::sin(2.0 * p.theta);
    return -((3.0 * c2 * c2 + s2 * s2) * std::cos(2.0 * p.theta) + s2 * s2t * s2t) * std::cos(2.0 * p.xi);
}

double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    if (n <= 30) {
        std::uint64_t r = 1;
        k = std::min(k, n - k);
        for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        return static_cast<double>(r);
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double en_series(const AngleParams& p, int n) {
    if (n < 2) throw std::invalid_argument("en_series requires n >= 2, got " + std::to_string(n));
    if (p.theta >= kHalfPi) {
        throw DomainError("en_series is undefined at theta = pi/2; evolve the walk instead");
    }
    const double c = std::cos(p.theta);
    const double t = std::tan(p.theta);
    const double ratio = -t * t;
    const double nc2 = n * std::cos(2.0 * p.theta);

    // The (gamma, delta) double sum factorizes into sums over one index:
    // sum r^(g+d) A_g A_d (nc2 + g + d) / (g d) = nc2 s0^2 + 2 s0 s1. Summing
    // the square directly cancels catastrophically for n near 50.
    double bracket = nc2;
    for (int k = 1; k <= (n - 1) / 2; ++k) {
        const double spread = static_cast<double>(n - 2 * k) * (n - 2 * k);
        double s0 = 0.0;
        double s1 = 0.0;
        double power = 1.0;
        for (int g = 1; g <= k; ++g) {
            power *= ratio;
            const double a = binomial(k - 1, g - 1) * binomial(n - k - 1, g - 1) * power;
            s0 += a / g;
            s1 += a;
        }
        bracket += spread * (nc2 * s0 * s0 + 2.0 * s0 * s1);
    }
    return -std::pow(c, 2.0 * (n - 1)) * bracket * std::cos(2.0 * p.xi);
}

} // namespace qwts::closed_form
