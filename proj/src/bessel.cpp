#include <cmath>
#include <limits>
#include <numbers>

#include "vkin/kernels.hpp"

namespace vkin {

namespace {

// K0 from the ascending series
//   K0(x) = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2,
// accurate to rounding for x <= 2 where the two parts do not cancel badly.
double k0_series(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;     // (x^2/4)^k / (k!)^2
    double i0 = 1.0;
    double tail = 0.0;
    double harmonic = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += term;
        tail += harmonic * term;
        if (term * harmonic < 1e-18 * std::abs(tail) && term < 1e-18 * i0) break;
    }
    return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail;
}

// Steed's continued fraction (Temme's CF2) for K0, x >= 2.
double k0_continued_fraction(double x)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double delh = d;
    double h = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 100000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
}

} // namespace

double bessel_k0(double x)
{
    if (!(x > 0.0)) throw DomainError("bessel_k0: argument must be positive");
    if (std::isinf(x)) return 0.0;
    return x <= 2.0 ? k0_series(x) : k0_continued_fraction(x);
}

} // namespace vkin
