#include "vkin/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace vkin {

namespace bq = boost::math::quadrature;
using mp = boost::multiprecision::cpp_bin_float_50;
using std::abs;

template <class Real>
std::pair<Real, Real> wynn_epsilon(const std::vector<Real>& s)
{
    using boost::multiprecision::abs;
    using std::abs;
    const std::size_t n = s.size();
    if (n == 0) return {Real(0), Real(0)};
    if (n < 3) return {s.back(), n == 2 ? Real(abs(Real(s[1] - s[0]))) : Real(0)};

    // prev = eps_{k-1}, cur = eps_k; even k columns hold the estimates
    std::vector<Real> prev(n + 1, Real(0));
    std::vector<Real> cur = s;
    Real best = s.back();
    Real last_even = s.back();
    Real err = abs(Real(s[n - 1] - s[n - 2]));
    for (std::size_t k = 1; cur.size() > 1; ++k) {
        std::vector<Real> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const Real d = cur[i + 1] - cur[i];
            if (d == 0) return {best, err};
            next[i] = prev[i + 1] + Real(1) / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) {
            const Real est = cur.back();
            err = abs(Real(est - last_even));
            best = est;
            last_even = est;
        }
    }
    return {best, err};
}

template std::pair<double, double> wynn_epsilon<double>(const std::vector<double>&);

namespace {

// int_0^inf f(u) cos(b u) du, b > 0, split at the zeros of cos.
template <class Real, class F>
Real oscillatory_cosine(F f, Real b, Real tol, int max_intervals, const char* what)
{
    const Real pi = boost::math::constants::pi<Real>();
    std::vector<Real> sums;
    Real acc = 0;
    Real lo = 0;
    Real prev_est = 0;
    for (int j = 0; j < max_intervals; ++j) {
        const Real hi = (Real(j) + Real(0.5)) * pi / b;
        auto g = [&](Real u) { return f(u) * cos(b * u); };
        acc += bq::gauss_kronrod<Real, 31>::integrate(g, lo, hi, 20, tol);
        sums.push_back(acc);
        lo = hi;
        if (j >= 12) {
            const auto [est, err] = wynn_epsilon(sums);
            using std::abs;
            using boost::multiprecision::abs;
            if (abs(Real(est - prev_est)) < tol && err < tol) return est;
            prev_est = est;
        }
    }
    const auto [est, err] = wynn_epsilon(sums);
    std::ostringstream msg;
    msg << what << ": extrapolation did not converge (error estimate " << static_cast<double>(err) << ")";
    throw OracleError(msg.str(), static_cast<double>(err));
}

// Orthonormal pair spanning the plane perpendicular to unit vector e.
std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& e)
{
    const Vec3 seed = std::abs(e[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const double d = dot(seed, e);
    Vec3 e1{seed[0] - d * e[0], seed[1] - d * e[1], seed[2] - d * e[2]};
    const double n1 = norm(e1);
    for (double& x : e1) x /= n1;
    const Vec3 e2{e[1] * e1[2] - e[2] * e1[1], e[2] * e1[0] - e[0] * e1[2], e[0] * e1[1] - e[1] * e1[0]};
    return {e1, e2};
}

} // namespace

RealSymMat3 oracle_memory_kernel(double tau, const Vec3& w)
{
    if (tau < 0.0) throw DomainError("oracle_memory_kernel: tau must be non-negative");
    const mp pi = boost::math::constants::pi<mp>();
    // axial weights after the closed-form transverse integral
    auto f_par = [&](mp u) { return pi * u * u / (2 * (1 + u * u) * (1 + u * u)); };
    auto f_perp = [&](mp u) { return pi / (4 * (1 + u * u)); };
    const double a = norm(w);
    const mp b = mp(tau) * mp(a);
    const mp tol("1e-32");

    mp I_par, I_perp;
    if (b == 0) {
        const mp inf = std::numeric_limits<mp>::infinity();
        I_par = bq::gauss_kronrod<mp, 31>::integrate(f_par, mp(0), inf, 25, tol);
        I_perp = bq::gauss_kronrod<mp, 31>::integrate(f_perp, mp(0), inf, 25, tol);
    } else {
        I_par = oscillatory_cosine(f_par, b, tol, 400, "oracle_memory_kernel");
        I_perp = oscillatory_cosine(f_perp, b, tol, 400, "oracle_memory_kernel");
    }
    // the integrands are even in u
    const double par = static_cast<double>(2 * I_par);
    const double perp = static_cast<double>(2 * I_perp);
    if (a == 0.0) return RealSymMat3::identity(perp);
    return RealSymMat3::identity(perp) + RealSymMat3::outer(w, (par - perp) / (a * a));
}

ComplexSymMat3 oracle_laplace(std::complex<double> z, const Vec3& w, const CutoffSpec& spec)
{
    if (!(z.real() > 0.0)) throw DomainError("oracle_laplace: Re z must be positive");
    const double a = norm(w);
    const double decay = z.real() + a;
    double piece = 1.0 / decay;
    if (z.imag() != 0.0) piece = std::min(piece, std::numbers::pi / std::abs(z.imag()));
    const double scale = kKernelScale / decay;

    ComplexSymMat3 out;
    double T = 0.0;
    for (int p = 0; p < 100000; ++p) {
        const double lo = T;
        const double hi = T + piece;
        for (int c = 0; c < 6; ++c) {
            auto re = [&](double t) { return (std::exp(-z * t) * memory_kernel(t, w, spec).c[c]).real(); };
            auto im = [&](double t) { return (std::exp(-z * t) * memory_kernel(t, w, spec).c[c]).imag(); };
            out.c[c] += std::complex<double>(bq::gauss_kronrod<double, 61>::integrate(re, lo, hi, 6, 1e-15),
                                             bq::gauss_kronrod<double, 61>::integrate(im, lo, hi, 6, 1e-15));
        }
        T = hi;
        // |e^{-z t} G| <= (pi^2/4)(1 + a t) e^{-(Re z + a) t}
        const double tail = kKernelScale * (1.0 + a * T + a / decay) * std::exp(-decay * T) / decay;
        if (tail < 1e-17 * scale) return out;
    }
    throw OracleError("oracle_laplace: tail did not decay", 0.0);
}

RealSymMat3 oracle_landau_kernel(const Vec3& w)
{
    const double a = norm(w);
    if (!(a > 0.0)) throw DomainError("oracle_landau_kernel: |w| must be positive");
    const Vec3 e{w[0] / a, w[1] / a, w[2] / a};
    const auto [e1, e2] = perpendicular_basis(e);

    bq::exp_sinh<double> radial;
    double err = 0.0;
    // int_0^inf r^2 |phi_hat(r)|^2 r dr
    const double R = radial.integrate([](double r) {
        if (r > 1e20) return 0.0;
        const double q = 1.0 + r * r;
        return r * r * r / (q * q * q);
    }, 1e-14,
                                      &err);
    if (err > 1e-10) throw OracleError("oracle_landau_kernel: radial quadrature did not converge", err);

    // trapezoid in the angle is exact for the quadratic angular dependence
    constexpr int n_theta = 16;
    RealSymMat3 out;
    for (int i = 0; i < n_theta; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n_theta;
        const Vec3 k{std::cos(th) * e1[0] + std::sin(th) * e2[0], std::cos(th) * e1[1] + std::sin(th) * e2[1],
                     std::cos(th) * e1[2] + std::sin(th) * e2[2]};
        out += RealSymMat3::outer(k, 2.0 * std::numbers::pi / n_theta * R);
    }
    // delta(k.w) = delta(k.e) / |w|
    return out * (std::numbers::pi / a);
}

double oracle_potential_ft(double k)
{
    if (k < 0.0) throw DomainError("oracle_potential_ft: k must be non-negative");
    const double norm3 = std::pow(2.0 * std::numbers::pi, -1.5);
    if (k == 0.0) {
        double err = 0.0;
        bq::exp_sinh<double> integrator;
        const double I = integrator.integrate([](double r) { return r > 0.0 && r < 800.0 ? r * r * potential(r) : 0.0; }, 1e-14, &err);
        if (err > 1e-10) throw OracleError("oracle_potential_ft: quadrature did not converge", err);
        return norm3 * 4.0 * std::numbers::pi * I;
    }
    std::vector<double> sums;
    double acc = 0.0;
    for (int j = 0; j < 2000; ++j) {
        const double lo = j * std::numbers::pi / k;
        const double hi = (j + 1) * std::numbers::pi / k;
        const double part = bq::gauss_kronrod<double, 31>::integrate(
            [&](double r) { return r > 0.0 ? r * std::sin(k * r) * potential(r) : 0.0; }, lo, hi, 12, 1e-14);
        acc += part;
        sums.push_back(acc);
        // phi decays like e^{-r}, so the partial sums converge without help once the lobes are tiny
        if (j > 4 && std::abs(part) < 1e-17 * std::abs(acc)) break;
    }
    const auto [est, err] = wynn_epsilon(sums);
    if (err > 1e-9 * std::abs(est) && std::abs(sums.back() - est) > 1e-9 * std::abs(est))
        throw OracleError("oracle_potential_ft: partial sums did not settle", err);
    return norm3 * 4.0 * std::numbers::pi / k * sums.back();
}

} // namespace vkin
