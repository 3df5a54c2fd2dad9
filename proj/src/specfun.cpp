#include "ffspec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ffspec/errors.hpp"

namespace ffspec::specfun {

namespace {

constexpr double kRescaleAbove = 1e200;

// Starting order for Miller's downward recurrence; far enough past the
// turning point that the arbitrary seed has decayed below double precision.
int miller_start(int nmax, double x) {
    const double m = std::max(static_cast<double>(nmax), x);
    int start = static_cast<int>(m + 20.0 + std::sqrt(40.0 * (m + 1.0)));
    if (start % 2 != 0) ++start;
    return start;
}

void check_order(int l, const char* what) {
    if (l < 0) throw DomainError(std::string(what) + ": negative order " + std::to_string(l));
}

}  // namespace

void SeriesTruncation::validate() const {
    if (max_order < 0) throw DomainError("SeriesTruncation: max_order must be >= 0");
    if (!(tail_tolerance > 0.0)) throw DomainError("SeriesTruncation: tail_tolerance must be > 0");
}

std::vector<double> sph_bessel_j_all(int lmax, double x) {
    check_order(lmax, "sph_bessel_j");
    if (x < 0.0 || !std::isfinite(x)) throw DomainError("sph_bessel_j: x must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(lmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const int start = miller_start(lmax + 1, x);
    double next = 0.0;      // f_{l+1}
    double current = 1e-300;  // f_l
    for (int l = start; l > 0; --l) {
        const double prev = (2.0 * l + 1.0) / x * current - next;  // f_{l-1}
        next = current;
        current = prev;
        if (l - 1 <= lmax) out[static_cast<std::size_t>(l - 1)] = current;
        if (std::abs(current) > kRescaleAbove) {
            current /= kRescaleAbove;
            next /= kRescaleAbove;
            for (int i = l - 1; i <= lmax; ++i) out[static_cast<std::size_t>(i)] /= kRescaleAbove;
        }
    }
    // current == f_0, next == f_1 (unnormalised)
    const double j0 = std::sin(x) / x;
    double scale;
    if (x < 1.0) {
        scale = j0 / current;
    } else {
        const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
        scale = (std::abs(j0) >= std::abs(j1)) ? j0 / current : j1 / next;
    }
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<double> sph_bessel_y_all(int lmax, double x) {
    check_order(lmax, "sph_bessel_y");
    if (!(x > 0.0)) throw DomainError("sph_bessel_y: x must be > 0");
    std::vector<double> out(static_cast<std::size_t>(lmax) + 1);
    out[0] = -std::cos(x) / x;
    if (lmax >= 1) out[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 1; l < lmax; ++l) {
        out[static_cast<std::size_t>(l + 1)] =
            (2.0 * l + 1.0) / x * out[static_cast<std::size_t>(l)] - out[static_cast<std::size_t>(l - 1)];
    }
    return out;
}

std::vector<cdouble> sph_hankel1_all(int lmax, double x) {
    if (!(x > 0.0)) throw DomainError("sph_hankel1: x must be > 0");
    const auto j = sph_bessel_j_all(lmax, x);
    const auto y = sph_bessel_y_all(lmax, x);
    std::vector<cdouble> out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out[i] = {j[i], y[i]};
    return out;
}

double sph_bessel_j(int l, double x) { return sph_bessel_j_all(l, x)[static_cast<std::size_t>(l)]; }

double sph_bessel_y(int l, double x) { return sph_bessel_y_all(l, x)[static_cast<std::size_t>(l)]; }

cdouble sph_hankel1(int l, double x) { return sph_hankel1_all(l, x)[static_cast<std::size_t>(l)]; }

std::vector<double> cyl_bessel_j_all(int nmax, double x) {
    check_order(nmax, "cyl_bessel_j");
    if (x < 0.0 || !std::isfinite(x)) throw DomainError("cyl_bessel_j: x must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const int start = miller_start(nmax + 1, x);
    double next = 0.0;
    double current = 1e-300;
    double norm = 0.0;  // J_0 + 2 sum J_2k, unnormalised
    for (int n = start; n > 0; --n) {
        const double prev = 2.0 * n / x * current - next;
        next = current;
        current = prev;
        const int m = n - 1;
        if (m <= nmax) out[static_cast<std::size_t>(m)] = current;
        if (m == 0) {
            norm += current;
        } else if (m % 2 == 0) {
            norm += 2.0 * current;
        }
        if (std::abs(current) > kRescaleAbove) {
            current /= kRescaleAbove;
            next /= kRescaleAbove;
            norm /= kRescaleAbove;
            for (int i = m; i <= nmax; ++i) out[static_cast<std::size_t>(i)] /= kRescaleAbove;
        }
    }
    for (auto& v : out) v /= norm;
    return out;
}

namespace {

// Y_0 and Y_1 from their Neumann expansions in J_m, then upward recurrence.
// `j` must hold J_0..J_m for m >= neumann_terms(x) + 1.
int neumann_terms(double x) { return miller_start(2, x); }

std::vector<double> y_from_j(int nmax, double x, const std::vector<double>& j) {
    constexpr double pi = std::numbers::pi;
    constexpr double euler = std::numbers::egamma;
    const int terms = neumann_terms(x);
    const double log_term = std::log(0.5 * x) + euler;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = terms / 2; k >= 1; --k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sign * j[static_cast<std::size_t>(2 * k)] / k;
        s1 += sign * (2.0 * k + 1.0) * j[static_cast<std::size_t>(2 * k + 1)] / (k * (k + 1.0));
    }
    std::vector<double> out(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
    out[0] = 2.0 / pi * log_term * j[0] - 4.0 / pi * s0;
    out[1] = -2.0 / (pi * x) * j[0] + 2.0 / pi * (log_term - 1.0) * j[1] - 2.0 / pi * s1;
    for (int n = 1; n < nmax; ++n) {
        out[static_cast<std::size_t>(n + 1)] =
            2.0 * n / x * out[static_cast<std::size_t>(n)] - out[static_cast<std::size_t>(n - 1)];
    }
    out.resize(static_cast<std::size_t>(nmax) + 1);
    return out;
}

}  // namespace

std::vector<double> cyl_bessel_y_all(int nmax, double x) {
    check_order(nmax, "cyl_bessel_y");
    if (!(x > 0.0)) throw DomainError("cyl_bessel_y: x must be > 0");
    const auto j = cyl_bessel_j_all(neumann_terms(x) + 2, x);
    return y_from_j(nmax, x, j);
}

std::vector<cdouble> cyl_hankel1_all(int nmax, double x) {
    check_order(nmax, "cyl_hankel1");
    if (!(x > 0.0)) throw DomainError("cyl_hankel1: x must be > 0");
    const auto j = cyl_bessel_j_all(std::max(nmax, neumann_terms(x) + 2), x);
    const auto y = y_from_j(nmax, x, j);
    std::vector<cdouble> out(static_cast<std::size_t>(nmax) + 1);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = {j[n], y[n]};
    return out;
}

double cyl_bessel_j(int n, double x) {
    const int m = std::abs(n);
    const double v = cyl_bessel_j_all(m, x)[static_cast<std::size_t>(m)];
    return (n < 0 && m % 2 != 0) ? -v : v;
}

double cyl_bessel_y(int n, double x) {
    const int m = std::abs(n);
    const double v = cyl_bessel_y_all(m, x)[static_cast<std::size_t>(m)];
    return (n < 0 && m % 2 != 0) ? -v : v;
}

cdouble bessel_cyl(CylKind kind, int n, double x) {
    if (kind == CylKind::J) return {cyl_bessel_j(n, x), 0.0};
    if (!(x > 0.0)) throw DomainError("bessel_cyl: H1 requires x > 0");
    return {cyl_bessel_j(n, x), cyl_bessel_y(n, x)};
}

std::vector<double> legendre_p_all(int lmax, double t) {
    check_order(lmax, "legendre_p");
    if (!(std::abs(t) <= 1.0)) throw DomainError("legendre_p: |t| must be <= 1");
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = t;
    for (int l = 1; l < lmax; ++l) {
        p[static_cast<std::size_t>(l + 1)] =
            ((2.0 * l + 1.0) * t * p[static_cast<std::size_t>(l)] - l * p[static_cast<std::size_t>(l - 1)]) / (l + 1.0);
    }
    return p;
}

double legendre_p(int l, double t) { return legendre_p_all(l, t)[static_cast<std::size_t>(l)]; }

}  // namespace ffspec::specfun
