#pragma once

#include <complex>
#include <vector>

namespace ffspec::specfun {

using cdouble = std::complex<double>;

/// Truncation of a partial-wave expansion.
struct SeriesTruncation {
    int max_order = 0;
    double tail_tolerance = 1e-14;

    /// Throws DomainError unless max_order >= 0 and tail_tolerance > 0.
    void validate() const;
};

// Spherical Bessel functions. Accurate to ~1e-12 relative for l <= 60,
// 0 < x <= 60. x == 0 is accepted for j_l (limit values).
double sph_bessel_j(int l, double x);
double sph_bessel_y(int l, double x);
cdouble sph_hankel1(int l, double x);

/// j_0..j_lmax in one downward (Miller) sweep.
std::vector<double> sph_bessel_j_all(int lmax, double x);
/// y_0..y_lmax by upward recurrence.
std::vector<double> sph_bessel_y_all(int lmax, double x);
std::vector<cdouble> sph_hankel1_all(int lmax, double x);

/// f_l'(x) = f_{l-1}(x) - (l+1)/x f_l(x), with f_0' = -f_1.
/// `values` must hold f_0..f_{l+1} (index l+1 only used for l == 0).
template <typename T>
T sph_derivative(const std::vector<T>& values, int l, double x) {
    if (l == 0) return -values[1];
    return values[l - 1] - (static_cast<double>(l + 1) / x) * values[l];
}

// Cylindrical Bessel functions of integer order.
enum class CylKind { J, H1 };

cdouble bessel_cyl(CylKind kind, int n, double x);
double cyl_bessel_j(int n, double x);
double cyl_bessel_y(int n, double x);

/// J_0..J_nmax (Miller recurrence normalised by J_0 + 2 sum J_2k = 1).
std::vector<double> cyl_bessel_j_all(int nmax, double x);
/// Y_0..Y_nmax: Neumann series for Y_0, Y_1, then upward recurrence.
std::vector<double> cyl_bessel_y_all(int nmax, double x);
/// H^(1)_0..H^(1)_nmax sharing one Miller sweep.
std::vector<cdouble> cyl_hankel1_all(int nmax, double x);

/// Legendre polynomial P_l(t), |t| <= 1.
double legendre_p(int l, double t);
/// P_0..P_lmax at t.
std::vector<double> legendre_p_all(int lmax, double t);

}  // namespace ffspec::specfun
