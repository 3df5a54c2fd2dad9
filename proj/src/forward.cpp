#include "ffspec/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffspec/errors.hpp"

namespace ffspec {

namespace {

constexpr cdouble kI{0.0, 1.0};

// Solve the 2x2 transmission system
//   c f_in - a h = f_out,   c k_in f_in' - a k h' = k f_out'
// for the exterior coefficient a.
cdouble transmission_coeff(double f_in, double df_in, double k_in, double f_out, double df_out, cdouble h, cdouble dh,
                           double k) {
    const cdouble a11 = f_in;
    const cdouble a12 = -h;
    const cdouble a21 = k_in * df_in;
    const cdouble a22 = -k * dh;
    const cdouble det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
    if (!(std::abs(det) > 1e-14 * scale)) throw SolveError("degenerate transmission system in mie_coeff");
    return (a11 * (k * df_out) - a21 * f_out) / det;
}

double cyl_derivative(const std::vector<double>& f, int n) {
    if (n == 0) return -f[1];
    return 0.5 * (f[static_cast<std::size_t>(n - 1)] - f[static_cast<std::size_t>(n + 1)]);
}

cdouble cyl_derivative(const std::vector<cdouble>& f, int n) {
    if (n == 0) return -f[1];
    return 0.5 * (f[static_cast<std::size_t>(n - 1)] - f[static_cast<std::size_t>(n + 1)]);
}

std::vector<cdouble> sphere_coefficients(const ScattererSpec& spec, int lmax) {
    const double k = spec.wavenumber;
    const double x = k * spec.radius();
    const auto j = specfun::sph_bessel_j_all(lmax + 1, x);
    const auto h = specfun::sph_hankel1_all(lmax + 1, x);
    std::vector<cdouble> a(static_cast<std::size_t>(lmax) + 1);
    if (std::holds_alternative<Dirichlet>(spec.condition)) {
        for (int l = 0; l <= lmax; ++l) a[static_cast<std::size_t>(l)] = -j[static_cast<std::size_t>(l)] / h[static_cast<std::size_t>(l)];
    } else if (const auto* imp = std::get_if<Impedance>(&spec.condition)) {
        const double eta = imp->eta;
        for (int l = 0; l <= lmax; ++l) {
            const auto i = static_cast<std::size_t>(l);
            const double dj = specfun::sph_derivative(j, l, x);
            const cdouble dh = specfun::sph_derivative(h, l, x);
            a[i] = -(k * dj + eta * j[i]) / (k * dh + eta * h[i]);
        }
    } else {
        const double k_in = k * std::sqrt(std::get<Penetrable>(spec.condition).index);
        const double x_in = k_in * spec.radius();
        const auto j_in = specfun::sph_bessel_j_all(lmax + 1, x_in);
        for (int l = 0; l <= lmax; ++l) {
            const auto i = static_cast<std::size_t>(l);
            a[i] = transmission_coeff(j_in[i], specfun::sph_derivative(j_in, l, x_in), k_in, j[i],
                                      specfun::sph_derivative(j, l, x), h[i], specfun::sph_derivative(h, l, x), k);
        }
    }
    return a;
}

std::vector<cdouble> disk_coefficients(const ScattererSpec& spec, int nmax) {
    const double k = spec.wavenumber;
    const double x = k * spec.radius();
    const auto h = specfun::cyl_hankel1_all(nmax + 1, x);
    std::vector<double> j(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) j[i] = h[i].real();
    std::vector<cdouble> b(static_cast<std::size_t>(nmax) + 1);
    if (std::holds_alternative<Dirichlet>(spec.condition)) {
        for (int n = 0; n <= nmax; ++n) b[static_cast<std::size_t>(n)] = -j[static_cast<std::size_t>(n)] / h[static_cast<std::size_t>(n)];
    } else if (const auto* imp = std::get_if<Impedance>(&spec.condition)) {
        const double eta = imp->eta;
        for (int n = 0; n <= nmax; ++n) {
            const auto i = static_cast<std::size_t>(n);
            b[i] = -(k * cyl_derivative(j, n) + eta * j[i]) / (k * cyl_derivative(h, n) + eta * h[i]);
        }
    } else {
        const double k_in = k * std::sqrt(std::get<Penetrable>(spec.condition).index);
        const double x_in = k_in * spec.radius();
        const auto j_in = specfun::cyl_bessel_j_all(nmax + 1, x_in);
        for (int n = 0; n <= nmax; ++n) {
            const auto i = static_cast<std::size_t>(n);
            b[i] = transmission_coeff(j_in[i], cyl_derivative(j_in, n), k_in, j[i], cyl_derivative(j, n), h[i],
                                      cyl_derivative(h, n), k);
        }
    }
    return b;
}

void require_mie_shape(const ScattererSpec& spec) {
    if (std::holds_alternative<Curve>(spec.shape)) throw DomainError("Mie coefficients need a sphere or disk");
}

}  // namespace

specfun::SeriesTruncation default_truncation(double ka) {
    specfun::SeriesTruncation t;
    t.max_order = static_cast<int>(std::ceil(ka + 8.0 * std::cbrt(ka) + 12.0));
    t.tail_tolerance = 1e-14;
    return t;
}

cdouble mie_coeff(const ScattererSpec& spec, int order) {
    spec.validate();
    require_mie_shape(spec);
    if (order < 0) throw DomainError("mie_coeff: order must be >= 0");
    const auto c = spec.dimension == 3 ? sphere_coefficients(spec, order) : disk_coefficients(spec, order);
    return c.back();
}

std::vector<cdouble> mie_coefficients(const ScattererSpec& spec, const specfun::SeriesTruncation& truncation) {
    spec.validate();
    require_mie_shape(spec);
    truncation.validate();
    auto c = spec.dimension == 3 ? sphere_coefficients(spec, truncation.max_order)
                                 : disk_coefficients(spec, truncation.max_order);
    double largest = 0.0;
    for (const auto& v : c) largest = std::max(largest, std::abs(v));
    if (largest > 0.0 && std::abs(c.back()) > truncation.tail_tolerance * largest) {
        throw TruncationError("Mie series not converged at order " + std::to_string(truncation.max_order) +
                              ": |a_L| / max|a_l| = " + std::to_string(std::abs(c.back()) / largest));
    }
    return c;
}

FarFieldKernel farfield_kernel(const ScattererSpec& spec, const DirectionRule& rule) {
    if (std::holds_alternative<Curve>(spec.shape)) return farfield_kernel(spec, rule, specfun::SeriesTruncation{});
    return farfield_kernel(spec, rule, default_truncation(spec.wavenumber * spec.radius()));
}

FarFieldKernel farfield_kernel(const ScattererSpec& spec, const DirectionRule& rule,
                               const specfun::SeriesTruncation& truncation) {
    spec.validate();
    if (rule.dimension != spec.dimension) throw DomainError("rule dimension does not match scatterer dimension");

    FarFieldKernel kernel;
    if (const auto* curve = std::get_if<Curve>(&spec.shape)) {
        kernel = nystrom_farfield(*curve, spec.wavenumber, rule, curve->boundary_points);
    } else {
        const auto coeffs = mie_coefficients(spec, truncation);
        const int lmax = truncation.max_order;
        const double k = spec.wavenumber;
        // Series weights in the variable t = xhat . d.
        std::vector<cdouble> w(coeffs.size());
        if (spec.dimension == 3) {
            // u_inf = (1/(ik)) sum (2l+1) a_l P_l(t)
            for (int l = 0; l <= lmax; ++l) {
                w[static_cast<std::size_t>(l)] = (2.0 * l + 1.0) * coeffs[static_cast<std::size_t>(l)] / (kI * k);
            }
        } else {
            // u_inf = c (b_0 + 2 sum_{n>=1} b_n cos(n dtheta)), cos(n dtheta) = T_n(t)
            for (int n = 0; n <= lmax; ++n) {
                w[static_cast<std::size_t>(n)] = (n == 0 ? 1.0 : 2.0) * kDiskFarFieldConstant * coeffs[static_cast<std::size_t>(n)];
            }
        }
        const auto n = static_cast<Eigen::Index>(rule.size());
        kernel.values.resize(n, n);
        const bool legendre = spec.dimension == 3;
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& d = rule.nodes[static_cast<std::size_t>(j)];
            for (Eigen::Index i = 0; i < n; ++i) {
                const double t = std::clamp(rule.nodes[static_cast<std::size_t>(i)].dot(d), -1.0, 1.0);
                // Three-term recurrence: Legendre (3D) or Chebyshev (2D).
                double p0 = 1.0;
                double p1 = t;
                cdouble sum = w[0];
                if (lmax >= 1) sum += w[1] * p1;
                for (int l = 1; l < lmax; ++l) {
                    const double p2 = legendre ? ((2.0 * l + 1.0) * t * p1 - l * p0) / (l + 1.0) : 2.0 * t * p1 - p0;
                    p0 = p1;
                    p1 = p2;
                    sum += w[static_cast<std::size_t>(l + 1)] * p1;
                }
                kernel.values(i, j) = sum;
            }
        }
    }
    kernel.rule = rule;
    kernel.wavenumber = spec.wavenumber;
    kernel.dimension = spec.dimension;
    if (!spec.is_centered()) kernel = shift_kernel(kernel, spec.offset);
    return kernel;
}

FarFieldKernel shift_kernel(const FarFieldKernel& kernel, const Eigen::Vector3d& shift) {
    if (kernel.dimension == 2 && shift.z() != 0.0) throw DomainError("shift_kernel: planar shift must have z == 0");
    FarFieldKernel out = kernel;
    const auto n = static_cast<Eigen::Index>(kernel.size());
    const double k = kernel.wavenumber;
    Eigen::VectorXd proj(n);
    for (Eigen::Index i = 0; i < n; ++i) proj(i) = shift.dot(kernel.rule.nodes[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double phase = k * (proj(j) - proj(i));
            out.values(i, j) *= cdouble(std::cos(phase), std::sin(phase));
        }
    }
    return out;
}

double reciprocity_residual(const FarFieldKernel& kernel) {
    const auto& ant = kernel.rule.antipode;
    const auto n = static_cast<Eigen::Index>(kernel.size());
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ai = static_cast<Eigen::Index>(ant[static_cast<std::size_t>(i)]);
            const auto aj = static_cast<Eigen::Index>(ant[static_cast<std::size_t>(j)]);
            worst = std::max(worst, std::abs(kernel.values(i, j) - kernel.values(aj, ai)));
        }
    }
    return worst;
}

double relative_max_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("relative_max_error: shape mismatch");
    const double scale = b.cwiseAbs().maxCoeff();
    const double diff = (a - b).cwiseAbs().maxCoeff();
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace ffspec
