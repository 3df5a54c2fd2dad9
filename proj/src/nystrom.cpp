// Sound-soft scattering by a smooth closed curve: combined double/single
// layer potential u^s = int (dPhi/dnu(y) - i eta Phi) psi ds with eta = k,
// boundary equation psi + K psi - i eta S psi = -2 u^i, discretised with
// trigonometric interpolation and the logarithmic splitting
//   kernel = A1(t,tau) ln(4 sin^2((t - tau)/2)) + A2(t,tau).

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "ffspec/errors.hpp"
#include "ffspec/forward.hpp"

namespace ffspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};

// Quadrature weights R_j^(n)(t_i) for the log-singular part; depend only on
// (i - j) mod 2n.
std::vector<double> log_weights(int n) {
    std::vector<double> r(static_cast<std::size_t>(2 * n));
    for (int d = 0; d < 2 * n; ++d) {
        const double s = kPi * d / n;
        double sum = 0.0;
        for (int m = 1; m < n; ++m) sum += std::cos(m * s) / m;
        r[static_cast<std::size_t>(d)] = -2.0 * kPi / n * sum - kPi / (static_cast<double>(n) * n) * std::cos(n * s);
    }
    return r;
}

}  // namespace

BoundaryCurve2D make_curve(const Curve& shape, int n_boundary) {
    if (shape.name == "kite") return kite_curve(n_boundary);
    if (shape.name == "circle") return circle_curve(n_boundary, shape.radius);
    throw DomainError("unknown curve '" + shape.name + "'");
}

FarFieldKernel nystrom_farfield(const Curve& shape, double k, const DirectionRule& rule, int n_boundary) {
    if (n_boundary < 8 || n_boundary % 2 != 0) throw DomainError("nystrom_farfield: N_bdry must be even and >= 8");
    return nystrom_farfield(make_curve(shape, n_boundary), k, rule);
}

FarFieldKernel nystrom_farfield(const BoundaryCurve2D& curve, double k, const DirectionRule& rule) {
    if (!(k > 0.0)) throw DomainError("nystrom_farfield: k must be positive");
    if (rule.dimension != 2) throw DomainError("nystrom_farfield: needs a circle rule");
    const auto m = static_cast<int>(curve.size());
    if (m < 8 || m % 2 != 0) throw DomainError("nystrom_farfield: boundary sample count must be even and >= 8");
    if (!(curve.min_speed() > 0.0)) throw DomainError("nystrom_farfield: irregular parametrisation");
    const int n = m / 2;
    const double eta = k;  // coupling parameter
    const double h = kPi / n;
    const auto rw = log_weights(n);

    std::vector<Eigen::Vector2d> normal(static_cast<std::size_t>(m));
    std::vector<double> speed(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < normal.size(); ++j) {
        normal[j] = {curve.d1[j].y(), -curve.d1[j].x()};
        speed[j] = curve.d1[j].norm();
    }

    Eigen::MatrixXcd a(m, m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        for (int i = 0; i < m; ++i) {
            const auto si = static_cast<std::size_t>(i);
            cdouble a1;
            cdouble a2;
            if (i == j) {
                const double l2 = normal[si].dot(curve.d2[si]) / (2.0 * kPi * speed[si] * speed[si]);
                const double m1 = -speed[si] / (2.0 * kPi);
                const cdouble m2 =
                    (0.5 * kI - std::numbers::egamma / kPi - std::log(0.5 * k * speed[si]) / kPi) * speed[si];
                a1 = -kI * eta * m1;
                a2 = l2 - kI * eta * m2;
            } else {
                const Eigen::Vector2d diff = curve.point[si] - curve.point[sj];
                const double r = diff.norm();
                const auto hk = specfun::cyl_hankel1_all(1, k * r);
                const double nd = normal[sj].dot(diff);
                const double ds = curve.t[si] - curve.t[sj];
                const double lg = std::log(4.0 * std::sin(0.5 * ds) * std::sin(0.5 * ds));
                const cdouble l = 0.5 * kI * k * nd * hk[1] / r;
                const double l1 = -k / (2.0 * kPi) * nd * hk[1].real() / r;
                const cdouble mm = 0.5 * kI * hk[0] * speed[sj];
                const double m1 = -hk[0].real() * speed[sj] / (2.0 * kPi);
                a1 = l1 - kI * eta * m1;
                a2 = (l - l1 * lg) - kI * eta * (mm - m1 * lg);
            }
            const int d = ((i - j) % m + m) % m;
            a(i, j) = (i == j ? 1.0 : 0.0) + rw[static_cast<std::size_t>(d)] * a1 + h * a2;
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-12)) {
        throw SolveError("nystrom_farfield: boundary system ill-conditioned, condition estimate " +
                         std::to_string(1.0 / rcond));
    }

    const auto nd = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXcd rhs(m, nd);
    for (Eigen::Index q = 0; q < nd; ++q) {
        const auto& d = rule.nodes[static_cast<std::size_t>(q)];
        for (int i = 0; i < m; ++i) {
            const auto& x = curve.point[static_cast<std::size_t>(i)];
            const double phase = k * (x.x() * d.x() + x.y() * d.y());
            rhs(i, q) = -2.0 * cdouble(std::cos(phase), std::sin(phase));
        }
    }
    const Eigen::MatrixXcd density = lu.solve(rhs);

    // u_inf(xhat) = -i h sum_m (k n_m . xhat + eta |x'_m|) e^{-ik xhat . x_m} psi_m
    Eigen::MatrixXcd farop(nd, m);
    for (int q = 0; q < m; ++q) {
        const auto sq = static_cast<std::size_t>(q);
        for (Eigen::Index i = 0; i < nd; ++i) {
            const auto& xh = rule.nodes[static_cast<std::size_t>(i)];
            const double phase = -k * (xh.x() * curve.point[sq].x() + xh.y() * curve.point[sq].y());
            const double amp = k * (normal[sq].x() * xh.x() + normal[sq].y() * xh.y()) + eta * speed[sq];
            farop(i, q) = -kI * h * amp * cdouble(std::cos(phase), std::sin(phase));
        }
    }

    FarFieldKernel kernel;
    kernel.rule = rule;
    kernel.wavenumber = k;
    kernel.dimension = 2;
    kernel.values = farop * density;
    return kernel;
}

}  // namespace ffspec
