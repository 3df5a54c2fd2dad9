#pragma once

#include <complex>

#include <Eigen/Core>

#include "ffspec/geometry.hpp"
#include "ffspec/scatterer.hpp"
#include "ffspec/specfun.hpp"

namespace ffspec {

using cdouble = std::complex<double>;

/// Far-field pattern sampled on a direction rule: values(i, j) = u_inf(xhat_i, d_j).
///
/// 3D convention: u^s ~ e^{ikr}/r u_inf. 2D convention:
/// u^s ~ e^{i pi/4}/sqrt(8 pi k) e^{ikr}/sqrt(r) u_inf, so the far field of
/// the fundamental solution is exactly e^{-ik xhat.y}.
struct FarFieldKernel {
    DirectionRule rule;
    Eigen::MatrixXcd values;
    double wavenumber = 1.0;
    int dimension = 3;

    std::size_t size() const { return rule.size(); }
};

/// Far-field constant of the 2D Mie series, u_inf = c sum_n b_n e^{in(theta_x - theta_d)}.
/// Frozen from the large-argument limit of H_n^(1) (tests/oracles/generate_oracles.py)
/// and cross-checked against the Nystrom disk solve in test_forward.
inline const cdouble kDiskFarFieldConstant{0.0, -4.0};

/// max_order = ceil(kR + 8 (kR)^{1/3} + 12), tail 1e-14.
specfun::SeriesTruncation default_truncation(double ka);

/// Partial-wave coefficient a_l (3D) or b_n (2D) of a centred sphere/disk.
cdouble mie_coeff(const ScattererSpec& spec, int order);

/// All coefficients 0..truncation.max_order; throws TruncationError when the
/// last coefficient is above tail_tolerance * max |a_l|.
std::vector<cdouble> mie_coefficients(const ScattererSpec& spec, const specfun::SeriesTruncation& truncation);

/// Sampled far-field kernel. Sphere/Disk go through the Mie series, Curve
/// through the Nystrom solver; a non-zero offset is applied by shift_kernel.
FarFieldKernel farfield_kernel(const ScattererSpec& spec, const DirectionRule& rule,
                               const specfun::SeriesTruncation& truncation);
FarFieldKernel farfield_kernel(const ScattererSpec& spec, const DirectionRule& rule);

/// Sound-soft curve via the combined double/single layer equation with
/// coupling parameter k and logarithmic kernel splitting.
/// The curve carries its own sampling (2n points, t_j = pi j / n).
FarFieldKernel nystrom_farfield(const BoundaryCurve2D& curve, double k, const DirectionRule& rule);
/// Builds the named curve with n_boundary points first.
FarFieldKernel nystrom_farfield(const Curve& shape, double k, const DirectionRule& rule, int n_boundary);

/// Multiply entry (i, j) by e^{ik l.(d_j - xhat_i)} (kernel of the translated scatterer).
FarFieldKernel shift_kernel(const FarFieldKernel& kernel, const Eigen::Vector3d& shift);

/// max_{i,j} |K(i,j) - K(antipode(j), antipode(i))|.
double reciprocity_residual(const FarFieldKernel& kernel);

/// max |A - B| / max |B| over entries.
double relative_max_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

BoundaryCurve2D make_curve(const Curve& shape, int n_boundary);

}  // namespace ffspec
