#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ffspec/forward.hpp"
#include "ffspec/scatterer.hpp"

namespace ffspec {

/// Weighted discretisation W^{1/2} K W^{1/2} of the far-field operator.
struct FarFieldMatrix {
    Eigen::MatrixXcd entries;
    DirectionRule rule;
    double wavenumber = 1.0;
    int dimension = 3;
};

/// Eigenvalues sorted by decreasing modulus; vectors column-aligned when requested.
struct Spectrum {
    Eigen::VectorXcd eigenvalues;
    std::optional<Eigen::MatrixXcd> eigenvectors;
};

struct TailBand {
    double lo = 1e-8;
    double hi = 1e-2;
};

struct TailResult {
    cdouble estimate{0.0, 0.0};
    int band_count = 0;
    int wrong_sign_count = 0;
};

struct SpectralDiagnostics {
    double normality_residual = 0.0;
    double relation_residual = 0.0;
    double unitarity_residual = 0.0;
    std::vector<double> circle_residuals;
    cdouble tail_estimate{0.0, 0.0};
    int tail_band_count = 0;
    int wrong_sign_count = 0;
    cdouble circle_center{0.0, 0.0};
    double circle_radius = 0.0;
    /// Smallest Im(lambda) among eigenvalues above the floor.
    double min_imag_above_floor = 0.0;
};

/// tau with S = I + tau F unitary: ik/(2 pi) in 3D, i/(4 pi) in 2D.
cdouble scattering_coupling(double k, int dimension);
/// Every non-zero eigenvalue lies on |z - center| = radius, center = -1/tau.
cdouble circle_center(double k, int dimension);
double circle_radius(double k, int dimension);

/// Eigenvalues with |lambda| >= max(1e-8, 1e-8 |lambda_max|) count as non-zero.
double eigenvalue_floor(const Spectrum& spectrum);

FarFieldMatrix assemble(const FarFieldKernel& kernel);
/// Inverse of assemble: K = W^{-1/2} F W^{-1/2}.
FarFieldKernel kernel_from_matrix(const FarFieldMatrix& matrix);

/// Dense complex eigensolver (LAPACK zgeev). Throws SolveError on non-convergence.
Spectrum eigendecompose(const FarFieldMatrix& matrix, bool want_vectors = false);
Spectrum eigendecompose(const Eigen::MatrixXcd& matrix, bool want_vectors = false);

/// ||F F* - F* F||_F / ||F||_F^2 (0 for the zero matrix).
double normality_residual(const Eigen::MatrixXcd& f);
/// ||F + (conj(tau)/tau) F* + conj(tau) F* F||_F / ||F||_F; in 3D this is
/// ||F - F* - (ik/2pi) F* F||_F / ||F||_F.
double relation_residual(const Eigen::MatrixXcd& f, double k, int dimension);
/// ||(I + tau F)^* (I + tau F) - I||_F.
double unitarity_residual(const Eigen::MatrixXcd& f, double k, int dimension);

/// | |lambda - center| - radius | for each eigenvalue above the floor, in
/// spectrum order.
std::vector<double> circle_residuals(const Spectrum& spectrum, double k, int dimension);

/// Mean of lambda/|lambda| over lo <= |lambda|/|lambda_max| <= hi and the
/// number of eigenvalues above the floor whose real part has the sign that
/// is forbidden asymptotically (expected_sign = limit_sign(class)).
/// Throws Error when the band is empty.
TailResult tail_limit(const Spectrum& spectrum, TailBand band, int expected_sign);

SpectralDiagnostics diagnose(const FarFieldMatrix& matrix, const Spectrum& spectrum, int expected_sign,
                             TailBand band = {});

}  // namespace ffspec
