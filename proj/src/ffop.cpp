#include "ffspec/ffop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <lapacke.h>

#include "ffspec/errors.hpp"

namespace ffspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

cdouble scattering_coupling(double k, int dimension) {
    if (dimension == 3) return {0.0, k / (2.0 * kPi)};
    // Fixed by unitarity of I + tau F on the disk Mie oracle under the 2D
    // far-field convention of FarFieldKernel: lambda_n = -8 pi i b_n.
    if (dimension == 2) return {0.0, 1.0 / (4.0 * kPi)};
    throw DomainError("dimension must be 2 or 3");
}

cdouble circle_center(double k, int dimension) { return -1.0 / scattering_coupling(k, dimension); }

double circle_radius(double k, int dimension) { return 1.0 / std::abs(scattering_coupling(k, dimension)); }

double eigenvalue_floor(const Spectrum& spectrum) {
    const double top = spectrum.eigenvalues.size() > 0 ? std::abs(spectrum.eigenvalues(0)) : 0.0;
    return std::max(1e-8, 1e-8 * top);
}

FarFieldMatrix assemble(const FarFieldKernel& kernel) {
    const auto n = static_cast<Eigen::Index>(kernel.size());
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = kernel.rule.weights[static_cast<std::size_t>(i)];
        if (!(w > 0.0)) throw DomainError("assemble: rule weights must be positive");
        sw(i) = std::sqrt(w);
    }
    FarFieldMatrix m;
    m.entries = sw.asDiagonal() * kernel.values * sw.asDiagonal();
    m.rule = kernel.rule;
    m.wavenumber = kernel.wavenumber;
    m.dimension = kernel.dimension;
    return m;
}

FarFieldKernel kernel_from_matrix(const FarFieldMatrix& matrix) {
    const auto n = matrix.entries.rows();
    Eigen::VectorXd isw(n);
    for (Eigen::Index i = 0; i < n; ++i) isw(i) = 1.0 / std::sqrt(matrix.rule.weights[static_cast<std::size_t>(i)]);
    FarFieldKernel k;
    k.values = isw.asDiagonal() * matrix.entries * isw.asDiagonal();
    k.rule = matrix.rule;
    k.wavenumber = matrix.wavenumber;
    k.dimension = matrix.dimension;
    return k;
}

Spectrum eigendecompose(const FarFieldMatrix& matrix, bool want_vectors) {
    return eigendecompose(matrix.entries, want_vectors);
}

Spectrum eigendecompose(const Eigen::MatrixXcd& matrix, bool want_vectors) {
    if (matrix.rows() != matrix.cols()) throw DomainError("eigendecompose: matrix must be square");
    if (!matrix.allFinite()) throw DomainError("eigendecompose: non-finite entries");
    const auto n = static_cast<lapack_int>(matrix.rows());
    Spectrum out;
    if (n == 0) {
        out.eigenvalues.resize(0);
        return out;
    }
    Eigen::MatrixXcd a = matrix;  // zgeev overwrites its input
    Eigen::VectorXcd w(n);
    Eigen::MatrixXcd vr;
    if (want_vectors) vr.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        want_vectors ? reinterpret_cast<lapack_complex_double*>(vr.data()) : nullptr, want_vectors ? n : 1);
    if (info > 0) {
        throw SolveError("eigendecompose: QR iteration failed to converge; " + std::to_string(info) +
                         " eigenvalues not computed");
    }
    if (info < 0) throw SolveError("eigendecompose: zgeev argument " + std::to_string(-info) + " invalid");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return std::abs(w(x)) > std::abs(w(y)); });
    out.eigenvalues.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues(i) = w(order[static_cast<std::size_t>(i)]);
    if (want_vectors) {
        Eigen::MatrixXcd v(n, n);
        for (Eigen::Index i = 0; i < n; ++i) v.col(i) = vr.col(order[static_cast<std::size_t>(i)]);
        out.eigenvectors = std::move(v);
    }
    return out;
}

double normality_residual(const Eigen::MatrixXcd& f) {
    const double norm = f.norm();
    if (norm == 0.0) return 0.0;
    Eigen::MatrixXcd ffa;
    Eigen::MatrixXcd faf;
    ffa.noalias() = f * f.adjoint();
    faf.noalias() = f.adjoint() * f;
    return (ffa - faf).norm() / (norm * norm);
}

double relation_residual(const Eigen::MatrixXcd& f, double k, int dimension) {
    const double norm = f.norm();
    if (norm == 0.0) return 0.0;
    const cdouble tau = scattering_coupling(k, dimension);
    Eigen::MatrixXcd r;
    r.noalias() = std::conj(tau) * (f.adjoint() * f);
    r += f + (std::conj(tau) / tau) * f.adjoint();
    return r.norm() / norm;
}

double unitarity_residual(const Eigen::MatrixXcd& f, double k, int dimension) {
    // (I + tau F)^* (I + tau F) - I = conj(tau) F^* + tau F + |tau|^2 F^* F
    const cdouble tau = scattering_coupling(k, dimension);
    Eigen::MatrixXcd r;
    r.noalias() = std::norm(tau) * (f.adjoint() * f);
    r += tau * f + std::conj(tau) * f.adjoint();
    return r.norm();
}

std::vector<double> circle_residuals(const Spectrum& spectrum, double k, int dimension) {
    const cdouble c = circle_center(k, dimension);
    const double rho = circle_radius(k, dimension);
    const double floor = eigenvalue_floor(spectrum);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const cdouble l = spectrum.eigenvalues(i);
        if (std::abs(l) < floor) continue;
        out.push_back(std::abs(std::abs(l - c) - rho));
    }
    return out;
}

TailResult tail_limit(const Spectrum& spectrum, TailBand band, int expected_sign) {
    if (!(band.lo < band.hi) || !(band.lo > 0.0)) throw DomainError("tail_limit: need 0 < lo < hi");
    if (expected_sign != 1 && expected_sign != -1) throw DomainError("tail_limit: expected_sign must be +1 or -1");
    TailResult res;
    const auto n = spectrum.eigenvalues.size();
    if (n == 0) throw Error("tail_limit: empty tail band (no eigenvalues)");
    const double top = std::abs(spectrum.eigenvalues(0));
    const double floor = eigenvalue_floor(spectrum);
    cdouble sum{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        const cdouble l = spectrum.eigenvalues(i);
        const double a = std::abs(l);
        if (a < floor || a < band.lo * top) continue;
        if (expected_sign * l.real() < 0.0) ++res.wrong_sign_count;
        if (a <= band.hi * top) {
            sum += l / a;
            ++res.band_count;
        }
    }
    if (res.band_count == 0) {
        throw Error("tail_limit: empty tail band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) + "]");
    }
    res.estimate = sum / static_cast<double>(res.band_count);
    return res;
}

SpectralDiagnostics diagnose(const FarFieldMatrix& matrix, const Spectrum& spectrum, int expected_sign,
                             TailBand band) {
    SpectralDiagnostics d;
    const double k = matrix.wavenumber;
    const Eigen::MatrixXcd& f = matrix.entries;
    const double norm = f.norm();
    if (norm > 0.0) {
        // Share the two Gram products between the three residuals.
        const cdouble tau = scattering_coupling(k, matrix.dimension);
        Eigen::MatrixXcd faf;
        Eigen::MatrixXcd ffa;
        faf.noalias() = f.adjoint() * f;
        ffa.noalias() = f * f.adjoint();
        d.normality_residual = (ffa - faf).norm() / (norm * norm);
        d.relation_residual = (f + (std::conj(tau) / tau) * f.adjoint() + std::conj(tau) * faf).norm() / norm;
        d.unitarity_residual = (tau * f + std::conj(tau) * f.adjoint() + std::norm(tau) * faf).norm();
    }
    d.circle_residuals = circle_residuals(spectrum, k, matrix.dimension);
    d.circle_center = circle_center(k, matrix.dimension);
    d.circle_radius = circle_radius(k, matrix.dimension);
    const double floor = eigenvalue_floor(spectrum);
    d.min_imag_above_floor = 0.0;
    bool any = false;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const cdouble l = spectrum.eigenvalues(i);
        if (std::abs(l) < floor) continue;
        d.min_imag_above_floor = any ? std::min(d.min_imag_above_floor, l.imag()) : l.imag();
        any = true;
    }
    const auto tail = tail_limit(spectrum, band, expected_sign);
    d.tail_estimate = tail.estimate;
    d.tail_band_count = tail.band_count;
    d.wrong_sign_count = tail.wrong_sign_count;
    return d;
}

}  // namespace ffspec
