#include <algorithm>
#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ffspec/errors.hpp"
#include "ffspec/ffop.hpp"
#include "ffspec/forward.hpp"

using namespace ffspec;

namespace {

constexpr double kPi = std::numbers::pi;

ScattererSpec sphere(Condition c, double k) {
    ScattererSpec s;
    s.shape = Sphere{1.0};
    s.condition = c;
    s.wavenumber = k;
    return s;
}

FarFieldMatrix sphere_matrix(Condition c, double k, int np, int na) {
    return assemble(farfield_kernel(sphere(c, k), build_s2_rule(np, na)));
}

}  // namespace

TEST_CASE("coupling constants and circle") {
    CHECK(scattering_coupling(2.0, 3) == cdouble(0.0, 2.0 / (2.0 * kPi)));
    CHECK(std::abs(circle_center(2.0, 3) - cdouble(0.0, 2.0 * kPi / 2.0)) < 1e-15);
    CHECK(circle_radius(2.0, 3) == doctest::Approx(kPi));
    CHECK(std::abs(scattering_coupling(1.0, 2) - cdouble(0.0, 1.0 / (4.0 * kPi))) < 1e-16);
    CHECK(std::abs(circle_center(1.0, 2) - cdouble(0.0, 4.0 * kPi)) < 1e-13);
}

TEST_CASE("assemble and reconstruct") {
    FarFieldKernel zero;
    zero.rule = build_s2_rule(4, 8);
    zero.values = Eigen::MatrixXcd::Zero(32, 32);
    CHECK(assemble(zero).entries.isZero(0.0));

    const auto kernel = farfield_kernel(sphere(Dirichlet{}, 1.0), build_s2_rule(8, 16));
    const auto m = assemble(kernel);
    const auto& w = kernel.rule.weights;
    CHECK(std::abs(m.entries(3, 7) - std::sqrt(w[3]) * kernel.values(3, 7) * std::sqrt(w[7])) < 1e-16);
    CHECK(relative_max_error(kernel_from_matrix(m).values, kernel.values) < 1e-15);
}

TEST_CASE("eigendecompose basics") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d.diagonal() << cdouble(1, 0), cdouble(0, -3), cdouble(0.5, 0.5), cdouble(2, 0);
    const auto s = eigendecompose(d);
    REQUIRE(s.eigenvalues.size() == 4);
    CHECK(std::abs(s.eigenvalues(0) - cdouble(0, -3)) < 1e-15);
    CHECK(std::abs(s.eigenvalues(1) - cdouble(2, 0)) < 1e-15);
    CHECK(std::abs(s.eigenvalues(3) - cdouble(0.5, 0.5)) < 1e-15);

    const auto m = sphere_matrix(Impedance{1.0}, 1.0, 8, 16);
    const auto sv = eigendecompose(m, true);
    REQUIRE(sv.eigenvectors.has_value());
    const double norm = m.entries.norm();
    for (Eigen::Index n = 0; n < 10; ++n) {
        const Eigen::VectorXcd v = sv.eigenvectors->col(n * 7);
        CHECK((m.entries * v - sv.eigenvalues(n * 7) * v).norm() <= 1e-9 * norm * v.norm());
    }
    for (Eigen::Index n = 1; n < sv.eigenvalues.size(); ++n) {
        CHECK(std::abs(sv.eigenvalues(n)) <= std::abs(sv.eigenvalues(n - 1)));
    }
}

TEST_CASE("Funk-Hecke eigenvalues at low degree") {
    const auto spec = sphere(Dirichlet{}, 1.0);
    const auto s = eigendecompose(assemble(farfield_kernel(spec, build_s2_rule(8, 16))));
    Eigen::Index pos = 0;
    for (int l = 0; l <= 4; ++l) {
        const cdouble lam = 4.0 * kPi * mie_coeff(spec, l) / cdouble(0.0, 1.0);
        for (int m = 0; m < 2 * l + 1; ++m, ++pos) {
            CHECK(std::abs(s.eigenvalues(pos) - lam) <= 1e-8 * std::abs(lam));
        }
    }
}

TEST_CASE("disk spectrum by Fourier diagonalisation") {
    ScattererSpec disk;
    disk.dimension = 2;
    disk.shape = Disk{1.0};
    disk.wavenumber = 1.0;
    const auto s = eigendecompose(assemble(farfield_kernel(disk, build_s1_rule(64))));
    std::vector<cdouble> expected;
    for (int n = -32; n < 32; ++n) expected.push_back(kDiskFarFieldConstant * 2.0 * kPi * mie_coeff(disk, std::abs(n)));
    std::stable_sort(expected.begin(), expected.end(), [](cdouble a, cdouble b) { return std::abs(a) > std::abs(b); });
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) worst = std::max(worst, std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - expected[i]));
    CHECK(worst <= 1e-10);
}

TEST_CASE("normality, relation and unitarity") {
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(8, 8);
    CHECK(normality_residual(zero) == 0.0);
    CHECK(relation_residual(zero, 1.0, 3) == 0.0);
    CHECK(unitarity_residual(zero, 1.0, 3) == 0.0);

    for (const Condition& c : {Condition{Dirichlet{}}, Condition{Impedance{1.0}}, Condition{Penetrable{2.0}}}) {
        const auto m = sphere_matrix(c, 1.0, 10, 20);
        CHECK(normality_residual(m.entries) <= 1e-8);
        CHECK(relation_residual(m.entries, 1.0, 3) <= 1e-8);
        CHECK(unitarity_residual(m.entries, 1.0, 3) <= 1e-8);
    }
    // A perturbed operator is detected.
    auto m = sphere_matrix(Dirichlet{}, 1.0, 8, 16);
    m.entries(0, 1) += 1e-3;
    CHECK(relation_residual(m.entries, 1.0, 3) > 1e-5);

    // Shifting conjugates by a diagonal unitary.
    const auto rule = build_s2_rule(8, 16);
    const auto base = farfield_kernel(sphere(Dirichlet{}, 1.0), rule);
    const auto shifted = shift_kernel(base, {0.3, 0.1, -0.2});
    CHECK(std::abs(relation_residual(assemble(shifted).entries, 1.0, 3) - relation_residual(assemble(base).entries, 1.0, 3)) <= 1e-10);
    const auto s0 = eigendecompose(assemble(base));
    const auto s1 = eigendecompose(assemble(shifted));
    const double top = std::abs(s0.eigenvalues(0));
    for (Eigen::Index i = 0; i < 40; ++i) CHECK(std::abs(s1.eigenvalues(i) - s0.eigenvalues(i)) <= 1e-9 * top);
}

TEST_CASE("circle residuals and floor") {
    Spectrum s;
    s.eigenvalues.resize(3);
    s.eigenvalues << cdouble(0.0, 4.0 * kPi), cdouble(2.0 * kPi, 2.0 * kPi), cdouble(0.0, 0.0);
    CHECK(eigenvalue_floor(s) == doctest::Approx(4.0 * kPi * 1e-8));
    const auto r = circle_residuals(s, 1.0, 3);
    REQUIRE(r.size() == 2);
    CHECK(r[0] < 1e-14);
    CHECK(r[1] < 1e-14);

    const auto m = sphere_matrix(Dirichlet{}, 1.0, 8, 16);
    double worst = 0.0;
    for (double v : circle_residuals(eigendecompose(m), 1.0, 3)) worst = std::max(worst, v);
    CHECK(worst <= 1e-7);
}

TEST_CASE("tail limits follow the scatterer class") {
    struct Case {
        Condition c;
        double sign;
    };
    for (const auto& [c, sign] : {Case{Dirichlet{}, -1.0}, Case{Impedance{1.0}, 1.0}, Case{Penetrable{2.0}, 1.0},
                                  Case{Penetrable{0.5}, -1.0}}) {
        const auto spec = sphere(c, 2.0);
        const auto m = assemble(farfield_kernel(spec, build_s2_rule(16, 32)));
        const auto s = eigendecompose(m);
        const auto tail = tail_limit(s, TailBand{}, limit_sign(spec.scatterer_class()));
        CHECK(tail.band_count > 0);
        CHECK(sign * tail.estimate.real() >= 0.99);
        CHECK(std::abs(tail.estimate) <= 1.0 + 1e-15);
        const auto d = diagnose(m, s, limit_sign(spec.scatterer_class()));
        CHECK(d.wrong_sign_count == tail.wrong_sign_count);
        CHECK(d.min_imag_above_floor >= -1e-8);
    }
    Spectrum lonely;
    lonely.eigenvalues = Eigen::VectorXcd::Constant(3, cdouble(1.0, 0.0));
    CHECK_THROWS_AS(tail_limit(lonely, TailBand{}, 1), Error);
}

TEST_CASE("number of resolved eigenvalues grows with refinement") {
    auto count = [](int np, int na) {
        const auto s = eigendecompose(sphere_matrix(Dirichlet{}, 3.0, np, na));
        const double top = std::abs(s.eigenvalues(0));
        return (s.eigenvalues.cwiseAbs().array() >= 1e-6 * top).count();
    };
    CHECK(count(4, 8) < count(8, 16));
    CHECK(count(8, 16) <= count(12, 24));
}
