#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ffspec/errors.hpp"
#include "ffspec/forward.hpp"

using namespace ffspec;

namespace {

constexpr double kPi = std::numbers::pi;

ScattererSpec sphere(Condition c, double k, double r = 1.0) {
    ScattererSpec s;
    s.dimension = 3;
    s.shape = Sphere{r};
    s.condition = c;
    s.wavenumber = k;
    return s;
}

ScattererSpec disk(Condition c, double k, double r = 1.0) {
    ScattererSpec s;
    s.dimension = 2;
    s.shape = Disk{r};
    s.condition = c;
    s.wavenumber = k;
    return s;
}

ScattererSpec kite(double k, int points = 128) {
    ScattererSpec s;
    s.dimension = 2;
    s.shape = Curve{"kite", 1.0, points};
    s.condition = Dirichlet{};
    s.wavenumber = k;
    return s;
}

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("Mie coefficients against frozen oracles") {
    // tests/oracles/generate_oracles.py
    CHECK(rel(mie_coeff(sphere(Impedance{1.0}, 1.0), 1), {-0.2919265817264288065, 0.4546487134128408477}) < 1e-12);
    CHECK(rel(mie_coeff(sphere(Penetrable{2.0}, 1.0), 0), {-0.11830779521920131309, 0.32297222916153772619}) < 1e-12);
    CHECK(rel(mie_coeff(sphere(Penetrable{0.5}, 1.0), 2), {-7.6782382680466974831e-8, -0.00027709633123686911193}) <
          1e-10);
    CHECK(rel(mie_coeff(disk(Dirichlet{}, 1.0), 1), {-0.24086996805746678105, -0.42761153696487389514}) < 1e-12);
}

TEST_CASE("interior Dirichlet eigenvalue kills a_0") {
    CHECK(std::abs(mie_coeff(sphere(Dirichlet{}, kPi), 0)) < 1e-15);
}

TEST_CASE("non-absorbing coefficients are unimodular after 1 + 2a") {
    for (double k : {0.5, 1.0, 2.0, kPi, 5.0}) {
        for (const Condition& c : {Condition{Dirichlet{}}, Condition{Impedance{1.0}}, Condition{Impedance{-0.7}},
                                   Condition{Penetrable{2.0}}, Condition{Penetrable{0.5}}}) {
            for (int l = 0; l <= 30; ++l) {
                CHECK(std::abs(std::abs(1.0 + 2.0 * mie_coeff(sphere(c, k), l)) - 1.0) < 1e-10);
                CHECK(std::abs(std::abs(1.0 + 2.0 * mie_coeff(disk(c, k), l)) - 1.0) < 1e-10);
            }
        }
    }
}

TEST_CASE("Dirichlet sphere forward value at xhat = d") {
    const auto rule = build_s2_rule(8, 16);
    const auto kernel = farfield_kernel(sphere(Dirichlet{}, 1.0), rule);
    const cdouble oracle(-1.1687530668115678269, 0.8456094624052967664);
    for (Eigen::Index i = 0; i < kernel.values.rows(); ++i) CHECK(rel(kernel.values(i, i), oracle) < 1e-12);
}

TEST_CASE("Mie kernels depend on xhat.d only and are reciprocal") {
    const auto rule = build_s2_rule(6, 12);
    for (const Condition& c : {Condition{Dirichlet{}}, Condition{Impedance{1.0}}, Condition{Penetrable{2.0}}}) {
        const auto kernel = farfield_kernel(sphere(c, 2.0), rule);
        const double scale = kernel.values.cwiseAbs().maxCoeff();
        CHECK(reciprocity_residual(kernel) < 1e-13 * scale);
        const auto n = static_cast<Eigen::Index>(rule.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                // (xhat_j, xhat_i) has the same cosine as (xhat_i, xhat_j)
                CHECK(std::abs(kernel.values(i, j) - kernel.values(j, i)) < 1e-13 * scale);
            }
            const auto a = static_cast<Eigen::Index>(rule.antipode[static_cast<std::size_t>(i)]);
            CHECK(std::abs(kernel.values(i, a) - kernel.values(0, static_cast<Eigen::Index>(rule.antipode[0]))) <
                  1e-13 * scale);
        }
    }
}

TEST_CASE("tiny scatterer gives a vanishing kernel") {
    const auto kernel = farfield_kernel(sphere(Dirichlet{}, 1.0, 1e-9), build_s2_rule(4, 8));
    CHECK(kernel.values.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("truncation failure") {
    specfun::SeriesTruncation t;
    t.max_order = 3;
    CHECK_THROWS_AS(mie_coefficients(sphere(Dirichlet{}, 5.0), t), TruncationError);
    CHECK_THROWS_AS(farfield_kernel(sphere(Dirichlet{}, 5.0), build_s2_rule(4, 8), t), TruncationError);
    CHECK(default_truncation(1.0).max_order == 21);
}

TEST_CASE("spec validation") {
    auto bad = kite(1.0);
    bad.condition = Impedance{1.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(sphere(Penetrable{1.005}, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(sphere(Dirichlet{}, 1.0, -1.0).validate(), DomainError);
    CHECK_THROWS_AS(sphere(Dirichlet{}, 0.0).validate(), DomainError);
    auto planar = disk(Dirichlet{}, 1.0);
    planar.offset = {0.0, 0.0, 0.1};
    CHECK_THROWS_AS(planar.validate(), DomainError);
    CHECK_THROWS_AS(mie_coeff(kite(1.0), 0), DomainError);
    CHECK_THROWS_AS(farfield_kernel(sphere(Dirichlet{}, 1.0), build_s1_rule(8)), DomainError);
    CHECK(sphere(Penetrable{0.5}, 1.0).scatterer_class() == ScattererClass::MediumNegative);
    CHECK(limit_sign(ScattererClass::SoundSoft) == -1);
    CHECK(limit_sign(ScattererClass::Impedance) == 1);
    CHECK(limit_sign(ScattererClass::MediumPositive) == 1);
    CHECK(limit_sign(ScattererClass::MediumNegative) == -1);
}

TEST_CASE("disk Mie kernel against the Nystrom solve") {
    const auto rule = build_s1_rule(64);
    const auto mie = farfield_kernel(disk(Dirichlet{}, 1.0), rule);
    const auto nys = nystrom_farfield(Curve{"circle", 1.0, 64}, 1.0, rule, 64);
    CHECK(relative_max_error(nys.values, mie.values) <= 1e-6);
    // The 2D far-field constant of the Mie series is what makes these agree.
    CHECK(kDiskFarFieldConstant == cdouble(0.0, -4.0));
}

TEST_CASE("kite Nystrom: reciprocity and self-convergence") {
    const auto rule = build_s1_rule(64);
    const auto coarse = farfield_kernel(kite(1.0, 64), rule);
    const auto fine = farfield_kernel(kite(1.0, 128), rule);
    CHECK(reciprocity_residual(fine) <= 1e-6);
    CHECK(relative_max_error(coarse.values, fine.values) <= 1e-8);
    CHECK(fine.values.cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("translated curve equals the shifted kernel") {
    const auto rule = build_s1_rule(32);
    const Eigen::Vector2d l(0.3, -0.2);
    const auto moved = nystrom_farfield(kite_curve(128).translated(l), 2.0, rule);
    const auto shifted = shift_kernel(nystrom_farfield(kite_curve(128), 2.0, rule), {l.x(), l.y(), 0.0});
    CHECK(relative_max_error(moved.values, shifted.values) <= 1e-6);
}

TEST_CASE("shift_kernel") {
    const auto rule = build_s2_rule(6, 12);
    const auto base = farfield_kernel(sphere(Dirichlet{}, 1.0), rule);
    CHECK(shift_kernel(base, Eigen::Vector3d::Zero()).values == base.values);
    const Eigen::Vector3d l(0.2, -0.4, 0.1);
    const auto shifted = shift_kernel(base, l);
    CHECK((shifted.values.cwiseAbs() - base.values.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    for (Eigen::Index i = 0; i < base.values.rows(); ++i) CHECK(shifted.values(i, i) == base.values(i, i));
    CHECK((shifted.values - base.values).cwiseAbs().maxCoeff() > 1e-3);
    auto spec = sphere(Dirichlet{}, 1.0);
    spec.offset = l;
    CHECK(relative_max_error(farfield_kernel(spec, rule).values, shifted.values) == 0.0);
}
