#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ffspec/errors.hpp"
#include "ffspec/phaseless.hpp"

using namespace ffspec;

namespace {

constexpr double kPi = std::numbers::pi;

ScattererSpec sphere(Condition c, double k = 1.0, double r = 1.0) {
    ScattererSpec s;
    s.shape = Sphere{r};
    s.condition = c;
    s.wavenumber = k;
    return s;
}

ScattererSpec kite(double k) {
    ScattererSpec s;
    s.dimension = 2;
    s.shape = Curve{"kite", 1.0, 128};
    s.wavenumber = k;
    return s;
}

cdouble polar1(double a) { return {std::cos(a), std::sin(a)}; }

/// Kernel on a 4-node circle rule with prescribed values.
FarFieldKernel small_kernel(const Eigen::MatrixXcd& values) {
    FarFieldKernel k;
    k.rule = build_s1_rule(static_cast<int>(values.rows()));
    k.values = values;
    k.dimension = 2;
    return k;
}

/// min over phase and conjugation of max |a - e^{i phi} b| / max |b|.
double up_to_phase_and_conjugation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    double best = INFINITY;
    for (int conj = 0; conj < 2; ++conj) {
        const Eigen::MatrixXcd c = conj ? b.conjugate().eval() : b;
        Eigen::Index i0 = 0, j0 = 0;
        c.cwiseAbs().maxCoeff(&i0, &j0);
        const cdouble p = a(i0, j0) / c(i0, j0);
        best = std::min(best, relative_max_error(a, (p / std::abs(p)) * c));
    }
    return best;
}

}  // namespace

TEST_CASE("synth_dataset") {
    const auto rule = build_s2_rule(4, 8);
    const auto kernel = farfield_kernel(sphere(Dirichlet{}), rule);
    const auto data = synth_dataset(kernel, PairScheme::full());
    const auto n = rule.size();
    CHECK(data.pairs.size() == n * (n + 1) / 2);
    for (std::size_t j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < 32; ++i) {
            CHECK(data.superposition(i, data.pair_column(j, j)) ==
                  doctest::Approx(2.0 * data.r(i, static_cast<Eigen::Index>(j))).epsilon(1e-15));
        }
    }
    for (std::size_t p = 0; p < data.pairs.size(); ++p) {
        const auto [j, l] = data.pairs[p];
        CHECK(data.pair_column(j, l) == static_cast<Eigen::Index>(p));
        CHECK(data.pair_column(l, j) == static_cast<Eigen::Index>(p));
        for (Eigen::Index i = 0; i < 32; ++i) {
            const double rj = data.r(i, static_cast<Eigen::Index>(j));
            const double rl = data.r(i, static_cast<Eigen::Index>(l));
            const double m = data.superposition(i, static_cast<Eigen::Index>(p));
            CHECK(m >= std::abs(rj - rl) - 1e-14);
            CHECK(m <= rj + rl + 1e-14);
        }
    }
    FarFieldKernel zero = kernel;
    zero.values.setZero();
    const auto z = synth_dataset(zero, PairScheme::full());
    CHECK(z.r.isZero(0.0));
    CHECK(z.superposition.isZero(0.0));

    const auto fixed = synth_dataset(kernel, PairScheme::fixed(5));
    CHECK(fixed.pairs.size() == n);
    CHECK(fixed.pair_column(7, 5) == 7);
    CHECK(fixed.pair_column(5, 9) == 9);
    CHECK_THROWS_AS(fixed.pair_column(7, 8), DomainError);
    CHECK_THROWS_AS(synth_dataset(kernel, PairScheme::fixed(n)), DomainError);
}

TEST_CASE("translation invariance of r, not of the superposition moduli") {
    const auto rule = build_s2_rule(6, 12);
    const auto kernel = farfield_kernel(sphere(Dirichlet{}), rule);
    const auto shifted = shift_kernel(kernel, {0.1, 0.0, 0.0});
    const auto cmp = compare_datasets(synth_dataset(kernel, PairScheme::full()), synth_dataset(shifted, PairScheme::full()));
    CHECK(cmp.max_r_diff <= 1e-12);
    CHECK(cmp.max_superposition_diff > 1e-3);
}

TEST_CASE("compare_datasets on specs") {
    const auto rule = build_s2_rule(6, 12);
    const auto a = sphere(Dirichlet{});
    auto same = compare_datasets(a, a, rule, PairScheme::fixed(0));
    CHECK(same.max_r_diff == 0.0);
    CHECK(same.max_superposition_diff == 0.0);
    auto b = a;
    b.offset = {0.1, 0.0, 0.0};
    const auto moved = compare_datasets(a, b, rule, PairScheme::fixed(0));
    CHECK(moved.max_r_diff <= 1e-12);
    CHECK(moved.max_superposition_diff > 1e-3);
    CHECK(compare_datasets(a, sphere(Dirichlet{}, 1.0, 1.1), rule, PairScheme::fixed(0)).max_r_diff > 1e-3);
    CHECK_THROWS_AS(compare_datasets(a, sphere(Dirichlet{}, 2.0), rule, PairScheme::fixed(0)), DomainError);
}

TEST_CASE("cross terms") {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
    v(0, 0) = 1.0;
    v(0, 1) = cdouble(0.0, 1.0);
    const auto data = synth_dataset(small_kernel(v), PairScheme::full());
    const auto c = cross_terms(data);
    CHECK(std::abs(c(0, data.pair_column(0, 1))) < 1e-15);
    CHECK(c(0, data.pair_column(0, 0)) == doctest::Approx(1.0));

    const auto kernel = farfield_kernel(sphere(Impedance{1.0}), build_s2_rule(4, 8));
    const auto d2 = synth_dataset(kernel, PairScheme::full());
    const auto c2 = cross_terms(d2);
    double worst = 0.0;
    for (std::size_t p = 0; p < d2.pairs.size(); ++p) {
        const auto [j, l] = d2.pairs[p];
        for (Eigen::Index i = 0; i < 32; ++i) {
            const double exact =
                (kernel.values(i, static_cast<Eigen::Index>(j)) * std::conj(kernel.values(i, static_cast<Eigen::Index>(l)))).real();
            worst = std::max(worst, std::abs(c2(i, static_cast<Eigen::Index>(p)) - exact));
        }
    }
    CHECK(worst <= 1e-12);

    auto broken = d2;
    broken.superposition(3, 5) += 0.5;
    CHECK_THROWS_AS(cross_terms(broken), InconsistentDataError);
}

TEST_CASE("row phase retrieval") {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
    v(0, 2) = cdouble(-0.3, 0.4);
    v(1, 0) = 1.0;
    v(1, 1) = polar1(kPi / 3);
    v(1, 2) = polar1(-kPi / 2);
    const auto data = synth_dataset(small_kernel(v), PairScheme::full());
    const auto c = cross_terms(data);

    const auto single = row_phase_retrieval(data, c, 0);
    CHECK(single.values(2).imag() == 0.0);
    CHECK(single.values(2).real() == doctest::Approx(0.5));

    const auto row = row_phase_retrieval(data, c, 1);
    CHECK_FALSE(row.ambiguous);
    CHECK(up_to_phase_and_conjugation(row.values.transpose(), v.row(1)) < 1e-14);

    const auto empty = row_phase_retrieval(data, c, 3);
    CHECK(empty.zero);
    CHECK(empty.values.isZero(0.0));

    const auto kernel = farfield_kernel(sphere(Dirichlet{}), build_s2_rule(8, 16));
    const auto d2 = synth_dataset(kernel, PairScheme::full());
    const auto c2 = cross_terms(d2);
    for (std::size_t i : {0u, 17u, 64u, 127u}) {
        const auto r = row_phase_retrieval(d2, c2, i);
        CHECK(up_to_phase_and_conjugation(r.values.transpose(), kernel.values.row(static_cast<Eigen::Index>(i))) <= 1e-8);
    }
    CHECK_THROWS_AS(row_phase_retrieval(synth_dataset(kernel, PairScheme::fixed(0)), c2, 0), DomainError);
}

TEST_CASE("a row with nearly collinear phases is ambiguous") {
    // No entry has |sin delta| >= 0.1 against the reference, so the relative
    // sign of the two small phase offsets is not determined.
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(4, 4);
    v(0, 0) = 1.0;
    v(0, 1) = 0.9 * polar1(0.05);
    v(0, 2) = 0.8 * polar1(-0.03);
    const auto data = synth_dataset(small_kernel(v), PairScheme::full());
    const auto row = row_phase_retrieval(data, cross_terms(data), 0);
    CHECK(row.ambiguous);
}

TEST_CASE("reciprocity alignment") {
    for (const auto& [spec, rule, tol] :
         {std::tuple{sphere(Dirichlet{}), build_s2_rule(8, 16), 1e-7}, std::tuple{kite(1.0), build_s1_rule(64), 1e-5}}) {
        const auto kernel = farfield_kernel(spec, rule);
        const auto data = synth_dataset(kernel, PairScheme::full());
        const auto c = cross_terms(data);
        std::vector<RowRetrieval> rows;
        for (std::size_t i = 0; i < rule.size(); ++i) rows.push_back(row_phase_retrieval(data, c, i));
        const auto aligned = reciprocity_align(rows, rule);
        CHECK(up_to_phase_and_conjugation(aligned.values, kernel.values) <= tol);
        CHECK(aligned.zero_rows == 0);
    }

    // Constant row phases on a reciprocal kernel: nothing to do.
    const auto rule = build_s2_rule(4, 8);
    const auto kernel = farfield_kernel(sphere(Impedance{1.0}), rule);
    std::vector<RowRetrieval> rows(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) rows[i].values = kernel.values.row(static_cast<Eigen::Index>(i)).transpose();
    CHECK(up_to_phase_and_conjugation(reciprocity_align(rows, rule).values, kernel.values) < 1e-13);
}

TEST_CASE("disconnected link graph") {
    // Only diagonal entries: row i links to its antipodal row alone.
    const auto rule = build_s1_rule(8);
    std::vector<RowRetrieval> rows(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rows[i].values = Eigen::VectorXcd::Zero(8);
        rows[i].values(static_cast<Eigen::Index>(i)) = 1.0;
    }
    CHECK_THROWS_AS(reciprocity_align(rows, rule), AlignmentError);
}

TEST_CASE("spectral disambiguation") {
    const auto rule = build_s2_rule(8, 16);
    const auto truth = farfield_kernel(sphere(Dirichlet{}), rule);
    auto rotated = truth;
    rotated.values *= polar1(0.7);
    const auto r = spectral_disambiguation(rotated, ScattererClass::SoundSoft);
    CHECK(r.branch == Branch::Direct);
    CHECK(std::abs(r.global_phase - 0.7) <= 1e-6);
    CHECK(relative_max_error(r.kernel.values, truth.values) <= 1e-7);

    const auto imp = farfield_kernel(sphere(Impedance{1.0}), rule);
    auto conj = imp;
    conj.values = imp.values.conjugate();
    const auto rc = spectral_disambiguation(conj, ScattererClass::Impedance);
    CHECK(rc.branch == Branch::Conjugate);
    CHECK(relative_max_error(rc.kernel.values, imp.values) <= 1e-7);

    auto zero = truth;
    zero.values.setZero();
    const auto rz = spectral_disambiguation(zero, ScattererClass::SoundSoft);
    CHECK(rz.branch == Branch::Direct);
    CHECK(rz.global_phase == 0.0);
    CHECK(rz.kernel.values.isZero(0.0));
}

TEST_CASE("a sound-soft impostor reproduces impedance data") {
    // -conj(K) has the same moduli and superposition moduli as K, and its
    // spectrum is the reflection of the impedance circle spectrum; this is
    // why the sound-soft hint cannot be refuted from the data alone.
    const auto rule = build_s2_rule(8, 16);
    const auto imp = farfield_kernel(sphere(Impedance{1.0}), rule);
    auto impostor = imp;
    impostor.values = -imp.values.conjugate();
    const auto cmp = compare_datasets(synth_dataset(imp, PairScheme::full()), synth_dataset(impostor, PairScheme::full()));
    CHECK(cmp.max_r_diff <= 1e-15);
    CHECK(cmp.max_superposition_diff <= 1e-14);
}

TEST_CASE("end-to-end retrieval") {
    const auto rule = build_s2_rule(8, 16);
    for (const Condition& c : {Condition{Dirichlet{}}, Condition{Impedance{1.0}}, Condition{Penetrable{2.0}}}) {
        const auto spec = sphere(c);
        const auto truth = farfield_kernel(spec, rule);
        const auto data = synth_dataset(truth, PairScheme::full());
        const auto r = retrieve(data, spec.scatterer_class());
        CHECK(relative_max_error(r.kernel.values, truth.values) <= 1e-6);
        CHECK(r.data_residual <= 1e-8);
        // Every member of the ambiguity group retrieves to the same kernel.
        auto other = truth;
        other.values = (polar1(2.1) * truth.values.conjugate()).eval();
        const auto r2 = retrieve(synth_dataset(other, PairScheme::full()), spec.scatterer_class());
        CHECK(relative_max_error(r2.kernel.values, r.kernel.values) <= 1e-10);
    }

    const auto k2 = farfield_kernel(kite(1.0), build_s1_rule(64));
    const auto rk = retrieve(synth_dataset(k2, PairScheme::full()), ScattererClass::SoundSoft);
    CHECK(relative_max_error(rk.kernel.values, k2.values) <= 1e-4);

    auto zero = k2;
    zero.values.setZero();
    const auto rz = retrieve(synth_dataset(zero, PairScheme::full()), ScattererClass::SoundSoft);
    CHECK(rz.kernel.values.isZero(0.0));
    CHECK(rz.branch == Branch::Direct);
    CHECK(rz.global_phase == 0.0);

    CHECK_THROWS_AS(retrieve(synth_dataset(k2, PairScheme::fixed(0)), ScattererClass::SoundSoft), DomainError);
}

TEST_CASE("noise smoke test") {
    const auto rule = build_s2_rule(8, 16);
    const auto truth = farfield_kernel(sphere(Dirichlet{}), rule);
    const auto data = synth_dataset(truth, PairScheme::full());
    const auto clean = retrieve(data, ScattererClass::SoundSoft);
    const auto noisy = perturb_dataset(data, 1e-8, 42);
    CHECK(noisy.r == perturb_dataset(data, 1e-8, 42).r);
    CHECK(((noisy.r - data.r).cwiseAbs().array() <= 1e-8 * data.r.array() + 1e-300).all());
    RetrievalOptions o;
    o.band.lo = 1e-5;
    const auto r = retrieve(noisy, ScattererClass::SoundSoft, o);
    CHECK(relative_max_error(r.kernel.values, clean.kernel.values) <= 1e-5);
}
