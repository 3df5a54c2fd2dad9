#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ffspec/ffop.hpp"
#include "ffspec/forward.hpp"

namespace ffspec {

/// Which superposition pairs (d_j, d_l) were measured.
struct PairScheme {
    enum class Kind { FullPairs, FixedReference };
    Kind kind = Kind::FullPairs;
    std::size_t reference = 0;  // j0 for FixedReference

    static PairScheme full() { return {}; }
    static PairScheme fixed(std::size_t j0) { return {Kind::FixedReference, j0}; }
    std::string name() const { return kind == Kind::FullPairs ? "full-pairs" : "fixed-reference"; }
};

/// Phaseless far-field data on a direction rule.
///
/// r(i, j) = |u_inf(xhat_i, d_j)|; column p of superposition holds
/// |u_inf(xhat_i, d_j) + u_inf(xhat_i, d_l)| for (j, l) = pairs[p].
/// FullPairs stores every j <= l (N (N + 1) / 2 columns), FixedReference
/// the N pairs (j, j0).
struct PhaselessDataset {
    Eigen::MatrixXd r;
    Eigen::MatrixXd superposition;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    PairScheme scheme;
    DirectionRule rule;
    double wavenumber = 1.0;
    int dimension = 3;

    std::size_t size() const { return static_cast<std::size_t>(r.rows()); }
    /// Column of the pair {j, l}; throws DomainError if the scheme lacks it.
    Eigen::Index pair_column(std::size_t j, std::size_t l) const;
};

std::vector<std::pair<std::size_t, std::size_t>> scheme_pairs(const PairScheme& scheme, std::size_t n);

PhaselessDataset synth_dataset(const FarFieldKernel& kernel, const PairScheme& scheme);

/// Multiply every modulus by (1 + level * xi), xi uniform in [-1, 1], seeded.
PhaselessDataset perturb_dataset(const PhaselessDataset& data, double level, std::uint64_t seed);

struct RetrievalOptions {
    /// Entries with r < activity_floor * max(r) are exact zeros.
    double activity_floor = 1e-10;
    /// Minimum |sin delta_b| for the second reference of a row.
    double second_reference_min_sin = 0.1;
    /// Allowed excess of |C| over r_j r_l, relative to r_j^2 + r_l^2.
    double consistency_tolerance = 1e-6;
    /// Worst reciprocity link residual accepted after alignment (relative to max r).
    double link_tolerance = 1e-4;
    /// Accepted circle-fit residual relative to the circle radius.
    double circle_fit_tolerance = 1e-3;
    TailBand band{};
    /// A branch matches the class when sign * Re(tail) >= tail_acceptance.
    double tail_acceptance = 0.5;
};

/// C(i, p) = (M^2 - r_j^2 - r_l^2) / 2 = Re{u(xhat_i, d_j) conj(u(xhat_i, d_l))}.
/// Throws InconsistentDataError when |C| exceeds r_j r_l beyond tolerance.
Eigen::MatrixXd cross_terms(const PhaselessDataset& data, const RetrievalOptions& options = {});

struct RowRetrieval {
    Eigen::VectorXcd values;
    /// No usable second reference: the sign branch is undetermined and both
    /// values and conj(values) are consistent with the data.
    bool ambiguous = false;
    bool zero = false;
};

/// Row i of the kernel up to one phase and one conjugation.
RowRetrieval row_phase_retrieval(const PhaselessDataset& data, const Eigen::MatrixXd& cross, std::size_t row,
                                 const RetrievalOptions& options = {});

struct AlignmentResult {
    Eigen::MatrixXcd values;
    double worst_link_residual = 0.0;
    std::size_t links_checked = 0;
    std::size_t zero_rows = 0;
    std::size_t ambiguous_rows = 0;
};

/// Per-row phases and conjugations making values(i, j) = values(ant(j), ant(i)).
/// The result is the kernel up to one global phase and one global conjugation.
/// Throws AlignmentError when the link graph is disconnected or a link fails.
AlignmentResult reciprocity_align(const std::vector<RowRetrieval>& rows, const DirectionRule& rule,
                                  const RetrievalOptions& options = {});

enum class Branch { Direct, Conjugate };
std::string to_string(Branch b);

struct BranchDiagnostics {
    Branch branch = Branch::Direct;
    double alpha = 0.0;
    double circle_fit_residual = 0.0;
    double min_imag = 0.0;
    cdouble tail_estimate{0.0, 0.0};
    int tail_band_count = 0;
    bool circle_ok = false;
    bool tail_ok = false;
    std::string note;
    bool accepted() const { return circle_ok && tail_ok; }
};

struct RetrievedKernel {
    FarFieldKernel kernel;
    Branch branch = Branch::Direct;
    double global_phase = 0.0;  // alpha in [0, 2 pi)
    ScattererClass class_hint = ScattererClass::SoundSoft;
    double reciprocity_residual = 0.0;
    double circle_fit_residual = 0.0;
    cdouble tail_estimate{0.0, 0.0};
    double link_residual = 0.0;
    /// max |synth(result) - input| / max r over r and superposition moduli.
    double data_residual = 0.0;
    std::size_t zero_rows = 0;
    std::size_t ambiguous_rows = 0;
    std::vector<BranchDiagnostics> branches;
};

/// Pick the conjugation branch and rotation whose spectrum lies on the
/// theoretical circle and whose normalised eigenvalues tend to the sign of
/// the declared class. Throws DisambiguationError unless exactly one branch
/// is accepted.
RetrievedKernel spectral_disambiguation(const FarFieldKernel& candidate, ScattererClass class_hint,
                                        const RetrievalOptions& options = {});

/// cross_terms -> row_phase_retrieval -> reciprocity_align -> spectral_disambiguation.
/// Requires FullPairs data.
RetrievedKernel retrieve(const PhaselessDataset& data, ScattererClass class_hint, const RetrievalOptions& options = {});

struct DatasetComparison {
    double max_r_diff = 0.0;
    double max_superposition_diff = 0.0;
};

DatasetComparison compare_datasets(const PhaselessDataset& a, const PhaselessDataset& b);
DatasetComparison compare_datasets(const ScattererSpec& a, const ScattererSpec& b, const DirectionRule& rule,
                                   const PairScheme& scheme);

}  // namespace ffspec
