#include "ffspec/phaseless.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ffspec/errors.hpp"

namespace ffspec {

namespace {

constexpr double kPi = std::numbers::pi;

cdouble unit(cdouble z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cdouble(1.0, 0.0);
}

cdouble polar1(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

// ---------------------------------------------------------------------------
// Datasets

std::vector<std::pair<std::size_t, std::size_t>> scheme_pairs(const PairScheme& scheme, std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (scheme.kind == PairScheme::Kind::FullPairs) {
        pairs.reserve(n * (n + 1) / 2);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t l = j; l < n; ++l) pairs.emplace_back(j, l);
        }
    } else {
        if (scheme.reference >= n) throw DomainError("fixed reference index out of range");
        pairs.reserve(n);
        for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(j, scheme.reference);
    }
    return pairs;
}

Eigen::Index PhaselessDataset::pair_column(std::size_t j, std::size_t l) const {
    const std::size_t n = size();
    if (j >= n || l >= n) throw DomainError("pair index out of range");
    if (scheme.kind == PairScheme::Kind::FullPairs) {
        const std::size_t a = std::min(j, l);
        const std::size_t b = std::max(j, l);
        return static_cast<Eigen::Index>(a * n - a * (a - 1) / 2 + (b - a));
    }
    if (l == scheme.reference) return static_cast<Eigen::Index>(j);
    if (j == scheme.reference) return static_cast<Eigen::Index>(l);
    throw DomainError("pair (" + std::to_string(j) + ", " + std::to_string(l) + ") not in fixed-reference scheme");
}

PhaselessDataset synth_dataset(const FarFieldKernel& kernel, const PairScheme& scheme) {
    const std::size_t n = kernel.size();
    PhaselessDataset data;
    data.scheme = scheme;
    data.pairs = scheme_pairs(scheme, n);
    data.rule = kernel.rule;
    data.wavenumber = kernel.wavenumber;
    data.dimension = kernel.dimension;
    data.r = kernel.values.cwiseAbs();
    const auto rows = static_cast<Eigen::Index>(n);
    data.superposition.resize(rows, static_cast<Eigen::Index>(data.pairs.size()));
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < static_cast<Eigen::Index>(data.pairs.size()); ++p) {
        const auto [j, l] = data.pairs[static_cast<std::size_t>(p)];
        const auto jj = static_cast<Eigen::Index>(j);
        const auto ll = static_cast<Eigen::Index>(l);
        for (Eigen::Index i = 0; i < rows; ++i) {
            data.superposition(i, p) = std::abs(kernel.values(i, jj) + kernel.values(i, ll));
        }
    }
    return data;
}

PhaselessDataset perturb_dataset(const PhaselessDataset& data, double level, std::uint64_t seed) {
    PhaselessDataset out = data;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    for (Eigen::Index j = 0; j < out.r.cols(); ++j) {
        for (Eigen::Index i = 0; i < out.r.rows(); ++i) out.r(i, j) *= 1.0 + level * xi(gen);
    }
    for (Eigen::Index j = 0; j < out.superposition.cols(); ++j) {
        for (Eigen::Index i = 0; i < out.superposition.rows(); ++i) out.superposition(i, j) *= 1.0 + level * xi(gen);
    }
    return out;
}

Eigen::MatrixXd cross_terms(const PhaselessDataset& data, const RetrievalOptions& options) {
    const auto rows = data.r.rows();
    const double rmax = data.r.size() > 0 ? data.r.maxCoeff() : 0.0;
    const double abs_slack = 1e-14 * rmax * rmax;
    Eigen::MatrixXd c(rows, data.superposition.cols());
    double worst = 0.0;
    Eigen::Index worst_i = 0;
    Eigen::Index worst_p = 0;
    for (Eigen::Index p = 0; p < c.cols(); ++p) {
        const auto [j, l] = data.pairs[static_cast<std::size_t>(p)];
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double rj = data.r(i, static_cast<Eigen::Index>(j));
            const double rl = data.r(i, static_cast<Eigen::Index>(l));
            const double m = data.superposition(i, p);
            const double v = 0.5 * (m * m - rj * rj - rl * rl);
            c(i, p) = v;
            const double excess = std::abs(v) - rj * rl - options.consistency_tolerance * (rj * rj + rl * rl) - abs_slack;
            if (excess > worst) {
                worst = excess;
                worst_i = i;
                worst_p = p;
            }
        }
    }
    if (worst > 0.0) {
        const auto [j, l] = data.pairs[static_cast<std::size_t>(worst_p)];
        std::ostringstream os;
        os << "cross_terms: superposition modulus violates the triangle bound at xhat " << worst_i << ", pair (" << j
           << ", " << l << ") by " << worst;
        throw InconsistentDataError(os.str());
    }
    return c;
}

// ---------------------------------------------------------------------------
// Per-row phase retrieval

RowRetrieval row_phase_retrieval(const PhaselessDataset& data, const Eigen::MatrixXd& cross, std::size_t row,
                                 const RetrievalOptions& options) {
    if (data.scheme.kind != PairScheme::Kind::FullPairs) {
        throw DomainError("row_phase_retrieval needs full-pairs data");
    }
    const std::size_t n = data.size();
    if (row >= n) throw DomainError("row index out of range");
    const auto i = static_cast<Eigen::Index>(row);
    const double floor = options.activity_floor * (data.r.size() > 0 ? data.r.maxCoeff() : 0.0);

    RowRetrieval out;
    out.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < n; ++j) {
        if (data.r(i, static_cast<Eigen::Index>(j)) >= floor && data.r(i, static_cast<Eigen::Index>(j)) > 0.0) {
            active.push_back(j);
        }
    }
    if (active.empty()) {
        out.zero = true;
        return out;
    }
    // Reference a: largest modulus, phase 0.
    std::stable_sort(active.begin(), active.end(), [&](std::size_t x, std::size_t y) {
        return data.r(i, static_cast<Eigen::Index>(x)) > data.r(i, static_cast<Eigen::Index>(y));
    });
    const std::size_t a = active.front();
    const double ra = data.r(i, static_cast<Eigen::Index>(a));
    auto cosine = [&](std::size_t j, std::size_t ref) {
        const double rj = data.r(i, static_cast<Eigen::Index>(j));
        const double rr = data.r(i, static_cast<Eigen::Index>(ref));
        return std::clamp(cross(i, data.pair_column(j, ref)) / (rj * rr), -1.0, 1.0);
    };

    // Second reference b: strongest entry whose phase offset from a is not 0 or pi.
    std::size_t b = n;
    double cb = 1.0;
    double sb = 0.0;
    for (std::size_t idx = 1; idx < active.size(); ++idx) {
        const std::size_t cand = active[idx];
        const double c = cosine(cand, a);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        if (s >= options.second_reference_min_sin) {
            b = cand;
            cb = c;
            sb = s;
            break;
        }
    }

    if (b == n) {
        out.ambiguous = active.size() > 1;
        for (std::size_t j : active) {
            const double rj = data.r(i, static_cast<Eigen::Index>(j));
            out.values(static_cast<Eigen::Index>(j)) = rj * polar1(j == a ? 0.0 : std::acos(cosine(j, a)));
        }
        return out;
    }

    // cos(delta_j) from a; sin(delta_j) from cos(delta_j - delta_b) with delta_b > 0.
    const double rb = data.r(i, static_cast<Eigen::Index>(b));
    for (std::size_t j : active) {
        const double rj = data.r(i, static_cast<Eigen::Index>(j));
        if (j == a) {
            out.values(static_cast<Eigen::Index>(j)) = ra;
            continue;
        }
        const double cj = cosine(j, a);
        const double cjb = cross(i, data.pair_column(j, b)) / (rj * rb);
        const double sj = (cjb - cj * cb) / sb;
        out.values(static_cast<Eigen::Index>(j)) = rj * polar1(std::atan2(sj, cj));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reciprocity alignment

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
};

struct AlignedWorld {
    std::vector<Eigen::VectorXcd> rows;
    double worst = 0.0;
    std::size_t links = 0;
};

Eigen::VectorXcd oriented(const Eigen::VectorXcd& v, bool conjugate, cdouble phase) {
    return conjugate ? Eigen::VectorXcd(phase * v.conjugate()) : Eigen::VectorXcd(phase * v);
}

}  // namespace

AlignmentResult reciprocity_align(const std::vector<RowRetrieval>& rows, const DirectionRule& rule,
                                  const RetrievalOptions& options) {
    const std::size_t n = rows.size();
    if (n != rule.size()) throw DomainError("reciprocity_align: row count does not match rule");
    const auto& ant = rule.antipode;
    AlignmentResult result;
    result.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    double vmax = 0.0;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].zero) {
            ++result.zero_rows;
            continue;
        }
        if (rows[i].ambiguous) ++result.ambiguous_rows;
        active.push_back(i);
        vmax = std::max(vmax, rows[i].values.cwiseAbs().maxCoeff());
    }
    if (active.empty()) return result;
    const double floor = options.activity_floor * vmax;

    auto entry = [&](std::size_t i, std::size_t j) { return rows[i].values(static_cast<Eigen::Index>(j)); };
    // Row i and row p share one reciprocal pair: (i, ant p) <-> (p, ant i).
    auto weight = [&](std::size_t i, std::size_t p) {
        return std::min(std::abs(entry(i, ant[p])), std::abs(entry(p, ant[i])));
    };

    // Connectivity of the link graph.
    UnionFind uf(n);
    for (std::size_t x = 0; x < active.size(); ++x) {
        for (std::size_t y = x + 1; y < active.size(); ++y) {
            if (weight(active[x], active[y]) >= floor) uf.unite(active[x], active[y]);
        }
    }
    std::vector<std::size_t> roots;
    for (std::size_t i : active) {
        const std::size_t r = uf.find(i);
        if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    }
    if (roots.size() > 1) {
        std::ostringstream os;
        os << "reciprocity_align: link graph has " << roots.size() << " components:";
        for (std::size_t r : roots) {
            std::size_t count = 0;
            for (std::size_t i : active) count += uf.find(i) == r ? 1 : 0;
            os << " [first row " << r << ", " << count << " rows]";
        }
        throw AlignmentError(os.str());
    }

    // Root: the row holding the strongest entry; seed: its strongest link.
    std::size_t root = active.front();
    for (std::size_t i : active) {
        if (rows[i].values.cwiseAbs().maxCoeff() > rows[root].values.cwiseAbs().maxCoeff()) root = i;
    }
    if (active.size() == 1) {
        result.values.row(static_cast<Eigen::Index>(root)) = rows[root].values.transpose();
        return result;
    }
    std::size_t seed = n;
    for (std::size_t p : active) {
        if (p != root && (seed == n || weight(root, p) > weight(root, seed))) seed = p;
    }

    // A single link cannot fix the seed's conjugation: propagate both choices
    // and keep the one with the smaller worst link residual.
    auto propagate = [&](bool seed_conj) {
        AlignedWorld world;
        world.rows.assign(n, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)));
        std::vector<char> done(n, 0);
        std::vector<double> best1(n, 0.0);
        std::vector<double> best2(n, 0.0);
        auto mark = [&](std::size_t i) {
            done[i] = 1;
            for (std::size_t q : active) {
                if (done[q]) continue;
                const double w = weight(i, q);
                if (w < floor) continue;
                if (w > best1[q]) {
                    best2[q] = best1[q];
                    best1[q] = w;
                } else if (w > best2[q]) {
                    best2[q] = w;
                }
            }
        };
        world.rows[root] = rows[root].values;
        mark(root);
        {
            const cdouble x = world.rows[root](static_cast<Eigen::Index>(ant[seed]));
            const cdouble y0 = entry(seed, ant[root]);
            const cdouble y = seed_conj ? std::conj(y0) : y0;
            world.rows[seed] = oriented(rows[seed].values, seed_conj, unit(x * std::conj(y)));
            mark(seed);
        }
        for (std::size_t step = 2; step < active.size(); ++step) {
            std::size_t q = n;
            for (std::size_t cand : active) {
                if (done[cand]) continue;
                if (q == n || best2[cand] > best2[q] || (best2[cand] == best2[q] && best1[cand] > best1[q])) q = cand;
            }
            // Weighted least squares for phase, both conjugation choices.
            double best_res = 0.0;
            bool best_conj = false;
            cdouble best_phase{1.0, 0.0};
            for (int c = 0; c < 2; ++c) {
                const bool conj = c == 1;
                cdouble z{0.0, 0.0};
                for (std::size_t i : active) {
                    if (!done[i] || weight(i, q) < floor) continue;
                    const cdouble x = world.rows[i](static_cast<Eigen::Index>(ant[q]));
                    const cdouble y0 = entry(q, ant[i]);
                    z += x * std::conj(conj ? std::conj(y0) : y0);
                }
                const cdouble phase = unit(z);
                double res = 0.0;
                for (std::size_t i : active) {
                    if (!done[i] || weight(i, q) < floor) continue;
                    const cdouble x = world.rows[i](static_cast<Eigen::Index>(ant[q]));
                    const cdouble y0 = entry(q, ant[i]);
                    res += std::norm(x - phase * (conj ? std::conj(y0) : y0));
                }
                if (c == 0 || res < best_res) {
                    best_res = res;
                    best_conj = conj;
                    best_phase = phase;
                }
            }
            world.rows[q] = oriented(rows[q].values, best_conj, best_phase);
            mark(q);
        }
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t i = active[x];
                const std::size_t p = active[y];
                if (weight(i, p) < floor) continue;
                const double r = std::abs(world.rows[i](static_cast<Eigen::Index>(ant[p])) -
                                          world.rows[p](static_cast<Eigen::Index>(ant[i])));
                world.worst = std::max(world.worst, r / vmax);
                ++world.links;
            }
        }
        return world;
    };

    AlignedWorld world = propagate(false);
    if (!rows[seed].ambiguous) {
        AlignedWorld other = propagate(true);
        if (other.worst < world.worst) world = std::move(other);
    }
    result.worst_link_residual = world.worst;
    result.links_checked = world.links;
    if (world.worst > options.link_tolerance) {
        std::ostringstream os;
        os << "reciprocity_align: worst link residual " << world.worst << " exceeds tolerance "
           << options.link_tolerance;
        throw AlignmentError(os.str());
    }
    for (std::size_t i : active) result.values.row(static_cast<Eigen::Index>(i)) = world.rows[i].transpose();
    return result;
}

// ---------------------------------------------------------------------------
// Spectral disambiguation

std::string to_string(Branch b) { return b == Branch::Direct ? "direct" : "conjugate"; }

namespace {

double circle_objective(const std::vector<cdouble>& ev, cdouble center, double radius, double alpha) {
    const cdouble rot = polar1(-alpha);
    double s = 0.0;
    for (const auto& l : ev) {
        const double d = std::abs(rot * l - center) - radius;
        s += d * d;
    }
    return s;
}

// Rotation alpha in [0, 2 pi) minimising the circle objective: dense grid,
// then golden-section refinement around the best grid point.
double fit_rotation(const std::vector<cdouble>& ev, cdouble center, double radius) {
    constexpr int grid = 2048;
    const double step = 2.0 * kPi / grid;
    int best = 0;
    double best_val = circle_objective(ev, center, radius, 0.0);
    for (int g = 1; g < grid; ++g) {
        const double v = circle_objective(ev, center, radius, g * step);
        if (v < best_val) {
            best_val = v;
            best = g;
        }
    }
    double lo = (best - 1) * step;
    double hi = (best + 1) * step;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = circle_objective(ev, center, radius, x1);
    double f2 = circle_objective(ev, center, radius, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = circle_objective(ev, center, radius, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = circle_objective(ev, center, radius, x2);
        }
    }
    double alpha = std::fmod(0.5 * (lo + hi), 2.0 * kPi);
    if (alpha < 0.0) alpha += 2.0 * kPi;
    return alpha;
}

BranchDiagnostics evaluate_branch(const FarFieldKernel& kernel, Branch branch, ScattererClass hint,
                                  const RetrievalOptions& options) {
    BranchDiagnostics d;
    d.branch = branch;
    const auto matrix = assemble(kernel);
    const auto spectrum = eigendecompose(matrix);
    const double floor = eigenvalue_floor(spectrum);
    std::vector<cdouble> above;
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        if (std::abs(spectrum.eigenvalues(i)) >= floor) above.push_back(spectrum.eigenvalues(i));
    }
    const cdouble center = circle_center(kernel.wavenumber, kernel.dimension);
    const double radius = circle_radius(kernel.wavenumber, kernel.dimension);
    if (above.empty()) {
        d.note = "no eigenvalues above floor";
        return d;
    }
    d.alpha = fit_rotation(above, center, radius);
    const cdouble rot = polar1(-d.alpha);
    Spectrum rotated;
    rotated.eigenvalues = rot * spectrum.eigenvalues;
    d.min_imag = 0.0;
    for (std::size_t i = 0; i < above.size(); ++i) {
        const cdouble m = rot * above[i];
        d.circle_fit_residual = std::max(d.circle_fit_residual, std::abs(std::abs(m - center) - radius) / radius);
        d.min_imag = i == 0 ? m.imag() : std::min(d.min_imag, m.imag());
    }
    d.circle_ok = d.circle_fit_residual <= options.circle_fit_tolerance &&
                  d.min_imag >= -options.circle_fit_tolerance * radius;
    try {
        const auto tail = tail_limit(rotated, options.band, limit_sign(hint));
        d.tail_estimate = tail.estimate;
        d.tail_band_count = tail.band_count;
        d.tail_ok = limit_sign(hint) * tail.estimate.real() >= options.tail_acceptance;
    } catch (const Error& e) {
        d.note = e.what();
        d.tail_ok = false;
    }
    return d;
}

std::string describe(const BranchDiagnostics& d) {
    std::ostringstream os;
    os << to_string(d.branch) << ": alpha=" << d.alpha << " circle_fit=" << d.circle_fit_residual
       << " min_imag=" << d.min_imag << " tail=(" << d.tail_estimate.real() << "," << d.tail_estimate.imag() << ")"
       << " circle_ok=" << d.circle_ok << " tail_ok=" << d.tail_ok;
    if (!d.note.empty()) os << " [" << d.note << "]";
    return os.str();
}

}  // namespace

RetrievedKernel spectral_disambiguation(const FarFieldKernel& candidate, ScattererClass class_hint,
                                        const RetrievalOptions& options) {
    RetrievedKernel out;
    out.class_hint = class_hint;
    out.kernel = candidate;
    if (candidate.values.cwiseAbs().maxCoeff() == 0.0) return out;  // canonical (direct, 0)

    FarFieldKernel conj = candidate;
    conj.values = candidate.values.conjugate();
    out.branches.push_back(evaluate_branch(candidate, Branch::Direct, class_hint, options));
    out.branches.push_back(evaluate_branch(conj, Branch::Conjugate, class_hint, options));
    const bool direct_ok = out.branches[0].accepted();
    const bool conj_ok = out.branches[1].accepted();
    if (direct_ok == conj_ok) {
        throw DisambiguationError(std::string("spectral_disambiguation: ") +
                                  (direct_ok ? "both branches" : "neither branch") + " consistent with class '" +
                                  to_string(class_hint) + "'; " + describe(out.branches[0]) + "; " +
                                  describe(out.branches[1]));
    }
    const auto& chosen = direct_ok ? out.branches[0] : out.branches[1];
    const FarFieldKernel& base = direct_ok ? candidate : conj;
    out.branch = chosen.branch;
    out.global_phase = chosen.alpha;
    out.kernel = base;
    out.kernel.values = polar1(-chosen.alpha) * base.values;
    out.circle_fit_residual = chosen.circle_fit_residual;
    out.tail_estimate = chosen.tail_estimate;
    out.reciprocity_residual = reciprocity_residual(out.kernel);
    return out;
}

RetrievedKernel retrieve(const PhaselessDataset& data, ScattererClass class_hint, const RetrievalOptions& options) {
    if (data.scheme.kind != PairScheme::Kind::FullPairs) {
        throw DomainError("retrieve needs full-pairs data; fixed-reference data is accepted by compare_datasets only");
    }
    const std::size_t n = data.size();
    const auto cross = cross_terms(data, options);
    std::vector<RowRetrieval> rows(n);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) rows[i] = row_phase_retrieval(data, cross, i, options);
    const auto aligned = reciprocity_align(rows, data.rule, options);

    FarFieldKernel candidate;
    candidate.rule = data.rule;
    candidate.wavenumber = data.wavenumber;
    candidate.dimension = data.dimension;
    candidate.values = aligned.values;
    auto out = spectral_disambiguation(candidate, class_hint, options);
    out.link_residual = aligned.worst_link_residual;
    out.zero_rows = aligned.zero_rows;
    out.ambiguous_rows = aligned.ambiguous_rows;

    const auto replay = synth_dataset(out.kernel, data.scheme);
    const auto cmp = compare_datasets(replay, data);
    const double rmax = data.r.size() > 0 ? data.r.maxCoeff() : 0.0;
    const double worst = std::max(cmp.max_r_diff, cmp.max_superposition_diff);
    out.data_residual = rmax > 0.0 ? worst / rmax : worst;
    return out;
}

DatasetComparison compare_datasets(const PhaselessDataset& a, const PhaselessDataset& b) {
    if (a.r.rows() != b.r.rows() || a.superposition.cols() != b.superposition.cols() ||
        a.scheme.kind != b.scheme.kind || a.scheme.reference != b.scheme.reference) {
        throw DomainError("compare_datasets: datasets have different shapes or pair schemes");
    }
    DatasetComparison c;
    c.max_r_diff = (a.r - b.r).cwiseAbs().maxCoeff();
    c.max_superposition_diff = (a.superposition - b.superposition).cwiseAbs().maxCoeff();
    return c;
}

DatasetComparison compare_datasets(const ScattererSpec& a, const ScattererSpec& b, const DirectionRule& rule,
                                   const PairScheme& scheme) {
    if (a.dimension != b.dimension) throw DomainError("compare_datasets: dimensions differ");
    if (a.wavenumber != b.wavenumber) throw DomainError("compare_datasets: wavenumbers differ");
    const auto da = synth_dataset(farfield_kernel(a, rule), scheme);
    const auto db = synth_dataset(farfield_kernel(b, rule), scheme);
    return compare_datasets(da, db);
}

}  // namespace ffspec
