#include "ffspec/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "ffspec/errors.hpp"
#include "ffspec/ffop.hpp"
#include "ffspec/forward.hpp"
#include "ffspec/phaseless.hpp"

namespace ffspec::scenario {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, Task>& task_names() {
    static const std::map<std::string, Task> names{{"forward", Task::Forward},
                                                    {"spectrum", Task::Spectrum},
                                                    {"translation", Task::Translation},
                                                    {"retrieve", Task::Retrieve},
                                                    {"compare", Task::Compare}};
    return names;
}

json complex_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// JSON numbers must be finite; anything else is stored as a string and
/// fails its check.
json metric(double v) {
    if (std::isfinite(v)) return v;
    return io::format_double(v);
}

// ---------------------------------------------------------------------------
// Config parsing

ScenarioConfig parse_impl(const json& j, std::vector<std::string>& errors) {
    ScenarioConfig cfg;
    cfg.source = j;
    if (!j.is_object()) {
        errors.emplace_back("config: expected a JSON object");
        return cfg;
    }
    static const std::set<std::string> known{"name",     "k",           "scatterer",    "scatterers", "rule",
                                             "truncation", "tasks",     "tolerances",   "task_options",
                                             "output_dir", "seed",      "description"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) errors.push_back(key + ": unknown field");
    }

    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
        errors.emplace_back("name: required non-empty string");
    } else {
        cfg.name = j["name"].get<std::string>();
        if (cfg.name.find_first_of("/\\") != std::string::npos) errors.emplace_back("name: must not contain path separators");
    }

    bool have_k = false;
    if (!j.contains("k") || !j["k"].is_number()) {
        errors.emplace_back("k: required number");
    } else if (!(j["k"].get<double>() > 0.0) || !std::isfinite(j["k"].get<double>())) {
        errors.emplace_back("k: must be positive and finite");
    } else {
        cfg.wavenumber = j["k"].get<double>();
        have_k = true;
    }

    json scat;
    if (j.contains("scatterer") && j.contains("scatterers")) {
        errors.emplace_back("scatterer: give either 'scatterer' or 'scatterers', not both");
    } else if (j.contains("scatterer")) {
        scat = json::array({j["scatterer"]});
    } else if (j.contains("scatterers")) {
        scat = j["scatterers"];
    }
    if (scat.is_null()) {
        errors.emplace_back("scatterers: required (one or two scatterer objects)");
    } else if (!scat.is_array() || scat.empty() || scat.size() > 2) {
        errors.emplace_back("scatterers: expected an array of one or two scatterer objects");
    } else {
        for (std::size_t s = 0; s < scat.size(); ++s) {
            try {
                cfg.scatterers.push_back(
                    io::scatterer_from_json(scat[s], have_k ? cfg.wavenumber : 1.0, "scatterers[" + std::to_string(s) + "]"));
            } catch (const ConfigError& e) {
                errors.emplace_back(e.what());
            }
        }
        if (cfg.scatterers.size() == 2 && cfg.scatterers[0].dimension != cfg.scatterers[1].dimension) {
            errors.emplace_back("scatterers: both scatterers must have the same dimension");
        }
    }

    if (!j.contains("rule")) {
        errors.emplace_back("rule: required ({n_polar, n_azimuth} or {n_circle})");
    } else {
        try {
            cfg.rule = io::rule_from_json(j["rule"]);
            if (!cfg.scatterers.empty() && cfg.rule.dimension != cfg.scatterers.front().dimension) {
                errors.emplace_back("rule: dimension " + std::to_string(cfg.rule.dimension) +
                                    " does not match the scatterer dimension " +
                                    std::to_string(cfg.scatterers.front().dimension));
            }
        } catch (const ConfigError& e) {
            errors.emplace_back(e.what());
        }
    }

    if (j.contains("truncation")) {
        const auto& t = j["truncation"];
        if (!t.is_object()) {
            errors.emplace_back("truncation: expected an object");
        } else {
            if (t.contains("max_order")) {
                if (!t["max_order"].is_number_integer() || t["max_order"].get<int>() < 0) {
                    errors.emplace_back("truncation.max_order: expected a non-negative integer");
                } else {
                    cfg.truncation.max_order = t["max_order"].get<int>();
                }
            }
            if (t.contains("tail_tolerance")) {
                if (!t["tail_tolerance"].is_number() || !(t["tail_tolerance"].get<double>() > 0.0)) {
                    errors.emplace_back("truncation.tail_tolerance: expected a positive number");
                } else {
                    cfg.truncation.tail_tolerance = t["tail_tolerance"].get<double>();
                }
            }
        }
    }

    if (!j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty()) {
        errors.emplace_back("tasks: required non-empty array");
    } else {
        for (const auto& t : j["tasks"]) {
            if (!t.is_string() || !task_names().contains(t.get<std::string>())) {
                errors.push_back("tasks: unrecognised task " + t.dump());
                continue;
            }
            cfg.tasks.push_back(task_names().at(t.get<std::string>()));
        }
        const bool compare = std::find(cfg.tasks.begin(), cfg.tasks.end(), Task::Compare) != cfg.tasks.end();
        if (compare && cfg.scatterers.size() != 2 && !scat.is_null()) {
            errors.emplace_back("scatterers: task 'compare' requires two scatterers");
        }
        if (compare && scat.is_null()) errors.emplace_back("scatterers: task 'compare' requires two scatterers");
    }

    for (const char* key : {"tolerances", "task_options"}) {
        if (!j.contains(key)) continue;
        const auto& block = j[key];
        if (!block.is_object()) {
            errors.push_back(std::string(key) + ": expected an object keyed by task name");
            continue;
        }
        for (const auto& [task, value] : block.items()) {
            if (!task_names().contains(task)) errors.push_back(std::string(key) + "." + task + ": unknown task");
            if (!value.is_object()) errors.push_back(std::string(key) + "." + task + ": expected an object");
            if (std::string(key) == "tolerances" && value.is_object()) {
                for (const auto& [check, thr] : value.items()) {
                    if (!thr.is_number()) errors.push_back("tolerances." + task + "." + check + ": expected a number");
                }
            }
        }
        (std::string(key) == "tolerances" ? cfg.tolerances : cfg.task_options) = block;
    }

    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) {
            errors.emplace_back("output_dir: expected a string");
        } else {
            cfg.output_dir = j["output_dir"].get<std::string>();
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) {
            errors.emplace_back("seed: expected an integer");
        } else {
            cfg.seed = j["seed"].get<std::int64_t>();
        }
    }
    if (j.contains("description") && !j["description"].is_string()) errors.emplace_back("description: expected a string");
    return cfg;
}

// ---------------------------------------------------------------------------
// Task context

class Context {
public:
    Context(const ScenarioConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {}

    const ScenarioConfig& cfg() const { return cfg_; }
    const fs::path& dir() const { return dir_; }
    const ScattererSpec& spec() const { return cfg_.scatterers.front(); }

    specfun::SeriesTruncation truncation_for(const ScattererSpec& s) const {
        if (cfg_.truncation.max_order > 0) return cfg_.truncation;
        if (std::holds_alternative<Curve>(s.shape)) return {};
        auto t = default_truncation(s.wavenumber * s.radius());
        t.tail_tolerance = cfg_.truncation.tail_tolerance;
        return t;
    }

    FarFieldKernel kernel_for(const ScattererSpec& s, const DirectionRule& rule) const {
        return farfield_kernel(s, rule, truncation_for(s));
    }

    const FarFieldKernel& kernel() {
        if (!kernel_) kernel_ = kernel_for(spec(), cfg_.rule);
        return *kernel_;
    }

    json options(Task t) const {
        const auto key = to_string(t);
        return cfg_.task_options.contains(key) ? cfg_.task_options[key] : json::object();
    }

    double threshold(Task t, const std::string& check, double fallback) const {
        const auto key = to_string(t);
        if (cfg_.tolerances.contains(key) && cfg_.tolerances[key].contains(check)) {
            return cfg_.tolerances[key][check].get<double>();
        }
        return fallback;
    }

    void check(TaskReport& rep, const std::string& name, double value, const std::string& cmp, double fallback) const {
        Check c;
        c.name = name;
        c.value = value;
        c.threshold = threshold(rep.task, name, fallback);
        c.comparison = cmp;
        if (cmp == "<=") {
            c.passed = value <= c.threshold;
        } else if (cmp == ">=") {
            c.passed = value >= c.threshold;
        } else {
            c.passed = value > c.threshold;
        }
        if (!std::isfinite(value)) c.passed = false;
        rep.checks.push_back(c);
    }

    std::string artifact(TaskReport& rep, const std::string& name) const {
        rep.artifacts.push_back(name);
        return (dir_ / name).string();
    }

private:
    const ScenarioConfig& cfg_;
    fs::path dir_;
    std::optional<FarFieldKernel> kernel_;
};

template <class T>
T opt(const json& o, const char* key, T fallback) {
    return o.contains(key) ? o[key].get<T>() : fallback;
}

DirectionRule refined_rule(const json& o) { return io::rule_from_json(o, "task_options.spectrum.refine"); }

// ---------------------------------------------------------------------------
// Tasks

void task_forward(Context& ctx, TaskReport& rep) {
    const auto& spec = ctx.spec();
    const auto& kernel = ctx.kernel();
    const json o = ctx.options(Task::Forward);
    const double scale = kernel.values.cwiseAbs().maxCoeff();
    rep.metrics["scatterer"] = spec.describe();
    rep.metrics["directions"] = kernel.size();
    rep.metrics["max_abs"] = metric(scale);
    const double recip = scale > 0.0 ? reciprocity_residual(kernel) / scale : 0.0;
    rep.metrics["reciprocity_residual"] = metric(recip);
    ctx.check(rep, "reciprocity_residual", recip, "<=", 1e-10);

    if (!std::holds_alternative<Curve>(spec.shape)) {
        auto trunc = ctx.truncation_for(spec);
        rep.metrics["max_order"] = trunc.max_order;
        auto finer = trunc;
        finer.max_order += opt<int>(o, "extra_orders", 10);
        const auto k2 = farfield_kernel(spec, ctx.cfg().rule, finer);
        const double conv = relative_max_error(kernel.values, k2.values);
        rep.metrics["truncation_convergence"] = metric(conv);
        ctx.check(rep, "truncation_convergence", conv, "<=", 1e-12);
    }
    if (o.contains("nystrom_points")) {
        // Same disk through the boundary-integral path.
        if (!std::holds_alternative<Disk>(spec.shape) || !std::holds_alternative<Dirichlet>(spec.condition)) {
            throw ConfigError("task_options.forward.nystrom_points needs a sound-soft disk");
        }
        const int npts = o["nystrom_points"].get<int>();
        const auto curve = circle_curve(npts, spec.radius()).translated(spec.offset.head<2>());
        const auto nys = nystrom_farfield(curve, spec.wavenumber, ctx.cfg().rule);
        const double err = relative_max_error(nys.values, kernel.values);
        rep.metrics["nystrom_points"] = npts;
        rep.metrics["nystrom_mie_error"] = metric(err);
        ctx.check(rep, "nystrom_mie_error", err, "<=", 1e-6);
    }
    if (o.contains("convergence_points")) {
        if (!std::holds_alternative<Curve>(spec.shape)) throw ConfigError("task_options.forward.convergence_points needs a curve");
        const auto pts = o["convergence_points"].get<std::vector<int>>();
        if (pts.size() != 2) throw ConfigError("task_options.forward.convergence_points: expected [coarse, fine]");
        const auto& curve = std::get<Curve>(spec.shape);
        auto coarse = nystrom_farfield(curve, spec.wavenumber, ctx.cfg().rule, pts[0]);
        auto fine = nystrom_farfield(curve, spec.wavenumber, ctx.cfg().rule, pts[1]);
        if (!spec.is_centered()) {
            coarse = shift_kernel(coarse, spec.offset);
            fine = shift_kernel(fine, spec.offset);
        }
        const double err = relative_max_error(coarse.values, fine.values);
        rep.metrics["convergence_points"] = pts;
        rep.metrics["self_convergence"] = metric(err);
        ctx.check(rep, "self_convergence", err, "<=", 1e-8);
    }

    io::write_kernel_csv(kernel, ctx.artifact(rep, "kernel.csv"));
    json meta = io::kernel_meta(kernel);
    meta["scatterer"] = io::to_json(spec);
    io::write_json(meta, ctx.artifact(rep, "kernel.json"));
}

/// Per-degree relative error of the computed spectrum against the
/// closed-form eigenvalues of a centred sphere or disk.
void funk_hecke(Context& ctx, TaskReport& rep, const Spectrum& spectrum, int max_degree) {
    const auto& spec = ctx.spec();
    if (std::holds_alternative<Curve>(spec.shape) || !spec.is_centered()) {
        throw ConfigError("task_options.spectrum.funk_hecke needs a centred sphere or disk");
    }
    const auto coeffs = mie_coefficients(spec, ctx.truncation_for(spec));
    const double k = spec.wavenumber;
    struct Expected {
        int degree;
        cdouble value;
    };
    std::vector<Expected> expected;
    for (int l = 0; l < static_cast<int>(coeffs.size()); ++l) {
        const cdouble a = coeffs[static_cast<std::size_t>(l)];
        const cdouble lam = spec.dimension == 3 ? 4.0 * kPi * a / cdouble(0.0, k) : cdouble(0.0, -8.0 * kPi) * a;
        const int mult = spec.dimension == 3 ? 2 * l + 1 : (l == 0 ? 1 : 2);
        for (int m = 0; m < mult; ++m) expected.push_back({l, lam});
    }
    std::stable_sort(expected.begin(), expected.end(),
                     [](const Expected& x, const Expected& y) { return std::abs(x.value) > std::abs(y.value); });
    const double top = std::abs(spectrum.eigenvalues(0));
    std::vector<double> rel(static_cast<std::size_t>(max_degree + 1), 0.0);
    double scaled = 0.0;
    const auto count = std::min<Eigen::Index>(spectrum.eigenvalues.size(), static_cast<Eigen::Index>(expected.size()));
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto& e = expected[static_cast<std::size_t>(i)];
        if (e.degree > max_degree) continue;
        const double err = std::abs(spectrum.eigenvalues(i) - e.value);
        auto& slot = rel[static_cast<std::size_t>(e.degree)];
        slot = std::max(slot, err / std::abs(e.value));
        scaled = std::max(scaled, err / top);
    }
    json per = json::array();
    double worst = 0.0;
    for (double r : rel) {
        per.push_back(metric(r));
        worst = std::max(worst, r);
    }
    rep.metrics["funk_hecke_max_degree"] = max_degree;
    rep.metrics["funk_hecke_rel_error_by_degree"] = per;
    rep.metrics["funk_hecke_error_over_lambda_max"] = metric(scaled);
    rep.metrics["funk_hecke_rel_error_max"] = metric(worst);
    ctx.check(rep, "funk_hecke_rel_error_max", worst, "<=", 1e-8);
}

void task_spectrum(Context& ctx, TaskReport& rep) {
    const auto& spec = ctx.spec();
    const json o = ctx.options(Task::Spectrum);
    const int sign = limit_sign(spec.scatterer_class());
    const auto matrix = assemble(ctx.kernel());
    const auto spectrum = eigendecompose(matrix);
    const auto diag = diagnose(matrix, spectrum, sign);

    rep.metrics["class"] = to_string(spec.scatterer_class());
    rep.metrics["expected_sign"] = sign;
    rep.metrics["directions"] = matrix.entries.rows();
    const json diag_json = io::to_json(diag);
    for (const auto& [key, value] : diag_json.items()) rep.metrics[key] = value;
    double circle_max = 0.0;
    for (double r : diag.circle_residuals) circle_max = std::max(circle_max, r);
    const double min_abs = spectrum.eigenvalues.size() > 0 ? std::abs(spectrum.eigenvalues(spectrum.eigenvalues.size() - 1)) : 0.0;
    rep.metrics["lambda_max_abs"] = metric(std::abs(spectrum.eigenvalues(0)));
    rep.metrics["min_abs_eigenvalue"] = metric(min_abs);
    const double tail_alignment = sign * diag.tail_estimate.real();
    rep.metrics["tail_alignment"] = metric(tail_alignment);

    const bool planar = spec.dimension == 2;
    ctx.check(rep, "normality_residual", diag.normality_residual, "<=", 1e-8);
    ctx.check(rep, "relation_residual", diag.relation_residual, "<=", 1e-8);
    ctx.check(rep, "unitarity_residual", diag.unitarity_residual, "<=", 1e-8);
    ctx.check(rep, "circle_residual_max", circle_max, "<=", planar ? 1e-6 : 1e-7);
    ctx.check(rep, "min_imag_above_floor", diag.min_imag_above_floor, ">=", -1e-8);
    ctx.check(rep, "tail_alignment", tail_alignment, ">=", 0.99);

    if (opt<bool>(o, "expect_near_zero", false)) ctx.check(rep, "min_abs_eigenvalue", min_abs, "<=", 1e-8);
    if (o.contains("refine")) {
        const auto rule = refined_rule(o["refine"]);
        const auto fine = assemble(ctx.kernel_for(spec, rule));
        const auto tail = tail_limit(eigendecompose(fine), TailBand{}, sign);
        rep.metrics["refined_rule"] = io::to_json(rule);
        rep.metrics["refined_wrong_sign_count"] = tail.wrong_sign_count;
        rep.metrics["refined_tail_estimate"] = complex_json(tail.estimate);
        ctx.check(rep, "wrong_sign_increase", tail.wrong_sign_count - diag.wrong_sign_count, "<=", 0.0);
    }
    if (o.contains("funk_hecke")) funk_hecke(ctx, rep, spectrum, opt<int>(o["funk_hecke"], "max_degree", 8));

    io::write_eigenvalues_csv(spectrum, spec.wavenumber, spec.dimension, ctx.artifact(rep, "eigenvalues.csv"));
    json out{{"wavenumber", spec.wavenumber},
             {"dimension", spec.dimension},
             {"class", to_string(spec.scatterer_class())},
             {"eigenvalue_floor", eigenvalue_floor(spectrum)},
             {"diagnostics", io::to_json(diag)}};
    io::write_json(out, ctx.artifact(rep, "spectrum.json"));
}

Eigen::Vector3d random_shift(std::mt19937_64& rng, int dimension, double lo, double hi) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double radius = lo + (hi - lo) * uni(rng);
    const double phi = 2.0 * kPi * uni(rng);
    if (dimension == 2) return {radius * std::cos(phi), radius * std::sin(phi), 0.0};
    const double z = 2.0 * uni(rng) - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {radius * s * std::cos(phi), radius * s * std::sin(phi), radius * z};
}

void task_translation(Context& ctx, TaskReport& rep) {
    const auto& spec = ctx.spec();
    const json o = ctx.options(Task::Translation);
    const int shifts = opt<int>(o, "shifts", 20);
    const double lo = opt<double>(o, "min_shift", 0.05);
    const double hi = opt<double>(o, "max_shift", 1.0);
    const auto reference = static_cast<std::size_t>(opt<int>(o, "reference", 0));
    const auto scheme = PairScheme::fixed(reference);

    const auto& base = ctx.kernel();
    const auto data = synth_dataset(base, scheme);
    const auto base_spec = eigendecompose(assemble(base));
    std::mt19937_64 rng(static_cast<std::uint64_t>(ctx.cfg().seed));

    auto os = std::ofstream(ctx.artifact(rep, "translation.csv"), std::ios::binary);
    os << "shift,lx,ly,lz,norm,max_r_diff,max_superposition_diff,spectrum_diff\n";
    double worst_r = 0.0;
    double least_m = INFINITY;
    double worst_spec = 0.0;
    for (int s = 0; s < shifts; ++s) {
        const Eigen::Vector3d shift = random_shift(rng, spec.dimension, lo, hi);
        const auto shifted = shift_kernel(base, shift);
        const auto cmp = compare_datasets(data, synth_dataset(shifted, scheme));
        // Translation is a diagonal unitary similarity of the weighted matrix.
        const auto sp = eigendecompose(assemble(shifted));
        double dspec = 0.0;
        for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i) {
            dspec = std::max(dspec, std::abs(sp.eigenvalues(i) - base_spec.eigenvalues(i)));
        }
        dspec /= std::abs(base_spec.eigenvalues(0));
        worst_r = std::max(worst_r, cmp.max_r_diff);
        least_m = std::min(least_m, cmp.max_superposition_diff);
        worst_spec = std::max(worst_spec, dspec);
        os << s << ',' << io::format_double(shift.x()) << ',' << io::format_double(shift.y()) << ','
           << io::format_double(shift.z()) << ',' << io::format_double(shift.norm()) << ','
           << io::format_double(cmp.max_r_diff) << ',' << io::format_double(cmp.max_superposition_diff) << ','
           << io::format_double(dspec) << '\n';
    }
    rep.metrics["shifts"] = shifts;
    rep.metrics["pair_scheme"] = scheme.name();
    rep.metrics["max_r_diff"] = metric(worst_r);
    rep.metrics["min_superposition_diff"] = metric(least_m);
    rep.metrics["max_spectrum_diff"] = metric(worst_spec);
    ctx.check(rep, "max_r_diff", worst_r, "<=", 1e-12);
    ctx.check(rep, "min_superposition_diff", least_m, ">", 1e-3);
    ctx.check(rep, "max_spectrum_diff", worst_spec, "<=", 1e-10);
}

void task_retrieve(Context& ctx, TaskReport& rep) {
    const auto& spec = ctx.spec();
    const json o = ctx.options(Task::Retrieve);
    const ScattererClass hint =
        o.contains("class_hint") ? scatterer_class_from_string(o["class_hint"].get<std::string>()) : spec.scatterer_class();
    const bool expect_failure = opt<bool>(o, "expect_failure", false);
    const auto& truth = ctx.kernel();
    const auto data = synth_dataset(truth, PairScheme::full());
    rep.metrics["class_hint"] = to_string(hint);
    rep.metrics["directions"] = truth.size();

    const auto n = truth.size();
    if (opt<bool>(o, "write_dataset", n <= 128)) {
        io::write_dataset(data, ctx.dir() / "dataset");
        rep.artifacts.push_back("dataset/r.csv");
        rep.artifacts.push_back("dataset/M.csv");
        rep.artifacts.push_back("dataset/meta.json");
    }

    if (expect_failure) {
        // The data contradict the declared class: retrieval must refuse.
        double failed = 0.0;
        try {
            const auto result = retrieve(data, hint);
            rep.metrics["accepted_branch"] = to_string(result.branch);
            rep.metrics["retrieval"] = io::to_json(result);
            rep.metrics["retrieval_error"] = metric(relative_max_error(result.kernel.values, truth.values));
        } catch (const DisambiguationError& e) {
            failed = 1.0;
            rep.metrics["disambiguation_error"] = e.what();
        }
        rep.metrics["disambiguation_failed"] = failed > 0.0;
        ctx.check(rep, "disambiguation_failed", failed, ">=", 1.0);
        return;
    }

    const auto result = retrieve(data, hint);
    const double err = relative_max_error(result.kernel.values, truth.values);
    const double scale = data.r.maxCoeff();
    const double modulus = scale > 0.0 ? (result.kernel.values.cwiseAbs() - data.r).cwiseAbs().maxCoeff() / scale : 0.0;
    rep.metrics["retrieval"] = io::to_json(result);
    rep.metrics["retrieval_error"] = metric(err);
    rep.metrics["modulus_error"] = metric(modulus);
    ctx.check(rep, "retrieval_error", err, "<=", spec.dimension == 3 ? 1e-6 : 1e-4);
    ctx.check(rep, "modulus_error", modulus, "<=", 1e-10);
    ctx.check(rep, "data_residual", result.data_residual, "<=", 1e-8);

    if (opt<bool>(o, "ambiguity", false)) {
        // Same moduli from e^{i gamma} K and from the conjugate-reciprocal kernel.
        const double gamma = opt<double>(o, "gamma", 1.234);
        FarFieldKernel rotated = truth;
        rotated.values *= cdouble(std::cos(gamma), std::sin(gamma));
        FarFieldKernel conjugated = truth;
        conjugated.values = (cdouble(std::cos(0.5), std::sin(0.5)) * truth.values.conjugate()).eval();
        double diff = 0.0;
        for (const auto* k : {&rotated, &conjugated}) {
            const auto other = retrieve(synth_dataset(*k, PairScheme::full()), hint);
            diff = std::max(diff, relative_max_error(other.kernel.values, result.kernel.values));
        }
        rep.metrics["ambiguity_difference"] = metric(diff);
        ctx.check(rep, "ambiguity_difference", diff, "<=", 1e-10);
    }
    if (o.contains("noise")) {
        const double level = o["noise"].get<double>();
        const auto noisy = perturb_dataset(data, level, static_cast<std::uint64_t>(ctx.cfg().seed));
        RetrievalOptions ro;
        ro.consistency_tolerance = std::max(ro.consistency_tolerance, 10.0 * level);
        // Eigenvalues within a few decades of the noise level carry no sign information.
        ro.band.lo = std::max(ro.band.lo, opt<double>(o, "noise_band_factor", 1e3) * level);
        rep.metrics["noise_band_lo"] = ro.band.lo;
        const auto r2 = retrieve(noisy, hint, ro);
        const double change = relative_max_error(r2.kernel.values, result.kernel.values);
        rep.metrics["noise_level"] = level;
        rep.metrics["noise_change"] = metric(change);
        ctx.check(rep, "noise_change", change, "<=", 1e-5);
    }

    io::write_kernel_csv(result.kernel, ctx.artifact(rep, "retrieved_kernel.csv"));
    json out = io::kernel_meta(result.kernel);
    out["retrieval"] = io::to_json(result);
    out["retrieval_error"] = metric(err);
    io::write_json(out, ctx.artifact(rep, "retrieval.json"));
}

void task_compare(Context& ctx, TaskReport& rep) {
    const auto& cfg = ctx.cfg();
    const json o = ctx.options(Task::Compare);
    const auto& a = cfg.scatterers.at(0);
    const auto& b = cfg.scatterers.at(1);
    const std::string kind = opt<std::string>(o, "pair_scheme", "fixed-reference");
    PairScheme scheme;
    if (kind == "full-pairs") {
        scheme = PairScheme::full();
    } else if (kind == "fixed-reference") {
        scheme = PairScheme::fixed(static_cast<std::size_t>(opt<int>(o, "reference", 0)));
    } else {
        throw ConfigError("task_options.compare.pair_scheme: unknown scheme '" + kind + "'");
    }
    const auto cmp = compare_datasets(synth_dataset(ctx.kernel_for(a, cfg.rule), scheme),
                                      synth_dataset(ctx.kernel_for(b, cfg.rule), scheme));
    rep.metrics["pair_scheme"] = scheme.name();
    rep.metrics["scatterer_a"] = a.describe();
    rep.metrics["scatterer_b"] = b.describe();
    rep.metrics["max_r_diff"] = metric(cmp.max_r_diff);
    rep.metrics["max_superposition_diff"] = metric(cmp.max_superposition_diff);
    const std::string expect = opt<std::string>(o, "expect", "none");
    if (expect == "identical") {
        ctx.check(rep, "max_r_diff", cmp.max_r_diff, "<=", 1e-12);
        ctx.check(rep, "max_superposition_diff", cmp.max_superposition_diff, "<=", 1e-12);
    } else if (expect == "translated") {
        ctx.check(rep, "max_r_diff", cmp.max_r_diff, "<=", 1e-12);
        ctx.check(rep, "max_superposition_diff", cmp.max_superposition_diff, ">", 1e-3);
    } else if (expect == "distinct") {
        ctx.check(rep, "max_r_diff", cmp.max_r_diff, ">", 1e-3);
    } else if (expect != "none") {
        throw ConfigError("task_options.compare.expect: unknown value '" + expect + "'");
    }
    io::write_json(json{{"pair_scheme", scheme.name()},
                        {"scatterer_a", io::to_json(a)},
                        {"scatterer_b", io::to_json(b)},
                        {"max_r_diff", metric(cmp.max_r_diff)},
                        {"max_superposition_diff", metric(cmp.max_superposition_diff)}},
                   ctx.artifact(rep, "compare.json"));
}

json check_json(const Check& c) {
    return json{{"name", c.name},
                {"value", metric(c.value)},
                {"comparison", c.comparison},
                {"threshold", c.threshold},
                {"passed", c.passed}};
}

// ---------------------------------------------------------------------------
// Corpus

json sphere(const char* condition, double radius = 1.0) {
    json s{{"shape", "sphere"}, {"radius", radius}, {"condition", condition}};
    return s;
}

json s2(int np, int na) { return json{{"n_polar", np}, {"n_azimuth", na}}; }

json spectrum_scenario(const std::string& name, double k, json scatterer, bool refine) {
    json c{{"name", name}, {"k", k}, {"scatterer", std::move(scatterer)}, {"rule", s2(16, 32)}, {"tasks", {"spectrum"}}};
    if (refine) c["task_options"] = json{{"spectrum", {{"refine", s2(24, 48)}}}};
    return c;
}

}  // namespace

std::string to_string(Task t) {
    for (const auto& [name, task] : task_names()) {
        if (task == t) return name;
    }
    return "unknown";
}

ScenarioConfig parse_config(const json& j) {
    std::vector<std::string> errors;
    auto cfg = parse_impl(j, errors);
    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid scenario config (" << errors.size() << (errors.size() == 1 ? " error" : " errors") << "):";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& file) { return parse_config(io::read_json(file)); }

json to_json(const RunReport& report, const ScenarioConfig& config) {
    json tasks = json::array();
    for (const auto& t : report.tasks) {
        json jt{{"task", to_string(t.task)}, {"status", t.status}};
        if (!t.error.empty()) jt["error"] = t.error;
        jt["wall_time_s"] = t.wall_time;
        jt["metrics"] = t.metrics;
        json checks = json::array();
        for (const auto& c : t.checks) checks.push_back(check_json(c));
        jt["checks"] = checks;
        jt["artifacts"] = t.artifacts;
        tasks.push_back(jt);
    }
    return json{{"scenario", report.scenario},
                {"status", report.passed() ? "pass" : "fail"},
                {"exit_code", report.exit_code},
                {"wall_time_s", report.wall_time},
                {"config", config.source},
                {"tasks", tasks}};
}

RunReport run(const ScenarioConfig& config, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.scenario = config.name;
    Context ctx(config, out_dir);
    for (const Task task : config.tasks) {
        TaskReport rep;
        rep.task = task;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            switch (task) {
                case Task::Forward:
                    task_forward(ctx, rep);
                    break;
                case Task::Spectrum:
                    task_spectrum(ctx, rep);
                    break;
                case Task::Translation:
                    task_translation(ctx, rep);
                    break;
                case Task::Retrieve:
                    task_retrieve(ctx, rep);
                    break;
                case Task::Compare:
                    task_compare(ctx, rep);
                    break;
            }
            for (const auto& c : rep.checks) {
                if (!c.passed) rep.status = "fail";
            }
        } catch (const std::exception& e) {
            rep.status = "error";
            rep.error = e.what();
        }
        // Keep only files that exist.
        std::erase_if(rep.artifacts, [&](const std::string& a) { return !fs::exists(out_dir / a); });
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (rep.status != "pass") report.exit_code = 2;
        report.tasks.push_back(std::move(rep));
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    io::write_json(to_json(report, config), out_dir / "report.json");
    return report;
}

int run_file(const fs::path& config_path, const fs::path& out_dir_override, std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 1;
    }
    fs::path dir = out_dir_override;
    if (dir.empty()) dir = cfg.output_dir.empty() ? fs::path("ffspec-out") / cfg.name : fs::path(cfg.output_dir);
    const auto report = run(cfg, dir);
    for (const auto& t : report.tasks) {
        out << cfg.name << ' ' << to_string(t.task) << ": " << t.status;
        if (!t.error.empty()) out << " (" << t.error << ')';
        out << '\n';
        for (const auto& c : t.checks) {
            if (!c.passed) {
                out << "  failed check " << c.name << ": " << io::format_double(c.value) << " not " << c.comparison << ' '
                    << io::format_double(c.threshold) << '\n';
            }
        }
    }
    out << "report: " << (dir / "report.json").string() << '\n';
    return report.exit_code;
}

std::vector<json> corpus() {
    std::vector<json> c;

    // Forward and spectral theory, 3D.
    {
        auto s = spectrum_scenario("sphere-dirichlet-kR1", 1.0, sphere("dirichlet"), true);
        s["tasks"] = {"forward", "spectrum"};
        c.push_back(s);
    }
    {
        json s{{"name", "sphere-dirichlet-kR1-funk-hecke"},
               {"k", 1.0},
               {"scatterer", sphere("dirichlet")},
               {"rule", s2(16, 32)},
               {"truncation", {{"max_order", 24}}},
               {"tasks", {"spectrum"}},
               {"task_options", {{"spectrum", {{"funk_hecke", {{"max_degree", 8}}}}}}}};
        c.push_back(s);
    }
    c.push_back(spectrum_scenario("sphere-dirichlet-kR2", 2.0, sphere("dirichlet"), true));
    {
        auto s = spectrum_scenario("sphere-dirichlet-kRpi", kPi, sphere("dirichlet"), true);
        s["task_options"]["spectrum"]["expect_near_zero"] = true;
        c.push_back(s);
    }
    {
        auto imp = sphere("impedance");
        imp["eta"] = 1.0;
        auto s = spectrum_scenario("sphere-impedance-kR1", 1.0, imp, true);
        s["tasks"] = {"forward", "spectrum"};
        c.push_back(s);
        c.push_back(spectrum_scenario("sphere-impedance-kR2", 2.0, imp, true));
    }
    {
        auto ball = sphere("penetrable");
        ball["index"] = 2.0;
        auto s = spectrum_scenario("ball-n2-kR1", 1.0, ball, true);
        s["tasks"] = {"forward", "spectrum"};
        c.push_back(s);
        c.push_back(spectrum_scenario("ball-n2-kR2", 2.0, ball, true));
        ball["index"] = 0.5;
        c.push_back(spectrum_scenario("ball-n0.5-kR1", 1.0, ball, true));
    }

    // 2D: Mie disk against Nystrom, and the kite.
    c.push_back(json{{"name", "disk-dirichlet-k1"},
                     {"k", 1.0},
                     {"scatterer", {{"shape", "disk"}, {"radius", 1.0}, {"condition", "dirichlet"}}},
                     {"rule", {{"n_circle", 64}}},
                     {"tasks", {"forward", "spectrum"}},
                     {"task_options", {{"forward", {{"nystrom_points", 64}}}}}});
    c.push_back(json{{"name", "kite-k1"},
                     {"k", 1.0},
                     {"scatterer", {{"shape", "curve"}, {"curve", "kite"}, {"boundary_points", 128}, {"condition", "dirichlet"}}},
                     {"rule", {{"n_circle", 64}}},
                     {"tasks", {"forward", "spectrum", "retrieve"}},
                     {"task_options",
                      {{"forward", {{"convergence_points", {64, 128}}}}, {"retrieve", {{"ambiguity", true}}}}}});

    // Phaseless retrieval on the sphere.
    c.push_back(json{{"name", "sphere-dirichlet-retrieve"},
                     {"k", 1.0},
                     {"scatterer", sphere("dirichlet")},
                     {"rule", s2(8, 16)},
                     {"tasks", {"retrieve"}},
                     {"task_options", {{"retrieve", {{"ambiguity", true}, {"noise", 1e-8}}}}}});
    {
        auto imp = sphere("impedance");
        imp["eta"] = 1.0;
        c.push_back(json{{"name", "sphere-impedance-retrieve"},
                         {"k", 1.0},
                         {"scatterer", imp},
                         {"rule", s2(8, 16)},
                         {"tasks", {"retrieve"}},
                         {"task_options", {{"retrieve", {{"ambiguity", true}}}}}});
        c.push_back(json{{"name", "sphere-impedance-soundsoft-hint"},
                         {"k", 1.0},
                         {"scatterer", imp},
                         {"rule", s2(8, 16)},
                         {"tasks", {"retrieve"}},
                         {"task_options", {{"retrieve", {{"class_hint", "sound-soft"}, {"expect_failure", true}}}}}});
        auto ball = sphere("penetrable");
        ball["index"] = 2.0;
        c.push_back(json{{"name", "ball-n2-retrieve"},
                         {"k", 1.0},
                         {"scatterer", ball},
                         {"rule", s2(8, 16)},
                         {"tasks", {"retrieve"}},
                         {"task_options", {{"retrieve", {{"ambiguity", true}}}}}});
    }

    // Translation invariance and uniqueness comparisons.
    c.push_back(json{{"name", "sphere-dirichlet-translation"},
                     {"k", 1.0},
                     {"scatterer", sphere("dirichlet")},
                     {"rule", s2(8, 16)},
                     {"tasks", {"translation"}},
                     {"task_options", {{"translation", {{"shifts", 20}, {"min_shift", 0.05}, {"max_shift", 1.0}}}}},
                     {"seed", 20240531}});
    {
        auto shifted = sphere("dirichlet");
        shifted["offset"] = {0.1, 0.0, 0.0};
        c.push_back(json{{"name", "compare-shifted-sphere"},
                         {"k", 1.0},
                         {"scatterers", {sphere("dirichlet"), shifted}},
                         {"rule", s2(8, 16)},
                         {"tasks", {"compare"}},
                         {"task_options", {{"compare", {{"expect", "translated"}}}}}});
        c.push_back(json{{"name", "compare-sphere-radius"},
                         {"k", 1.0},
                         {"scatterers", {sphere("dirichlet"), sphere("dirichlet", 1.1)}},
                         {"rule", s2(8, 16)},
                         {"tasks", {"compare"}},
                         {"task_options", {{"compare", {{"expect", "distinct"}}}}}});
    }
    return c;
}

int run_corpus(const fs::path& out_dir, std::ostream& out) {
    int code = 0;
    json summary = json::array();
    for (const auto& j : corpus()) {
        const auto cfg = parse_config(j);
        const auto report = run(cfg, out_dir / cfg.name);
        out << (report.passed() ? "PASS " : "FAIL ") << cfg.name;
        for (const auto& t : report.tasks) {
            for (const auto& c : t.checks) {
                if (!c.passed) out << "  [" << to_string(t.task) << '.' << c.name << ']';
            }
            if (!t.error.empty()) out << "  [" << to_string(t.task) << " error: " << t.error << ']';
        }
        out << '\n';
        summary.push_back(json{{"scenario", cfg.name}, {"exit_code", report.exit_code}});
        if (!report.passed()) code = 2;
    }
    io::write_json(json{{"scenarios", summary}, {"exit_code", code}}, out_dir / "corpus.json");
    return code;
}

}  // namespace ffspec::scenario
