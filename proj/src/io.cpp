#include "ffspec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "ffspec/errors.hpp"

namespace ffspec::io {

namespace {

json complex_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// Finite doubles as numbers, non-finite as strings (JSON has no NaN).
json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

std::ofstream open_out(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream os(file, std::ios::binary);
    if (!os) throw Error("cannot open '" + file.string() + "' for writing");
    return os;
}

std::ifstream open_in(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw Error("cannot open '" + file.string() + "'");
    return is;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("malformed number '" + s + "'");
    return v;
}

template <class T>
T require(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": required");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + ": wrong type");
    }
}

template <class T>
T optional(const json& j, const char* key, T fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + ": wrong type");
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Scatterers and rules

json to_json(const ScattererSpec& spec) {
    json j;
    if (const auto* s = std::get_if<Sphere>(&spec.shape)) {
        j["shape"] = "sphere";
        j["radius"] = s->radius;
    } else if (const auto* d = std::get_if<Disk>(&spec.shape)) {
        j["shape"] = "disk";
        j["radius"] = d->radius;
    } else {
        const auto& c = std::get<Curve>(spec.shape);
        j["shape"] = "curve";
        j["curve"] = c.name;
        if (c.name == "circle") j["radius"] = c.radius;
        j["boundary_points"] = c.boundary_points;
    }
    if (std::holds_alternative<Dirichlet>(spec.condition)) {
        j["condition"] = "dirichlet";
    } else if (const auto* imp = std::get_if<Impedance>(&spec.condition)) {
        j["condition"] = "impedance";
        j["eta"] = imp->eta;
    } else {
        j["condition"] = "penetrable";
        j["index"] = std::get<Penetrable>(spec.condition).index;
    }
    if (!spec.is_centered()) {
        j["offset"] = spec.dimension == 3 ? json::array({spec.offset.x(), spec.offset.y(), spec.offset.z()})
                                          : json::array({spec.offset.x(), spec.offset.y()});
    }
    j["class"] = to_string(spec.scatterer_class());
    return j;
}

ScattererSpec scatterer_from_json(const json& j, double wavenumber, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    ScattererSpec spec;
    spec.wavenumber = wavenumber;
    const auto shape = require<std::string>(j, "shape", path);
    if (shape == "sphere") {
        spec.dimension = 3;
        spec.shape = Sphere{optional<double>(j, "radius", 1.0, path)};
    } else if (shape == "disk") {
        spec.dimension = 2;
        spec.shape = Disk{optional<double>(j, "radius", 1.0, path)};
    } else if (shape == "curve") {
        spec.dimension = 2;
        Curve c;
        c.name = optional<std::string>(j, "curve", "kite", path);
        c.radius = optional<double>(j, "radius", 1.0, path);
        c.boundary_points = optional<int>(j, "boundary_points", 128, path);
        if (c.name != "kite" && c.name != "circle") throw ConfigError(path + ".curve: unknown curve '" + c.name + "'");
        spec.shape = c;
    } else {
        throw ConfigError(path + ".shape: unknown shape '" + shape + "'");
    }
    const auto cond = require<std::string>(j, "condition", path);
    if (cond == "dirichlet") {
        spec.condition = Dirichlet{};
    } else if (cond == "impedance") {
        spec.condition = Impedance{optional<double>(j, "eta", 1.0, path)};
    } else if (cond == "penetrable") {
        spec.condition = Penetrable{require<double>(j, "index", path)};
    } else {
        throw ConfigError(path + ".condition: unknown condition '" + cond + "'");
    }
    if (j.contains("offset")) {
        const auto v = optional<std::vector<double>>(j, "offset", {}, path);
        if (v.size() != static_cast<std::size_t>(spec.dimension)) {
            throw ConfigError(path + ".offset: expected " + std::to_string(spec.dimension) + " components");
        }
        spec.offset = Eigen::Vector3d(v[0], v[1], spec.dimension == 3 ? v[2] : 0.0);
    }
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return spec;
}

json to_json(const DirectionRule& rule) {
    json j;
    j["dimension"] = rule.dimension;
    if (rule.dimension == 3) {
        j["n_polar"] = rule.n_polar;
        j["n_azimuth"] = rule.n_azimuth;
    } else {
        j["n_circle"] = static_cast<int>(rule.size());
    }
    j["size"] = rule.size();
    j["exact_degree"] = rule.exact_degree;
    return j;
}

DirectionRule rule_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    try {
        if (j.contains("n_circle")) return build_s1_rule(require<int>(j, "n_circle", path));
        return build_s2_rule(require<int>(j, "n_polar", path), require<int>(j, "n_azimuth", path));
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Diagnostics

json to_json(const SpectralDiagnostics& diag) {
    double circle_max = 0.0;
    for (double r : diag.circle_residuals) circle_max = std::max(circle_max, r);
    json j;
    j["normality_residual"] = number(diag.normality_residual);
    j["relation_residual"] = number(diag.relation_residual);
    j["unitarity_residual"] = number(diag.unitarity_residual);
    j["circle_center"] = complex_json(diag.circle_center);
    j["circle_radius"] = number(diag.circle_radius);
    j["circle_residual_max"] = number(circle_max);
    j["eigenvalues_above_floor"] = diag.circle_residuals.size();
    j["min_imag_above_floor"] = number(diag.min_imag_above_floor);
    j["tail_estimate"] = complex_json(diag.tail_estimate);
    j["tail_band_count"] = diag.tail_band_count;
    j["wrong_sign_count"] = diag.wrong_sign_count;
    return j;
}

json to_json(const TailResult& tail) {
    return json{{"estimate", complex_json(tail.estimate)},
                {"band_count", tail.band_count},
                {"wrong_sign_count", tail.wrong_sign_count}};
}

json to_json(const RetrievedKernel& result) {
    json j;
    j["branch"] = to_string(result.branch);
    j["global_phase"] = number(result.global_phase);
    j["class_hint"] = to_string(result.class_hint);
    j["reciprocity_residual"] = number(result.reciprocity_residual);
    j["circle_fit_residual"] = number(result.circle_fit_residual);
    j["tail_estimate"] = complex_json(result.tail_estimate);
    j["link_residual"] = number(result.link_residual);
    j["data_residual"] = number(result.data_residual);
    j["zero_rows"] = result.zero_rows;
    j["ambiguous_rows"] = result.ambiguous_rows;
    json branches = json::array();
    for (const auto& b : result.branches) {
        branches.push_back(json{{"branch", to_string(b.branch)},
                                {"alpha", number(b.alpha)},
                                {"circle_fit_residual", number(b.circle_fit_residual)},
                                {"min_imag", number(b.min_imag)},
                                {"tail_estimate", complex_json(b.tail_estimate)},
                                {"tail_band_count", b.tail_band_count},
                                {"circle_ok", b.circle_ok},
                                {"tail_ok", b.tail_ok},
                                {"accepted", b.accepted()},
                                {"note", b.note}});
    }
    j["branches"] = branches;
    return j;
}

// ---------------------------------------------------------------------------
// Kernels and spectra

void write_kernel_csv(const FarFieldKernel& kernel, const fs::path& file) {
    auto os = open_out(file);
    os << "i,j,re,im\n";
    const auto n = kernel.values.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index jj = 0; jj < kernel.values.cols(); ++jj) {
            const cdouble z = kernel.values(i, jj);
            os << i << ',' << jj << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
    }
}

FarFieldKernel read_kernel_csv(const fs::path& file, const DirectionRule& rule, double wavenumber) {
    auto is = open_in(file);
    const auto n = static_cast<Eigen::Index>(rule.size());
    FarFieldKernel kernel;
    kernel.rule = rule;
    kernel.wavenumber = wavenumber;
    kernel.dimension = rule.dimension;
    kernel.values = Eigen::MatrixXcd::Zero(n, n);
    std::string line;
    std::getline(is, line);
    Eigen::Index count = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 4) throw Error("kernel csv: expected 4 columns");
        const auto i = static_cast<Eigen::Index>(std::stoll(cells[0]));
        const auto jj = static_cast<Eigen::Index>(std::stoll(cells[1]));
        if (i < 0 || i >= n || jj < 0 || jj >= n) throw Error("kernel csv: index out of range");
        kernel.values(i, jj) = cdouble(parse_double(cells[2]), parse_double(cells[3]));
        ++count;
    }
    if (count != n * n) throw Error("kernel csv: expected " + std::to_string(n * n) + " entries");
    return kernel;
}

json kernel_meta(const FarFieldKernel& kernel) {
    return json{{"wavenumber", kernel.wavenumber},
                {"dimension", kernel.dimension},
                {"rule", to_json(kernel.rule)},
                {"reciprocity_residual", number(reciprocity_residual(kernel))}};
}

void write_eigenvalues_csv(const Spectrum& spectrum, double k, int dimension, const fs::path& file) {
    auto os = open_out(file);
    os << "index,re,im,abs,circle_residual\n";
    const double floor = eigenvalue_floor(spectrum);
    const cdouble center = circle_center(k, dimension);
    const double radius = circle_radius(k, dimension);
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        const cdouble z = spectrum.eigenvalues(i);
        os << i << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
           << format_double(std::abs(z)) << ',';
        if (std::abs(z) >= floor) os << format_double(std::abs(std::abs(z - center) - radius));
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Datasets

void write_dataset(const PhaselessDataset& data, const fs::path& dir) {
    fs::create_directories(dir);
    const auto n = data.r.rows();
    {
        auto os = open_out(dir / "r.csv");
        os << "i";
        for (Eigen::Index jj = 0; jj < n; ++jj) os << ",d" << jj;
        os << '\n';
        for (Eigen::Index i = 0; i < n; ++i) {
            os << i;
            for (Eigen::Index jj = 0; jj < n; ++jj) os << ',' << format_double(data.r(i, jj));
            os << '\n';
        }
    }
    {
        auto os = open_out(dir / "M.csv");
        os << "j,l";
        for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
        os << '\n';
        for (std::size_t p = 0; p < data.pairs.size(); ++p) {
            os << data.pairs[p].first << ',' << data.pairs[p].second;
            for (Eigen::Index i = 0; i < n; ++i) {
                os << ',' << format_double(data.superposition(i, static_cast<Eigen::Index>(p)));
            }
            os << '\n';
        }
    }
    json meta{{"wavenumber", data.wavenumber},
              {"dimension", data.dimension},
              {"rule", to_json(data.rule)},
              {"pair_scheme", json{{"kind", data.scheme.name()}}},
              {"directions", n},
              {"pairs", data.pairs.size()}};
    if (data.scheme.kind == PairScheme::Kind::FixedReference) meta["pair_scheme"]["reference"] = data.scheme.reference;
    write_json(meta, dir / "meta.json");
}

PhaselessDataset read_dataset(const fs::path& dir) {
    const json meta = read_json(dir / "meta.json");
    PhaselessDataset data;
    try {
        data.wavenumber = meta.at("wavenumber").get<double>();
        data.dimension = meta.at("dimension").get<int>();
        data.rule = rule_from_json(meta.at("rule"));
        const auto kind = meta.at("pair_scheme").at("kind").get<std::string>();
        if (kind == "full-pairs") {
            data.scheme = PairScheme::full();
        } else if (kind == "fixed-reference") {
            data.scheme = PairScheme::fixed(meta.at("pair_scheme").at("reference").get<std::size_t>());
        } else {
            throw Error("unknown pair scheme '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw Error(std::string("dataset meta.json: ") + e.what());
    }
    const auto n = static_cast<Eigen::Index>(data.rule.size());
    data.pairs = scheme_pairs(data.scheme, data.rule.size());
    data.r.resize(n, n);
    data.superposition.resize(n, static_cast<Eigen::Index>(data.pairs.size()));

    std::string line;
    {
        auto is = open_in(dir / "r.csv");
        std::getline(is, line);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!std::getline(is, line)) throw Error("r.csv: too few rows");
            const auto cells = split(line);
            if (static_cast<Eigen::Index>(cells.size()) != n + 1) throw Error("r.csv: wrong column count");
            for (Eigen::Index jj = 0; jj < n; ++jj) data.r(i, jj) = parse_double(cells[static_cast<std::size_t>(jj + 1)]);
        }
    }
    {
        auto is = open_in(dir / "M.csv");
        std::getline(is, line);
        for (std::size_t p = 0; p < data.pairs.size(); ++p) {
            if (!std::getline(is, line)) throw Error("M.csv: too few rows");
            const auto cells = split(line);
            if (static_cast<Eigen::Index>(cells.size()) != n + 2) throw Error("M.csv: wrong column count");
            if (std::stoull(cells[0]) != data.pairs[p].first || std::stoull(cells[1]) != data.pairs[p].second) {
                throw Error("M.csv: pair order does not match the scheme");
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                data.superposition(i, static_cast<Eigen::Index>(p)) = parse_double(cells[static_cast<std::size_t>(i + 2)]);
            }
        }
    }
    return data;
}

void write_json(const json& j, const fs::path& file) {
    auto os = open_out(file);
    os << j.dump(2) << '\n';
}

json read_json(const fs::path& file) {
    auto is = open_in(file);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
}

}  // namespace ffspec::io
