#include "ffspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "ffspec/errors.hpp"

namespace ffspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

double DirectionRule::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n <= 0) throw DomainError("gauss_legendre: n must be positive");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton on P_n from the Tricomi initial guess; root i is the i-th largest.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int l = 1; l < n; ++l) {
                const double p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        {
            double p0 = 1.0;
            double p1 = x;
            for (int l = 1; l < n; ++l) {
                const double p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        const auto lo = static_cast<std::size_t>(i);
        nodes[hi] = x;
        nodes[lo] = -x;
        weights[hi] = w;
        weights[lo] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

DirectionRule build_s2_rule(int n_polar, int n_azimuth) {
    if (n_polar <= 0 || n_azimuth <= 0) throw DomainError("build_s2_rule: sizes must be positive");
    if (n_azimuth % 2 != 0) {
        throw DomainError("build_s2_rule: n_azimuth must be even for antipodal closure, got " +
                          std::to_string(n_azimuth));
    }
    std::vector<double> x;
    std::vector<double> wx;
    gauss_legendre(n_polar, x, wx);

    // Azimuth table with exact half-turn antisymmetry.
    const int half = n_azimuth / 2;
    std::vector<double> cphi(static_cast<std::size_t>(n_azimuth));
    std::vector<double> sphi(static_cast<std::size_t>(n_azimuth));
    for (int b = 0; b < half; ++b) {
        const double phi = 2.0 * kPi * b / n_azimuth;
        cphi[static_cast<std::size_t>(b)] = std::cos(phi);
        sphi[static_cast<std::size_t>(b)] = std::sin(phi);
        cphi[static_cast<std::size_t>(b + half)] = -cphi[static_cast<std::size_t>(b)];
        sphi[static_cast<std::size_t>(b + half)] = -sphi[static_cast<std::size_t>(b)];
    }

    DirectionRule rule;
    rule.dimension = 3;
    rule.n_polar = n_polar;
    rule.n_azimuth = n_azimuth;
    rule.exact_degree = std::min(2 * n_polar - 1, n_azimuth - 1);
    const auto count = static_cast<std::size_t>(n_polar) * static_cast<std::size_t>(n_azimuth);
    rule.nodes.reserve(count);
    rule.weights.reserve(count);
    rule.antipode.reserve(count);
    const double dphi = 2.0 * kPi / n_azimuth;
    for (int a = 0; a < n_polar; ++a) {
        const double ct = x[static_cast<std::size_t>(a)];
        const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
        for (int b = 0; b < n_azimuth; ++b) {
            rule.nodes.emplace_back(st * cphi[static_cast<std::size_t>(b)], st * sphi[static_cast<std::size_t>(b)], ct);
            rule.weights.push_back(wx[static_cast<std::size_t>(a)] * dphi);
            const int a2 = n_polar - 1 - a;
            const int b2 = (b + half) % n_azimuth;
            rule.antipode.push_back(static_cast<std::size_t>(a2) * static_cast<std::size_t>(n_azimuth) +
                                    static_cast<std::size_t>(b2));
        }
    }
    return rule;
}

DirectionRule build_s1_rule(int n) {
    if (n <= 0 || n % 2 != 0) {
        throw DomainError("build_s1_rule: N must be positive and even, got " + std::to_string(n));
    }
    DirectionRule rule;
    rule.dimension = 2;
    rule.n_azimuth = n;
    rule.exact_degree = n - 1;
    const int half = n / 2;
    rule.nodes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < half; ++i) {
        const double th = 2.0 * kPi * i / n;
        rule.nodes[static_cast<std::size_t>(i)] = Direction(std::cos(th), std::sin(th), 0.0);
        rule.nodes[static_cast<std::size_t>(i + half)] = -rule.nodes[static_cast<std::size_t>(i)];
    }
    rule.weights.assign(static_cast<std::size_t>(n), 2.0 * kPi / n);
    rule.antipode.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rule.antipode[static_cast<std::size_t>(i)] = static_cast<std::size_t>((i + half) % n);
    return rule;
}

double circle_angle(const DirectionRule& rule, std::size_t i) {
    return 2.0 * kPi * static_cast<double>(i) / static_cast<double>(rule.size());
}

void write_rule_csv(const DirectionRule& rule, std::ostream& os) {
    os << (rule.dimension == 3 ? "x,y,z,weight\n" : "x,y,weight\n");
    os << std::setprecision(17);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& d = rule.nodes[i];
        os << d.x() << ',' << d.y() << ',';
        if (rule.dimension == 3) os << d.z() << ',';
        os << rule.weights[i] << '\n';
    }
}

double BoundaryCurve2D::min_speed() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : d1) m = std::min(m, v.norm());
    return m;
}

BoundaryCurve2D BoundaryCurve2D::translated(const Eigen::Vector2d& shift) const {
    BoundaryCurve2D out = *this;
    for (auto& p : out.point) p += shift;
    out.offset += shift;
    return out;
}

BoundaryCurve2D kite_curve(int n) {
    if (n < 8) throw DomainError("kite_curve: need at least 8 samples");
    BoundaryCurve2D c;
    c.name = "kite";
    c.t.resize(static_cast<std::size_t>(n));
    c.point.resize(c.t.size());
    c.d1.resize(c.t.size());
    c.d2.resize(c.t.size());
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        const auto i = static_cast<std::size_t>(j);
        c.t[i] = t;
        c.point[i] = {std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
        c.d1[i] = {-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)};
        c.d2[i] = {-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t)};
    }
    return c;
}

BoundaryCurve2D circle_curve(int n, double radius) {
    if (n < 8) throw DomainError("circle_curve: need at least 8 samples");
    if (!(radius > 0.0)) throw DomainError("circle_curve: radius must be positive");
    BoundaryCurve2D c;
    c.name = "circle";
    c.t.resize(static_cast<std::size_t>(n));
    c.point.resize(c.t.size());
    c.d1.resize(c.t.size());
    c.d2.resize(c.t.size());
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        const auto i = static_cast<std::size_t>(j);
        c.t[i] = t;
        c.point[i] = radius * Eigen::Vector2d(std::cos(t), std::sin(t));
        c.d1[i] = radius * Eigen::Vector2d(-std::sin(t), std::cos(t));
        c.d2[i] = -c.point[i];
    }
    return c;
}

}  // namespace ffspec
