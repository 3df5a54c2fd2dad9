#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ffspec {

/// Unit direction. Planar directions keep z == 0.
using Direction = Eigen::Vector3d;

/// Quadrature on the direction manifold S^2 (dimension 3) or S^1 (dimension 2).
///
/// The same rule discretises observation and incidence directions. Every
/// node has an antipode in the rule; reciprocity alignment relies on it.
struct DirectionRule {
    int dimension = 3;
    std::vector<Direction> nodes;
    std::vector<double> weights;
    std::vector<std::size_t> antipode;
    /// Highest polynomial (S^2) or trigonometric (S^1) degree integrated exactly.
    int exact_degree = 0;
    // Construction parameters, echoed in reports.
    int n_polar = 0;
    int n_azimuth = 0;

    std::size_t size() const { return nodes.size(); }
    double total_weight() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1], nodes ascending and exactly
/// antisymmetric (x[n-1-i] == -x[i]).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre in cos(polar) times uniform azimuth. Throws DomainError on
/// odd n_azimuth or non-positive sizes.
DirectionRule build_s2_rule(int n_polar, int n_azimuth);

/// Uniform rule on the unit circle, weights 2*pi/N, antipode i <-> i + N/2.
DirectionRule build_s1_rule(int n);

/// Angle of planar node i of a circle rule.
double circle_angle(const DirectionRule& rule, std::size_t i);

/// One row per node: components then weight.
void write_rule_csv(const DirectionRule& rule, std::ostream& os);

/// Closed counterclockwise curve sampled at t_j = 2*pi*j/N.
struct BoundaryCurve2D {
    std::vector<double> t;
    std::vector<Eigen::Vector2d> point;
    std::vector<Eigen::Vector2d> d1;
    std::vector<Eigen::Vector2d> d2;
    /// Name of the parametrisation ("kite", "circle"), echoed in reports.
    std::string name;
    Eigen::Vector2d offset = Eigen::Vector2d::Zero();

    std::size_t size() const { return t.size(); }
    double min_speed() const;
    BoundaryCurve2D translated(const Eigen::Vector2d& shift) const;
};

/// x(t) = (cos t + 0.65 cos 2t - 0.65, 1.5 sin t).
BoundaryCurve2D kite_curve(int n);
/// x(t) = R (cos t, sin t).
BoundaryCurve2D circle_curve(int n, double radius);

}  // namespace ffspec
