#pragma once

#include <string>
#include <variant>

#include <Eigen/Core>

namespace ffspec {

struct Sphere {
    double radius = 1.0;
};
struct Disk {
    double radius = 1.0;
};
/// Parametrised sound-soft curve solved by the Nystrom path.
struct Curve {
    std::string name = "kite";  // "kite" or "circle"
    double radius = 1.0;        // used by "circle"
    int boundary_points = 128;  // even, >= 8
};

using Shape = std::variant<Sphere, Disk, Curve>;

struct Dirichlet {};
/// Robin condition du/dnu + eta u = 0 with real eta.
struct Impedance {
    double eta = 1.0;
};
/// Homogeneous medium of refractive index n inside the shape.
struct Penetrable {
    double index = 2.0;
};

using Condition = std::variant<Dirichlet, Impedance, Penetrable>;

/// Minimal contrast |n - 1| accepted for penetrable scatterers.
inline constexpr double kMinContrast = 1e-2;

/// Scatterer class that fixes the asymptotic direction of eigenvalues.
enum class ScattererClass { SoundSoft, Impedance, MediumPositive, MediumNegative };

/// +1 or -1: limit of lambda_n / |lambda_n| for the class.
int limit_sign(ScattererClass c);
std::string to_string(ScattererClass c);
ScattererClass scatterer_class_from_string(const std::string& s);

struct ScattererSpec {
    int dimension = 3;
    Shape shape = Sphere{};
    Condition condition = Dirichlet{};
    double wavenumber = 1.0;
    Eigen::Vector3d offset = Eigen::Vector3d::Zero();

    /// Throws DomainError on any invariant violation.
    void validate() const;
    ScattererClass scatterer_class() const;
    /// Radius for Sphere/Disk shapes; throws for curves.
    double radius() const;
    bool is_centered() const { return offset.isZero(0.0); }
    /// Short human-readable echo, e.g. "sphere(R=1) dirichlet k=1".
    std::string describe() const;
};

}  // namespace ffspec
