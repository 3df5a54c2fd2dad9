#include "ffspec/scatterer.hpp"

#include <cmath>
#include <sstream>

#include "ffspec/errors.hpp"

namespace ffspec {

int limit_sign(ScattererClass c) {
    switch (c) {
        case ScattererClass::SoundSoft:
        case ScattererClass::MediumNegative:
            return -1;
        case ScattererClass::Impedance:
        case ScattererClass::MediumPositive:
            return 1;
    }
    return 0;
}

std::string to_string(ScattererClass c) {
    switch (c) {
        case ScattererClass::SoundSoft:
            return "sound-soft";
        case ScattererClass::Impedance:
            return "impedance";
        case ScattererClass::MediumPositive:
            return "medium-positive";
        case ScattererClass::MediumNegative:
            return "medium-negative";
    }
    return "unknown";
}

ScattererClass scatterer_class_from_string(const std::string& s) {
    if (s == "sound-soft") return ScattererClass::SoundSoft;
    if (s == "impedance") return ScattererClass::Impedance;
    if (s == "medium-positive") return ScattererClass::MediumPositive;
    if (s == "medium-negative") return ScattererClass::MediumNegative;
    throw DomainError("unknown scatterer class '" + s + "'");
}

void ScattererSpec::validate() const {
    if (dimension != 2 && dimension != 3) throw DomainError("dimension must be 2 or 3");
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber)) throw DomainError("wavenumber must be positive");
    if (!offset.allFinite()) throw DomainError("offset must be finite");
    if (dimension == 2 && offset.z() != 0.0) throw DomainError("planar scatterer offset must have z == 0");

    if (const auto* s = std::get_if<Sphere>(&shape)) {
        if (dimension != 3) throw DomainError("sphere requires dimension 3");
        if (!(s->radius > 0.0)) throw DomainError("sphere radius must be positive");
    } else if (const auto* d = std::get_if<Disk>(&shape)) {
        if (dimension != 2) throw DomainError("disk requires dimension 2");
        if (!(d->radius > 0.0)) throw DomainError("disk radius must be positive");
    } else {
        const auto& c = std::get<Curve>(shape);
        if (dimension != 2) throw DomainError("curve shapes require dimension 2");
        if (!std::holds_alternative<Dirichlet>(condition)) throw DomainError("curve shapes support only the Dirichlet condition");
        if (c.name != "kite" && c.name != "circle") throw DomainError("unknown curve '" + c.name + "'");
        if (c.boundary_points < 8 || c.boundary_points % 2 != 0) throw DomainError("boundary_points must be even and >= 8");
        if (c.name == "circle" && !(c.radius > 0.0)) throw DomainError("circle radius must be positive");
    }

    if (const auto* imp = std::get_if<Impedance>(&condition)) {
        if (!std::isfinite(imp->eta)) throw DomainError("impedance eta must be finite");
    } else if (const auto* pen = std::get_if<Penetrable>(&condition)) {
        if (!(pen->index > 0.0) || !std::isfinite(pen->index)) throw DomainError("refractive index must be positive");
        if (std::abs(pen->index - 1.0) < kMinContrast) {
            throw DomainError("refractive index too close to 1 (|n - 1| < " + std::to_string(kMinContrast) + ")");
        }
    }
}

ScattererClass ScattererSpec::scatterer_class() const {
    if (std::holds_alternative<Dirichlet>(condition)) return ScattererClass::SoundSoft;
    if (std::holds_alternative<Impedance>(condition)) return ScattererClass::Impedance;
    return std::get<Penetrable>(condition).index > 1.0 ? ScattererClass::MediumPositive : ScattererClass::MediumNegative;
}

double ScattererSpec::radius() const {
    if (const auto* s = std::get_if<Sphere>(&shape)) return s->radius;
    if (const auto* d = std::get_if<Disk>(&shape)) return d->radius;
    throw DomainError("radius() is defined for spheres and disks only");
}

std::string ScattererSpec::describe() const {
    std::ostringstream os;
    if (const auto* s = std::get_if<Sphere>(&shape)) {
        os << "sphere(R=" << s->radius << ")";
    } else if (const auto* d = std::get_if<Disk>(&shape)) {
        os << "disk(R=" << d->radius << ")";
    } else {
        const auto& c = std::get<Curve>(shape);
        os << c.name << "(N=" << c.boundary_points << ")";
    }
    if (std::holds_alternative<Dirichlet>(condition)) {
        os << " dirichlet";
    } else if (const auto* imp = std::get_if<Impedance>(&condition)) {
        os << " impedance(eta=" << imp->eta << ")";
    } else {
        os << " penetrable(n=" << std::get<Penetrable>(condition).index << ")";
    }
    os << " k=" << wavenumber;
    if (!is_centered()) os << " offset=(" << offset.x() << "," << offset.y() << "," << offset.z() << ")";
    return os.str();
}

}  // namespace ffspec
