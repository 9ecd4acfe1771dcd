// k-sections: curves over the projective line with Newton polygon contained
// in the triangle (0,0)-(4k,0)-(0,k), the raw material every perturbed
// multiple conic is built from, together with their vertical-tangency fiber
// data.

#ifndef BITLAB_KSECTION_HPP
#define BITLAB_KSECTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "bitlab/poly.hpp"

namespace bitlab {

// One extra point q_{i,l} on a tangent fiber.
struct FiberPoint {
    bool is_real = false;
    bool critical_above = false;  // critical point above this one (both real)
    int component = -1;           // k-section component carrying the point
    double w = 0.0;               // real part of the second coordinate
};

// One vertical tangent fiber of a k-section.
struct TangentFiber {
    int index = -1;
    bool is_real = false;
    int conj_partner = -1;  // pairing index for non-real fibers
    double u = 0.0;         // real part of the critical abscissa
    double w = 0.0;         // second coordinate of the critical point
    int component = -1;     // component label of the critical point
    std::vector<FiberPoint> others;  // exactly k-2 entries
};

struct KSectionCertificates {
    bool support_ok = false;      // support inside the k-section triangle
    bool top_squarefree = false;  // leading quasi-homogeneous part squarefree
    bool nonsingular = false;     // no affine singular point found numerically
    int critical_points = 0;      // solutions of {P = 0, dP/dw = 0}
    double min_gradient = 0.0;    // smallest |dP/du| over critical points
};

struct KSection {
    int k = 0;
    Poly P;  // in variables (u, w)
    std::vector<TangentFiber> fibers;
    std::vector<bool> component_is_oval;  // indexed by component label
    KSectionCertificates cert;
    std::string family;     // provenance tag for metadata
    QQ epsilon = 0;         // perturbation size, when the family used one
};

struct KSectionViolation {
    enum class Kind { support, top_part, singular, degree };
    Kind kind;
    std::string detail;
};

using KSectionCheck = std::optional<KSectionViolation>;  // nullopt = valid

}  // namespace bitlab

#endif
