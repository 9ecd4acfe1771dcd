// Explicit curve families: validated k-sections, the recursive Harnack
// family, the rational 3-section and its derivative perturbation, and the
// degree-2k curves obtained by perturbing the k-fold conic y^2 - xz = 0.

#ifndef BITLAB_FAMILIES_HPP
#define BITLAB_FAMILIES_HPP

#include "bitlab/ksection.hpp"
#include "bitlab/topology.hpp"
#include "bitlab/tracker.hpp"

namespace bitlab {

struct FamilyConfig {
    PathTrackerConfig tracker;
    TopologyConfig topology;
    int retry_budget = 14;
};

struct FamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationResult {
    std::optional<KSectionViolation> violation;  // nullopt when valid
    KSectionCertificates cert;
    bool ok() const { return !violation.has_value(); }
};

// Checks the three k-section conditions: support inside the triangle
// (0,0)-(4k,0)-(0,k), squarefree leading quasi-homogeneous part, and no
// affine singular point (numerically, via the critical-point system).
ValidationResult validate_ksection(const Poly& P, int k, const FamilyConfig& cfg = {});

// Affine reparameterization u -> c + s*u mapping the interesting u-range of
// the curve into (-1,1), with denominator-free content normalization. This
// changes the curve by an automorphism that extends to a projective change
// of coordinates on the perturbed conic, so all downstream invariants are
// unchanged.
Poly normalize_section_domain(const Poly& P, QQ* center = nullptr, QQ* scale = nullptr);

// The 2-section w^2 = u(u-1)...(u-7), domain-normalized.
KSection two_section(const FamilyConfig& cfg = {});

// Harnack's recursive family P_m = w P_{m-1} - eps_m prod(u - u_{m,i}).
// Abscissas: 4m values for step m, strictly increasing across the whole
// sequence (default: equally spaced in (-1,1)); epsilons positive and
// decreasing (default: searched geometrically until the expected topology
// appears: (k-1)(2k-1) ovals, one long component, 4k(k-1) real fibers).
KSection harnack_ksection(int k, std::vector<QQ> abscissas = {}, std::vector<QQ> epsilons = {},
                          const FamilyConfig& cfg = {});

// Implicitization of the rational 3-section (exact resultant), before any
// perturbation or domain normalization.
Poly rational_3section_implicit();

// The non-singular 3-section: implicitize, then add the largest derivative
// perturbation eps (geometric search) whose curve is a valid 3-section with
// ten ovals and all 24 tangent fibers real.
KSection rational_3section(const FamilyConfig& cfg = {});

// Degree-2k homogeneous curve of the perturbed k-fold conic, direct formula.
Poly perturb_conic(const KSection& s, const QQ& t);
// Same curve through the substitution route u^2 -> x, uv -> y, v^2 -> z,
// w -> (y^2 - xz)/t on the homogenized section; must agree exactly.
Poly perturb_conic_subst(const KSection& s, const QQ& t);

struct PerturbationParams {
    QQ t;
    int sign = 0;
};

// Largest t = sign * 2^-m whose curve is certifiably non-singular with a
// real scheme stable under halving t.
PerturbationParams shrink_t_until_stable(const KSection& s, int sign,
                                         const FamilyConfig& cfg = {});

// Computes and stores fiber data on the section.
void attach_fibers(KSection& s, const SectionTopology& topo, const FamilyConfig& cfg = {});

// w -> -w; swaps the two deformation embeddings (t<0 and t>0 exchange).
KSection flip_w(const KSection& s);

}  // namespace bitlab

#endif
