#ifndef GST_GROUPSCHEME_HPP
#define GST_GROUPSCHEME_HPP

#include "gst/boxtensor.hpp"
#include "gst/gamma.hpp"

namespace gst {

// Descriptors for the affine commutative group schemes the library computes
// with: a unipotent part held as Dieudonne data (possibly a truncation tower
// for G_a) and a multiplicative part held as a Galois module, with the
// Dieudonne avatar of its p-primary piece kept alongside for display.

struct GroupScheme {
    std::string name;
    long p = 2;
    int d = 1;

    DieudonneModule unipotent;               // finite part (top tower level for G_a)
    std::vector<DieudonneModule> unip_tower; // nonempty only for tower groups
    GammaModule mult;                        // full character module
    DieudonneModule mult_avatar;             // d_mu-style avatar of the p-part

    bool unip_is_tower() const { return !unip_tower.empty(); }
    const UnramRing& ring() const { return *ring_; }
    const UnramRing* ring_ = nullptr;
};

struct SchemeConfig {
    long p = 2;
    int d = 1;
    int precision = 0; // N; 0 = derive from the constructors
    int tower_cap = 4; // truncation tower length for G_a
};

GroupScheme gs_mu(const SchemeConfig& cfg, long n);
GroupScheme gs_constant(const SchemeConfig& cfg, long n);
GroupScheme gs_alpha(const SchemeConfig& cfg, long order); // order = p^r
GroupScheme gs_witt_kernel(const SchemeConfig& cfg, int m, int n);
GroupScheme gs_gm(const SchemeConfig& cfg);
GroupScheme gs_ga(const SchemeConfig& cfg);

// the Gamma-module of k-bar points of the etale-unipotent part, computed as
// ker(F - 1) on base changes, with a stabilization verdict
struct EtalePoints {
    GammaModule points;
    bool stabilized = true;
    int level = 1;
};
EtalePoints etale_points(const DieudonneModule& D, int level_cap);

// -- the tensor product -------------------------------------------------------

struct TensorConfig {
    int bound = 8;  // truncation B for the unipotent tensor
    int levels = 3; // field levels F_{q^m} for the pairing summand
};

struct UnipotentSummand {
    BoxastResult result;
    std::vector<BoxastResult> tower; // levelwise results for tower inputs
    bool tower_stabilized = true;
    std::string identification;
};

struct MultSummand {
    GammaModule module;
    std::string identification;
};

struct PairingSummand {
    EtaleTower tower;
    std::vector<GammaModule> levels; // as Gamma modules, one per F_{q^m}
    std::string identification;
};

struct TensorReport {
    std::string g1, g2;
    long p = 2;
    int d = 1;
    TensorConfig cfg;

    UnipotentSummand unip;
    MultSummand tor_piece;    // Z[1/p] (x) M1 * M2
    MultSummand hom_12;       // Hom^c(pi0(G1^u), M2)
    MultSummand hom_21;       // Hom^c(pi0(G2^u), M1)
    PairingSummand pairing;   // etale part of the unipotent (x) unipotent

    bool all_zero() const;
    bool fully_stabilized() const;
};

TensorReport tensor(const GroupScheme& G1, const GroupScheme& G2, const TensorConfig& cfg = {});

// -- characteristic 0 ---------------------------------------------------------

// Hopf-algebra side: (M1, V1) (x) (M2, V2) =
//   (M1 (x) M2, rk(M1) dim V2 + rk(M2) dim V1 + dim V1 dim V2), unit (Z, 0)
std::pair<GammaModule, long> char0_tensor_hopf(const GammaModule& M1, long dimV1,
                                               const GammaModule& M2, long dimV2);
// affine side: (Tor_Z(M1, M2), dim V1 * dim V2); (Z, 0) annihilates
std::pair<GammaModule, long> char0_tensor_affine(const GammaModule& M1, long dimV1,
                                                 const GammaModule& M2, long dimV2);

// -- rendering ----------------------------------------------------------------

// catalog identification; empty string when the isomorphism test does not
// certify a catalog name
std::string identify_dieudonne(const DieudonneModule& D);
std::string identify_mult(const GammaModule& M, long p, long q);

std::string render_report_text(const TensorReport& r);
std::string render_report_json(const TensorReport& r); // versioned schema

} // namespace gst

#endif
