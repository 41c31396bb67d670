#pragma once
// Principal series of SL2(F) and U(1,1)(F) realized on the finite projective
// line P^1(O/P^L): (eta, K_m)-fixed spaces, Steinberg, intertwining operator,
// packet splitting, theta-criterion and conductor search.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nf/characters.hpp"
#include "nf/cyclotomic.hpp"
#include "nf/groups.hpp"

namespace nf {

struct CentralObstruction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Tower { K, Kp };
const char* tower_name(Tower t);

// Which generators define the compact subgroup of the unitary model:
// Full = Kbar_m, SL2Only = K_m (used by the theta-criterion).
enum class GenSet { Full, SL2Only };
// K'_m either through f -> f(alpha g alpha^{-1}) or solved on its own
// congruence shape.
enum class KpMode { Transport, Direct };

struct PSData {
    Flavor flavor = Flavor::SL2;
    FieldChar chi;  // character of F^x (SL2) or E^x (U11)
    Backend backend() const { return chi.unit.G->R->backend; }
    int p() const { return chi.unit.G->R->p; }
    int f() const { return chi.unit.G->R->f; }
    int q() const { return chi.unit.G->R->q; }
    FieldChar chi_F() const;  // chi restricted to F^x
    std::string label() const;
};

// Row (c, d) / pi^s with c, d integral in the working ring.
struct Row {
    QElt c, d;
    int s = 0;
    int prec = 1 << 20;  // c, d known modulo P^prec
};

class FixedSpace;
using FixedSpacePtr = std::shared_ptr<const FixedSpace>;

class FixedSpace {
public:
    PSData data;
    UnitChar eta;
    int m = 0;
    Tower tower = Tower::K;
    KpMode kp_mode = KpMode::Transport;
    GenSet gens = GenSet::Full;
    int L = 0;      // points of P^1(O/P^L)
    int Nw = 0;     // working precision
    int M = 1;      // values lie in Q(zeta_M)[q^{+-1}]
    std::shared_ptr<const Ring> R;
    std::shared_ptr<const QuadRing> E;
    std::vector<int> comp;   // point -> basis index or -1
    std::vector<Mono> val;   // point -> value of that basis vector
    std::vector<int> reps;   // basis index -> representative point
    bool transported() const { return tower == Tower::Kp && kp_mode == KpMode::Transport; }

    size_t dim() const { return reps.size(); }
    size_t npoints() const { return comp.size(); }
    std::shared_ptr<const CycloCtx> ctx() const { return cyclo_ctx(M); }

    Row point_row(int pt) const;                 // bottom row of a group element at the point
    Row model_row(int pt) const;                 // representative row in the model
    int point_of(const Row& r, Mono& factor) const;  // f(g) = factor * F(point)
    // value of basis vector i at a row of g (applies the alpha twist if transported)
    std::optional<Mono> eval_basis(const Row& r, int& which) const;
    Cyclo eval(const CVec& coeffs, const Row& r) const;
    Row twist(const Row& r) const;               // bottom row of alpha g alpha^{-1}
    Row untwist(const Row& r) const;
    Row to_row(const GrpElem& g) const;
    Mono eta_value(const QElt& d) const;
    std::string summary() const;
};

struct PSVector {
    FixedSpacePtr space;
    CVec coeffs;
};

Cyclo mono_value(const std::shared_ptr<const CycloCtx>& ctx, Mono m, int q);
Cyclo lifted(const Cyclo& x, const std::shared_ptr<const CycloCtx>& ctx);  // zero if x is unset

PSVector basis_vector(FixedSpacePtr S, size_t i);
Cyclo evaluate(const PSVector& f, const GrpElem& g);

// eta(-1) = omega(-1), resp. eta|E^1 = chi|E^1
bool central_compatible(const PSData& data, const UnitChar& eta, GenSet gens = GenSet::Full);

// Solver; returns the zero space on central obstruction.
FixedSpacePtr solve_fixed_space(const PSData& data, const UnitChar& eta, int m, Tower tower = Tower::K,
                                KpMode mode = KpMode::Transport, GenSet gens = GenSet::Full);
// Same, rejecting centrally incompatible eta.
FixedSpacePtr fixed_space(const PSData& data, const UnitChar& eta, int m, Tower tower = Tower::K,
                          KpMode mode = KpMode::Transport, GenSet gens = GenSet::Full);

// Coordinates of a vector of `from` inside the span of `to` (same points),
// verified at every point; nullopt if not contained.
std::optional<CVec> coordinates_in(const FixedSpace& to, const FixedSpace& from, size_t i);

// ---------------------------------------------------------------- characters used by families

FieldChar trivial_char(UnitKind kind, Backend b, int p, int f);
FieldChar unramified_char(UnitKind kind, Backend b, int p, int f, RootOfUnity at_pi);
FieldChar abs_char(Backend b, int p, int f);  // |.|_F
UnitChar trivial_unit_char(UnitKind kind, Backend b, int p, int f, int n = 1);
UnitChar legendre(Backend b, int p, int f, int n = 1);

// ---------------------------------------------------------------- Steinberg

// Kernel of the averaging functional on pi(|.|)^{K_m}; coefficient vectors.
struct SubSpace {
    FixedSpacePtr ambient;
    std::vector<CVec> basis;
    size_t dim() const { return basis.size(); }
};
SubSpace steinberg_subspace(Backend b, int p, int f, int m, Tower tower = Tower::K);

// ---------------------------------------------------------------- intertwining operator

// Matrix of A on the basis of S: column i = coordinates of A f_i.
CMat intertwiner_matrix(const FixedSpace& S);

struct PacketSplit {
    FixedSpacePtr space;
    Cyclo lambda1;            // eigenvalue of A on member 1
    SubSpace member1, member2;
};
// Splits V^{K_m}_eta (or V^{K'_m}_eta) of a reducible principal series into
// the two packet members. lambda1 labels member 1.
PacketSplit packet_split(FixedSpacePtr S, const Cyclo& lambda1);
// Eigenvalue of A on the spherical vector (unramified packets).
Cyclo spherical_eigenvalue(const PSData& data);
// A square root of the scalar A^2 on a packet, inside Q(zeta_M).
Cyclo intertwiner_root(FixedSpacePtr S);

// ---------------------------------------------------------------- theta criterion

struct ThetaCheck {
    FixedSpacePtr sl2_space;   // V^{K_m}_{eta} with eta = etabar on O_F^x
    FixedSpacePtr direct;      // V^{Kbar_m}_{etabar}
    CMat theta;                // matrix of pi(theta) on sl2_space
    Cyclo eigenvalue;          // etabar(conj(eps_E)^{-1})
    std::vector<CVec> eigenspace;
    std::vector<CVec> direct_coords;
    bool equal = false;
};
ThetaCheck theta_criterion_space(const PSData& data, const UnitChar& etabar, int m);

// ---------------------------------------------------------------- conductor search

struct EtaConductor {
    UnitChar eta;
    int c_K = -1, c_Kp = -1;  // -1: nothing found up to the bound
    int c() const;
};
struct ConductorSearch {
    std::vector<EtaConductor> table;
    int conductor = -1;               // -1: bound reached
    std::vector<UnitChar> achieving;
    bool bound_reached() const { return conductor < 0; }
};
ConductorSearch eta_conductor_search(const PSData& data, int m_max, int eta_level = -1);

}  // namespace nf
