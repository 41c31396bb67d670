#pragma once
// Level-1 supercuspidals of SL2(F): cuspidal characters of GL2(F_q), their
// restrictions to SL2(F_q), and Mackey sums for ind_K^G(sigma) on K_m, K'_m.

#include <memory>
#include <string>
#include <vector>

#include "nf/characters.hpp"
#include "nf/principal_series.hpp"

namespace nf {

// 2x2 matrix over F_q, entries are residue indices.
struct Mat2F {
    int a = 1, b = 0, c = 0, d = 1;
    bool operator==(const Mat2F&) const = default;
};

// Arithmetic in GL2(F_q) and the quadratic extension F_{q^2}.
class ResidueGL2 {
public:
    ResidueGL2(Backend b, int p, int f);
    std::shared_ptr<const Ring> R1;
    std::shared_ptr<const QuadRing> E1;
    const FiniteField& k() const { return *R1->k; }
    int q() const { return R1->q; }
    Mat2F mul(const Mat2F& x, const Mat2F& y) const;
    Mat2F inv(const Mat2F& x) const;
    int det(const Mat2F& x) const;
    int key(const Mat2F& x) const { return ((x.a * q() + x.b) * q() + x.c) * q() + x.d; }
    Mat2F from_key(int key) const;
    std::vector<Mat2F> gl2() const;
    std::vector<Mat2F> sl2() const;
    QElt residue_ext(int a, int b) const { return {R1->constant(a), R1->constant(b)}; }
};

enum class ClassKind { Central, CentralUnipotent, Split, Elliptic };
const char* class_kind_name(ClassKind k);

struct GL2Class {
    ClassKind kind = ClassKind::Central;
    Mat2F rep;
    long size = 0;
    Cyclo value;
};

struct CuspidalCharData {
    std::shared_ptr<const ResidueGL2> G;
    UnitChar theta;  // character of F_{q^2}^x
    std::shared_ptr<const CycloCtx> ctx;
    std::vector<GL2Class> classes;
    std::vector<int> class_of_key;  // matrix key -> class, -1 off GL2
    int dimension = 0;
    int omega_minus1 = 1;  // central character at -1
    bool splits = false;
    // values on SL2(F_q) by matrix key: the restriction, then the two
    // constituents in the split case (constituent 0 is psi-bar generic)
    std::vector<Cyclo> restriction;
    std::vector<std::vector<Cyclo>> constituents;
    std::vector<bool> constituent_generic;

    Cyclo value(const Mat2F& g) const;
    int q() const { return G->q(); }
    std::string label() const { return theta.label(); }
};

bool is_regular(const UnitChar& theta);
CuspidalCharData cuspidal_character(std::shared_ptr<const ResidueGL2> G, const UnitChar& theta);
// One regular theta from each Frobenius orbit.
std::vector<UnitChar> regular_orbit_reps(Backend b, int p, int f);

// Inner products of class functions on GL2(F_q) or SL2(F_q).
Q inner_gl2(const CuspidalCharData& s, const CuspidalCharData& t);
Q inner_sl2(const ResidueGL2& G, const std::vector<Cyclo>& x, const std::vector<Cyclo>& y);

// A level-1 datum: the full restriction (constituent -1) or one constituent.
struct LevelOneDatum {
    std::shared_ptr<const CuspidalCharData> sigma;
    int constituent = -1;
    const std::vector<Cyclo>& values() const;
    int dimension() const;
};

struct MackeyCell {
    int shell = 0;         // Cartan shell n
    int distance = 0;      // tree distance D of the coset vertex (2n on K, 2n+1 on K')
    std::string point;     // orbit root in P^1(O/P^D)
    u64 orbit_size = 0;
    size_t image_size = 0;  // |image of K^g cap K_m|
    long contribution = 0;
};

struct MackeyResult {
    int dim = 0;
    int shells = 0;  // shells scanned
    std::vector<MackeyCell> cells;  // cells with non-zero contribution
};

struct MackeyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dim Hom_{K_m}(eta, ind_K^G sigma) on K, or on K'_m for tower Kp.
MackeyResult mackey_dims(const LevelOneDatum& sigma, const UnitChar& eta, int m, Tower tower,
                         u64 point_guard = 10000000);

enum class PacketKind { Unram2, Unram4, Ram2 };
const char* packet_kind_name(PacketKind k);

struct PacketDescriptor {
    PacketKind kind = PacketKind::Unram2;
    int level = 1;
    int cardinality = 2;
    int conductor = 2;
    std::vector<std::string> members;
};

PacketDescriptor packet_taxonomy(const CuspidalCharData& sigma, int level = 1);
PacketDescriptor ramified_descriptor(int level);

// Admissible eta of conductor at most cmax: eta(-1) = omega(-1).
std::vector<UnitChar> admissible_etas(const CuspidalCharData& sigma, int cmax);

}  // namespace nf
