#pragma once
// Unit groups (O/P^n)^x and (O_E/P^n)^x in Smith normal form, their
// characters, characters of F^x and E^x, and the additive character psi.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nf/cyclotomic.hpp"
#include "nf/local_rings.hpp"

namespace nf {

struct RootOfUnity {
    int M = 1;
    int a = 0;
    RootOfUnity() = default;
    RootOfUnity(int M_, long a_) : M(M_), a((int)(((a_ % M_) + M_) % M_)) {}
    RootOfUnity operator*(const RootOfUnity& o) const;
    RootOfUnity inverse() const { return {M, -a}; }
    RootOfUnity pow(long e) const { return {M, (long)a * e}; }
    bool is_one() const { return a == 0; }
    int in_order(int N) const;  // exponent relative to zeta_N; N a multiple of the reduced order
    int reduced_order() const;
    bool operator==(const RootOfUnity& o) const;
};

enum class UnitKind { F, E };

// Finite abelian group of units of O/P^n or O_E/P^n.
class UnitGroup {
public:
    UnitGroup(UnitKind kind, Backend b, int p, int f, int n);
    UnitKind kind;
    std::shared_ptr<const Ring> R;       // precision n
    std::shared_ptr<const QuadRing> E;   // set for kind E
    int n;
    size_t size() const { return elems.size(); }
    std::vector<u64> elems;              // canonical indices
    std::vector<int> pos;                // canonical index -> position, -1 for non-units
    std::vector<int> d;                  // invariant factors (> 1)
    int exponent = 1;
    std::vector<int> dlog;               // position * d.size() + i
    std::vector<u64> snf_gens;           // canonical indices of the SNF generators
    int level(int position) const;       // valuation of (x - 1), n for x = 1
    u64 mul_index(u64 x, u64 y) const;   // product of canonical indices
    int position_of_raw(const Ring& S, u64 x) const;   // kind F
    int position_of_raw(const QuadRing& S, QElt x) const;  // kind E
};

std::shared_ptr<const UnitGroup> unit_group(UnitKind kind, Backend b, int p, int f, int n);

class UnitChar {
public:
    UnitChar() = default;
    std::shared_ptr<const UnitGroup> G;
    std::vector<int> a;      // SNF coordinates
    int order = 1;
    std::vector<int> table;  // position -> exponent mod order
    int conductor = 0;

    int n() const { return G->n; }
    RootOfUnity at(int position) const { return {order, table[position]}; }
    RootOfUnity eval(const Ring& S, u64 x) const;
    RootOfUnity eval(const QuadRing& S, QElt x) const;
    RootOfUnity eval(const RElem& x) const;
    UnitChar operator*(const UnitChar& o) const;
    UnitChar inverse() const;
    UnitChar pow(long e) const;
    bool is_trivial() const { return order == 1; }
    bool operator==(const UnitChar& o) const { return G == o.G && a == o.a; }
    std::string label() const;
};

UnitChar char_from_coords(std::shared_ptr<const UnitGroup> G, std::vector<int> a);
// Builds the character with the given values, verifying multiplicativity.
UnitChar char_from_values(std::shared_ptr<const UnitGroup> G, const std::function<RootOfUnity(int)>& value);
int conductor(const UnitChar& chi);

std::vector<UnitChar> enumerate_unit_chars(UnitKind kind, Backend b, int p, int f, int n);
std::vector<UnitChar> enumerate_unit_chars(const Ring& R, int n);

// Characters of F^x (kind F) or E^x (kind E): chi(pi^v u) = chi(pi)^v unit(u),
// chi(pi) = zeta_M^a q^qgrade.
struct FieldChar {
    UnitChar unit;
    RootOfUnity at_pi;
    int qgrade = 0;
    UnitKind kind() const { return unit.G->kind; }
    int conductor() const { return unit.conductor; }
    FieldChar operator*(const FieldChar& o) const;
    FieldChar inverse() const;
    std::string label() const;
};

int conductor(const FieldChar& chi);

// restriction and extension
UnitChar restrict_to_F(const UnitChar& chiE);
FieldChar restrict_to_F(const FieldChar& chiE);
std::vector<int> norm_one_positions(const UnitGroup& G);  // E^1 inside (O_E/P^n)^x
UnitChar galois_twist(const UnitChar& chiE);               // u -> chi(conj u)
// All characters of G restricting to omega on the positions H.
std::vector<UnitChar> enumerate_extensions(std::shared_ptr<const UnitGroup> G, const std::vector<int>& H,
                                           const std::function<RootOfUnity(int)>& omega);
// Re-express a unit character on a group of another level (n' >= conductor).
UnitChar change_level(const UnitChar& chi, int n2);

// psi_a(x) with psi trivial on O and non-trivial on P^{-1}.
RootOfUnity psi_eval(const RElem& a, const RElem& x);

int lcm_int(int a, int b);

}  // namespace nf
