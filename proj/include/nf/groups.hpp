#pragma once
// SL2 and U(1,1) over truncated rings: Laurent matrices, filtration subgroups,
// finite quotients, double cosets with stabilizers, Iwasawa decomposition.

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "nf/local_rings.hpp"

namespace nf {

enum class Flavor { SL2, U11, GL2 };
const char* flavor_name(Flavor f);

// 2x2 matrix with Laurent entries in E (SL2 elements have entries in F).
struct GrpElem {
    Flavor flavor = Flavor::SL2;
    QuadElem a, b, c, d;
    GrpElem operator*(const GrpElem& o) const;
    GrpElem inverse() const;
    QuadElem det() const { return a * d - b * c; }
    int precision() const;  // least absolute precision among the entries
    std::string str() const;
};

GrpElem grp_elem(Flavor fl, std::shared_ptr<const QuadRing> E, const RElem& a, const RElem& b, const RElem& c, const RElem& d);
GrpElem grp_elem(Flavor fl, const QuadElem& a, const QuadElem& b, const QuadElem& c, const QuadElem& d);
bool satisfies_relation(const GrpElem& g);  // ad - bc = 1, resp. the unitary relation

enum class SubTag { K, Kp, Kbar, Kbarp, BK0, BbarK0, Iwahori, Principal, N, Nbar, T0bar, Zbar };

struct SubgroupSpec {
    SubTag tag;
    int param = 0;
    std::string str() const;
};

bool membership(const GrpElem& g, const SubgroupSpec& S);

struct Constants {
    GrpElem alpha, beta, gamma, theta, w;
};
Constants constants(std::shared_ptr<const QuadRing> E);

struct Iwasawa {
    QuadElem t;   // torus coordinate
    QuadElem x;   // upper entry of the Borel factor
    GrpElem b;    // Borel factor
    GrpElem k;    // in K_0 (resp. Kbar_0)
    int e;        // |t| = q^{-e}
};
// g = b k, pivot on the bottom row entry of least valuation (ties: d).
Iwasawa iwasawa(const GrpElem& g);

// ---------------------------------------------------------------- finite groups

struct FMat {
    QElt a, b, c, d;
    bool operator==(const FMat&) const = default;
};

class FiniteGroup {
public:
    Flavor flavor;
    std::shared_ptr<const QuadRing> E;  // precision m
    int m;
    std::vector<FMat> elems;
    std::unordered_map<u64, int> index;

    size_t size() const { return elems.size(); }
    u64 key(const FMat& x) const;
    int find(const FMat& x) const;
    FMat mul(const FMat& x, const FMat& y) const;
    FMat inv(const FMat& x) const;
    FMat identity() const;
    FMat reduce(const GrpElem& g) const;  // integral g mod P^m
    bool is_member(const FMat& x) const;  // defining relation mod P^m
};

std::shared_ptr<const FiniteGroup> enumerate_group(Flavor fl, Backend b, int p, int f, int m);

// finite-level membership of the subgroups that live inside K_0 mod P^m
bool fmembership(const FiniteGroup& G, const FMat& x, const SubgroupSpec& S);

// Subgroup of G given by a membership predicate, with a small generating set.
struct FSubgroup {
    std::vector<int> elems;  // positions in G
    std::vector<int> gens;
};
FSubgroup subgroup(const FiniteGroup& G, const std::function<bool(const FMat&)>& pred);
FSubgroup subgroup(const FiniteGroup& G, const SubgroupSpec& S);

struct StabPair {
    FMat b, k;  // b g k = g
};
struct DoubleCoset {
    int rep;  // position in G
    size_t orbit_size;
    std::vector<StabPair> stabilizer;
};
struct DoubleCosetSet {
    std::vector<DoubleCoset> cosets;
    size_t total() const;
};
DoubleCosetSet double_cosets(const FiniteGroup& G, const FSubgroup& left, const FSubgroup& right, bool with_stabilizers = true);

}  // namespace nf
