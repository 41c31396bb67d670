#pragma once
// Closed forms: dimension tables, conductors, depths and genericity
// assignments for SL2(F) and U(1,1).

#include <map>
#include <string>
#include <vector>

#include "nf/whittaker.hpp"

namespace nf {

enum class Family {
    // SL2
    UnramPS,
    RamPS,
    Steinberg,
    RamPacket,
    UnramPacket,
    SCUnram2,
    SCUnram4,
    SCRam,
    // U(1,1)
    U11PS,
    U11Exceptional,
    U11St,
    U11Packet,
    U11SCRam,
    U11SCUnram,
};

const char* family_name(Family f);
Family parse_family(const std::string& s);
bool is_unitary(Family f);
bool is_supercuspidal(Family f);

struct ReprDescriptor {
    Family family = Family::UnramPS;
    int cchi = 0;             // c(chi) for RamPS, c(chibar|F^x) for U11PS
    bool chi2_trivial = false;  // RamPS: chi^2 trivial on O^x
    int level = 1;            // SC level l
    int rho0 = 0;             // U11SCUnram minimal depth
    int member = 1;           // packet member, see member_names
    std::string label() const;
};

std::vector<std::string> member_names(Family f);
std::string member_name(const ReprDescriptor& d);
// Throws std::invalid_argument for parameters outside the stated domains.
void validate(const ReprDescriptor& d);

int dim_formula(const ReprDescriptor& d, int m, Tower tower);

struct ConductorInfo {
    int conductor = 0;
    std::string achieving;
    int newform_dim = 1;
    Tower newform_tower = Tower::K;
};
ConductorInfo conductor_formula(const ReprDescriptor& d);

struct DepthInfo {
    Q depth;                 // rho for SL2, rho_0 for U(1,1)
    std::string relation;
    int sl2_conductor = -1;  // conductor of a restriction member (U(1,1) supercuspidals)
};
DepthInfo depth_relations(const ReprDescriptor& d);
// Descriptor of a G-member of the restriction of a U(1,1) supercuspidal.
ReprDescriptor sl2_restriction(const ReprDescriptor& d);

// a-class -> member name, only for the classes the closed forms state.
std::map<PsiClass, std::string> genericity_assignment(const ReprDescriptor& d);

struct DimRow {
    int m = 0;
    Tower tower = Tower::K;
    int dim = 0;
};

struct DimTable {
    ReprDescriptor descriptor;
    std::string eta_constraint;
    std::vector<DimRow> rows;
    ConductorInfo conductor;
    std::map<PsiClass, std::string> genericity;
};
DimTable dim_table(const ReprDescriptor& d, int m_lo, int m_hi);
std::string eta_constraint(const ReprDescriptor& d);

// Descriptors for the relation sweep: levels up to lmax, conductors up to cmax.
std::vector<ReprDescriptor> sweep_descriptors(int lmax, int cmax);
// Checks first non-zero row = conductor, non-negativity, depth relations and
// the U(1,1)/SL2 conductor equality; returns the failures.
std::vector<std::string> check_descriptor(const ReprDescriptor& d, int mmax);

}  // namespace nf
