#include "nf/formulas.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nf {

namespace {

struct FamilyInfo {
    Family f;
    const char* name;
};

const FamilyInfo kFamilies[] = {
    {Family::UnramPS, "unram-ps"},       {Family::RamPS, "ram-ps"},
    {Family::Steinberg, "steinberg"},    {Family::RamPacket, "ram-packet"},
    {Family::UnramPacket, "unram-packet"}, {Family::SCUnram2, "sc2"},
    {Family::SCUnram4, "sc4"},           {Family::SCRam, "sc-ram"},
    {Family::U11PS, "u11-ps"},           {Family::U11Exceptional, "u11-exceptional"},
    {Family::U11St, "u11-st"},           {Family::U11Packet, "u11-unram-ps"},
    {Family::U11SCRam, "u11-sc-ram"},    {Family::U11SCUnram, "u11-sc-unram"},
};

// floor and ceiling of a/2 for any integer a
int floor2(int a) { return a >= 0 ? a / 2 : -((1 - a) / 2); }
int ceil2(int a) { return -floor2(-a); }

bool is_kp(Tower t) { return t == Tower::Kp; }

Q half(int n) {
    Q r(n, 2);
    r.canonicalize();
    return r;
}

}  // namespace

const char* family_name(Family f) {
    for (auto& i : kFamilies)
        if (i.f == f) return i.name;
    return "?";
}

Family parse_family(const std::string& s) {
    for (auto& i : kFamilies)
        if (s == i.name) return i.f;
    throw std::invalid_argument("unknown family '" + s + "'");
}

bool is_unitary(Family f) {
    switch (f) {
        case Family::U11PS:
        case Family::U11Exceptional:
        case Family::U11St:
        case Family::U11Packet:
        case Family::U11SCRam:
        case Family::U11SCUnram: return true;
        default: return false;
    }
}

bool is_supercuspidal(Family f) {
    switch (f) {
        case Family::SCUnram2:
        case Family::SCUnram4:
        case Family::SCRam:
        case Family::U11SCRam:
        case Family::U11SCUnram: return true;
        default: return false;
    }
}

std::vector<std::string> member_names(Family f) {
    switch (f) {
        case Family::RamPacket:
        case Family::UnramPacket:
        case Family::SCRam: return {"pi1", "pi2"};
        case Family::SCUnram2: return {"pi", "pi'"};
        case Family::SCUnram4: return {"pi1", "pi1'", "pi2", "pi2'"};
        case Family::U11Packet: return {"pibar1", "pibar2"};
        case Family::U11SCUnram: return {"pibar", "pibar'"};
        default: return {is_unitary(f) ? "pibar" : "pi"};
    }
}

std::string member_name(const ReprDescriptor& d) { return member_names(d.family).at(d.member - 1); }

std::string ReprDescriptor::label() const {
    std::ostringstream s;
    s << family_name(family);
    switch (family) {
        case Family::RamPS: s << "(c=" << cchi << (chi2_trivial ? ",chi^2=1" : "") << ")"; break;
        case Family::U11PS: s << "(c=" << cchi << ")"; break;
        case Family::SCUnram2:
        case Family::SCRam:
        case Family::U11SCRam: s << "(l=" << level << ")"; break;
        case Family::U11SCUnram: s << "(rho0=" << rho0 << ")"; break;
        default: break;
    }
    if (member_names(family).size() > 1) s << "[" << member_name(*this) << "]";
    return s.str();
}

void validate(const ReprDescriptor& d) {
    int n = (int)member_names(d.family).size();
    if (d.member < 1 || d.member > n) throw std::invalid_argument("member index out of range");
    switch (d.family) {
        case Family::RamPS:
            if (d.cchi < 1) throw std::invalid_argument("ramified principal series needs c(chi) >= 1");
            if (d.chi2_trivial && d.cchi != 1) throw std::invalid_argument("chi^2 trivial on units forces c(chi) = 1");
            break;
        case Family::U11PS:
            if (d.cchi < 0) throw std::invalid_argument("conductor must be non-negative");
            break;
        case Family::SCUnram2:
        case Family::SCRam:
        case Family::U11SCRam:
            if (d.level < 1) throw std::invalid_argument("level must be at least 1");
            break;
        case Family::SCUnram4:
            if (d.level != 1) throw std::invalid_argument("cardinality-four packets have level 1");
            break;
        case Family::U11SCUnram:
            if (d.rho0 < 0) throw std::invalid_argument("minimal depth must be non-negative");
            break;
        default: break;
    }
}

int dim_formula(const ReprDescriptor& d, int m, Tower tower) {
    validate(d);
    if (m < 0) throw std::invalid_argument("m must be non-negative");
    const bool kp = is_kp(tower);
    switch (d.family) {
        case Family::UnramPS: return m == 0 ? 1 : 2 * m;
        case Family::Steinberg: return m == 0 ? 0 : 2 * m - 1;
        case Family::RamPS: {
            const int c = d.cchi;
            if (d.chi2_trivial) return m == 0 ? 0 : 2 * m;
            if (m < c) return 0;
            if (m == c) return 1;
            return 2 * (m - c) + 1;
        }
        case Family::RamPacket: return m;
        case Family::UnramPacket: {
            // member 1 on K equals member 2 on K'
            const bool first = (d.member == 1) != kp;
            if (m == 0) return first ? 1 : 0;
            return first ? 2 * floor2(m) + 1 : 2 * floor2(m - 1) + 1;
        }
        case Family::SCUnram2: {
            const int l = d.level;
            if (m <= 2 * l - 1) return 0;
            const int big = 2 * ceil2(m - 2 * l + 1), small = 2 * floor2(m - 2 * l + 1);
            // l odd: pi on K' and pi' on K get the larger value
            const bool pi = d.member == 1;
            const bool larger = (l % 2 == 1) ? (pi == kp) : (pi != kp);
            return larger ? big : small;
        }
        case Family::SCUnram4: {
            if (m <= 1) return 0;
            const bool primed = d.member == 2 || d.member == 4;
            return (primed != kp) ? ceil2(m - 1) : floor2(m - 1);
        }
        case Family::SCRam: return m <= 2 * d.level ? 0 : m - 2 * d.level;
        case Family::U11PS: return std::max(m - d.cchi + 1, 0);
        case Family::U11Exceptional: return m == 0 ? 0 : m + 1;
        case Family::U11St: return std::max(m, 0);
        case Family::U11Packet: {
            const bool first = (d.member == 1) != kp;
            return first ? ceil2(m + 1) : ceil2(m);
        }
        case Family::U11SCRam: return std::max(m - (2 * d.level + 1) + 1, 0);
        case Family::U11SCUnram: {
            const int c = 2 * d.rho0 + 2;
            const int big = std::max(ceil2(m - c + 1), 0), small = std::max(ceil2(m - c - 1), 0);
            const bool pibar = d.member == 1;
            // rho0 odd: pibar on Kbar and pibar' on Kbar' get the larger value
            const bool larger = (d.rho0 % 2 == 1) ? (pibar != kp) : (pibar == kp);
            return larger ? big : small;
        }
    }
    throw std::logic_error("unhandled family");
}

ConductorInfo conductor_formula(const ReprDescriptor& d) {
    validate(d);
    ConductorInfo c;
    switch (d.family) {
        case Family::UnramPS: c.conductor = 0; c.achieving = "eta trivial"; break;
        case Family::Steinberg: c.conductor = 1; c.achieving = "eta trivial"; break;
        case Family::RamPS: c.conductor = d.cchi; c.achieving = "eta = chi^{+-1} on O^x"; break;
        case Family::RamPacket: c.conductor = 1; c.achieving = "eta = omega_{E'/F}"; break;
        case Family::UnramPacket: c.conductor = 0; c.achieving = "eta trivial"; break;
        case Family::SCUnram2:
            c.conductor = 2 * d.level;
            c.achieving = "eta(-1) = omega(-1), c(eta) <= " + std::to_string(d.level);
            break;
        case Family::SCUnram4: c.conductor = 2; c.achieving = "eta(-1) = omega(-1), c(eta) <= 1"; break;
        case Family::SCRam:
            c.conductor = 2 * d.level + 1;
            c.achieving = "eta(-1) = omega(-1), c(eta) <= " + std::to_string(d.level);
            break;
        case Family::U11PS: c.conductor = d.cchi; c.achieving = "etabar = chibar or s-chibar^{-1} on O_E^x"; break;
        case Family::U11Exceptional: c.conductor = 1; c.achieving = "etabar = chibar = s-chibar^{-1} on O_E^x"; break;
        case Family::U11St: c.conductor = 1; c.achieving = "etabar = chibar or s-chibar^{-1} on O_E^x"; break;
        case Family::U11Packet: c.conductor = 0; c.achieving = "etabar = chibar on O_E^x"; break;
        case Family::U11SCRam:
            c.conductor = 2 * d.level + 1;
            c.achieving = "etabar|E^1 = omega, c(etabar|O_F^x) <= rho0 + 1/2";
            break;
        case Family::U11SCUnram:
            c.conductor = 2 * d.rho0 + 2;
            c.achieving = "etabar|E^1 = omega, c(etabar|O_F^x) <= rho0 + 1";
            break;
    }
    int dk = dim_formula(d, c.conductor, Tower::K), dkp = dim_formula(d, c.conductor, Tower::Kp);
    c.newform_tower = dk >= dkp ? Tower::K : Tower::Kp;
    c.newform_dim = std::max(dk, dkp);
    return c;
}

ReprDescriptor sl2_restriction(const ReprDescriptor& d) {
    validate(d);
    ReprDescriptor r;
    switch (d.family) {
        case Family::U11SCRam:
            r.family = Family::SCRam;
            r.level = d.level;
            return r;
        case Family::U11SCUnram:
            r.family = Family::SCUnram2;
            r.level = d.rho0 + 1;
            return r;
        default: throw std::invalid_argument("restriction descriptor is defined for U(1,1) supercuspidals");
    }
}

DepthInfo depth_relations(const ReprDescriptor& d) {
    const int c = conductor_formula(d).conductor;
    DepthInfo out;
    if (!is_unitary(d.family)) {
        if (is_supercuspidal(d.family)) {
            out.depth = std::max(half(c - 2), Q(0));
            out.relation = "rho = max{(c-2)/2, 0}";
        } else {
            out.depth = std::max(c - 1, 0);
            out.relation = "rho = max{c-1, 0}";
        }
        return out;
    }
    if (!is_supercuspidal(d.family)) {
        out.relation = "none stated";
        out.depth = -1;
        return out;
    }
    out.depth = half(c - 2);
    out.relation = "rho0 = (c-2)/2";
    out.sl2_conductor = conductor_formula(sl2_restriction(d)).conductor;
    return out;
}

std::map<PsiClass, std::string> genericity_assignment(const ReprDescriptor& d) {
    validate(d);
    auto n = member_names(d.family);
    const PsiClass one = PsiClass::One, eps = PsiClass::Eps, pi = PsiClass::Pi, epi = PsiClass::EpsPi;
    switch (d.family) {
        case Family::RamPacket:
        case Family::SCRam: return {{one, n[0]}, {eps, n[1]}};
        case Family::UnramPacket: return {{one, n[0]}, {eps, n[0]}, {pi, n[1]}, {epi, n[1]}};
        case Family::SCUnram4: return {{one, n[1]}, {pi, n[0]}, {eps, n[3]}, {epi, n[2]}};
        case Family::SCUnram2:
            // l even: pi is psi-generic, pi' is psi_pi-generic; l odd: swapped
            if (d.level % 2 == 0) return {{one, n[0]}, {pi, n[1]}};
            return {{one, n[1]}, {pi, n[0]}};
        case Family::U11Packet: return {{one, n[0]}, {pi, n[1]}};
        case Family::U11SCUnram:
            if (d.rho0 % 2 == 1) return {{one, n[0]}, {pi, n[1]}};
            return {{one, n[1]}, {pi, n[0]}};
        default: return {{one, n[0]}};
    }
}

std::string eta_constraint(const ReprDescriptor& d) {
    switch (d.family) {
        case Family::UnramPS:
        case Family::Steinberg:
        case Family::UnramPacket: return "eta trivial";
        case Family::RamPS: return "eta = chi on O^x";
        case Family::RamPacket: return "eta = omega_{E'/F}";
        default: return conductor_formula(d).achieving;
    }
}

DimTable dim_table(const ReprDescriptor& d, int m_lo, int m_hi) {
    if (m_lo < 0 || m_hi < m_lo) throw std::invalid_argument("bad m range");
    DimTable t;
    t.descriptor = d;
    t.eta_constraint = eta_constraint(d);
    for (int m = m_lo; m <= m_hi; ++m)
        for (Tower tw : {Tower::K, Tower::Kp}) t.rows.push_back({m, tw, dim_formula(d, m, tw)});
    t.conductor = conductor_formula(d);
    t.genericity = genericity_assignment(d);
    return t;
}

std::vector<ReprDescriptor> sweep_descriptors(int lmax, int cmax) {
    std::vector<ReprDescriptor> out;
    auto add = [&](Family f, auto&& set) {
        int n = (int)member_names(f).size();
        for (int k = 1; k <= n; ++k) {
            ReprDescriptor d;
            d.family = f;
            d.member = k;
            set(d);
            out.push_back(d);
        }
    };
    auto none = [](ReprDescriptor&) {};
    add(Family::UnramPS, none);
    add(Family::Steinberg, none);
    for (int c = 1; c <= cmax; ++c) add(Family::RamPS, [c](ReprDescriptor& d) { d.cchi = c; });
    add(Family::RamPS, [](ReprDescriptor& d) {
        d.cchi = 1;
        d.chi2_trivial = true;
    });
    add(Family::RamPacket, none);
    add(Family::UnramPacket, none);
    for (int l = 1; l <= lmax; ++l) {
        add(Family::SCUnram2, [l](ReprDescriptor& d) { d.level = l; });
        add(Family::SCRam, [l](ReprDescriptor& d) { d.level = l; });
        add(Family::U11SCRam, [l](ReprDescriptor& d) { d.level = l; });
        add(Family::U11SCUnram, [l](ReprDescriptor& d) { d.rho0 = l - 1; });
    }
    add(Family::SCUnram4, none);
    for (int c = 0; c <= cmax; ++c) add(Family::U11PS, [c](ReprDescriptor& d) { d.cchi = c; });
    add(Family::U11Exceptional, none);
    add(Family::U11St, none);
    add(Family::U11Packet, none);
    return out;
}

std::vector<std::string> check_descriptor(const ReprDescriptor& d, int mmax) {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& s) { bad.push_back(d.label() + ": " + s); };
    const ConductorInfo ci = conductor_formula(d);
    int first = -1;
    for (int m = 0; m <= mmax; ++m)
        for (Tower tw : {Tower::K, Tower::Kp}) {
            int v = dim_formula(d, m, tw);
            if (v < 0) fail("negative dimension at m = " + std::to_string(m));
            if (v > 0 && first < 0) first = m;
        }
    if (first != ci.conductor) fail("first non-zero row " + std::to_string(first) + " != conductor " + std::to_string(ci.conductor));
    const DepthInfo di = depth_relations(d);
    const int c = ci.conductor;
    if (!is_unitary(d.family)) {
        Q want = is_supercuspidal(d.family) ? std::max(half(c - 2), Q(0)) : Q(std::max(c - 1, 0));
        if (di.depth != want) fail("depth relation");
    } else if (is_supercuspidal(d.family)) {
        if (di.depth != half(c - 2)) fail("minimal depth relation");
        if (di.sl2_conductor != c) fail("U(1,1) conductor differs from the SL2 conductor");
    }
    return bad;
}

}  // namespace nf
