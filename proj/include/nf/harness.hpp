#pragma once
// Brute-force realizations of the closed-form families and the verification
// suites shared by the command line tool and the acceptance binary.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nf/formulas.hpp"
#include "nf/supercuspidal.hpp"

namespace nf {

struct RingParams {
    Backend backend = Backend::Mixed;
    int p = 3;
    int f = 1;
    int q() const;
};

enum class Method { None, FixedSpace, Steinberg, Packet, Mackey };
const char* method_name(Method m);

// A concrete representation of a family, used for brute-force dimensions.
struct Realization {
    ReprDescriptor desc;  // cchi / chi2_trivial inferred from the chosen character
    RingParams ring;
    Method method = Method::None;
    std::string note;     // why brute force is unavailable, or the character used
    PSData data;
    UnitChar eta;
    Cyclo lambda1;        // packet member 1 eigenvalue
    LevelOneDatum sc;
    bool swap_towers = false;  // primed supercuspidal members
    std::vector<UnitChar> sc_etas;
};

// Character literals: trivial, legendre, omega_EF, unramified:zeta=M:a, table:<id>.
// table ids index enumerate_unit_chars at level `level`.
FieldChar parse_char_literal(const std::string& lit, UnitKind kind, const RingParams& r, int level);

Realization realize(const ReprDescriptor& d, const RingParams& r, const std::string& chi_literal = "");

// Throws GuardError when the computation exceeds the point budget.
std::optional<int> brute_dim(const Realization& R, int m, Tower t, MackeyResult* explain = nullptr,
                             u64 point_guard = 2000000);

// Fixed space of a packet member, or of the whole space for irreducible families.
std::optional<SubSpace> member_space(const Realization& R, int m, Tower t);
// a-genericity detected on the fixed spaces at levels c and c+1 on both towers.
std::optional<std::map<PsiClass, bool>> brute_genericity(const Realization& R);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0;
    double target_seconds = 0;
    bool pass() const;
    void add(const std::string& name, bool ok, const std::string& detail = "");
};

struct SuiteOptions {
    std::vector<int> qs = {3, 5};
    int max_m = 3;
};

// Acceptance criteria 1..10.
SuiteResult criterion(int n, const SuiteOptions& opt = {});
std::string criterion_title(int n);
// verify subcommand suites: principal-series, theta-crosscheck, whittaker,
// supercuspidal, formulas, properties.
std::vector<SuiteResult> verify_suite(const std::string& suite, const SuiteOptions& opt);

}  // namespace nf
