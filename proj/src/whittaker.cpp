#include "nf/whittaker.hpp"

#include <algorithm>

namespace nf {

const char* psi_class_name(PsiClass a) {
    switch (a) {
        case PsiClass::One: return "psi";
        case PsiClass::Eps: return "psi_eps";
        case PsiClass::Pi: return "psi_pi";
        case PsiClass::EpsPi: return "psi_eps_pi";
    }
    return "?";
}

PsiClass parse_psi_class(const std::string& s) {
    for (PsiClass a : {PsiClass::One, PsiClass::Eps, PsiClass::Pi, PsiClass::EpsPi})
        if (s == psi_class_name(a)) return a;
    if (s == "1") return PsiClass::One;
    if (s == "eps") return PsiClass::Eps;
    if (s == "pi") return PsiClass::Pi;
    if (s == "eps_pi") return PsiClass::EpsPi;
    throw std::invalid_argument("unknown psi scaling '" + s + "'");
}

RElem psi_scaling(std::shared_ptr<const Ring> R, PsiClass a) {
    RElem eps = RElem::from_raw(R, R->eps);
    switch (a) {
        case PsiClass::One: return RElem(R, 1);
        case PsiClass::Eps: return eps;
        case PsiClass::Pi: return RElem::pi_power(R, 1);
        case PsiClass::EpsPi: return eps * RElem::pi_power(R, 1);
    }
    return RElem(R, 1);
}

CVec whittaker_partial(const FixedSpace& S, PsiClass a, int r, const RElem* shift) {
    const size_t n = S.dim();
    if (n == 0) return {};
    if (shift && r < 1) throw std::invalid_argument("whittaker: shifted sums need r >= 1");
    if (S.Nw - r < S.L + 1) throw PrecisionError("whittaker radius exceeds the working precision");
    auto R = S.R;
    RElem av = psi_scaling(R, a);
    RElem pir = RElem::pi_power(R, r), pimr = RElem::pi_power(R, -r);
    const u64 npts = R->qpow(r);
    struct Term {
        int which;
        Mono f;
        RootOfUnity psi;
    };
    std::vector<Term> terms;
    terms.reserve(npts);
    int M2 = S.M;
    for (u64 zi = 0; zi < npts; ++zi) {
        u64 z = R->from_index(zi);
        RElem x = pimr * RElem::from_raw(R, z);
        u64 d = z;
        if (shift) d = ((x + *shift) * pir).raw();
        Row row{{R->pi_pow(r), 0}, {d, 0}, r, S.Nw};
        int which;
        auto v = S.eval_basis(row, which);
        if (!v) continue;
        RootOfUnity ps = psi_eval(av, x).inverse();
        M2 = lcm_int(M2, ps.M);
        terms.push_back({which, *v, ps});
    }
    std::vector<MonoSum> acc(n);
    const int scale = M2 / S.M;
    for (auto& t : terms) acc[t.which].add({(t.f.k * scale + t.psi.in_order(M2)) % M2, t.f.e});
    auto ctx = cyclo_ctx(M2);
    CVec out(n);
    for (size_t i = 0; i < n; ++i) out[i] = acc[i].value(ctx, S.data.q());
    return out;
}

namespace {

bool same_values(const CVec& x, const CVec& y) {
    for (size_t i = 0; i < x.size(); ++i) {
        auto ctx = cyclo_ctx(lcm_int(x[i].order(), y[i].order()));
        if (lifted(x[i], ctx) != lifted(y[i], ctx)) return false;
    }
    return true;
}

}  // namespace

WhittakerRow whittaker_row(const FixedSpace& S, PsiClass a) {
    WhittakerRow out;
    out.a = a;
    if (S.dim() == 0) return out;
    const int c = std::max(S.data.chi.conductor(), S.eta.conductor);
    const bool wide = a == PsiClass::Pi || a == PsiClass::EpsPi;
    // beyond this radius every shell is a vanishing Gauss sum
    const int floor_r = std::max(S.m + (S.tower == Tower::Kp ? 1 : 0), c + 2) + (wide ? 1 : 0);
    const int cap = S.m + c + 3;
    const int last = std::min(floor_r + 1, cap + 1);
    std::vector<CVec> sums;
    for (int r = 0; r <= last; ++r) sums.push_back(whittaker_partial(S, a, r));
    int star = last;
    while (star > 0 && same_values(sums[star - 1], sums[last])) --star;
    if (star >= last) throw StabilizationError("whittaker sums did not stabilize within the cap");
    out.radius = star;
    out.values = sums[star];
    return out;
}

WhittakerValue whittaker_value(const PSVector& f, PsiClass a) {
    WhittakerRow row = whittaker_row(*f.space, a);
    WhittakerValue out;
    out.a = a;
    out.radius = row.radius;
    int M = f.space->M;
    for (auto& v : row.values) M = lcm_int(M, v.order());
    auto ctx = cyclo_ctx(M);
    out.value = Cyclo(ctx);
    for (size_t i = 0; i < row.values.size(); ++i) out.value += lifted(f.coeffs[i], ctx) * lifted(row.values[i], ctx);
    return out;
}

SubSpace full_subspace(FixedSpacePtr S) {
    SubSpace V{S, {}};
    for (size_t i = 0; i < S->dim(); ++i) V.basis.push_back(basis_vector(S, i).coeffs);
    return V;
}

CVec whittaker_on(const SubSpace& V, PsiClass a) {
    CVec out;
    if (V.dim() == 0) return out;
    WhittakerRow row = whittaker_row(*V.ambient, a);
    int M = V.ambient->M;
    for (auto& v : row.values) M = lcm_int(M, v.order());
    for (auto& b : V.basis)
        for (auto& x : b) M = lcm_int(M, x.order());
    auto ctx = cyclo_ctx(M);
    for (auto& b : V.basis) {
        Cyclo s(ctx);
        for (size_t i = 0; i < b.size(); ++i) s += lifted(b[i], ctx) * lifted(row.values[i], ctx);
        out.push_back(s);
    }
    return out;
}

std::map<PsiClass, bool> genericity_profile(const SubSpace& component) {
    std::map<PsiClass, bool> out;
    for (PsiClass a : {PsiClass::One, PsiClass::Eps, PsiClass::Pi, PsiClass::EpsPi}) {
        auto v = whittaker_on(component, a);
        out[a] = std::any_of(v.begin(), v.end(), [](const Cyclo& x) { return !x.is_zero(); });
    }
    return out;
}

int kernel_quotient_dim(const SubSpace& space, PsiClass a) {
    auto v = whittaker_on(space, a);
    return std::any_of(v.begin(), v.end(), [](const Cyclo& x) { return !x.is_zero(); }) ? 1 : 0;
}

PacketSplit label_by_genericity(PacketSplit P) {
    auto nz = [](const CVec& v) { return std::any_of(v.begin(), v.end(), [](const Cyclo& x) { return !x.is_zero(); }); };
    bool g1 = nz(whittaker_on(P.member1, PsiClass::One));
    bool g2 = nz(whittaker_on(P.member2, PsiClass::One));
    if (g1 && g2) throw std::logic_error("both packet members are psi-generic");
    if (!g1 && g2) {
        std::swap(P.member1, P.member2);
        P.lambda1 = -P.lambda1;
    }
    return P;
}

}  // namespace nf
