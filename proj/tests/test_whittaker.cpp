#include <doctest.h>

#include <complex>
#include <random>

#include "nf/whittaker.hpp"

using namespace nf;

namespace {

constexpr Backend MX = Backend::Mixed;
constexpr double TOL = 1e-12;

bool generic(const SubSpace& V, PsiClass a) { return kernel_quotient_dim(V, a) == 1; }

// sum over x in P^{-r}/O of f(w n(x)) conj psi(x), through group elements and floating point
std::complex<double> oracle(const PSVector& f, int r) {
    int q = f.space->data.q();
    auto R = make_ring(MX, q, 1, 12);
    auto E = make_quad_ext(R);
    RElem one(R, 1), zero(R, 0);
    auto w = grp_elem(Flavor::SL2, E, zero, -one, one, zero);
    std::complex<double> s = 0;
    long n = 1;
    for (int i = 0; i < r; ++i) n *= q;
    for (long z = 0; z < n; ++z) {
        RElem x = RElem::pi_power(R, -r) * RElem(R, z);
        auto g = w * grp_elem(Flavor::SL2, E, one, x, zero, one);
        g.flavor = f.space->data.flavor;
        double ang = 2 * M_PI * (double)z / (double)n;
        s += evaluate(f, g).to_complex() * std::polar(1.0, -ang);
    }
    return s;
}

}  // namespace

TEST_CASE("unramified newform value") {
    for (int q : {3, 5})
        for (int k = 0; k < 4; ++k) {
            RootOfUnity at(4, k);
            PSData d{Flavor::SL2, unramified_char(UnitKind::F, MX, q, 1, at)};
            auto S = fixed_space(d, trivial_unit_char(UnitKind::F, MX, q, 1), 0);
            auto f = basis_vector(S, 0);
            auto W = whittaker_value(f, PsiClass::One);
            auto ctx = cyclo_ctx(lcm_int(4, W.value.order()));
            Cyclo want = Cyclo(ctx, 1) - Cyclo::zeta(ctx, at.in_order(ctx->M), Q(1, q));
            CHECK(lifted(W.value, ctx) == want);
            CHECK(std::abs(oracle(f, 3) - W.value.to_complex()) < TOL);
        }
    PSData d{Flavor::SL2, trivial_char(UnitKind::F, MX, 3, 1)};
    auto f = basis_vector(fixed_space(d, trivial_unit_char(UnitKind::F, MX, 3, 1), 0), 0);
    auto W = whittaker_value(f, PsiClass::One);
    REQUIRE(W.value.is_rational());
    CHECK(W.value.rational() == Q(2, 3));
}

TEST_CASE("stabilization, linearity, equivariance") {
    UnitChar chi;
    for (auto& c : enumerate_unit_chars(UnitKind::F, MX, 3, 1, 2))
        if (c.conductor == 2 && c.order == 6) chi = c;
    PSData d{Flavor::SL2, {chi, RootOfUnity(4, 1), 0}};
    auto S = fixed_space(d, chi, 3);
    REQUIRE(S->dim() == 3);
    for (PsiClass a : {PsiClass::One, PsiClass::Pi}) {
        auto row = whittaker_row(*S, a);
        for (int extra : {1, 2}) {
            auto later = whittaker_partial(*S, a, row.radius + extra);
            for (size_t i = 0; i < later.size(); ++i) {
                auto ctx = cyclo_ctx(lcm_int(later[i].order(), row.values[i].order()));
                CHECK(lifted(later[i], ctx) == lifted(row.values[i], ctx));
            }
        }
        // random combinations
        std::mt19937 rng(3);
        for (int it = 0; it < 5; ++it) {
            CVec c;
            for (size_t i = 0; i < S->dim(); ++i) c.push_back(Cyclo::zeta(S->ctx(), (long)(rng() % S->M), Q((long)(rng() % 7) - 3)));
            auto W = whittaker_value(PSVector{S, c}, a);
            auto ctx = cyclo_ctx(lcm_int(W.value.order(), lcm_int(S->M, row.values[0].order())));
            Cyclo want(ctx);
            for (size_t i = 0; i < c.size(); ++i) want += lifted(c[i], ctx) * lifted(row.values[i], ctx);
            CHECK(lifted(W.value, ctx) == want);
        }
    }
    // Lambda(pi(n(y)) f) = psi(y) Lambda(f)
    auto R = S->R;
    for (long t = 1; t < 3; ++t) {
        RElem y = RElem::pi_power(R, -1) * RElem(R, t);
        int r = whittaker_row(*S, PsiClass::One).radius + 1;
        auto base = whittaker_partial(*S, PsiClass::One, r);
        auto moved = whittaker_partial(*S, PsiClass::One, r, &y);
        RootOfUnity py = psi_eval(RElem(R, 1), y);
        for (size_t i = 0; i < base.size(); ++i) {
            auto ctx = cyclo_ctx(lcm_int(lcm_int(base[i].order(), moved[i].order()), py.M));
            CHECK(lifted(moved[i], ctx) == lifted(base[i], ctx) * Cyclo::zeta(ctx, py.in_order(ctx->M)));
        }
    }
    CHECK(std::abs(oracle(basis_vector(S, 1), 5) - whittaker_value(basis_vector(S, 1), PsiClass::One).value.to_complex()) < TOL);
}

TEST_CASE("test vectors of SL2 principal series") {
    // Steinberg newform
    auto St = steinberg_subspace(MX, 3, 1, 1);
    REQUIRE(St.dim() == 1);
    CHECK(generic(St, PsiClass::One));
    // ramified irreducible newform
    UnitChar c3;
    for (auto& c : enumerate_unit_chars(UnitKind::F, MX, 7, 1, 1))
        if (c.order == 3) c3 = c;
    PSData d3{Flavor::SL2, {c3, RootOfUnity(1, 0), 0}};
    auto N3 = full_subspace(fixed_space(d3, c3, 1));
    REQUIRE(N3.dim() == 1);
    CHECK(kernel_quotient_dim(N3, PsiClass::One) == 1);
    // ramified packet: one member psi-generic, the other psi_eps-generic
    UnitChar leg = legendre(MX, 3, 1);
    PSData dl{Flavor::SL2, {leg, RootOfUnity(1, 0), 0}};
    auto S1 = fixed_space(dl, leg, 1);
    auto P = label_by_genericity(packet_split(S1, intertwiner_root(S1)));
    REQUIRE(P.member1.dim() == 1);
    REQUIRE(P.member2.dim() == 1);
    CHECK(generic(P.member1, PsiClass::One));
    CHECK_FALSE(generic(P.member2, PsiClass::One));
    CHECK(generic(P.member2, PsiClass::Eps));
    CHECK_FALSE(generic(P.member1, PsiClass::Eps));
    // unramified packet
    PSData du{Flavor::SL2, unramified_char(UnitKind::F, MX, 3, 1, RootOfUnity(2, 1))};
    auto triv = trivial_unit_char(UnitKind::F, MX, 3, 1);
    Cyclo l1 = spherical_eigenvalue(du);
    auto PK = packet_split(fixed_space(du, triv, 0), l1);
    auto PKp = packet_split(fixed_space(du, triv, 0, Tower::Kp, KpMode::Direct), l1);
    REQUIRE(PK.member1.dim() == 1);
    REQUIRE(PKp.member2.dim() == 1);
    CHECK(generic(PK.member1, PsiClass::One));
    CHECK_FALSE(generic(PKp.member2, PsiClass::One));
    CHECK_FALSE(generic(PKp.member2, PsiClass::Eps));
    CHECK(generic(PKp.member2, PsiClass::Pi));
    // the transported K'_0 vector gives the same verdicts
    auto Tp = genericity_profile(full_subspace(fixed_space(du, triv, 0, Tower::Kp, KpMode::Transport)));
    CHECK_FALSE(Tp[PsiClass::One]);
    CHECK(Tp[PsiClass::Pi]);
}

TEST_CASE("test vectors of U(1,1) principal series") {
    UnitChar exc;
    for (auto& c : enumerate_unit_chars(UnitKind::E, MX, 3, 1, 1))
        if (!c.is_trivial() && (c * galois_twist(c)).is_trivial()) exc = c;
    PSData de{Flavor::U11, {exc, RootOfUnity(4, 1), 0}};
    auto Ne = full_subspace(fixed_space(de, exc, 1));
    REQUIRE(Ne.dim() == 2);
    CHECK(kernel_quotient_dim(Ne, PsiClass::One) == 1);
    auto vals = whittaker_on(Ne, PsiClass::One);
    CHECK((vals[0].is_zero() ? 1 : 0) + (vals[1].is_zero() ? 1 : 0) < 2);

    PSData dp{Flavor::U11, unramified_char(UnitKind::E, MX, 3, 1, RootOfUnity(2, 1))};
    auto te = trivial_unit_char(UnitKind::E, MX, 3, 1);
    Cyclo l1 = spherical_eigenvalue(dp);
    auto A = packet_split(fixed_space(dp, te, 0), l1);
    auto B = packet_split(fixed_space(dp, te, 0, Tower::Kp, KpMode::Direct), l1);
    CHECK(generic(A.member1, PsiClass::One));
    CHECK_FALSE(generic(B.member2, PsiClass::One));
    CHECK(generic(B.member2, PsiClass::Pi));

    // generic case: newform at c(chibar|F)
    UnitChar gen;
    for (auto& c : enumerate_unit_chars(UnitKind::E, MX, 3, 1, 2))
        if (c.conductor == 2 && restrict_to_F(c).conductor == 1 && !(c * galois_twist(c)).is_trivial()) {
            gen = c;
            break;
        }
    PSData dg{Flavor::U11, {gen, RootOfUnity(1, 0), 0}};
    auto Ng = full_subspace(fixed_space(dg, gen, 1));
    REQUIRE(Ng.dim() == 1);
    CHECK(generic(Ng, PsiClass::One));

    PSData dz{Flavor::SL2, trivial_char(UnitKind::F, MX, 3, 1)};
    CHECK(kernel_quotient_dim(full_subspace(solve_fixed_space(dz, legendre(MX, 3, 1), 1)), PsiClass::One) == 0);
}
