#include <doctest.h>

#include <random>

#include "nf/principal_series.hpp"

using namespace nf;

namespace {

constexpr Backend MX = Backend::Mixed;

FieldChar ramified(const UnitChar& u) { return {u, RootOfUnity(1, 0), 0}; }

UnitChar pick(UnitKind kind, int q, int n, int order, int cond) {
    for (auto& c : enumerate_unit_chars(kind, MX, q, 1, n))
        if (c.order == order && c.conductor == cond) return c;
    throw std::logic_error("no such character");
}

std::vector<size_t> dims(const PSData& d, const UnitChar& eta, int m0, int m1, Tower t = Tower::K,
                         KpMode mode = KpMode::Transport) {
    std::vector<size_t> out;
    for (int m = m0; m <= m1; ++m) out.push_back(solve_fixed_space(d, eta, m, t, mode)->dim());
    return out;
}

using V = std::vector<size_t>;

Cyclo root_value(RootOfUnity r, int M) { return Cyclo::zeta(cyclo_ctx(M), r.in_order(M)); }

Cyclo in_ctx(const Cyclo& x, int M) { return x.lift(cyclo_ctx(lcm_int(M, x.order()))); }

// Number of double cosets (B cap K_0) g K_m whose stabilizer pairs b g k = g satisfy
// chi(a_b) eta(d_k) = 1, computed in the finite group of level m.
size_t coset_oracle(const FiniteGroup& G, const DoubleCosetSet& D, const UnitChar& chi, const UnitChar& eta) {
    size_t n = 0;
    const QuadRing& E = *G.E;
    for (auto& c : D.cosets) {
        bool ok = true;
        for (auto& s : c.stabilizer) {
            RootOfUnity x = G.flavor == Flavor::SL2 ? chi.eval(*E.R, s.b.a.a) * eta.eval(*E.R, s.k.d.a)
                                                    : chi.eval(E, s.b.a) * eta.eval(E, s.k.d);
            if (!x.is_one()) ok = false;
        }
        n += ok;
    }
    return n;
}

}  // namespace

TEST_CASE("unramified principal series") {
    for (int q : {3, 5}) {
        PSData d{Flavor::SL2, trivial_char(UnitKind::F, MX, q, 1)};
        auto eta = trivial_unit_char(UnitKind::F, MX, q, 1);
        CHECK(dims(d, eta, 0, 3) == V{1, 2, 4, 6});
        CHECK(dims(d, eta, 0, 3, Tower::Kp, KpMode::Direct) == V{1, 2, 4, 6});
        CHECK(dims(d, eta, 0, 3, Tower::Kp, KpMode::Transport) == V{1, 2, 4, 6});
        PSData d2{Flavor::SL2, unramified_char(UnitKind::F, MX, q, 1, RootOfUnity(4, 1))};
        CHECK(dims(d2, eta, 0, 2) == V{1, 2, 4});
    }
    PSData eq{Flavor::SL2, trivial_char(UnitKind::F, Backend::Equal, 3, 2)};
    CHECK(dims(eq, trivial_unit_char(UnitKind::F, Backend::Equal, 3, 2), 0, 2) == V{1, 2, 4});
}

TEST_CASE("double coset oracle, SL2") {
    const int q = 3;
    for (int m = 1; m <= 3; ++m) {
        auto G = enumerate_group(Flavor::SL2, MX, q, 1, m);
        auto B = subgroup(*G, SubgroupSpec{SubTag::BK0, 0});
        auto Km = subgroup(*G, SubgroupSpec{SubTag::K, m});
        auto D = double_cosets(*G, B, Km);
        for (auto& chi : enumerate_unit_chars(UnitKind::F, MX, q, 1, m)) {
            PSData d{Flavor::SL2, ramified(chi)};
            for (auto& eta : enumerate_unit_chars(UnitKind::F, MX, q, 1, m)) {
                size_t want = central_compatible(d, eta) ? coset_oracle(*G, D, chi, eta) : 0;
                CHECK_MESSAGE(solve_fixed_space(d, eta, m)->dim() == want, chi.label() << " " << eta.label() << " m=" << m);
            }
        }
    }
}

TEST_CASE("double coset oracle, U(1,1)") {
    const int q = 3;
    for (int m = 1; m <= 2; ++m) {
        auto G = enumerate_group(Flavor::U11, MX, q, 1, m);
        auto B = subgroup(*G, SubgroupSpec{SubTag::BbarK0, 0});
        auto Km = subgroup(*G, SubgroupSpec{SubTag::Kbar, m});
        auto D = double_cosets(*G, B, Km);
        auto chars = enumerate_unit_chars(UnitKind::E, MX, q, 1, m);
        for (size_t i = 0; i < chars.size(); i += (m == 1 ? 1 : 5)) {
            PSData d{Flavor::U11, {chars[i], RootOfUnity(2, 1), 0}};
            for (auto& eta : chars) {
                size_t want = central_compatible(d, eta) ? coset_oracle(*G, D, chars[i], eta) : 0;
                CHECK_MESSAGE(solve_fixed_space(d, eta, m)->dim() == want, chars[i].label() << " " << eta.label() << " m=" << m);
            }
        }
    }
}

TEST_CASE("transformation law on group elements") {
    auto R = make_ring(MX, 3, 1, 24);
    auto E = make_quad_ext(R);
    RElem one(R, 1), zero(R, 0);
    std::mt19937 rng(11);
    auto rnd = [&](int v) { return RElem::pi_power(R, v) * RElem(R, (long)(rng() % 729)); };
    auto unit = [&] { return RElem(R, 1 + 3 * (long)(rng() % 243)) * RElem(R, (rng() % 2) ? 1 : 2); };
    auto n = [&](const RElem& x) { return grp_elem(Flavor::SL2, E, one, x, zero, one); };
    auto nb = [&](const RElem& y) { return grp_elem(Flavor::SL2, E, one, zero, y, one); };
    auto t = [&](const RElem& u) { return grp_elem(Flavor::SL2, E, u, zero, zero, u.inverse()); };
    auto w = grp_elem(Flavor::SL2, E, zero, -one, one, zero);
    UnitChar chi = pick(UnitKind::F, 3, 2, 6, 2);
    PSData d{Flavor::SL2, {chi, RootOfUnity(4, 1), 0}};
    for (int m = 2; m <= 3; ++m)
        for (UnitChar eta : {chi, chi.inverse()}) {
            auto S = fixed_space(d, eta, m);
            REQUIRE(S->dim() > 0);
            for (size_t i = 0; i < S->dim(); ++i) {
                auto f = basis_vector(S, i);
                for (int it = 0; it < 40; ++it) {
                    GrpElem g = n(rnd(-1 - (int)(rng() % 2))) * w * nb(rnd(0)) * t(unit()) * n(rnd(0));
                    RElem u = unit();
                    GrpElem k = n(rnd(0)) * t(u) * nb(rnd(m));
                    GrpElem b = t(u) * n(rnd(-2));
                    Cyclo fg = evaluate(f, g);
                    int M = lcm_int(fg.order(), lcm_int(eta.order, chi.order));
                    CHECK(in_ctx(evaluate(f, g * k), M) == in_ctx(fg, M) * root_value(eta.eval(u.inverse()), M));
                    CHECK(in_ctx(evaluate(f, b * g), M) == in_ctx(fg, M) * root_value(chi.eval(u), M));
                }
            }
        }
}

TEST_CASE("Steinberg") {
    std::vector<size_t> st;
    for (int m = 0; m <= 3; ++m) st.push_back(steinberg_subspace(MX, 3, 1, m).dim());
    CHECK(st == V{0, 1, 3, 5});
    // one less than pi(|.|), which has the trivial representation as quotient
    PSData d{Flavor::SL2, abs_char(MX, 3, 1)};
    auto eta = trivial_unit_char(UnitKind::F, MX, 3, 1);
    for (int m = 1; m <= 3; ++m) CHECK(steinberg_subspace(MX, 3, 1, m).dim() + 1 == fixed_space(d, eta, m)->dim());
    CHECK(steinberg_subspace(Backend::Equal, 3, 2, 2).dim() == 3);
    CHECK(steinberg_subspace(MX, 3, 1, 2, Tower::Kp).dim() == 3);
}

TEST_CASE("ramified principal series") {
    for (int order : {3, 6}) {
        UnitChar chi = pick(UnitKind::F, 7, 1, order, 1);
        PSData d{Flavor::SL2, ramified(chi)};
        CHECK(dims(d, chi, 0, 3) == V{0, 1, 3, 5});
        auto S = eta_conductor_search(d, 1);
        CHECK(S.conductor == 1);
        REQUIRE(S.achieving.size() == 2);
        CHECK(((S.achieving[0] == chi && S.achieving[1] == chi.inverse()) ||
               (S.achieving[1] == chi && S.achieving[0] == chi.inverse())));
    }
    UnitChar c4 = pick(UnitKind::F, 5, 1, 4, 1);
    CHECK(dims({Flavor::SL2, ramified(c4)}, c4, 0, 3) == V{0, 1, 3, 5});
    UnitChar c2 = pick(UnitKind::F, 5, 2, 20, 2);
    CHECK(dims({Flavor::SL2, ramified(c2)}, c2, 0, 3) == V{0, 0, 1, 3});
    UnitChar leg = legendre(MX, 3, 1);
    PSData dl{Flavor::SL2, ramified(leg)};
    CHECK(dims(dl, leg, 0, 2) == V{0, 2, 4});
    auto S = eta_conductor_search(dl, 2);
    CHECK(S.conductor == 1);
    REQUIRE(S.achieving.size() == 1);
    CHECK(S.achieving[0] == change_level(leg, S.achieving[0].n()));
}

TEST_CASE("central obstruction") {
    PSData d{Flavor::SL2, trivial_char(UnitKind::F, MX, 3, 1)};
    UnitChar leg = legendre(MX, 3, 1);
    CHECK_FALSE(central_compatible(d, leg));
    CHECK_THROWS_AS(fixed_space(d, leg, 2), CentralObstruction);
    CHECK(solve_fixed_space(d, leg, 2)->dim() == 0);
}

TEST_CASE("fixed spaces grow with m") {
    UnitChar chi = pick(UnitKind::F, 3, 2, 3, 2);
    PSData d{Flavor::SL2, ramified(chi)};
    for (int m = 2; m < 4; ++m) {
        auto A = fixed_space(d, chi, m), B = fixed_space(d, chi, m + 1);
        for (size_t i = 0; i < A->dim(); ++i) CHECK(coordinates_in(*B, *A, i).has_value());
        if (B->dim() > A->dim()) CHECK_FALSE(coordinates_in(*A, *B, B->dim() - 1).has_value());
    }
    PSData u{Flavor::SL2, trivial_char(UnitKind::F, MX, 3, 1)};
    auto eta = trivial_unit_char(UnitKind::F, MX, 3, 1);
    for (int m = 0; m < 3; ++m) {
        auto A = fixed_space(u, eta, m), B = fixed_space(u, eta, m + 1);
        for (size_t i = 0; i < A->dim(); ++i) CHECK(coordinates_in(*B, *A, i).has_value());
    }
}

TEST_CASE("SL2 packets") {
    // unramified: chi(pi) = -1, member 1 holds the spherical vector
    PSData d{Flavor::SL2, unramified_char(UnitKind::F, MX, 3, 1, RootOfUnity(2, 1))};
    auto eta = trivial_unit_char(UnitKind::F, MX, 3, 1);
    Cyclo l1 = spherical_eigenvalue(d);
    auto P0 = packet_split(fixed_space(d, eta, 0), l1);
    CHECK(P0.member1.dim() == 1);
    CHECK(P0.member2.dim() == 0);
    auto P0p = packet_split(fixed_space(d, eta, 0, Tower::Kp, KpMode::Direct), l1);
    CHECK(P0p.member1.dim() == 0);
    CHECK(P0p.member2.dim() == 1);
    for (int r = 1; r <= 3; ++r) {
        size_t big = 2 * (r / 2) + 1, small = 2 * ((r - 1) / 2) + 1;
        auto PK = packet_split(fixed_space(d, eta, r), l1);
        auto PKp = packet_split(fixed_space(d, eta, r, Tower::Kp, KpMode::Direct), l1);
        CHECK(PK.member1.dim() == big);
        CHECK(PK.member2.dim() == small);
        CHECK(PKp.member1.dim() == small);
        CHECK(PKp.member2.dim() == big);
        CHECK(PK.member1.dim() + PK.member2.dim() == PK.space->dim());
    }
    // ramified: chi = Legendre symbol, eta = chi on units
    UnitChar leg = legendre(MX, 3, 1);
    PSData dr{Flavor::SL2, ramified(leg)};
    Cyclo lr = intertwiner_root(fixed_space(dr, leg, 1));
    for (int m = 0; m <= 3; ++m)
        for (Tower t : {Tower::K, Tower::Kp}) {
            auto P = packet_split(solve_fixed_space(dr, leg, m, t, KpMode::Direct), lr);
            CHECK(P.member1.dim() == (size_t)m);
            CHECK(P.member2.dim() == (size_t)m);
        }
    CHECK_THROWS(intertwiner_matrix(*fixed_space(PSData{Flavor::SL2, ramified(pick(UnitKind::F, 7, 1, 3, 1))},
                                                 pick(UnitKind::F, 7, 1, 3, 1), 1)));
}

TEST_CASE("U(1,1) exceptional and generic cases") {
    auto chars1 = enumerate_unit_chars(UnitKind::E, MX, 3, 1, 1);
    UnitChar exc;
    for (auto& c : chars1)
        if (!c.is_trivial() && (c * galois_twist(c)).is_trivial()) exc = c;
    REQUIRE(exc.G);
    PSData d{Flavor::U11, {exc, RootOfUnity(4, 1), 0}};
    CHECK(dims(d, exc, 0, 2) == V{0, 2, 3});
    CHECK(dims(d, exc, 0, 2, Tower::Kp, KpMode::Direct) == V{0, 2, 3});
    auto S = eta_conductor_search(d, 2, 1);
    CHECK(S.conductor == 1);
    REQUIRE(S.achieving.size() == 1);
    CHECK(S.achieving[0] == exc);
    CHECK(galois_twist(exc).inverse() == exc);

    // generic: c(chibar|F) = 1 < c(chibar) = 2
    UnitChar gen;
    for (auto& c : enumerate_unit_chars(UnitKind::E, MX, 3, 1, 2))
        if (c.conductor == 2 && restrict_to_F(c).conductor == 1 && !(c * galois_twist(c)).is_trivial()) {
            gen = c;
            break;
        }
    REQUIRE(gen.G);
    PSData dg{Flavor::U11, {gen, RootOfUnity(1, 0), 0}};
    CHECK(dims(dg, gen, 0, 3) == V{0, 1, 2, 3});
    CHECK(dims(dg, galois_twist(gen).inverse(), 0, 3) == V{0, 1, 2, 3});
    auto Sg = eta_conductor_search(dg, 1, 2);
    CHECK(Sg.conductor == 1);
    REQUIRE(Sg.achieving.size() == 2);
    for (auto& a : Sg.achieving) CHECK((a == gen || a == galois_twist(gen).inverse()));
}

TEST_CASE("U(1,1) unramified packet") {
    PSData d{Flavor::U11, unramified_char(UnitKind::E, MX, 3, 1, RootOfUnity(2, 1))};
    auto eta = trivial_unit_char(UnitKind::E, MX, 3, 1);
    Cyclo l1 = spherical_eigenvalue(d);
    for (int m = 0; m <= 3; ++m) {
        size_t up = (m + 2) / 2, down = (m + 1) / 2;
        auto PK = packet_split(fixed_space(d, eta, m), l1);
        auto PKp = packet_split(fixed_space(d, eta, m, Tower::Kp, KpMode::Direct), l1);
        CHECK(PK.member1.dim() == up);
        CHECK(PK.member2.dim() == down);
        CHECK(PKp.member1.dim() == down);
        CHECK(PKp.member2.dim() == up);
    }
}

TEST_CASE("theta criterion") {
    PSData du{Flavor::U11, unramified_char(UnitKind::E, MX, 3, 1, RootOfUnity(2, 1))};
    auto triv = trivial_unit_char(UnitKind::E, MX, 3, 1);
    for (int m = 0; m <= 3; ++m) CHECK(theta_criterion_space(du, triv, m).equal);
    UnitChar exc;
    for (auto& c : enumerate_unit_chars(UnitKind::E, MX, 3, 1, 1))
        if (!c.is_trivial() && (c * galois_twist(c)).is_trivial()) exc = c;
    PSData de{Flavor::U11, {exc, RootOfUnity(4, 1), 0}};
    for (int m = 1; m <= 2; ++m) {
        auto T = theta_criterion_space(de, exc, m);
        CHECK(T.equal);
        CHECK(T.direct->dim() == (size_t)m + 1);
    }
    CHECK_THROWS_AS(theta_criterion_space(de, exc, 0), std::invalid_argument);
    // the eigenvalue condition removes the other extension of eta|O_F^x
    auto others = enumerate_unit_chars(UnitKind::E, MX, 3, 1, 1);
    for (auto& e : others) {
        if (!central_compatible(de, e) || e == exc || !(restrict_to_F(e) == restrict_to_F(exc))) continue;
        auto T = theta_criterion_space(de, e, 2);
        CHECK(T.equal);
    }
}
