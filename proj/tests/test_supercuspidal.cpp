#include <doctest.h>

#include <map>
#include <set>

#include "nf/supercuspidal.hpp"

using namespace nf;

namespace {

constexpr Backend MX = Backend::Mixed;

using SigmaPtr = std::shared_ptr<const CuspidalCharData>;

std::vector<SigmaPtr> cuspidals(int q) {
    auto G = std::make_shared<const ResidueGL2>(MX, q, 1);
    std::vector<SigmaPtr> out;
    for (auto& t : regular_orbit_reps(MX, q, 1)) out.push_back(std::make_shared<const CuspidalCharData>(cuspidal_character(G, t)));
    return out;
}

// values of theta on the norm-one subgroup, up to inversion
std::vector<int> e1_signature(const UnitChar& t, int M) {
    std::vector<int> v, w;
    for (int p : norm_one_positions(*t.G)) {
        v.push_back(t.at(p).in_order(M));
        w.push_back(t.at(p).inverse().in_order(M));
    }
    return std::min(v, w);
}

int ceil_half(int x) { return x <= 0 ? 0 : (x + 1) / 2; }
int floor_half(int x) { return x <= 0 ? 0 : x / 2; }

long md(long x, long n) { return ((x % n) + n) % n; }

long inv_mod(long a, long n) {
    for (long x = 1; x < n; ++x)
        if (md(a * x, n) == 1) return x;
    throw std::logic_error("not invertible");
}

// Shell total at tree distance D by direct enumeration of K_m mod p^N:
// (1/|K_m|) sum over h and points fixed by h of chi(t^-1 k^-1 h k t) conj eta(d_h).
Cyclo shell_oracle(const LevelOneDatum& s, const UnitChar& eta, int m, int D) {
    const int p = s.sigma->q();
    const int N = std::max(D + 1, m);
    long pN = 1, pD = 1;
    for (int i = 0; i < N; ++i) pN *= p;
    for (int i = 0; i < D; ++i) pD *= p;
    long pm = 1;
    for (int i = 0; i < m; ++i) pm *= p;
    struct Pt {
        long a, b, c, d;
    };
    std::vector<Pt> roots;
    if (D == 0) roots.push_back({1, 0, 0, 1});
    else {
        for (long x = 0; x < pD; ++x) roots.push_back({1, x, 0, 1});
        for (long y = 0; y < pD; y += p) roots.push_back({0, 1, pN - 1, y});
    }
    auto R1 = make_ring(MX, p, 1, 1);
    auto ctx = s.sigma->ctx;
    const auto& vals = s.values();
    Cyclo acc(ctx);
    long count = 0;
    for (long a = 0; a < pN; ++a) {
        if (a % p == 0) continue;
        long ai = inv_mod(a, pN);
        for (long b = 0; b < pN; ++b)
            for (long c = 0; c < pN; c += pm) {
                long d = md((1 + b * c) % pN * ai, pN);
                ++count;
                Cyclo eta_v = Cyclo(ctx, 1);
                if (eta.conductor > 0) {
                    RootOfUnity e = eta.eval(*R1, (u64)(d % p)).inverse();
                    eta_v = Cyclo::zeta(ctx, e.in_order(ctx->M));
                }
                for (auto& k : roots) {
                    // x = k^-1 h k with k^-1 = (d_k, -b_k; -c_k, a_k)
                    long hb_a = md(a * k.a + b * k.c, pN), hb_b = md(a * k.b + b * k.d, pN);
                    long hb_c = md(c * k.a + d * k.c, pN), hb_d = md(c * k.b + d * k.d, pN);
                    long xa = md(k.d * hb_a - k.b * hb_c, pN), xb = md(k.d * hb_b - k.b * hb_d, pN);
                    long xc = md(-k.c * hb_a + k.a * hb_c, pN), xd = md(-k.c * hb_b + k.a * hb_d, pN);
                    if (xb % pD != 0) continue;
                    int ma = (int)(xa % p), mb = (int)((xb / pD) % p), mc = D == 0 ? (int)(xc % p) : 0, mdd = (int)(xd % p);
                    int key = ((ma * p + mb) * p + mc) * p + mdd;
                    acc += vals[key] * eta_v;
                }
            }
    }
    return acc * Q(1, count);
}

std::map<int, long> shell_sums(const MackeyResult& r) {
    std::map<int, long> out;
    for (auto& c : r.cells) out[c.distance] += c.contribution;
    return out;
}

}  // namespace

TEST_CASE("cuspidal characters of GL2(F_q)") {
    for (int q : {3, 5, 7}) {
        // regular orbits: exponents k mod q^2-1 with k != qk, paired by k -> qk
        int regular = 0;
        for (int k = 0; k < q * q - 1; ++k)
            if (k % (q * q - 1) != (q * k) % (q * q - 1)) ++regular;
        auto S = cuspidals(q);
        CHECK((int)S.size() == regular / 2);
        CHECK((int)S.size() == q * (q - 1) / 2);
        auto G = S[0]->G;
        for (size_t i = 0; i < S.size(); ++i) {
            CHECK(S[i]->dimension == q - 1);
            CHECK(inner_gl2(*S[i], *S[i]) == 1);
            for (size_t j = i + 1; j < S.size(); ++j) CHECK(inner_gl2(*S[i], *S[j]) == 0);
            // cuspidal: no vector fixed by the upper unipotent group
            Cyclo u(S[i]->ctx);
            for (int b = 0; b < q; ++b) u += S[i]->value(Mat2F{1, b, 0, 1});
            CHECK(u.is_zero());
            // theta and theta^q give the same character
            auto T = cuspidal_character(G, galois_twist(S[i]->theta));
            for (auto& c : S[i]->classes) CHECK(T.value(c.rep) == c.value);
        }
        // twist classes split on SL2 exactly once
        std::set<std::vector<int>> split_classes, classes;
        for (auto& s : S) {
            classes.insert(e1_signature(s->theta, q * q - 1));
            if (s->splits) split_classes.insert(e1_signature(s->theta, q * q - 1));
        }
        CHECK(split_classes.size() == 1);
        for (auto& s : S) {
            if (!s->splits) continue;
            REQUIRE(s->constituents.size() == 2);
            for (auto& v : s->constituents) {
                CHECK(v[G->key(Mat2F{})] == Cyclo(s->ctx, Q(q - 1, 2)));
                CHECK(inner_sl2(*G, v, v) == 1);
            }
            CHECK(s->constituent_generic == std::vector<bool>{true, false});
        }
    }
    for (auto& t : enumerate_unit_chars(UnitKind::E, MX, 3, 1, 1))
        if (!is_regular(t)) CHECK_THROWS_AS(cuspidal_character(std::make_shared<const ResidueGL2>(MX, 3, 1), t), std::invalid_argument);
}

TEST_CASE("Mackey shells against direct enumeration") {
    for (auto& s : cuspidals(3)) {
        std::vector<int> cons = s->splits ? std::vector<int>{0, 1} : std::vector<int>{-1};
        for (int c : cons)
            for (auto& eta : admissible_etas(*s, 1))
                for (int m : {1, 2, 3})
                    for (Tower tw : {Tower::K, Tower::Kp}) {
                        LevelOneDatum d{s, c};
                        auto sums = shell_sums(mackey_dims(d, eta, m, tw));
                        for (int D = tw == Tower::K ? 0 : 1; D <= 3; D += 2) {
                            Cyclo want = shell_oracle(d, eta, m, D);
                            REQUIRE(want.is_rational());
                            INFO("split " << s->splits << " c " << c << " m " << m << " tower " << tower_name(tw) << " D " << D);
                            CHECK(want.rational() == sums[D]);
                        }
                    }
    }
}

TEST_CASE("level-1 packet dimensions") {
    for (int q : {3, 5})
        for (auto& s : cuspidals(q))
            for (auto& eta : admissible_etas(*s, 1))
                for (int m = 1; m <= 4; ++m) {
                    if (s->splits) {
                        for (int c : {0, 1}) {
                            CHECK(mackey_dims({s, c}, eta, m, Tower::Kp).dim == ceil_half(m - 1));
                            CHECK(mackey_dims({s, c}, eta, m, Tower::K).dim == floor_half(m - 1));
                        }
                    } else {
                        CHECK(mackey_dims({s, -1}, eta, m, Tower::Kp).dim == 2 * ceil_half(m - 1));
                        CHECK(mackey_dims({s, -1}, eta, m, Tower::K).dim == 2 * floor_half(m - 1));
                    }
                }
}

TEST_CASE("Mackey integrality and shell vanishing") {
    for (auto& s : cuspidals(5))
        for (auto& eta : admissible_etas(*s, 1))
            for (int m : {2, 4})
                for (Tower tw : {Tower::K, Tower::Kp}) {
                    auto r = mackey_dims({s, s->splits ? 0 : -1}, eta, m, tw);
                    int last = -1;
                    long total = 0;
                    for (auto& c : r.cells) {
                        CHECK(c.contribution > 0);
                        CHECK(c.orbit_size * c.image_size > 0);
                        last = std::max(last, c.shell);
                        total += c.contribution;
                    }
                    CHECK(total == r.dim);
                    CHECK(last < m + 2);
                    CHECK(r.shells == last + 3);
                }
    // eta of the wrong parity gives zero
    auto S = cuspidals(3);
    for (auto& s : S)
        for (auto& eta : enumerate_unit_chars(UnitKind::F, MX, 3, 1, 1)) {
            auto ok = admissible_etas(*s, 1);
            if (std::find(ok.begin(), ok.end(), eta) != ok.end()) continue;
            for (int m = 1; m <= 4; ++m) CHECK(mackey_dims({s, -1}, eta, m, Tower::Kp).dim == 0);
        }
}

TEST_CASE("packet taxonomy and errors") {
    for (auto& s : cuspidals(3)) {
        auto d = packet_taxonomy(*s);
        if (s->splits) {
            CHECK(d.kind == PacketKind::Unram4);
            CHECK(d.cardinality == 4);
            CHECK(d.conductor == 2);
        } else {
            CHECK(d.kind == PacketKind::Unram2);
            CHECK(d.conductor == 2);
        }
        CHECK(packet_taxonomy(*s, 3).conductor == 6);
    }
    CHECK(ramified_descriptor(1).conductor == 3);
    CHECK(ramified_descriptor(2).conductor == 5);

    auto s = cuspidals(3)[0];
    UnitChar c2;
    for (auto& e : enumerate_unit_chars(UnitKind::F, MX, 3, 1, 2))
        if (e.conductor == 2) c2 = e;
    CHECK_THROWS_AS(mackey_dims({s, -1}, c2, 1, Tower::K), std::invalid_argument);
    CHECK_THROWS_AS(mackey_dims({s, -1}, admissible_etas(*s, 1)[0], 4, Tower::Kp, 50), GuardError);
}
