#include <doctest.h>

#include <random>
#include <set>

#include "nf/local_rings.hpp"

using namespace nf;

TEST_CASE("make_ring parameters and eps_F") {
    auto R = make_ring(Backend::Mixed, 3, 1, 6);
    CHECK(R->q == 3);
    // squares among units mod 3^6, computed by plain integer arithmetic
    std::set<long> squares;
    for (long x = 0; x < 729; ++x)
        if (x % 3) squares.insert(x * x % 729);
    CHECK(squares.count((long)R->eps) == 0);
    CHECK(R->eps % 3 == 2);

    auto R9 = make_ring(Backend::Equal, 3, 2, 4);
    CHECK(R9->q == 9);
    CHECK_THROWS(make_ring(Backend::Mixed, 2, 1, 4));
    CHECK_THROWS(make_ring(Backend::Mixed, 3, 2, 4));
    CHECK_THROWS(make_ring(Backend::Mixed, 9, 1, 4));
}

TEST_CASE("valuation") {
    auto R = make_ring(Backend::Mixed, 5, 1, 6);
    CHECK(valuation(RElem(R, 25)) == 2);
    CHECK(valuation(RElem::from_raw(R, R->eps)) == 0);
    CHECK(valuation(RElem(R, 0)) == 6);
    auto S = make_ring(Backend::Equal, 3, 1, 5);
    CHECK(valuation(RElem::from_raw(S, S->pi_pow(2))) == 2);
    CHECK(valuation(RElem(S, 0)) == 5);
}

TEST_CASE("is_square_unit") {
    auto R = make_ring(Backend::Mixed, 3, 1, 5);
    CHECK_FALSE(is_square_unit(RElem::from_raw(R, R->eps)));
    CHECK(is_square_unit(RElem(R, 1)));
    CHECK(is_square_unit(RElem(R, 4)));
    CHECK_THROWS(is_square_unit(RElem(R, 3)));
}

TEST_CASE("quadratic extension eps_E") {
    for (auto [b, p, f] : {std::tuple{Backend::Mixed, 3, 1}, std::tuple{Backend::Mixed, 5, 1},
                           std::tuple{Backend::Equal, 3, 2}, std::tuple{Backend::Equal, 5, 1}}) {
        auto R = make_ring(b, p, f, 4);
        auto E = make_quad_ext(R);
        CHECK(E->norm(E->epsE) == R->eps);
        QElt c = E->conj(E->epsE);
        QElt prod = E->mul(c, E->epsE);
        CHECK(prod.a == R->eps);
        CHECK(prod.b == 0);
        CHECK_FALSE(E->is_square_unit(E->epsE));
    }
    // F_25 = F_5[s], s^2 = 2: residue of eps_E is outside the set of squares
    auto R = make_ring(Backend::Mixed, 5, 1, 4);
    auto E = make_quad_ext(R);
    CHECK(R->eps == 2);
    std::set<std::pair<int, int>> sq;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            if (!a && !b) continue;
            sq.insert({(a * a + 2 * b * b) % 5, (2 * a * b) % 5});
        }
    CHECK(sq.size() == 12);
    CHECK(sq.count({(int)(E->epsE.a % 5), (int)(E->epsE.b % 5)}) == 0);
}

TEST_CASE("norm trace conj invert") {
    auto R = make_ring(Backend::Mixed, 3, 1, 6);
    auto E = make_quad_ext(R);
    QuadElem s = QuadElem::from_raw(E, QElt{0, 1});
    CHECK(s.norm() == -RElem::from_raw(R, R->eps));
    QuadElem three = QuadElem::from_raw(E, QElt{3, 0});
    CHECK(three.trace() == RElem(R, 6));
    QuadElem x = QuadElem::from_raw(E, QElt{7, 11});
    CHECK(x.conj().conj() == x);
    CHECK(x.conj().norm() == x.norm());
    RElem pu = RElem(R, 3 * 7);
    RElem inv = pu.inverse();
    CHECK(inv.precision() == 5);
    CHECK(inv.valuation() == -1);
    CHECK(pu * inv == RElem(R, 1));
    CHECK((pu * inv).precision() == 5);
    CHECK_THROWS_AS(RElem(R, 0).inverse(), PrecisionError);
}

TEST_CASE("ring axioms on random samples") {
    std::mt19937_64 rng(12345);
    for (auto [b, p, f, N] : {std::tuple{Backend::Mixed, 3, 1, 10}, std::tuple{Backend::Mixed, 7, 1, 8},
                              std::tuple{Backend::Equal, 3, 2, 7}, std::tuple{Backend::Equal, 5, 1, 9}}) {
        auto R = make_ring(b, p, f, N);
        u64 size = R->qpow(N);
        int bad = 0;
        for (int it = 0; it < 10000; ++it) {
            u64 x = R->from_index(rng() % size), y = R->from_index(rng() % size), z = R->from_index(rng() % size);
            if (R->mul(R->mul(x, y), z) != R->mul(x, R->mul(y, z))) ++bad;
            if (R->mul(x, R->add(y, z)) != R->add(R->mul(x, y), R->mul(x, z))) ++bad;
            if (R->add(R->add(x, y), z) != R->add(x, R->add(y, z))) ++bad;
            if (R->index(x, N) != R->index(R->from_index(R->index(x, N)), N)) ++bad;
            if (R->sub(R->add(x, y), y) != x) ++bad;
            int vx = R->val(x), vy = R->val(y);
            if (vx < N / 2 && vy < N / 2 && R->val(R->mul(x, y)) != vx + vy) ++bad;
            if (R->val(R->add(x, y)) < std::min(vx, vy)) ++bad;
            if (R->is_unit(x) && R->mul(x, R->inv_unit(x)) != 1) ++bad;
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("mixed backend agrees with integer arithmetic") {
    auto R = make_ring(Backend::Mixed, 5, 1, 9);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 1000; ++it) {
        u64 x = rng() % R->mod(), y = rng() % R->mod();
        CHECK(R->mul(x, y) == (u64)((unsigned __int128)x * y % R->mod()));
    }
}

TEST_CASE("unit square index and norm surjectivity") {
    for (auto [b, p, f] : {std::tuple{Backend::Mixed, 3, 1}, std::tuple{Backend::Mixed, 5, 1},
                           std::tuple{Backend::Mixed, 7, 1}, std::tuple{Backend::Equal, 3, 2}}) {
        auto R = make_ring(b, p, f, 1);
        int sq = 0;
        for (int a = 1; a < R->q; ++a) sq += R->k->is_square(a);
        CHECK(2 * sq == R->q - 1);
    }
    auto R = make_ring(Backend::Mixed, 3, 1, 1);
    auto E = make_quad_ext(R);
    std::set<u64> norms;
    for (u64 a = 0; a < 3; ++a)
        for (u64 b = 0; b < 3; ++b) {
            QElt x{a, b};
            if (E->is_unit(x)) norms.insert(E->norm(x));
        }
    CHECK(norms == std::set<u64>{1, 2});
}

TEST_CASE("Laurent bookkeeping") {
    auto R = make_ring(Backend::Mixed, 3, 1, 6);
    RElem a = RElem::pi_power(R, -2) * RElem(R, 5);
    RElem b = RElem(R, 4);
    RElem s = a + b;
    CHECK(s.valuation() == -2);
    CHECK(s - a == b);
    CHECK(RElem(R, 9).inverse().inverse() == RElem(R, 9));
}
