#include "nf/groups.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>

namespace nf {

const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::SL2: return "SL2";
        case Flavor::U11: return "U11";
        default: return "GL2";
    }
}

// ---------------------------------------------------------------- Laurent matrices

GrpElem grp_elem(Flavor fl, std::shared_ptr<const QuadRing> E, const RElem& a, const RElem& b, const RElem& c,
                 const RElem& d) {
    return {fl, QuadElem::from_base(E, a), QuadElem::from_base(E, b), QuadElem::from_base(E, c), QuadElem::from_base(E, d)};
}

GrpElem grp_elem(Flavor fl, const QuadElem& a, const QuadElem& b, const QuadElem& c, const QuadElem& d) {
    return {fl, a, b, c, d};
}

GrpElem GrpElem::operator*(const GrpElem& o) const {
    Flavor fl = flavor == o.flavor ? flavor : Flavor::GL2;
    return {fl, a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

GrpElem GrpElem::inverse() const {
    QuadElem di = det().inverse();
    return {flavor, d * di, -(b * di), -(c * di), a * di};
}

int GrpElem::precision() const {
    int p = a.a.abs_precision();
    for (const QuadElem* x : {&a, &b, &c, &d}) p = std::min({p, x->a.abs_precision(), x->b.abs_precision()});
    return p;
}

std::string GrpElem::str() const { return "[" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() + "]"; }

bool satisfies_relation(const GrpElem& g) {
    const auto& E = g.a.ext();
    auto R = E->R;
    QuadElem one = QuadElem::from_raw(E, E->one());
    if (g.flavor == Flavor::SL2) {
        for (const QuadElem* x : {&g.a, &g.b, &g.c, &g.d})
            if (!x->b.is_zero()) return false;
        return g.det() == one;
    }
    if (g.flavor == Flavor::U11) {
        QuadElem r1 = g.a.conj() * g.b - g.b.conj() * g.a;
        QuadElem r2 = g.c.conj() * g.d - g.d.conj() * g.c;
        QuadElem r3 = g.a.conj() * g.d - g.b.conj() * g.c;
        return r1.is_zero() && r2.is_zero() && r3 == one;
    }
    return !g.det().is_zero();
}

std::string SubgroupSpec::str() const {
    static const char* names[] = {"K", "K'", "Kbar", "Kbar'", "B∩K0", "Bbar∩Kbar0", "Iwahori", "K(l)", "N", "Nbar", "T0bar", "Zbar"};
    return std::string(names[(int)tag]) + "(" + std::to_string(param) + ")";
}

namespace {

bool ge(const QuadElem& x, int j) {
    if (x.is_zero()) {
        if (x.valuation() < j) throw PrecisionError("membership: entry known only modulo P^" + std::to_string(x.valuation()));
        return true;
    }
    return x.valuation() >= j;
}

bool in_F(const QuadElem& x) { return x.b.is_zero(); }

}  // namespace

bool membership(const GrpElem& g, const SubgroupSpec& S) {
    const auto& E = g.a.ext();
    QuadElem one = QuadElem::from_raw(E, E->one());
    const int m = S.param;
    auto integral = [&] { return ge(g.a, 0) && ge(g.b, 0) && ge(g.c, 0) && ge(g.d, 0); };
    bool sl2 = g.flavor == Flavor::SL2 && satisfies_relation(g);
    bool u11 = (g.flavor == Flavor::U11 || g.flavor == Flavor::SL2) &&
               satisfies_relation(GrpElem{Flavor::U11, g.a, g.b, g.c, g.d});
    switch (S.tag) {
        case SubTag::K: return sl2 && integral() && ge(g.c, m);
        case SubTag::Iwahori: return sl2 && integral() && ge(g.c, 1);
        case SubTag::Kbar: return u11 && integral() && ge(g.c, m);
        case SubTag::Kp: return sl2 && ge(g.a, 0) && ge(g.d, 0) && ge(g.b, -1) && ge(g.c, m + 1);
        case SubTag::Kbarp: return u11 && ge(g.a, 0) && ge(g.d, 0) && ge(g.b, -1) && ge(g.c, m + 1);
        case SubTag::BK0: return sl2 && integral() && g.c.is_zero();
        case SubTag::BbarK0: return u11 && integral() && g.c.is_zero();
        case SubTag::Principal:
            return (sl2 || u11) && ge(g.a - one, m) && ge(g.b, m) && ge(g.c, m) && ge(g.d - one, m);
        case SubTag::N: return g.a == one && g.d == one && g.c.is_zero() && in_F(g.b) && ge(g.b, m);
        case SubTag::Nbar: return g.a == one && g.d == one && g.b.is_zero() && in_F(g.c) && ge(g.c, m);
        case SubTag::T0bar:
            return u11 && g.b.is_zero() && g.c.is_zero() && g.a.valuation() == 0 && g.d == g.a.conj().inverse();
        case SubTag::Zbar: return u11 && g.b.is_zero() && g.c.is_zero() && g.a == g.d && g.a.norm() == one.a;
    }
    return false;
}

Constants constants(std::shared_ptr<const QuadRing> E) {
    auto R = E->R;
    QuadElem one = QuadElem::from_raw(E, E->one());
    QuadElem zero = QuadElem::from_raw(E, QElt{0, 0});
    QuadElem pi = QuadElem::from_base(E, RElem::pi_power(R, 1));
    QuadElem eps = QuadElem::from_raw(E, QElt{R->eps, 0});
    QuadElem epsE = QuadElem::from_raw(E, E->epsE);
    Constants C;
    C.alpha = {Flavor::GL2, pi, zero, zero, one};
    C.beta = {Flavor::GL2, one, zero, zero, pi};
    C.gamma = {Flavor::GL2, eps, zero, zero, one};
    C.theta = {Flavor::U11, epsE, zero, zero, epsE.conj().inverse()};
    C.w = {Flavor::SL2, zero, -one, one, zero};
    return C;
}

Iwasawa iwasawa(const GrpElem& g) {
    const auto& E = g.a.ext();
    QuadElem one = QuadElem::from_raw(E, E->one());
    QuadElem zero = QuadElem::from_raw(E, QElt{0, 0});
    if (g.c.is_zero() && g.d.is_zero()) throw PrecisionError("iwasawa: bottom row vanishes at working precision");
    Flavor kf = g.flavor == Flavor::U11 ? Flavor::U11 : Flavor::SL2;
    GrpElem k;
    if (!g.d.is_zero() && (g.c.is_zero() ? true : g.d.valuation() <= g.c.valuation())) {
        QuadElem y = g.c * g.d.inverse();
        k = {kf, one, zero, y, one};
    } else {
        QuadElem y = g.d * g.c.inverse();
        k = {kf, zero, -one, one, y};
    }
    GrpElem b = g * k.inverse();
    b.flavor = g.flavor;
    return {b.a, b.b, b, k, b.a.valuation()};
}

// ---------------------------------------------------------------- finite groups

u64 FiniteGroup::key(const FMat& x) const {
    const Ring& R = *E->R;
    if (flavor == Flavor::SL2) {
        u64 Q = R.qpow(m);
        return ((R.index(x.a.a, m) * Q + R.index(x.b.a, m)) * Q + R.index(x.c.a, m)) * Q + R.index(x.d.a, m);
    }
    u64 Q = R.qpow(2 * m);
    return ((E->index(x.a, m) * Q + E->index(x.b, m)) * Q + E->index(x.c, m)) * Q + E->index(x.d, m);
}

int FiniteGroup::find(const FMat& x) const {
    auto it = index.find(key(x));
    return it == index.end() ? -1 : it->second;
}

FMat FiniteGroup::mul(const FMat& x, const FMat& y) const {
    const QuadRing& Q = *E;
    return {Q.add(Q.mul(x.a, y.a), Q.mul(x.b, y.c)), Q.add(Q.mul(x.a, y.b), Q.mul(x.b, y.d)),
            Q.add(Q.mul(x.c, y.a), Q.mul(x.d, y.c)), Q.add(Q.mul(x.c, y.b), Q.mul(x.d, y.d))};
}

FMat FiniteGroup::inv(const FMat& x) const {
    const QuadRing& Q = *E;
    QElt det = Q.sub(Q.mul(x.a, x.d), Q.mul(x.b, x.c));
    QElt di = Q.inv_unit(det);
    return {Q.mul(x.d, di), Q.neg(Q.mul(x.b, di)), Q.neg(Q.mul(x.c, di)), Q.mul(x.a, di)};
}

FMat FiniteGroup::identity() const { return {E->one(), {0, 0}, {0, 0}, E->one()}; }

FMat FiniteGroup::reduce(const GrpElem& g) const {
    auto conv = [&](const QuadElem& x) {
        const QuadRing& S = *x.ext();
        return E->from_index(S.index(x.raw(), m), m);
    };
    return {conv(g.a), conv(g.b), conv(g.c), conv(g.d)};
}

bool FiniteGroup::is_member(const FMat& x) const {
    const QuadRing& Q = *E;
    if (flavor == Flavor::SL2) {
        if (x.a.b || x.b.b || x.c.b || x.d.b) return false;
        return Q.sub(Q.mul(x.a, x.d), Q.mul(x.b, x.c)) == Q.one();
    }
    QElt r1 = Q.sub(Q.mul(Q.conj(x.a), x.b), Q.mul(Q.conj(x.b), x.a));
    QElt r2 = Q.sub(Q.mul(Q.conj(x.c), x.d), Q.mul(Q.conj(x.d), x.c));
    QElt r3 = Q.sub(Q.mul(Q.conj(x.a), x.d), Q.mul(Q.conj(x.b), x.c));
    return r1 == QElt{0, 0} && r2 == QElt{0, 0} && r3 == Q.one();
}

namespace {

void closure(FiniteGroup& G, const std::vector<FMat>& gens) {
    G.elems.clear();
    G.index.clear();
    FMat id = G.identity();
    G.elems.push_back(id);
    G.index[G.key(id)] = 0;
    for (size_t i = 0; i < G.elems.size(); ++i)
        for (const FMat& s : gens) {
            FMat y = G.mul(G.elems[i], s);
            u64 k = G.key(y);
            if (G.index.emplace(k, (int)G.elems.size()).second) G.elems.push_back(y);
        }
}

// additive generators of O/P^m
std::vector<u64> additive_gens(const Ring& R, int m) {
    std::vector<u64> out;
    if (R.backend == Backend::Mixed) return {1};
    for (int i = 0; i < m; ++i) {
        int pj = 1;
        for (int j = 0; j < R.f; ++j, pj *= R.p) out.push_back(R.shift_up(R.constant(pj), i));
    }
    return out;
}

}  // namespace

std::shared_ptr<const FiniteGroup> enumerate_group(Flavor fl, Backend b, int p, int f, int m) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, int, int>, std::shared_ptr<const FiniteGroup>> cache;
    auto ck = std::make_tuple((int)fl, (int)b, p, f, m);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(ck);
        if (it != cache.end()) return it->second;
    }
    auto G = std::make_shared<FiniteGroup>();
    G->flavor = fl;
    G->m = m;
    auto R = make_ring(b, p, f, m);
    G->E = make_quad_ext(R);
    const double q = R->q;
    double expect = std::pow(q, 3.0 * (m - 1)) * q * (q * q - 1);
    if (fl == Flavor::U11) expect = std::pow(q, 4.0 * (m - 1)) * q * (q + 1) * (q * q - 1);
    if (fl == Flavor::GL2) throw std::invalid_argument("enumerate: GL2 not supported");
    if (expect > 1e7) throw GuardError("group enumeration exceeds 10^7 elements");
    if (fl == Flavor::SL2) {
        u64 Q = R->qpow(m);
        G->elems.reserve((size_t)expect);
        for (u64 ia = 0; ia < Q; ++ia) {
            u64 a = R->from_index(ia);
            if (R->is_unit(a)) {
                u64 ai = R->inv_unit(a);
                for (u64 ib = 0; ib < Q; ++ib)
                    for (u64 ic = 0; ic < Q; ++ic) {
                        u64 bb = R->from_index(ib), cc = R->from_index(ic);
                        u64 d = R->mul(R->add(1, R->mul(bb, cc)), ai);
                        G->elems.push_back({{a, 0}, {bb, 0}, {cc, 0}, {d, 0}});
                    }
            } else {
                for (u64 ib = 0; ib < Q; ++ib) {
                    u64 bb = R->from_index(ib);
                    if (!R->is_unit(bb)) continue;
                    u64 bi = R->inv_unit(bb);
                    for (u64 id = 0; id < Q; ++id) {
                        u64 d = R->from_index(id);
                        u64 cc = R->mul(R->sub(R->mul(a, d), 1), bi);
                        G->elems.push_back({{a, 0}, {bb, 0}, {cc, 0}, {d, 0}});
                    }
                }
            }
        }
        G->index.reserve(G->elems.size() * 2);
        for (size_t i = 0; i < G->elems.size(); ++i) G->index[G->key(G->elems[i])] = (int)i;
    } else {
        if (std::pow(q, 8.0 * m) > 1.8e19) throw GuardError("U(1,1) key space exceeds 64 bits");
        std::vector<FMat> gens;
        QElt one = G->E->one(), zero{0, 0};
        for (u64 x : additive_gens(*R, m)) {
            gens.push_back({one, {x, 0}, zero, one});
            gens.push_back({one, zero, {x, 0}, one});
        }
        // O_E^x generators: a residue generator and 1 + pi^i (basis)
        const QuadRing& Q = *G->E;
        std::vector<QElt> tg;
        for (int a0 = 0; a0 < R->q && tg.empty(); ++a0)
            for (int b0 = 0; b0 < R->q && tg.empty(); ++b0) {
                QElt x{R->constant(a0), R->constant(b0)};
                if (!Q.is_unit(x)) continue;
                QElt y = Q.truncate(x, 1);
                long ord = 1;
                auto R1 = make_ring(b, p, f, 1);
                QuadRing E1(R1);
                QElt x1 = y;
                while (!(y == E1.one())) {
                    y = E1.mul(y, x1);
                    ++ord;
                }
                if (ord == (long)R->q * R->q - 1) tg.push_back(x);
            }
        for (int i = 1; i < m; ++i)
            for (u64 c : additive_gens(*R, 1)) {
                u64 s = R->shift_up(c, i);
                tg.push_back({R->add(1, s), 0});
                tg.push_back({1, s});
            }
        for (QElt t : tg) gens.push_back({t, zero, zero, Q.inv_unit(Q.conj(t))});
        closure(*G, gens);
        if ((double)G->elems.size() != expect) throw std::logic_error("U(1,1) closure has unexpected order");
    }
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(ck, G);
    return G;
}

bool fmembership(const FiniteGroup& G, const FMat& x, const SubgroupSpec& S) {
    const QuadRing& Q = *G.E;
    auto v = [&](QElt y) { return Q.val(y); };
    QElt zero{0, 0}, one = Q.one();
    const int j = S.param;
    switch (S.tag) {
        case SubTag::K:
        case SubTag::Kbar: return v(x.c) >= j;
        case SubTag::Iwahori: return v(x.c) >= 1;
        case SubTag::BK0:
        case SubTag::BbarK0: return x.c == zero;
        case SubTag::Principal: return v(Q.sub(x.a, one)) >= j && v(x.b) >= j && v(x.c) >= j && v(Q.sub(x.d, one)) >= j;
        case SubTag::N: return x.a == one && x.d == one && x.c == zero && x.b.b == 0 && v(x.b) >= j;
        case SubTag::Nbar: return x.a == one && x.d == one && x.b == zero && x.c.b == 0 && v(x.c) >= j;
        case SubTag::T0bar: return x.b == zero && x.c == zero;
        case SubTag::Zbar: return x.b == zero && x.c == zero && x.a == x.d;
        case SubTag::Kp:
        case SubTag::Kbarp: throw std::invalid_argument("K' subgroups do not lie in K_0; use the conjugated model");
    }
    return false;
}

FSubgroup subgroup(const FiniteGroup& G, const std::function<bool(const FMat&)>& pred) {
    FSubgroup H;
    std::vector<char> in(G.size(), 0);
    for (size_t i = 0; i < G.size(); ++i)
        if (pred(G.elems[i])) H.elems.push_back((int)i);
    std::vector<char> reached(G.size(), 0);
    std::vector<int> cur;
    int idpos = G.find(G.identity());
    reached[idpos] = 1;
    cur.push_back(idpos);
    for (int x : H.elems) {
        if (reached[x]) continue;
        H.gens.push_back(x);
        // extend closure
        for (size_t i = 0; i < cur.size(); ++i)
            for (int s : H.gens) {
                int y = G.find(G.mul(G.elems[cur[i]], G.elems[s]));
                if (!reached[y]) {
                    reached[y] = 1;
                    cur.push_back(y);
                }
            }
    }
    if (cur.size() != H.elems.size()) throw std::invalid_argument("predicate does not define a subgroup");
    return H;
}

FSubgroup subgroup(const FiniteGroup& G, const SubgroupSpec& S) {
    return subgroup(G, [&](const FMat& x) { return fmembership(G, x, S); });
}

size_t DoubleCosetSet::total() const {
    size_t t = 0;
    for (const auto& c : cosets) t += c.orbit_size;
    return t;
}

DoubleCosetSet double_cosets(const FiniteGroup& G, const FSubgroup& left, const FSubgroup& right, bool with_stabilizers) {
    const size_t n = G.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto findr = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int x, int y) {
        x = findr(x);
        y = findr(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    };
    for (size_t i = 0; i < n; ++i) {
        for (int l : left.gens) unite((int)i, G.find(G.mul(G.elems[l], G.elems[i])));
        for (int r : right.gens) unite((int)i, G.find(G.mul(G.elems[i], G.elems[r])));
    }
    DoubleCosetSet out;
    std::map<int, size_t> slot;
    for (size_t i = 0; i < n; ++i) {
        int r = findr((int)i);
        auto it = slot.find(r);
        if (it == slot.end()) {
            slot[r] = out.cosets.size();
            out.cosets.push_back({(int)i, 1, {}});
        } else {
            out.cosets[it->second].orbit_size++;
        }
    }
    if (!with_stabilizers) return out;
    std::vector<int> seen(n, -1);
    std::vector<FMat> Bt(n), Kt(n);
    for (auto& dc : out.cosets) {
        std::set<std::pair<u64, u64>> keys;
        std::vector<int> orbit{dc.rep};
        seen[dc.rep] = dc.rep;
        Bt[dc.rep] = G.identity();
        Kt[dc.rep] = G.identity();
        auto add_pair = [&](const FMat& b, const FMat& k) {
            if (keys.insert({G.key(b), G.key(k)}).second) dc.stabilizer.push_back({b, k});
        };
        for (size_t i = 0; i < orbit.size(); ++i) {
            int x = orbit[i];
            for (int l : left.gens) {
                int y = G.find(G.mul(G.elems[l], G.elems[x]));
                FMat b = G.mul(G.elems[l], Bt[x]);
                if (seen[y] != dc.rep) {
                    seen[y] = dc.rep;
                    Bt[y] = b;
                    Kt[y] = Kt[x];
                    orbit.push_back(y);
                } else {
                    add_pair(G.mul(G.inv(Bt[y]), b), G.mul(Kt[x], G.inv(Kt[y])));
                }
            }
            for (int r : right.gens) {
                int y = G.find(G.mul(G.elems[x], G.elems[r]));
                FMat k = G.mul(Kt[x], G.elems[r]);
                if (seen[y] != dc.rep) {
                    seen[y] = dc.rep;
                    Bt[y] = Bt[x];
                    Kt[y] = k;
                    orbit.push_back(y);
                } else {
                    add_pair(G.mul(G.inv(Bt[y]), Bt[x]), G.mul(k, G.inv(Kt[y])));
                }
            }
        }
    }
    return out;
}

}  // namespace nf
