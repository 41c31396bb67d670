#include "nf/characters.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace nf {

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
    int L = lcm_int(M, o.M);
    return {L, (long)a * (L / M) + (long)o.a * (L / o.M)};
}

int RootOfUnity::reduced_order() const { return M / std::gcd(a, M); }

int RootOfUnity::in_order(int N) const {
    int r = reduced_order();
    if (N % r != 0) throw std::logic_error("root of unity order does not divide target order");
    int g = std::gcd(a, M);
    long ar = a / g;
    return (int)((ar * (N / r)) % N);
}

bool RootOfUnity::operator==(const RootOfUnity& o) const { return (long)a * o.M == (long)o.a * M; }

// ---------------------------------------------------------------- SNF

namespace {

using Z = mpz_class;
using ZMat = std::vector<std::vector<Z>>;

// Diagonalizes R by unimodular row/column operations; returns (D diag, V, Vinv)
// with U R V = D.
void smith(ZMat R, std::vector<Z>& diag, ZMat& V, ZMat& Vinv) {
    size_t k = R.size();
    V.assign(k, std::vector<Z>(k, 0));
    Vinv = V;
    for (size_t i = 0; i < k; ++i) V[i][i] = Vinv[i][i] = 1;
    auto col_addmul = [&](size_t dst, size_t src, const Z& c) {  // col dst += c col src
        for (size_t i = 0; i < k; ++i) R[i][dst] += c * R[i][src];
        for (size_t i = 0; i < k; ++i) V[i][dst] += c * V[i][src];
        for (size_t j = 0; j < k; ++j) Vinv[src][j] -= c * Vinv[dst][j];
    };
    auto col_swap = [&](size_t a, size_t b) {
        for (size_t i = 0; i < k; ++i) std::swap(R[i][a], R[i][b]);
        for (size_t i = 0; i < k; ++i) std::swap(V[i][a], V[i][b]);
        std::swap(Vinv[a], Vinv[b]);
    };
    auto col_neg = [&](size_t a) {
        for (size_t i = 0; i < k; ++i) R[i][a] = -R[i][a];
        for (size_t i = 0; i < k; ++i) V[i][a] = -V[i][a];
        for (size_t j = 0; j < k; ++j) Vinv[a][j] = -Vinv[a][j];
    };
    bool exhausted = false;
    for (size_t t = 0; t < k && !exhausted; ++t) {
        while (true) {
            size_t bi = k, bj = k;
            for (size_t i = t; i < k; ++i)
                for (size_t j = t; j < k; ++j)
                    if (R[i][j] != 0 && (bi == k || abs(R[i][j]) < abs(R[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == k) {
                exhausted = true;
                break;
            }
            std::swap(R[t], R[bi]);
            col_swap(t, bj);
            if (R[t][t] < 0) col_neg(t);
            bool done = true;
            for (size_t i = t + 1; i < k; ++i) {
                Z qt = R[i][t] / R[t][t];
                if (qt != 0)
                    for (size_t j = t; j < k; ++j) R[i][j] -= qt * R[t][j];
                if (R[i][t] != 0) done = false;
            }
            for (size_t j = t + 1; j < k; ++j) {
                Z qt = R[t][j] / R[t][t];
                if (qt != 0) col_addmul(j, t, -qt);
                if (R[t][j] != 0) done = false;
            }
            if (!done) continue;
            size_t bad = k;
            for (size_t i = t + 1; i < k && bad == k; ++i)
                for (size_t j = t + 1; j < k; ++j)
                    if (R[i][j] % R[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == k) break;
            for (size_t j = t; j < k; ++j) R[t][j] += R[bad][j];
        }
    }
    diag.resize(k);
    for (size_t i = 0; i < k; ++i) diag[i] = abs(R[i][i]);
}

}  // namespace

// ---------------------------------------------------------------- UnitGroup

UnitGroup::UnitGroup(UnitKind kind_, Backend b, int p, int f, int n_) : kind(kind_), n(n_) {
    R = make_ring(b, p, f, n);
    if (kind == UnitKind::E) E = make_quad_ext(R);
    const int q = R->q;
    u64 total = R->qpow(n);
    if (kind == UnitKind::E) total *= R->qpow(n);
    if (total > 20000000) throw GuardError("unit group ambient too large");
    pos.assign(total, -1);

    // generators as canonical indices
    std::vector<u64> gens;
    auto idxF = [&](u64 x) { return R->index(x, n); };
    if (kind == UnitKind::F) {
        gens.push_back(idxF(R->constant(R->k->primitive())));
        gens.push_back(idxF(R->neg(1)));
        for (int i = 1; i < n; ++i) {
            int pj = 1;
            for (int j = 0; j < f; ++j, pj *= p) gens.push_back(idxF(R->add(1, R->shift_up(R->constant(pj), i))));
        }
    } else {
        // a generator of F_{q^2}^x among constants
        u64 gen = 0;
        bool found = false;
        auto R1 = make_ring(b, p, f, 1);
        QuadRing E1(R1);
        for (int a0 = 0; a0 < q && !found; ++a0)
            for (int b0 = 0; b0 < q && !found; ++b0) {
                QElt x{(u64)a0, (u64)b0};
                if (!E1.is_unit(x)) continue;
                QElt y = x;
                long ord = 1;
                while (!(y == E1.one())) {
                    y = E1.mul(y, x);
                    ++ord;
                }
                if (ord == (long)q * q - 1) {
                    gen = E->index(QElt{R->constant(a0), R->constant(b0)}, n);
                    found = true;
                }
            }
        gens.push_back(gen);
        for (int i = 1; i < n; ++i) {
            int pj = 1;
            for (int j = 0; j < f; ++j, pj *= p) {
                u64 c = R->shift_up(R->constant(pj), i);
                gens.push_back(E->index(QElt{R->add(1, c), 0}, n));
                gens.push_back(E->index(QElt{1, c}, n));
            }
        }
    }
    const size_t k = gens.size();
    u64 one = kind == UnitKind::F ? idxF(1) : E->index(E->one(), n);
    elems.push_back(one);
    pos[one] = 0;
    std::vector<int> coords(k, 0);
    ZMat rel(k, std::vector<Z>(k, 0));
    for (size_t i = 0; i < k; ++i) {
        u64 g = gens[i];
        u64 cur = g;
        int ki = 1;
        while (pos[cur] < 0) {
            cur = mul_index(cur, g);
            ++ki;
        }
        rel[i][i] = ki;
        int pc = pos[cur];
        for (size_t j = 0; j < k; ++j) rel[i][j] -= coords[(size_t)pc * k + j];
        size_t size0 = elems.size();
        u64 gt = one;
        for (int t = 1; t < ki; ++t) {
            gt = mul_index(gt, g);
            for (size_t h = 0; h < size0; ++h) {
                u64 x = mul_index(elems[h], gt);
                if (pos[x] >= 0) throw std::logic_error("unit group enumeration collision");
                pos[x] = (int)elems.size();
                elems.push_back(x);
                for (size_t j = 0; j < k; ++j) coords.push_back(coords[h * k + j]);
                coords[coords.size() - k + i] += t;
            }
        }
    }
    std::vector<Z> diag;
    ZMat V, Vinv;
    smith(rel, diag, V, Vinv);
    std::vector<size_t> keep;
    for (size_t i = 0; i < k; ++i)
        if (diag[i] > 1) keep.push_back(i);
    for (size_t i : keep) {
        d.push_back((int)diag[i].get_si());
        exponent = lcm_int(exponent, d.back());
    }
    size_t r = keep.size();
    dlog.assign(elems.size() * r, 0);
    for (size_t ii = 0; ii < r; ++ii) {
        size_t i = keep[ii];
        std::vector<long> vcol(k);
        for (size_t j = 0; j < k; ++j) {
            Z m = V[j][i] % d[ii];
            if (m < 0) m += d[ii];
            vcol[j] = m.get_si();
        }
        for (size_t e = 0; e < elems.size(); ++e) {
            long s = 0;
            for (size_t j = 0; j < k; ++j) s += vcol[j] * coords[e * k + j];
            dlog[e * r + ii] = (int)(s % d[ii]);
        }
        // generator: coordinates row i of Vinv
        u64 x = one;
        for (size_t j = 0; j < k; ++j) {
            Z ex = Vinv[i][j] % (long)elems.size();
            if (ex < 0) ex += (long)elems.size();
            for (long t = 0; t < ex.get_si(); ++t) x = mul_index(x, gens[j]);
        }
        snf_gens.push_back(x);
    }
    for (size_t ii = 0; ii < r; ++ii) {
        int pgen = pos[snf_gens[ii]];
        for (size_t jj = 0; jj < r; ++jj)
            if (dlog[(size_t)pgen * r + jj] != (ii == jj ? 1 % d[jj] : 0))
                throw std::logic_error("SNF generator check failed");
    }
}

u64 UnitGroup::mul_index(u64 x, u64 y) const {
    if (kind == UnitKind::F) return R->index(R->mul(R->from_index(x), R->from_index(y)), n);
    return E->index(E->mul(E->from_index(x, n), E->from_index(y, n)), n);
}

int UnitGroup::level(int position) const {
    u64 x = elems[position];
    if (kind == UnitKind::F) return R->val(R->sub(R->from_index(x), 1));
    return E->val(E->sub(E->from_index(x, n), E->one()));
}

int UnitGroup::position_of_raw(const Ring& S, u64 x) const { return pos[S.index(x, n)]; }

int UnitGroup::position_of_raw(const QuadRing& S, QElt x) const {
    return pos[S.R->index(x.a, n) * R->qpow(n) + S.R->index(x.b, n)];
}

std::shared_ptr<const UnitGroup> unit_group(UnitKind kind, Backend b, int p, int f, int n) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, int, int>, std::shared_ptr<const UnitGroup>> cache;
    auto key = std::make_tuple((int)kind, (int)b, p, f, n);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto G = std::make_shared<const UnitGroup>(kind, b, p, f, n);
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(key, G);
    return G;
}

// ---------------------------------------------------------------- UnitChar

UnitChar char_from_coords(std::shared_ptr<const UnitGroup> G, std::vector<int> a) {
    UnitChar c;
    const size_t r = G->d.size();
    const int E = G->exponent;
    std::vector<long> w(r);
    for (size_t i = 0; i < r; ++i) {
        a[i] = ((a[i] % G->d[i]) + G->d[i]) % G->d[i];
        w[i] = (long)a[i] * (E / G->d[i]);
    }
    std::vector<int> t(G->size());
    int g = E;
    for (size_t e = 0; e < G->size(); ++e) {
        long s = 0;
        for (size_t i = 0; i < r; ++i) s += w[i] * G->dlog[e * r + i];
        t[e] = (int)(s % E);
        g = std::gcd(g, t[e]);
    }
    if (g == 0) g = E;
    c.order = E / g;
    for (auto& x : t) x /= g;
    c.table = std::move(t);
    c.a = std::move(a);
    c.G = std::move(G);
    c.conductor = conductor(c);
    return c;
}

UnitChar char_from_values(std::shared_ptr<const UnitGroup> G, const std::function<RootOfUnity(int)>& value) {
    std::vector<int> a(G->d.size());
    for (size_t i = 0; i < a.size(); ++i) a[i] = value(G->pos[G->snf_gens[i]]).in_order(G->d[i]);
    UnitChar c = char_from_coords(G, a);
    for (size_t e = 0; e < G->size(); ++e)
        if (!(c.at((int)e) == value((int)e))) throw std::invalid_argument("values do not define a character");
    return c;
}

int conductor(const UnitChar& chi) {
    int L = -1;
    for (size_t e = 0; e < chi.table.size(); ++e)
        if (chi.table[e] != 0) L = std::max(L, chi.G->level((int)e));
    return L + 1;
}

RootOfUnity UnitChar::eval(const Ring& S, u64 x) const {
    int p = G->position_of_raw(S, x);
    if (p < 0) throw std::domain_error("unit character evaluated at a non-unit");
    return at(p);
}

RootOfUnity UnitChar::eval(const QuadRing& S, QElt x) const {
    int p = G->position_of_raw(S, x);
    if (p < 0) throw std::domain_error("unit character evaluated at a non-unit");
    return at(p);
}

RootOfUnity UnitChar::eval(const RElem& x) const {
    if (x.is_zero() || x.valuation() != 0) throw std::domain_error("unit character evaluated at a non-unit");
    if (x.precision() < conductor) throw PrecisionError("unit known below the character conductor");
    return eval(*x.ring(), x.unit_part());
}

UnitChar UnitChar::operator*(const UnitChar& o) const {
    if (G != o.G) throw std::logic_error("characters of different groups");
    std::vector<int> s(a.size());
    for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + o.a[i];
    return char_from_coords(G, s);
}

UnitChar UnitChar::inverse() const { return pow(-1); }

UnitChar UnitChar::pow(long e) const {
    std::vector<int> s(a.size());
    for (size_t i = 0; i < a.size(); ++i) s[i] = (int)(((long)a[i] * e) % G->d[i]);
    return char_from_coords(G, s);
}

std::string UnitChar::label() const {
    std::ostringstream os;
    os << (G->kind == UnitKind::F ? "F" : "E") << "n" << G->n << "[";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << "] ord " << order << " c " << conductor;
    return os.str();
}

std::vector<UnitChar> enumerate_unit_chars(UnitKind kind, Backend b, int p, int f, int n) {
    auto G = unit_group(kind, b, p, f, n);
    if (G->size() > 1000000) throw GuardError("character group larger than 10^6");
    std::vector<UnitChar> out;
    std::vector<int> a(G->d.size(), 0);
    while (true) {
        out.push_back(char_from_coords(G, a));
        int i = (int)a.size() - 1;
        while (i >= 0 && ++a[i] == G->d[i]) a[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

std::vector<UnitChar> enumerate_unit_chars(const Ring& R, int n) {
    return enumerate_unit_chars(UnitKind::F, R.backend, R.p, R.f, n);
}

// ---------------------------------------------------------------- FieldChar

FieldChar FieldChar::operator*(const FieldChar& o) const {
    return {unit * o.unit, at_pi * o.at_pi, qgrade + o.qgrade};
}

FieldChar FieldChar::inverse() const { return {unit.inverse(), at_pi.inverse(), -qgrade}; }

std::string FieldChar::label() const {
    std::ostringstream os;
    os << "unit " << unit.label() << ", pi -> z" << at_pi.M << "^" << at_pi.a;
    if (qgrade) os << " q^" << qgrade;
    return os.str();
}

int conductor(const FieldChar& chi) { return chi.unit.conductor; }

UnitChar restrict_to_F(const UnitChar& chiE) {
    const auto& GE = *chiE.G;
    auto GF = unit_group(UnitKind::F, GE.R->backend, GE.R->p, GE.R->f, GE.n);
    return char_from_values(GF, [&](int e) {
        u64 x = GF->R->from_index(GF->elems[e]);
        return chiE.eval(*GE.E, QElt{x, 0});
    });
}

FieldChar restrict_to_F(const FieldChar& chiE) { return {restrict_to_F(chiE.unit), chiE.at_pi, 2 * chiE.qgrade}; }

std::vector<int> norm_one_positions(const UnitGroup& G) {
    std::vector<int> out;
    for (size_t e = 0; e < G.size(); ++e)
        if (G.E->norm(G.E->from_index(G.elems[e], G.n)) == 1) out.push_back((int)e);
    return out;
}

UnitChar galois_twist(const UnitChar& chiE) {
    const auto& G = *chiE.G;
    return char_from_values(chiE.G, [&](int e) {
        return chiE.at(G.pos[G.E->index(G.E->conj(G.E->from_index(G.elems[e], G.n)), G.n)]);
    });
}

std::vector<UnitChar> enumerate_extensions(std::shared_ptr<const UnitGroup> G, const std::vector<int>& H,
                                           const std::function<RootOfUnity(int)>& omega) {
    std::vector<RootOfUnity> w;
    for (int h : H) w.push_back(omega(h));
    std::vector<UnitChar> out;
    for (auto& c : enumerate_unit_chars(G->kind, G->R->backend, G->R->p, G->R->f, G->n)) {
        bool ok = true;
        for (size_t i = 0; i < H.size() && ok; ++i) ok = c.at(H[i]) == w[i];
        if (ok) out.push_back(std::move(c));
    }
    if (H.empty() || out.size() * H.size() != G->size())
        throw std::invalid_argument("omega is not a character of the subgroup");
    return out;
}

UnitChar change_level(const UnitChar& chi, int n2) {
    if (n2 == chi.n()) return chi;
    if (n2 < chi.conductor) throw std::invalid_argument("level below conductor");
    const auto& G = *chi.G;
    auto G2 = unit_group(G.kind, G.R->backend, G.R->p, G.R->f, n2);
    return char_from_values(G2, [&](int e) {
        if (G.kind == UnitKind::F) return chi.eval(*G2->R, G2->R->from_index(G2->elems[e]));
        return chi.eval(*G2->E, G2->E->from_index(G2->elems[e], n2));
    });
}

// ---------------------------------------------------------------- psi

RootOfUnity psi_eval(const RElem& a, const RElem& x) {
    RElem y = a * x;
    if (y.is_zero()) {
        if (y.valuation() < 0) throw PrecisionError("psi: argument known only modulo a fractional ideal");
        return {1, 0};
    }
    int s = y.valuation();
    if (s >= 0) return {1, 0};
    const Ring& R = *y.ring();
    if (y.precision() < -s) throw PrecisionError("psi: fractional part not determined");
    if (R.backend == Backend::Mixed) {
        u64 m = R.qpow(-s);
        return {(int)m, (long)(y.unit_part() % m)};
    }
    int c = R.digit(y.unit_part(), -1 - s);
    return {R.p, R.k->trace(c)};
}

}  // namespace nf
