#include "nf/supercuspidal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_set>

namespace nf {

// ---------------------------------------------------------------- GL2(F_q)

ResidueGL2::ResidueGL2(Backend b, int p, int f) : R1(make_ring(b, p, f, 1)), E1(make_quad_ext(R1)) {
    if (p == 2) throw std::invalid_argument("residue characteristic 2 is not supported");
}

Mat2F ResidueGL2::mul(const Mat2F& x, const Mat2F& y) const {
    const FiniteField& K = k();
    return {K.add(K.mul(x.a, y.a), K.mul(x.b, y.c)), K.add(K.mul(x.a, y.b), K.mul(x.b, y.d)),
            K.add(K.mul(x.c, y.a), K.mul(x.d, y.c)), K.add(K.mul(x.c, y.b), K.mul(x.d, y.d))};
}

int ResidueGL2::det(const Mat2F& x) const { return k().sub(k().mul(x.a, x.d), k().mul(x.b, x.c)); }

Mat2F ResidueGL2::inv(const Mat2F& x) const {
    const FiniteField& K = k();
    int di = K.inv(det(x));
    return {K.mul(x.d, di), K.neg(K.mul(x.b, di)), K.neg(K.mul(x.c, di)), K.mul(x.a, di)};
}

Mat2F ResidueGL2::from_key(int key) const {
    Mat2F m;
    m.d = key % q();
    key /= q();
    m.c = key % q();
    key /= q();
    m.b = key % q();
    m.a = key / q();
    return m;
}

std::vector<Mat2F> ResidueGL2::gl2() const {
    std::vector<Mat2F> out;
    const int Q4 = q() * q() * q() * q();
    for (int key = 0; key < Q4; ++key) {
        Mat2F m = from_key(key);
        if (det(m) != 0) out.push_back(m);
    }
    return out;
}

std::vector<Mat2F> ResidueGL2::sl2() const {
    std::vector<Mat2F> out;
    for (auto& m : gl2())
        if (det(m) == 1) out.push_back(m);
    return out;
}

const char* class_kind_name(ClassKind k) {
    switch (k) {
        case ClassKind::Central: return "central";
        case ClassKind::CentralUnipotent: return "central-unipotent";
        case ClassKind::Split: return "split";
        case ClassKind::Elliptic: return "elliptic";
    }
    return "?";
}

namespace {

int sqrt_fq(const FiniteField& K, int x) {
    for (int s = 0; s < K.q; ++s)
        if (K.mul(s, s) == x) return s;
    throw std::logic_error("no square root in the residue field");
}

struct Eigen {
    ClassKind kind;
    int z = 0;        // central part or eigenvalue for unipotent classes
    int e1 = 0, e2 = 0;  // split eigenvalues
    QElt zeta{};      // elliptic eigenvalue
    int key = 0;
};

Eigen eigen(const ResidueGL2& G, const Mat2F& g) {
    const FiniteField& K = G.k();
    const int q = G.q();
    int t = K.add(g.a, g.d), D = G.det(g);
    int half = K.inv(K.from_int(2));
    int disc = K.sub(K.mul(t, t), K.mul(K.from_int(4), D));
    Eigen e;
    if (g.b == 0 && g.c == 0 && g.a == g.d) {
        e.kind = ClassKind::Central;
        e.z = g.a;
        e.key = e.z;
    } else if (disc == 0) {
        e.kind = ClassKind::CentralUnipotent;
        e.z = K.mul(t, half);
        e.key = q + e.z;
    } else if (K.is_square(disc)) {
        int s = sqrt_fq(K, disc);
        int x = K.mul(K.add(t, s), half), y = K.mul(K.sub(t, s), half);
        e.kind = ClassKind::Split;
        e.e1 = std::min(x, y);
        e.e2 = std::max(x, y);
        e.key = 2 * q + e.e1 * q + e.e2;
    } else {
        int eps = G.R1->digit(G.R1->eps, 0);
        int s = sqrt_fq(K, K.mul(disc, K.inv(eps)));
        int a = K.mul(t, half), b = K.mul(s, half);
        int b2 = std::min(b, K.neg(b));
        e.kind = ClassKind::Elliptic;
        e.zeta = G.residue_ext(a, b2);
        e.key = 2 * q + q * q + a * q + b2;
    }
    return e;
}

Cyclo rou(const std::shared_ptr<const CycloCtx>& ctx, RootOfUnity r, const Q& coef = 1) {
    return Cyclo::zeta(ctx, r.in_order(ctx->M), coef);
}

// psi-bar on F_q: x -> psi(x / pi)
RootOfUnity psi_bar(Backend b, int p, int f, int x) {
    auto R2 = make_ring(b, p, f, 2);
    return psi_eval(RElem(R2, 1), RElem::pi_power(R2, -1) * RElem::from_raw(R2, R2->constant(x)));
}

}  // namespace

bool is_regular(const UnitChar& theta) {
    if (theta.G->kind != UnitKind::E) throw std::invalid_argument("theta must be a character of the quadratic extension");
    return !(theta == galois_twist(theta));
}

std::vector<UnitChar> regular_orbit_reps(Backend b, int p, int f) {
    std::vector<UnitChar> out;
    for (auto& t : enumerate_unit_chars(UnitKind::E, b, p, f, 1)) {
        if (!is_regular(t)) continue;
        UnitChar tq = galois_twist(t);
        if (std::none_of(out.begin(), out.end(), [&](const UnitChar& u) { return u == tq; })) out.push_back(t);
    }
    return out;
}

Cyclo CuspidalCharData::value(const Mat2F& g) const {
    int c = class_of_key[G->key(g)];
    if (c < 0) throw std::invalid_argument("matrix is not invertible");
    return classes[c].value;
}

Q inner_gl2(const CuspidalCharData& s, const CuspidalCharData& t) {
    auto ctx = cyclo_ctx(lcm_int(s.ctx->M, t.ctx->M));
    Cyclo acc(ctx);
    long total = 0;
    for (auto& c : s.classes) {
        Cyclo v = t.value(c.rep).conj().lift(ctx);
        acc += c.value.lift(ctx) * v * Q(c.size);
        total += c.size;
    }
    if (!acc.is_rational()) throw std::logic_error("inner product is not rational");
    return acc.rational() / total;
}

Q inner_sl2(const ResidueGL2& G, const std::vector<Cyclo>& x, const std::vector<Cyclo>& y) {
    auto els = G.sl2();
    auto ctx = x[G.key(els[0])].ctx();
    Cyclo acc(ctx);
    for (auto& g : els) acc += x[G.key(g)] * y[G.key(g)].conj();
    if (!acc.is_rational()) throw std::logic_error("inner product is not rational");
    return acc.rational() / (long)els.size();
}

CuspidalCharData cuspidal_character(std::shared_ptr<const ResidueGL2> G, const UnitChar& theta) {
    if (theta.G->n != 1 || theta.G->kind != UnitKind::E)
        throw std::invalid_argument("theta must be a character of F_{q^2}^x");
    if (!is_regular(theta)) throw std::invalid_argument("theta is not regular");
    CuspidalCharData S;
    S.G = G;
    S.theta = theta;
    const int q = G->q();
    const FiniteField& K = G->k();
    const Backend bk = G->R1->backend;
    S.ctx = cyclo_ctx(lcm_int(lcm_int(q * q - 1, theta.order), G->R1->p));
    const auto& ctx = S.ctx;
    auto th = [&](QElt x) { return rou(ctx, theta.eval(*G->E1, x)); };
    auto thz = [&](int z) { return th(G->residue_ext(z, 0)); };

    const int Q4 = q * q * q * q;
    S.class_of_key.assign(Q4, -1);
    std::map<int, int> by_key;
    for (auto& g : G->gl2()) {
        Eigen e = eigen(*G, g);
        auto it = by_key.find(e.key);
        if (it == by_key.end()) {
            GL2Class c;
            c.kind = e.kind;
            c.rep = g;
            switch (e.kind) {
                case ClassKind::Central: c.value = thz(e.z) * Q(q - 1); break;
                case ClassKind::CentralUnipotent: c.value = -thz(e.z); break;
                case ClassKind::Split: c.value = Cyclo(ctx); break;
                case ClassKind::Elliptic: c.value = -(th(e.zeta) + th(G->E1->conj(e.zeta))); break;
            }
            it = by_key.emplace(e.key, (int)S.classes.size()).first;
            S.classes.push_back(c);
        }
        S.classes[it->second].size++;
        S.class_of_key[G->key(g)] = it->second;
    }
    Cyclo id = S.value(Mat2F{});
    if (!id.is_rational()) throw std::logic_error("character degree is not rational");
    S.dimension = (int)id.rational().get_num().get_si();
    Cyclo m1 = S.value(Mat2F{K.neg(1), 0, 0, K.neg(1)});
    S.omega_minus1 = m1 == id ? 1 : -1;
    if (inner_gl2(S, S) != 1) throw std::logic_error("cuspidal character failed the irreducibility check");

    S.restriction.assign(Q4, Cyclo(ctx));
    auto els = G->sl2();
    for (auto& g : els) S.restriction[G->key(g)] = S.value(g);
    Q nrm = inner_sl2(*G, S.restriction, S.restriction);
    if (nrm != 1 && nrm != 2) throw std::logic_error("restriction to SL2 has unexpected norm");
    S.splits = nrm == 2;
    if (!S.splits) return S;

    // quadratic Gauss sum for psi-bar, g^2 = leg(-1) q
    Cyclo gauss(ctx);
    for (int x = 1; x < q; ++x)
        gauss += rou(ctx, psi_bar(bk, G->R1->p, G->R1->f, x), K.is_square(x) ? 1 : -1);
    for (int sign : {1, -1}) {
        std::vector<Cyclo> v(Q4, Cyclo(ctx));
        for (auto& g : els) {
            Eigen e = eigen(*G, g);
            Cyclo val(ctx);
            switch (e.kind) {
                case ClassKind::Central: val = thz(e.z) * Q(q - 1, 2); break;
                case ClassKind::CentralUnipotent: {
                    int zi = K.inv(e.z);
                    int y = K.mul(zi, g.b), w = K.mul(zi, g.c);
                    int cls = y != 0 ? (K.is_square(y) ? 1 : -1) : (K.is_square(K.neg(w)) ? 1 : -1);
                    val = thz(e.z) * ((Cyclo(ctx, -1) + gauss * Q(sign * cls)) * Q(1, 2));
                    break;
                }
                case ClassKind::Split: break;
                case ClassKind::Elliptic: val = -th(e.zeta); break;
            }
            v[G->key(g)] = val;
        }
        S.constituents.push_back(v);
    }
    for (auto& v : S.constituents) {
        if (inner_sl2(*G, v, v) != 1) throw std::logic_error("SL2 constituent failed the irreducibility check");
        Cyclo w(ctx);
        for (int b = 0; b < q; ++b) w += v[G->key(Mat2F{1, b, 0, 1})] * rou(ctx, psi_bar(bk, G->R1->p, G->R1->f, b).inverse());
        S.constituent_generic.push_back(!w.is_zero());
    }
    for (auto& g : els) {
        int k = G->key(g);
        if (S.constituents[0][k] + S.constituents[1][k] != S.restriction[k])
            throw std::logic_error("SL2 constituents do not sum to the restriction");
    }
    if (inner_sl2(*G, S.constituents[0], S.constituents[1]) != 0) throw std::logic_error("SL2 constituents coincide");
    return S;
}

const std::vector<Cyclo>& LevelOneDatum::values() const {
    if (constituent < 0) return sigma->restriction;
    return sigma->constituents.at(constituent);
}

int LevelOneDatum::dimension() const { return constituent < 0 ? sigma->dimension : sigma->dimension / 2; }

std::vector<UnitChar> admissible_etas(const CuspidalCharData& sigma, int cmax) {
    std::vector<UnitChar> out;
    const Ring& R1 = *sigma.G->R1;
    int n = std::max(cmax, 1);
    auto Rn = make_ring(R1.backend, R1.p, R1.f, n);
    for (auto& e : enumerate_unit_chars(UnitKind::F, R1.backend, R1.p, R1.f, n)) {
        if (e.conductor > cmax) continue;
        RootOfUnity v = e.eval(*Rn, Rn->neg(1));
        if ((v.is_one() ? 1 : -1) == sigma.omega_minus1) out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------- Mackey

namespace {

struct M4 {
    u64 a, b, c, d;
};

struct OrbitData {
    u64 root = 0;
    u64 size = 0;
    int image = 0;
};

struct ShellData {
    int N = 0;
    std::vector<OrbitData> orbits;
    std::vector<std::vector<u64>> images;  // keys matkey * q^ce + d-index
    std::vector<std::string> roots;
};

class ShellBuilder {
public:
    ShellBuilder(Backend b, int p, int f, int m, int D, int ce, u64 guard)
        : m(m), D(D), ce(ce), N(std::max({D + 1, m, ce, 1})), R(make_ring(b, p, f, N)), q(R->q) {
        npts = D == 0 ? 1 : R->qpow(D) + R->qpow(D - 1);
        if (npts > guard) throw GuardError("coset enumeration exceeds the size guard");
        Rc = make_ring(b, p, f, std::max(ce, 1));
        QE = ce == 0 ? 1 : Rc->qpow(ce);
        std::vector<u64> add;
        if (b == Backend::Mixed) add.push_back(1);
        else
            for (int i = 0; i < N; ++i)
                for (int j = 0, pj = 1; j < f; ++j, pj *= p) add.push_back(R->shift_up(R->constant(pj), i));
        for (u64 x : add) gens.push_back({1, x, 0, 1});
        for (u64 x : add) {
            u64 y = R->shift_up(x, m);
            if (y != 0) gens.push_back({1, 0, y, 1});
        }
        for (u64 idx : unit_group(UnitKind::F, b, p, f, N)->snf_gens) {
            u64 u = R->from_index(idx);
            gens.push_back({u, 0, 0, R->inv_unit(u)});
        }
    }

    ShellData build() {
        ShellData S;
        S.N = N;
        std::vector<int> orbit_of(npts, -1);
        std::vector<M4> trans(npts);
        std::map<std::vector<u64>, int> interned;
        for (u64 r = 0; r < npts; ++r) {
            if (orbit_of[r] >= 0) continue;
            const int id = (int)S.orbits.size();
            M4 kr = root_matrix(r), kri = inv(kr);
            std::unordered_set<u64> group{identity_key()};
            std::vector<u64> ggens;
            std::deque<u64> queue{r};
            orbit_of[r] = id;
            trans[r] = {1, 0, 0, 1};
            u64 size = 0;
            while (!queue.empty()) {
                u64 o = queue.front();
                queue.pop_front();
                ++size;
                for (const M4& s : gens) {
                    M4 so = mul(s, trans[o]);
                    u64 o2 = act(so, r);
                    if (orbit_of[o2] < 0) {
                        orbit_of[o2] = id;
                        trans[o2] = so;
                        queue.push_back(o2);
                        continue;
                    }
                    M4 h = mul(inv(trans[o2]), so);
                    u64 key = image_key(mul(kri, mul(h, kr)), h);
                    if (!group.count(key)) close(group, ggens, key);
                }
            }
            std::vector<u64> img(group.begin(), group.end());
            std::sort(img.begin(), img.end());
            auto it = interned.find(img);
            if (it == interned.end()) {
                it = interned.emplace(img, (int)S.images.size()).first;
                S.images.push_back(img);
            }
            S.orbits.push_back({r, size, it->second});
            S.roots.push_back(point_name(r));
        }
        return S;
    }

private:
    int m, D, ce, N;
    std::shared_ptr<const Ring> R, Rc;
    int q;
    u64 npts = 1, QE = 1;
    std::vector<M4> gens;

    M4 mul(const M4& x, const M4& y) const {
        return {R->add(R->mul(x.a, y.a), R->mul(x.b, y.c)), R->add(R->mul(x.a, y.b), R->mul(x.b, y.d)),
                R->add(R->mul(x.c, y.a), R->mul(x.d, y.c)), R->add(R->mul(x.c, y.b), R->mul(x.d, y.d))};
    }
    M4 inv(const M4& x) const { return {x.d, R->neg(x.b), R->neg(x.c), x.a}; }

    // points [x:1], x in O/P^D, then [1:y], y in P/P^D
    M4 root_matrix(u64 idx) const {
        if (D == 0) return {1, 0, 0, 1};
        u64 QD = R->qpow(D);
        if (idx < QD) return {1, R->from_index(idx), 0, 1};
        u64 y = R->shift_up(R->from_index(idx - QD), 1);
        return {0, 1, R->neg(1), y};
    }
    std::string point_name(u64 idx) const {
        if (D == 0) return "*";
        u64 QD = R->qpow(D);
        if (idx < QD) return "[" + R->str(R->truncate(R->from_index(idx), D)) + ":1]";
        return "[1:" + R->str(R->truncate(R->shift_up(R->from_index(idx - QD), 1), D)) + "]";
    }
    // image of the root r under the matrix g
    u64 act(const M4& g, u64 r) const {
        if (D == 0) return 0;
        M4 k = mul(g, root_matrix(r));
        u64 u = k.b, v = k.d;
        if (R->is_unit(v)) return R->index(R->mul(u, R->inv_unit(v)), D);
        u64 y = R->mul(v, R->inv_unit(u));
        return R->qpow(D) + R->index(R->shift_down(y, 1), D - 1);
    }
    u64 identity_key() const { return (u64)((1 * q + 0) * q * q + 1) * QE + (ce == 0 ? 0 : Rc->index(1, ce)); }
    // x = k_r^{-1} h k_r, sigma sees t^{-1} x t mod P and eta sees d_h mod P^ce
    u64 image_key(const M4& x, const M4& h) const {
        int a = R->digit(x.a, 0), d = R->digit(x.d, 0);
        int b, c;
        if (D == 0) {
            b = R->digit(x.b, 0);
            c = R->digit(x.c, 0);
        } else {
            if (R->val(x.b) < D) throw std::logic_error("stabilizer element outside Gamma^0");
            b = R->digit(R->shift_down(x.b, D), 0);
            c = 0;
        }
        u64 mk = (u64)(((a * q + b) * q + c) * q + d);
        u64 e = ce == 0 ? 0 : Rc->index(R->truncate(h.d, ce), ce);
        return mk * QE + e;
    }
    u64 key_mul(u64 x, u64 y) const {
        u64 ex = x % QE, ey = y % QE;
        u64 mx = x / QE, my = y / QE;
        const FiniteField& K = *R->k;
        const u64 uq = (u64)q;
        int xd = (int)(mx % uq), xc = (int)(mx / uq % uq), xb = (int)(mx / uq / uq % uq), xa = (int)(mx / uq / uq / uq);
        int yd = (int)(my % uq), yc = (int)(my / uq % uq), yb = (int)(my / uq / uq % uq), ya = (int)(my / uq / uq / uq);
        int a = K.add(K.mul(xa, ya), K.mul(xb, yc)), b = K.add(K.mul(xa, yb), K.mul(xb, yd));
        int c = K.add(K.mul(xc, ya), K.mul(xd, yc)), d = K.add(K.mul(xc, yb), K.mul(xd, yd));
        u64 e = ce == 0 ? 0 : Rc->index(Rc->mul(Rc->from_index(ex), Rc->from_index(ey)), ce);
        return (u64)(((a * q + b) * q + c) * q + d) * QE + e;
    }
    void close(std::unordered_set<u64>& group, std::vector<u64>& ggens, u64 g) {
        ggens.push_back(g);
        std::vector<u64> frontier(group.begin(), group.end());
        while (!frontier.empty()) {
            std::vector<u64> next;
            for (u64 x : frontier)
                for (u64 s : ggens) {
                    u64 y = key_mul(x, s);
                    if (group.insert(y).second) next.push_back(y);
                }
            frontier.swap(next);
        }
    }
};

const ShellData& shell_data(Backend b, int p, int f, int m, int D, int ce, u64 guard) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, int, int, int>, std::shared_ptr<ShellData>> cache;
    auto key = std::make_tuple((int)b, p, f, m, D, ce);
    u64 qD = 1;
    for (int i = 0; i < D; ++i) qD *= (u64)make_ring(b, p, f, 1)->q;
    if (qD > guard) throw GuardError("coset enumeration exceeds the size guard");
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto S = std::make_shared<ShellData>(ShellBuilder(b, p, f, m, D, ce, guard).build());
    std::lock_guard<std::mutex> lk(mu);
    return *cache.emplace(key, S).first->second;
}

}  // namespace

MackeyResult mackey_dims(const LevelOneDatum& datum, const UnitChar& eta, int m, Tower tower, u64 point_guard) {
    const CuspidalCharData& sigma = *datum.sigma;
    const Ring& R1 = *sigma.G->R1;
    if (m < 0) throw std::invalid_argument("m must be non-negative");
    if (eta.G->kind != UnitKind::F) throw std::invalid_argument("eta must be a character of O_F^x");
    const int ce = eta.conductor;
    if (ce > m) throw std::invalid_argument("eta is not a character of K_m");
    UnitChar eta_c;
    std::shared_ptr<const Ring> Rc;
    if (ce > 0) {
        eta_c = change_level(eta, ce);
        Rc = make_ring(R1.backend, R1.p, R1.f, ce);
    }
    const auto& vals = datum.values();
    auto ctx = cyclo_ctx(lcm_int(sigma.ctx->M, ce > 0 ? eta_c.order : 1));
    const u64 QE = ce == 0 ? 1 : Rc->qpow(ce);

    MackeyResult out;
    int zeros = 0;
    for (int n = 0;; ++n) {
        const int D = tower == Tower::K ? 2 * n : 2 * n + 1;
        const ShellData& S = shell_data(R1.backend, R1.p, R1.f, m, D, ce, point_guard);
        std::vector<long> contrib(S.images.size());
        for (size_t i = 0; i < S.images.size(); ++i) {
            Cyclo acc(ctx);
            for (u64 key : S.images[i]) {
                Cyclo v = vals[(int)(key / QE)].lift(ctx);
                if (ce > 0) v = v * rou(ctx, eta_c.eval(*Rc, Rc->from_index(key % QE)).inverse());
                acc += v;
            }
            if (!acc.is_rational()) throw MackeyError("Mackey contribution is not rational");
            Q c = acc.rational() / (long)S.images[i].size();
            if (c.get_den() != 1 || c < 0) throw MackeyError("Mackey contribution is not a non-negative integer");
            contrib[i] = c.get_num().get_si();
        }
        long shell_sum = 0;
        for (size_t o = 0; o < S.orbits.size(); ++o) {
            long c = contrib[S.orbits[o].image];
            if (c == 0) continue;
            shell_sum += c;
            out.cells.push_back({n, D, S.roots[o], S.orbits[o].size, S.images[S.orbits[o].image].size(), c});
        }
        out.dim += (int)shell_sum;
        out.shells = n + 1;
        if (shell_sum == 0) {
            if (++zeros == 2) break;
        } else {
            zeros = 0;
            if (n >= m + 2) throw MackeyError("non-zero Mackey shell beyond n = m + 1");
        }
    }
    return out;
}

// ---------------------------------------------------------------- packets

const char* packet_kind_name(PacketKind k) {
    switch (k) {
        case PacketKind::Unram2: return "unramified-2";
        case PacketKind::Unram4: return "unramified-4";
        case PacketKind::Ram2: return "ramified-2";
    }
    return "?";
}

PacketDescriptor packet_taxonomy(const CuspidalCharData& sigma, int level) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    PacketDescriptor d;
    d.level = level;
    if (level == 1 && sigma.splits) {
        d.kind = PacketKind::Unram4;
        d.cardinality = 4;
        d.conductor = 2;
        d.members = {"pi1", "pi1'", "pi2", "pi2'"};
    } else {
        d.kind = PacketKind::Unram2;
        d.cardinality = 2;
        d.conductor = 2 * level;
        d.members = {"pi", "pi'"};
    }
    return d;
}

PacketDescriptor ramified_descriptor(int level) {
    if (level < 1) throw std::invalid_argument("level must be positive");
    PacketDescriptor d;
    d.kind = PacketKind::Ram2;
    d.level = level;
    d.cardinality = 2;
    d.conductor = 2 * level + 1;
    d.members = {"pi1", "pi2"};
    return d;
}

}  // namespace nf
