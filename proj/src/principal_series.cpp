#include "nf/principal_series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace nf {

const char* tower_name(Tower t) { return t == Tower::K ? "K" : "Kp"; }

FieldChar PSData::chi_F() const { return flavor == Flavor::U11 ? restrict_to_F(chi) : chi; }

std::string PSData::label() const { return std::string(flavor_name(flavor)) + " " + chi.label(); }

namespace {

int max_precision(Backend b, int p) {
    if (b == Backend::Equal) return 16;
    int N = 0;
    u64 v = 1;
    while (v <= (u64(1) << 62) / (u64)p) {
        v *= p;
        ++N;
    }
    return N;
}

Mono mono_pow(Mono a, int e, int M) {
    long k = ((long)a.k * e) % M;
    if (k < 0) k += M;
    return {(int)k, a.e * e};
}

struct Gen {
    QElt a, b, c, d;
    int s = 0;
    Mono eta;
};

Row row_times(const QuadRing& E, const Row& r, const Gen& g) {
    return {E.add(E.mul(r.c, g.a), E.mul(r.d, g.c)), E.add(E.mul(r.c, g.b), E.mul(r.d, g.d)), r.s + g.s, r.prec};
}

struct UnionFind {
    int M;
    std::vector<int> parent;
    std::vector<Mono> w;  // F(x) = w[x] F(parent[x])
    std::vector<char> bad;
    UnionFind(size_t n, int M_) : M(M_), parent(n), w(n), bad(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x, Mono& wx) {
        Mono acc{0, 0};
        int r = x;
        while (parent[r] != r) {
            acc = mono_mul(acc, w[r], M);
            r = parent[r];
        }
        // path compression
        Mono acc2 = acc;
        int y = x;
        while (parent[y] != y) {
            int nx = parent[y];
            Mono wy = w[y];
            parent[y] = r;
            w[y] = acc2;
            acc2 = mono_mul(acc2, mono_inv(wy, M), M);
            y = nx;
        }
        wx = acc;
        return r;
    }
    // F(a) = u F(b)
    void relate(int a, int b, Mono u) {
        Mono wa, wb;
        int ra = find(a, wa), rb = find(b, wb);
        Mono rhs = mono_mul(u, wb, M);  // F(a) = rhs F(rb)
        if (ra == rb) {
            if (!(wa == rhs)) bad[ra] = 1;
            return;
        }
        // F(ra) = wa^{-1} rhs F(rb)
        parent[ra] = rb;
        w[ra] = mono_mul(mono_inv(wa, M), rhs, M);
        bad[rb] = bad[rb] || bad[ra];
    }
};

}  // namespace

Cyclo mono_value(const std::shared_ptr<const CycloCtx>& ctx, Mono m, int q) {
    return Cyclo::zeta(ctx, m.k, qpow_rational(q, m.e));
}

Cyclo lifted(const Cyclo& x, const std::shared_ptr<const CycloCtx>& ctx) {
    if (!x.ctx()) return Cyclo(ctx);
    return x.ctx()->M == ctx->M ? x : x.lift(ctx);
}

// ---------------------------------------------------------------- rows and points

Row FixedSpace::model_row(int pt) const {
    u64 QL = R->qpow(L);
    if ((u64)pt < QL) return {{R->from_index((u64)pt), 0}, E->one(), 0, Nw};
    u64 y = R->shift_up(R->from_index((u64)pt - QL), 1);
    return {E->one(), {y, 0}, 0, Nw};
}

Row FixedSpace::twist(const Row& r) const { return {r.c, E->shift_up(r.d, 1), r.s + 1, r.prec}; }

Row FixedSpace::untwist(const Row& r) const { return {E->shift_up(r.c, 1), r.d, r.s, r.prec}; }

Row FixedSpace::point_row(int pt) const { return transported() ? untwist(model_row(pt)) : model_row(pt); }

int FixedSpace::point_of(const Row& r, Mono& factor) const {
    const int prec = std::min(r.prec, Nw);
    int vc = std::min(E->val(r.c), prec), vd = std::min(E->val(r.d), prec);
    const bool apt = vd <= vc;
    const int v = apt ? vd : vc;
    if (prec - v < L) throw PrecisionError("row pivot exhausts the working precision");
    QElt piv = E->shift_down(apt ? r.d : r.c, v);
    QElt oth = E->shift_down(apt ? r.c : r.d, v);
    QElt x = E->mul(oth, E->inv_unit(piv));
    if (R->truncate(x.b, L) != 0) throw std::logic_error("row is not isotropic");
    int pt;
    if (apt)
        pt = (int)R->index(x.a, L);
    else
        pt = (int)(R->qpow(L) + R->index(R->shift_down(x.a, 1), L - 1));
    const FieldChar& chi = data.chi;
    RootOfUnity ru = data.flavor == Flavor::U11 ? chi.unit.eval(*E, E->conj(piv)) : chi.unit.eval(*R, piv.a);
    int e = v - r.s;
    Mono chi_pi{chi.at_pi.in_order(M), chi.qgrade};
    Mono chi_mu = mono_mul(mono_pow(chi_pi, e, M), Mono{ru.in_order(M), 0}, M);
    factor = mono_inv(chi_mu, M);
    factor.e += e;
    return pt;
}

std::optional<Mono> FixedSpace::eval_basis(const Row& r0, int& which) const {
    Row r = transported() ? twist(r0) : r0;
    Mono fac;
    int pt = point_of(r, fac);
    which = comp[pt];
    if (which < 0) return std::nullopt;
    return mono_mul(fac, val[pt], M);
}

Cyclo FixedSpace::eval(const CVec& coeffs, const Row& r) const {
    int which;
    auto m = eval_basis(r, which);
    if (!m) return Cyclo(ctx());
    return lifted(coeffs[which], ctx()) * mono_value(ctx(), *m, data.q());
}

Row FixedSpace::to_row(const GrpElem& g) const {
    int vmin = std::min(g.c.valuation(), g.d.valuation());
    int s = std::max(0, -vmin);
    QuadElem pis = QuadElem::from_base(g.c.ext(), RElem::pi_power(g.c.ext()->R, s));
    QuadElem c = g.c * pis, d = g.d * pis;
    int prec = std::min({c.a.abs_precision(), c.b.abs_precision(), d.a.abs_precision(), d.b.abs_precision()});
    prec = std::min(prec, Nw);
    auto conv = [&](const RElem& x) -> u64 {
        if (x.is_zero()) return 0;
        const Ring& S = *x.ring();
        return R->from_index(S.index(x.raw(), std::min(prec, S.N)));
    };
    return {{conv(c.a), conv(c.b)}, {conv(d.a), conv(d.b)}, s, prec};
}

Mono FixedSpace::eta_value(const QElt& d) const {
    RootOfUnity r = eta.G->kind == UnitKind::F ? eta.eval(*R, d.a) : eta.eval(*E, d);
    return {r.in_order(M), 0};
}

std::string FixedSpace::summary() const {
    std::ostringstream os;
    os << data.label() << "; eta " << eta.label() << "; m " << m << " " << tower_name(tower)
       << (tower == Tower::Kp ? (kp_mode == KpMode::Transport ? " (transport)" : " (direct)") : "")
       << (gens == GenSet::SL2Only ? " [SL2 part]" : "") << "; L " << L << "; dim " << dim();
    return os.str();
}

PSVector basis_vector(FixedSpacePtr S, size_t i) {
    CVec c(S->dim(), Cyclo(S->ctx()));
    c[i] = Cyclo(S->ctx(), 1);
    return {std::move(S), std::move(c)};
}

Cyclo evaluate(const PSVector& f, const GrpElem& g) { return f.space->eval(f.coeffs, f.space->to_row(g)); }

// ---------------------------------------------------------------- solver

bool central_compatible(const PSData& data, const UnitChar& eta, GenSet gens) {
    const Backend b = data.backend();
    const int p = data.p(), f = data.f();
    if (data.flavor == Flavor::SL2 || gens == GenSet::SL2Only) {
        int n = std::max({1, eta.n(), data.chi.unit.n()});
        auto R = make_ring(b, p, f, n);
        auto E = make_quad_ext(R);
        u64 m1 = R->neg(1);
        RootOfUnity e = eta.eval(*R, m1);
        RootOfUnity c = data.flavor == Flavor::U11 ? data.chi.unit.eval(*E, QElt{m1, 0}) : data.chi.unit.eval(*R, m1);
        return e == c;
    }
    int n = std::max({1, eta.n(), data.chi.unit.n()});
    auto G = unit_group(UnitKind::E, b, p, f, n);
    for (int e : norm_one_positions(*G)) {
        QElt x = G->E->from_index(G->elems[e], n);
        if (!(eta.eval(*G->E, x) == data.chi.unit.eval(*G->E, x))) return false;
    }
    return true;
}

namespace {

// k -> eta(d_k) is a character of the compact subgroup
bool eta_multiplicative(const PSData& data, const UnitChar& eta, int m, GenSet gens) {
    // K_0 and K'_0 contain elements whose d-entry is not a unit
    if (m == 0) return eta.is_trivial();
    if (data.flavor == Flavor::U11 && gens == GenSet::Full) return restrict_to_F(eta).conductor <= m;
    return eta.conductor <= m;
}

std::vector<Gen> generators(const FixedSpace& S) {
    const Ring& R = *S.R;
    const QuadRing& E = *S.E;
    const bool direct_kp = S.tower == Tower::Kp && S.kp_mode == KpMode::Direct;
    std::vector<u64> add;
    for (int i = 0; i < S.L; ++i) {
        int pj = 1;
        for (int j = 0; j < R.f; ++j, pj *= R.p) add.push_back(R.shift_up(R.constant(pj), i));
    }
    std::vector<Gen> G;
    const Mono one{0, 0};
    const QElt z{0, 0}, o = E.one();
    for (u64 x : add) {
        if (direct_kp)
            G.push_back({{R.pi(), 0}, {x, 0}, z, {R.pi(), 0}, 1, one});
        else
            G.push_back({o, {x, 0}, z, o, 0, one});
        int lo = direct_kp ? S.m + 1 : S.m;
        u64 y = R.shift_up(x, lo);
        if (y != 0) G.push_back({o, z, {y, 0}, o, 0, one});
    }
    if (S.data.flavor == Flavor::U11 && S.gens == GenSet::Full) {
        auto U = unit_group(UnitKind::E, R.backend, R.p, R.f, S.L);
        for (u64 idx : U->snf_gens) {
            QElt t = E.from_index(idx, S.L);
            QElt dt = E.inv_unit(E.conj(t));
            G.push_back({t, z, z, dt, 0, S.eta_value(dt)});
        }
    } else {
        auto U = unit_group(UnitKind::F, R.backend, R.p, R.f, S.L);
        for (u64 idx : U->snf_gens) {
            u64 u = R.from_index(idx);
            QElt du{R.inv_unit(u), 0};
            G.push_back({{u, 0}, z, z, du, 0, S.eta_value(du)});
        }
    }
    return G;
}

std::shared_ptr<FixedSpace> prepare(const PSData& data, const UnitChar& eta, int m, Tower tower, KpMode mode, GenSet gens) {
    if (m < 0) throw std::invalid_argument("level must be non-negative");
    if (data.flavor == Flavor::GL2) throw std::invalid_argument("principal series are defined for SL2 and U(1,1)");
    const UnitKind want = data.flavor == Flavor::U11 && gens == GenSet::Full ? UnitKind::E : UnitKind::F;
    if (eta.G->kind != want) throw std::invalid_argument("eta has the wrong kind for this subgroup");
    const UnitKind chik = data.flavor == Flavor::U11 ? UnitKind::E : UnitKind::F;
    if (data.chi.kind() != chik) throw std::invalid_argument("inducing character has the wrong kind");
    auto S = std::make_shared<FixedSpace>();
    S->data = data;
    S->eta = eta;
    S->m = m;
    S->tower = tower;
    S->kp_mode = mode;
    S->gens = gens;
    const bool direct_kp = tower == Tower::Kp && mode == KpMode::Direct;
    S->L = std::max({1, direct_kp ? m + 1 : m, data.chi.conductor(), eta.conductor});
    int cap = max_precision(data.backend(), data.p());
    S->Nw = std::min(cap, 2 * S->L + 14);
    if (S->Nw < 2 * S->L + 2) throw GuardError("level exceeds the precision supported by the backend");
    S->R = make_ring(data.backend(), data.p(), data.f(), S->Nw);
    S->E = make_quad_ext(S->R);
    int M = 2;
    M = lcm_int(M, data.chi.unit.order);
    M = lcm_int(M, data.chi.at_pi.reduced_order());
    M = lcm_int(M, eta.order);
    S->M = M;
    size_t np = S->R->qpow(S->L) + S->R->qpow(S->L - 1);
    if (np > 2000000) throw GuardError("too many points on the finite projective line");
    S->comp.assign(np, -1);
    S->val.assign(np, Mono{0, 0});
    return S;
}

}  // namespace

FixedSpacePtr solve_fixed_space(const PSData& data, const UnitChar& eta, int m, Tower tower, KpMode mode, GenSet gens) {
    if (tower == Tower::Kp && mode == KpMode::Transport) {
        auto base = solve_fixed_space(data, eta, m, Tower::K, KpMode::Transport, gens);
        auto S = std::make_shared<FixedSpace>(*base);
        S->tower = Tower::Kp;
        S->kp_mode = KpMode::Transport;
        return S;
    }
    auto S = prepare(data, eta, m, tower, mode, gens);
    if (!central_compatible(data, eta, gens) || !eta_multiplicative(data, eta, m, gens)) return S;
    const size_t np = S->npoints();
    auto G = generators(*S);
    UnionFind uf(np, S->M);
    for (size_t pt = 0; pt < np; ++pt) {
        Row v = S->model_row((int)pt);
        for (const Gen& g : G) {
            Mono fac;
            int pt2 = S->point_of(row_times(*S->E, v, g), fac);
            // fac F(pt2) = eta(d_g) F(pt)
            uf.relate(pt2, (int)pt, mono_mul(mono_inv(fac, S->M), g.eta, S->M));
        }
    }
    std::vector<int> root_comp(np, -1);
    std::vector<Mono> wroot(np);
    for (size_t pt = 0; pt < np; ++pt) {
        Mono w;
        int r = uf.find((int)pt, w);
        wroot[pt] = w;
        if (uf.bad[r]) continue;
        if (root_comp[r] < 0) {
            root_comp[r] = (int)S->reps.size();
            S->reps.push_back((int)pt);
        }
        int c = root_comp[r];
        S->comp[pt] = c;
    }
    for (size_t pt = 0; pt < np; ++pt) {
        int c = S->comp[pt];
        if (c < 0) continue;
        S->val[pt] = mono_mul(wroot[pt], mono_inv(wroot[S->reps[c]], S->M), S->M);
    }
    return S;
}

FixedSpacePtr fixed_space(const PSData& data, const UnitChar& eta, int m, Tower tower, KpMode mode, GenSet gens) {
    if (!central_compatible(data, eta, gens))
        throw CentralObstruction("eta does not match the central character: the fixed space is zero");
    return solve_fixed_space(data, eta, m, tower, mode, gens);
}

std::optional<CVec> coordinates_in(const FixedSpace& to, const FixedSpace& from, size_t i) {
    auto ctx = cyclo_ctx(lcm_int(to.M, from.M));
    const int q = to.data.q();
    CVec ef(from.dim(), Cyclo(ctx));
    ef[i] = Cyclo(ctx, 1);
    CVec c(to.dim(), Cyclo(ctx));
    for (size_t j = 0; j < to.dim(); ++j) c[j] = lifted(from.eval(ef, to.point_row(to.reps[j])), ctx);
    auto check = [&](const Row& r) { return lifted(from.eval(ef, r), ctx) == lifted(to.eval(c, r), ctx); };
    for (size_t pt = 0; pt < from.npoints(); ++pt)
        if (!check(from.point_row((int)pt))) return std::nullopt;
    for (size_t pt = 0; pt < to.npoints(); ++pt)
        if (!check(to.point_row((int)pt))) return std::nullopt;
    (void)q;
    return c;
}

// ---------------------------------------------------------------- characters

UnitChar trivial_unit_char(UnitKind kind, Backend b, int p, int f, int n) {
    return char_from_coords(unit_group(kind, b, p, f, n), std::vector<int>(unit_group(kind, b, p, f, n)->d.size(), 0));
}

FieldChar trivial_char(UnitKind kind, Backend b, int p, int f) { return {trivial_unit_char(kind, b, p, f), RootOfUnity(1, 0), 0}; }

FieldChar unramified_char(UnitKind kind, Backend b, int p, int f, RootOfUnity at_pi) {
    return {trivial_unit_char(kind, b, p, f), at_pi, 0};
}

FieldChar abs_char(Backend b, int p, int f) { return {trivial_unit_char(UnitKind::F, b, p, f), RootOfUnity(1, 0), -1}; }

UnitChar legendre(Backend b, int p, int f, int n) {
    auto G = unit_group(UnitKind::F, b, p, f, n);
    return char_from_values(G, [&](int e) {
        int r = G->R->digit(G->R->from_index(G->elems[e]), 0);
        return RootOfUnity(2, G->R->k->is_square(r) ? 0 : 1);
    });
}

// ---------------------------------------------------------------- Steinberg

SubSpace steinberg_subspace(Backend b, int p, int f, int m, Tower tower) {
    PSData data{Flavor::SL2, abs_char(b, p, f)};
    auto S = solve_fixed_space(data, trivial_unit_char(UnitKind::F, b, p, f), m, tower);
    SubSpace out{S, {}};
    if (S->dim() == 0) return out;
    std::vector<MonoSum> sums(S->dim());
    for (size_t pt = 0; pt < S->npoints(); ++pt)
        if (S->comp[pt] >= 0) sums[S->comp[pt]].add(S->val[pt]);
    CMat A(1);
    for (auto& s : sums) A[0].push_back(s.value(S->ctx(), S->data.q()));
    out.basis = kernel(A, S->dim());
    return out;
}

// ---------------------------------------------------------------- intertwining operator

namespace {

void require_quadratic(const PSData& data) {
    const FieldChar& chi = data.chi;
    bool ok = chi.qgrade == 0 && chi.at_pi.pow(2).is_one();
    if (data.flavor == Flavor::SL2)
        ok = ok && (chi.unit * chi.unit).is_trivial();
    else
        ok = ok && (chi.unit * galois_twist(chi.unit)).is_trivial();
    if (!ok) throw std::invalid_argument("the intertwining operator preserves the space only for quadratic data");
}

}  // namespace

CMat intertwiner_matrix(const FixedSpace& S) {
    require_quadratic(S.data);
    if (S.transported()) throw std::invalid_argument("intertwiner: use the direct K' model");
    const size_t n = S.dim();
    auto ctx = S.ctx();
    const int q = S.data.q();
    CMat A = zero_matrix(ctx, n, n);
    if (n == 0) return A;
    const Ring& R = *S.R;
    const QuadRing& E = *S.E;
    const int Rr = S.L + 1;
    const u64 nz = R.qpow(Rr + S.L);
    const u64 piR = R.pi_pow(Rr);
    FieldChar chiF = S.data.chi_F();
    Mono z{chiF.at_pi.in_order(S.M), chiF.qgrade};
    bool tail = chiF.unit.is_trivial();
    if (tail && z.k == 0 && z.e == 0) throw std::invalid_argument("intertwiner diverges at the trivial character");
    for (size_t j = 0; j < n; ++j) {
        Row h = S.model_row(S.reps[j]);
        // h = (a, b; c, d) with bottom row (c, d); top row (1, 0) for A-points, (0, -1) for B-points
        bool apt = (u64)S.reps[j] < R.qpow(S.L);
        QElt ha = apt ? E.one() : QElt{0, 0};
        QElt hb = apt ? QElt{0, 0} : E.neg(E.one());
        std::vector<MonoSum> acc(n);
        for (u64 zi = 0; zi < nz; ++zi) {
            QElt zz{R.from_index(zi), 0};
            Row r{E.add(E.mul({piR, 0}, ha), E.mul(zz, h.c)), E.add(E.mul({piR, 0}, hb), E.mul(zz, h.d)), Rr, S.Nw};
            int w;
            auto v = S.eval_basis(r, w);
            if (v) acc[w].add(*v);
        }
        for (size_t i = 0; i < n; ++i) A[j][i] = acc[i].value(ctx, q) * qpow_rational(q, -S.L);
        if (tail) {
            // (1 - 1/q) z^{R+1} / (1 - z)
            Cyclo zc = mono_value(ctx, z, q);
            Cyclo num = mono_value(ctx, mono_pow(z, Rr + 1, S.M), q) * (Q(1) - Q(1, q));
            A[j][j] += num * (Cyclo(ctx, 1) - zc).inverse();
        }
    }
    // A^2 is scalar
    CMat A2 = zero_matrix(ctx, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j) A2[i][j] += A[i][k] * A[k][j];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (A2[i][j] != (i == j ? A2[0][0] : Cyclo(ctx)))
                throw std::logic_error("intertwiner: A^2 is not scalar");
    return A;
}

namespace {

bool rational_sqrt(const Q& x, Q& r) {
    if (x < 0) return false;
    mpz_class n = x.get_num(), d = x.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    r = Q(sn, sd);
    return true;
}

Cyclo square_root(const Cyclo& c, int p, const FiniteField& k) {
    const int M2 = lcm_int(lcm_int(c.order(), 4), p);
    auto ctx = cyclo_ctx(M2);
    Cyclo cl = lifted(c, ctx);
    if (cl.is_zero()) return cl;
    // quadratic Gauss sum of the residue field, g^2 = leg(-1) q
    Cyclo g(ctx);
    for (int x = 1; x < k.q; ++x) g.add_zeta((long)k.trace(x) * (M2 / p), k.is_square(x) ? 1 : -1);
    Q g2 = Q(k.q) * (k.is_square(k.neg(1)) ? 1 : -1);
    for (int t = 0; t < M2; ++t) {
        Cyclo ratio = cl * Cyclo::zeta(ctx, -2L * t);
        if (ratio.is_rational()) {
            Q r;
            if (rational_sqrt(ratio.rational(), r)) return Cyclo::zeta(ctx, t, r);
            if (rational_sqrt(ratio.rational() / g2, r)) return Cyclo::zeta(ctx, t, r) * g;
        }
    }
    throw std::logic_error("square root outside the cyclotomic candidates");
}

}  // namespace

Cyclo intertwiner_root(FixedSpacePtr S) {
    CMat A = intertwiner_matrix(*S);
    if (A.empty()) throw std::invalid_argument("intertwiner_root: zero space");
    CMat A2 = zero_matrix(S->ctx(), 1, 1);
    for (size_t k = 0; k < A.size(); ++k) A2[0][0] += A[0][k] * A[k][0];
    return square_root(A2[0][0], S->data.p(), *S->R->k);
}

Cyclo spherical_eigenvalue(const PSData& data) {
    UnitKind kind = data.flavor == Flavor::U11 ? UnitKind::E : UnitKind::F;
    auto S = fixed_space(data, trivial_unit_char(kind, data.backend(), data.p(), data.f()), 0);
    if (S->dim() != 1) throw std::invalid_argument("no spherical vector");
    return intertwiner_matrix(*S)[0][0];
}

PacketSplit packet_split(FixedSpacePtr S, const Cyclo& lambda1) {
    CMat A = intertwiner_matrix(*S);
    const size_t n = S->dim();
    auto ctx = cyclo_ctx(lcm_int(S->M, lambda1.order()));
    PacketSplit out{S, lifted(lambda1, ctx), {S, {}}, {S, {}}};
    if (n == 0) return out;
    CMat P = zero_matrix(ctx, n, n), Mm = zero_matrix(ctx, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Cyclo a = lifted(A[i][j], ctx);
            P[i][j] = a;
            Mm[i][j] = a;
            if (i == j) {
                P[i][j] -= out.lambda1;
                Mm[i][j] += out.lambda1;
            }
        }
    out.member1.basis = kernel(P, n);
    out.member2.basis = kernel(Mm, n);
    if (out.member1.dim() + out.member2.dim() != n)
        throw std::logic_error("packet split: eigenspaces do not fill the fixed space");
    return out;
}

// ---------------------------------------------------------------- theta criterion

ThetaCheck theta_criterion_space(const PSData& data, const UnitChar& etabar, int m) {
    if (data.flavor != Flavor::U11) throw std::invalid_argument("theta criterion is a U(1,1) statement");
    if (m == 0 && !etabar.is_trivial()) throw std::invalid_argument("a non-trivial eta is not a character of Kbar_0");
    ThetaCheck T;
    UnitChar eta = restrict_to_F(etabar);
    T.sl2_space = solve_fixed_space(data, eta, m, Tower::K, KpMode::Transport, GenSet::SL2Only);
    T.direct = solve_fixed_space(data, etabar, m, Tower::K, KpMode::Transport, GenSet::Full);
    const FixedSpace& S = *T.sl2_space;
    auto ctx = cyclo_ctx(lcm_int(S.M, T.direct->M));
    const int q = data.q();
    const size_t n = S.dim();
    const QuadRing& E = *S.E;
    QElt epsE = E.epsE;
    QElt epsEi = E.inv_unit(E.conj(epsE));
    auto theta_row = [&](const Row& r) { return Row{E.mul(r.c, epsE), E.mul(r.d, epsEi), r.s, r.prec}; };
    T.theta = zero_matrix(ctx, n, n);
    for (size_t i = 0; i < n; ++i) {
        CVec e(n, Cyclo(S.ctx()));
        e[i] = Cyclo(S.ctx(), 1);
        for (size_t j = 0; j < n; ++j) T.theta[j][i] = lifted(S.eval(e, theta_row(S.point_row(S.reps[j]))), ctx);
        for (size_t pt = 0; pt < S.npoints(); ++pt) {
            Row r = S.point_row((int)pt);
            Cyclo lhs = lifted(S.eval(e, theta_row(r)), ctx);
            CVec col(n, Cyclo(ctx));
            for (size_t j = 0; j < n; ++j) col[j] = T.theta[j][i];
            if (lhs != lifted(S.eval(col, r), ctx)) throw std::logic_error("theta does not preserve the fixed space");
        }
    }
    Mono ev;
    {
        auto Rn = make_ring(data.backend(), data.p(), data.f(), std::max(1, etabar.n()));
        auto En = make_quad_ext(Rn);
        RootOfUnity r = etabar.eval(*En, En->inv_unit(En->conj(En->epsE)));
        ev = {r.in_order(ctx->M), 0};
    }
    T.eigenvalue = mono_value(ctx, ev, q);
    CMat P = T.theta;
    for (size_t i = 0; i < n; ++i) P[i][i] -= T.eigenvalue;
    T.eigenspace = n ? kernel(P, n) : std::vector<CVec>{};
    bool contained = true;
    for (size_t i = 0; i < T.direct->dim(); ++i) {
        auto c = coordinates_in(S, *T.direct, i);
        if (!c) {
            contained = false;
            break;
        }
        CVec cl;
        for (auto& x : *c) cl.push_back(lifted(x, ctx));
        T.direct_coords.push_back(std::move(cl));
    }
    T.equal = contained && T.eigenspace.size() == T.direct_coords.size() &&
              (T.eigenspace.empty() || same_span(T.eigenspace, T.direct_coords));
    return T;
}

// ---------------------------------------------------------------- conductor search

int EtaConductor::c() const {
    if (c_K < 0) return c_Kp;
    if (c_Kp < 0) return c_K;
    return std::min(c_K, c_Kp);
}

ConductorSearch eta_conductor_search(const PSData& data, int m_max, int eta_level) {
    UnitKind kind = data.flavor == Flavor::U11 ? UnitKind::E : UnitKind::F;
    int n = eta_level > 0 ? eta_level : std::max({1, m_max, data.chi.conductor()});
    ConductorSearch out;
    for (auto& eta : enumerate_unit_chars(kind, data.backend(), data.p(), data.f(), n)) {
        if (!central_compatible(data, eta)) continue;
        EtaConductor ec{eta};
        for (int m = 0; m <= m_max && ec.c_K < 0; ++m)
            if (solve_fixed_space(data, eta, m, Tower::K)->dim() > 0) ec.c_K = m;
        for (int m = 0; m <= m_max && ec.c_Kp < 0; ++m)
            if (solve_fixed_space(data, eta, m, Tower::Kp, KpMode::Direct)->dim() > 0) ec.c_Kp = m;
        out.table.push_back(std::move(ec));
    }
    for (auto& ec : out.table)
        if (ec.c() >= 0 && (out.conductor < 0 || ec.c() < out.conductor)) out.conductor = ec.c();
    if (out.conductor >= 0)
        for (auto& ec : out.table)
            if (ec.c() == out.conductor) out.achieving.push_back(ec.eta);
    return out;
}

}  // namespace nf
