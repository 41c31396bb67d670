#include "nf/local_rings.hpp"

#include <algorithm>
#include <sstream>

namespace nf {

const char* backend_name(Backend b) { return b == Backend::Mixed ? "mixed" : "equal"; }

Backend parse_backend(const std::string& s) {
    if (s == "mixed" || s == "mixed-char") return Backend::Mixed;
    if (s == "equal" || s == "equal-char") return Backend::Equal;
    throw std::invalid_argument("unknown backend: " + s);
}

static bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------- F_q

FiniteField::FiniteField(int p_, int f_) : p(p_), f(f_) {
    q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    auto coeffs = [&](int a) {
        std::vector<int> c(f);
        for (int i = 0; i < f; ++i, a /= p) c[i] = a % p;
        return c;
    };
    auto pack = [&](const std::vector<int>& c) {
        int a = 0;
        for (int i = f - 1; i >= 0; --i) a = a * p + c[i];
        return a;
    };
    auto build_mul = [&](const std::vector<int>& g) {
        std::vector<int> m(q * q);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                auto x = coeffs(a), y = coeffs(b);
                std::vector<int> z(2 * f, 0);
                for (int i = 0; i < f; ++i)
                    for (int j = 0; j < f; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
                for (int d = 2 * f - 1; d >= f; --d) {
                    int c = z[d];
                    if (!c) continue;
                    z[d] = 0;
                    for (int i = 0; i < f; ++i) z[d - f + i] = ((z[d - f + i] - c * g[i]) % p + p) % p;
                }
                z.resize(f);
                m[a * q + b] = pack(z);
            }
        return m;
    };
    // least monic modulus giving a field (no zero divisors)
    int count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (int t = 0; t < count; ++t) {
        std::vector<int> g = coeffs(t);
        auto m = build_mul(g);
        bool ok = true;
        for (int a = 1; a < q && ok; ++a)
            for (int b = 1; b < q && ok; ++b)
                if (m[a * q + b] == 0) ok = false;
        if (ok) {
            modulus = g;
            modulus.push_back(1);
            mul_ = std::move(m);
            break;
        }
    }
    if (mul_.empty()) throw std::logic_error("no irreducible modulus found");
    add_.resize(q * q);
    neg_.resize(q);
    for (int a = 0; a < q; ++a) {
        auto x = coeffs(a);
        std::vector<int> nx(f);
        for (int i = 0; i < f; ++i) nx[i] = (p - x[i]) % p;
        neg_[a] = pack(nx);
        for (int b = 0; b < q; ++b) {
            auto y = coeffs(b);
            std::vector<int> z(f);
            for (int i = 0; i < f; ++i) z[i] = (x[i] + y[i]) % p;
            add_[a * q + b] = pack(z);
        }
    }
    inv_.assign(q, 0);
    sq_.assign(q, 0);
    for (int a = 1; a < q; ++a) {
        for (int b = 1; b < q; ++b)
            if (mul_[a * q + b] == 1) inv_[a] = b;
        sq_[mul_[a * q + a]] = 1;
    }
    for (int g = 1; g < q; ++g) {
        int x = 1, ord = 0;
        do {
            x = mul(x, g);
            ++ord;
        } while (x != 1);
        if (ord == q - 1) {
            prim_ = g;
            break;
        }
    }
}

int FiniteField::inv(int a) const {
    if (a == 0) throw std::domain_error("inverse of zero in residue field");
    return inv_[a];
}

int FiniteField::pow(int a, i64 e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    int r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

int FiniteField::from_int(i64 n) const { return (int)(((n % p) + p) % p); }

int FiniteField::trace(int a) const {
    int t = 0, x = a;
    for (int i = 0; i < f; ++i) {
        t = add(t, x);
        x = pow(x, p);
    }
    return t;  // lies in F_p, whose indices are 0..p-1
}

// ---------------------------------------------------------------- Ring

Ring::Ring(Backend b, int p_, int f_, int N_) : backend(b), p(p_), f(f_), N(N_) {
    if (p % 2 == 0 || !is_prime(p)) throw std::invalid_argument("residue characteristic must be an odd prime");
    if (f < 1) throw std::invalid_argument("residue degree must be >= 1");
    if (b == Backend::Mixed && f != 1) throw std::invalid_argument("mixed-char backend requires f = 1");
    if (N < 1) throw std::invalid_argument("precision must be >= 1");
    k = std::make_shared<FiniteField>(p, f);
    q = k->q;
    if (b == Backend::Mixed) {
        mod_ = 1;
        for (int i = 0; i < N; ++i) {
            if (mod_ > (u64(1) << 62) / (u64)p) throw GuardError("p^N exceeds 2^62");
            mod_ *= p;
        }
    } else {
        if (q > 16) throw GuardError("equal-char backend packs digits in 4 bits (q <= 16)");
        if (N > 16) throw GuardError("equal-char backend supports N <= 16");
        mask_ = N == 16 ? ~u64(0) : ((u64(1) << (4 * N)) - 1);
    }
    int e = 1;
    while (k->is_square(e)) ++e;
    eps = constant(e);
}

u64 Ring::from_int(i64 n) const {
    if (backend == Backend::Mixed) {
        i64 m = (i64)mod_;
        return (u64)(((n % m) + m) % m);
    }
    return k->from_int(n);
}

u64 Ring::constant(int d) const { return (u64)d; }

u64 Ring::add(u64 a, u64 b) const {
    if (backend == Backend::Mixed) {
        u64 s = a + b;
        return s >= mod_ ? s - mod_ : s;
    }
    u64 r = 0;
    for (int i = 0; i < N; ++i) {
        int x = (a >> (4 * i)) & 15, y = (b >> (4 * i)) & 15;
        r |= (u64)k->add(x, y) << (4 * i);
    }
    return r;
}

u64 Ring::neg(u64 a) const {
    if (backend == Backend::Mixed) return a == 0 ? 0 : mod_ - a;
    u64 r = 0;
    for (int i = 0; i < N; ++i) r |= (u64)k->neg((a >> (4 * i)) & 15) << (4 * i);
    return r;
}

u64 Ring::sub(u64 a, u64 b) const {
    if (backend == Backend::Mixed) return a >= b ? a - b : a + mod_ - b;
    return add(a, neg(b));
}

u64 Ring::mul(u64 a, u64 b) const {
    if (backend == Backend::Mixed) return (u64)((unsigned __int128)a * b % mod_);
    int x[16], y[16], z[16] = {0};
    for (int i = 0; i < N; ++i) {
        x[i] = (a >> (4 * i)) & 15;
        y[i] = (b >> (4 * i)) & 15;
    }
    for (int i = 0; i < N; ++i) {
        if (!x[i]) continue;
        for (int j = 0; i + j < N; ++j)
            if (y[j]) z[i + j] = k->add(z[i + j], k->mul(x[i], y[j]));
    }
    u64 r = 0;
    for (int i = 0; i < N; ++i) r |= (u64)z[i] << (4 * i);
    return r;
}

u64 Ring::pow(u64 a, i64 e) const {
    if (e < 0) {
        a = inv_unit(a);
        e = -e;
    }
    u64 r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

int Ring::val(u64 a) const {
    if (a == 0) return N;
    if (backend == Backend::Mixed) {
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }
    int v = 0;
    while (((a >> (4 * v)) & 15) == 0) ++v;
    return v;
}

int Ring::digit(u64 a, int i) const {
    if (i >= N) return 0;
    if (backend == Backend::Mixed) {
        for (int j = 0; j < i; ++j) a /= p;
        return (int)(a % p);
    }
    return (a >> (4 * i)) & 15;
}

u64 Ring::inv_unit(u64 a) const {
    if (!is_unit(a)) throw PrecisionError("inverse of a non-unit");
    if (backend == Backend::Mixed) {
        i64 r0 = (i64)mod_, r1 = (i64)a, s0 = 0, s1 = 1;
        while (r1) {
            i64 t = r0 / r1;
            i64 r2 = r0 - t * r1;
            r0 = r1;
            r1 = r2;
            i64 s2 = (i64)(((__int128)s0 - (__int128)t * s1) % (i64)mod_);
            s0 = s1;
            s1 = s2;
        }
        i64 m = (i64)mod_;
        return (u64)(((s0 % m) + m) % m);
    }
    int x[16], y[16];
    for (int i = 0; i < N; ++i) x[i] = (a >> (4 * i)) & 15;
    int i0 = k->inv(x[0]);
    y[0] = i0;
    for (int n = 1; n < N; ++n) {
        int s = 0;
        for (int i = 1; i <= n; ++i) s = k->add(s, k->mul(x[i], y[n - i]));
        y[n] = k->neg(k->mul(i0, s));
    }
    u64 r = 0;
    for (int i = 0; i < N; ++i) r |= (u64)y[i] << (4 * i);
    return r;
}

u64 Ring::shift_down(u64 a, int s) const {
    if (s <= 0) return s == 0 ? a : shift_up(a, -s);
    if (s >= N) return 0;
    if (backend == Backend::Mixed) {
        for (int i = 0; i < s; ++i) a /= p;
        return a;
    }
    return a >> (4 * s);
}

u64 Ring::shift_up(u64 a, int s) const {
    if (s <= 0) return s == 0 ? a : shift_down(a, -s);
    if (s >= N) return 0;
    if (backend == Backend::Mixed) {
        u64 m = 1;
        for (int i = 0; i < s; ++i) m *= p;
        return (u64)((unsigned __int128)a * m % mod_);
    }
    return (a << (4 * s)) & mask_;
}

u64 Ring::truncate(u64 a, int L) const {
    if (L >= N) return a;
    if (L <= 0) return 0;
    if (backend == Backend::Mixed) return a % qpow(L);
    return a & ((u64(1) << (4 * L)) - 1);
}

u64 Ring::qpow(int L) const {
    u64 r = 1;
    for (int i = 0; i < L; ++i) r *= q;
    return r;
}

u64 Ring::index(u64 a, int L) const {
    if (backend == Backend::Mixed) return truncate(a, L);
    u64 r = 0;
    for (int i = std::min(L, N) - 1; i >= 0; --i) r = r * q + ((a >> (4 * i)) & 15);
    return r;
}

u64 Ring::from_index(u64 idx) const {
    if (backend == Backend::Mixed) return idx % mod_;
    u64 r = 0;
    for (int i = 0; i < N && idx; ++i, idx /= q) r |= (idx % q) << (4 * i);
    return r;
}

std::string Ring::str(u64 a) const {
    if (backend == Backend::Mixed) return std::to_string(a);
    std::string s;
    for (int i = 0; i < N; ++i) {
        if (i) s += '.';
        s += std::to_string(digit(a, i));
    }
    return s;
}

std::shared_ptr<const Ring> make_ring(Backend b, int p, int f, int N) { return std::make_shared<Ring>(b, p, f, N); }

// ---------------------------------------------------------------- QuadRing

QuadRing::QuadRing(std::shared_ptr<const Ring> R_) : R(std::move(R_)) {
    const auto& k = *R->k;
    int q = R->q;
    int e = R->digit(R->eps, 0);
    // norm residue a^2 - e b^2 = e, least (a, b)
    int a0 = -1, b0 = -1;
    for (int a = 0; a < q && a0 < 0; ++a)
        for (int b = 0; b < q; ++b)
            if (k.sub(k.mul(a, a), k.mul(e, k.mul(b, b))) == e) {
                a0 = a;
                b0 = b;
                break;
            }
    if (a0 < 0) throw std::logic_error("no residue solution for norm(eps_E) = eps_F");
    QElt x{R->constant(a0), R->constant(b0)};
    for (int i = 1; i < R->N; ++i) {
        bool found = false;
        for (int da = 0; da < q && !found; ++da)
            for (int db = 0; db < q && !found; ++db) {
                QElt y{R->add(x.a, R->shift_up(R->constant(da), i)), R->add(x.b, R->shift_up(R->constant(db), i))};
                if (R->truncate(R->sub(norm(y), R->eps), i + 1) == 0) {
                    x = y;
                    found = true;
                }
            }
        if (!found) throw std::logic_error("Hensel lift of eps_E failed");
    }
    epsE = x;
}

QElt QuadRing::mul(QElt x, QElt y) const {
    u64 aa = R->mul(x.a, y.a), bb = R->mul(x.b, y.b);
    return {R->add(aa, R->mul(R->eps, bb)), R->add(R->mul(x.a, y.b), R->mul(x.b, y.a))};
}

u64 QuadRing::norm(QElt x) const { return R->sub(R->mul(x.a, x.a), R->mul(R->eps, R->mul(x.b, x.b))); }

int QuadRing::val(QElt x) const { return std::min(R->val(x.a), R->val(x.b)); }

QElt QuadRing::inv_unit(QElt x) const {
    u64 n = R->inv_unit(norm(x));
    QElt c = conj(x);
    return {R->mul(c.a, n), R->mul(c.b, n)};
}

QElt QuadRing::pow(QElt x, i64 e) const {
    if (e < 0) {
        x = inv_unit(x);
        e = -e;
    }
    QElt r = one();
    while (e) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

bool QuadRing::is_square_unit(QElt x) const {
    if (!is_unit(x)) throw std::domain_error("is_square_unit: non-unit");
    return R->k->is_square(R->digit(norm(x), 0));
}

std::string QuadRing::str(QElt x) const { return "(" + R->str(x.a) + ")+(" + R->str(x.b) + ")s"; }

std::shared_ptr<const QuadRing> make_quad_ext(std::shared_ptr<const Ring> R) { return std::make_shared<QuadRing>(std::move(R)); }

// ---------------------------------------------------------------- RElem

RElem RElem::make(std::shared_ptr<const Ring> R, int s, u64 x, int prec) {
    RElem r;
    prec = std::min(prec, R->N);
    x = R->truncate(x, prec);
    int v = x == 0 ? prec : R->val(x);
    r.R_ = std::move(R);
    if (v >= prec) {
        r.s_ = s + prec;
        r.u_ = 0;
        r.prec_ = 0;
        return r;
    }
    r.s_ = s + v;
    r.prec_ = prec - v;
    r.u_ = r.R_->shift_down(x, v);
    return r;
}

RElem::RElem(std::shared_ptr<const Ring> R, i64 n) { *this = make(R, 0, R->from_int(n), R->N); }

RElem RElem::from_raw(std::shared_ptr<const Ring> R, u64 x, int absprec) {
    int prec = absprec < 0 ? R->N : absprec;
    return make(std::move(R), 0, x, prec);
}

RElem RElem::zero(std::shared_ptr<const Ring> R, int absprec) {
    RElem r;
    r.R_ = std::move(R);
    r.s_ = absprec;
    return r;
}

RElem RElem::pi_power(std::shared_ptr<const Ring> R, int s) {
    RElem r;
    r.prec_ = R->N;
    r.R_ = std::move(R);
    r.s_ = s;
    r.u_ = 1;
    return r;
}

u64 RElem::raw() const {
    if (is_zero()) return 0;
    if (s_ < 0) throw PrecisionError("element is not integral");
    return R_->shift_up(u_, s_);
}

std::vector<int> RElem::digits() const {
    u64 x = raw();
    std::vector<int> d(R_->N);
    for (int i = 0; i < R_->N; ++i) d[i] = R_->digit(x, i);
    return d;
}

RElem RElem::operator+(const RElem& o) const {
    int A = std::min(abs_precision(), o.abs_precision());
    if (is_zero() && o.is_zero()) return zero(R_, A);
    int s0;
    if (is_zero())
        s0 = o.s_;
    else if (o.is_zero())
        s0 = s_;
    else
        s0 = std::min(s_, o.s_);
    if (A <= s0) return zero(R_, A);
    u64 x = is_zero() ? 0 : R_->shift_up(u_, s_ - s0);
    u64 y = o.is_zero() ? 0 : R_->shift_up(o.u_, o.s_ - s0);
    return make(R_, s0, R_->add(x, y), A - s0);
}

RElem RElem::operator-() const {
    RElem r = *this;
    r.u_ = R_->truncate(R_->neg(u_), prec_);
    return r;
}

RElem RElem::operator-(const RElem& o) const { return *this + (-o); }

RElem RElem::operator*(const RElem& o) const {
    if (is_zero() || o.is_zero()) return zero(R_, s_ + o.s_);
    return make(R_, s_ + o.s_, R_->mul(u_, o.u_), std::min(prec_, o.prec_));
}

RElem RElem::inverse() const {
    if (is_zero()) throw PrecisionError("invert: zero at working precision");
    return make(R_, -s_, R_->inv_unit(u_), prec_);
}

bool RElem::operator==(const RElem& o) const { return (*this - o).is_zero(); }

std::string RElem::str() const {
    if (is_zero()) return "O(pi^" + std::to_string(s_) + ")";
    std::ostringstream os;
    os << "pi^" << s_ << "*" << R_->str(u_) << " (prec " << prec_ << ")";
    return os.str();
}

int valuation(const RElem& x) { return x.valuation(); }

bool is_square_unit(const RElem& x) {
    if (x.is_zero() || x.valuation() != 0) throw std::domain_error("is_square_unit: non-unit");
    const auto& R = *x.ring();
    return R.k->is_square(R.digit(x.unit_part(), 0));
}

// ---------------------------------------------------------------- QuadElem

QuadElem QuadElem::from_raw(std::shared_ptr<const QuadRing> E, QElt x) {
    auto R = E->R;
    return {std::move(E), RElem::from_raw(R, x.a), RElem::from_raw(R, x.b)};
}

QuadElem QuadElem::from_base(std::shared_ptr<const QuadRing> E, const RElem& a) {
    auto R = E->R;
    return {std::move(E), a, RElem::zero(R, a.abs_precision())};
}

int QuadElem::valuation() const { return std::min(a.valuation(), b.valuation()); }

QuadElem QuadElem::operator*(const QuadElem& o) const {
    RElem eps = RElem::from_raw(E_->R, E_->R->eps);
    return {E_, a * o.a + eps * b * o.b, a * o.b + b * o.a};
}

RElem QuadElem::norm() const {
    RElem eps = RElem::from_raw(E_->R, E_->R->eps);
    return a * a - eps * b * b;
}

QuadElem QuadElem::inverse() const {
    RElem n = norm().inverse();
    return {E_, a * n, -(b * n)};
}

std::string QuadElem::str() const { return "(" + a.str() + ") + (" + b.str() + ")*sqrt(eps)"; }

int valuation(const QuadElem& x) { return x.valuation(); }

bool is_square_unit(const QuadElem& x) {
    if (x.valuation() != 0) throw std::domain_error("is_square_unit: non-unit");
    return x.ext()->is_square_unit(x.raw());
}

}  // namespace nf
