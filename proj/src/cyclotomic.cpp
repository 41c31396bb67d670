#include "nf/cyclotomic.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nf {

namespace {

std::vector<long> poly_mul(const std::vector<long>& a, const std::vector<long>& b) {
    std::vector<long> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// exact division of integer polynomials by a monic divisor
std::vector<long> poly_div(std::vector<long> a, const std::vector<long>& b) {
    size_t db = b.size() - 1;
    std::vector<long> quo(a.size() - db, 0);
    for (size_t i = a.size(); i-- > db;) {
        long c = a[i];
        quo[i - db] = c;
        for (size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return quo;
}

std::vector<long> cyclotomic_poly(int n) {
    std::vector<long> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) num = poly_div(num, cyclotomic_poly(d));
    return num;
}

}  // namespace

CycloCtx::CycloCtx(int M_) : M(M_) {
    if (M < 1) throw std::invalid_argument("cyclotomic order must be positive");
    rad = 1;
    int m = M;
    for (int p = 2; p <= m; ++p)
        if (m % p == 0) {
            rad *= p;
            while (m % p == 0) m /= p;
        }
    B = M / rad;
    phi_rad_poly = cyclotomic_poly(rad);
    phi_rad = (int)phi_rad_poly.size() - 1;
    phi = phi_rad * B;
    xpow.assign(rad, std::vector<long>(phi_rad, 0));
    std::vector<long> cur(phi_rad, 0);
    cur[0] = 1;
    for (int i = 0; i < rad; ++i) {
        xpow[i] = cur;
        // multiply by X and reduce
        long top = cur[phi_rad - 1];
        for (int t = phi_rad - 1; t > 0; --t) cur[t] = cur[t - 1];
        cur[0] = 0;
        for (int t = 0; t < phi_rad; ++t) cur[t] -= top * phi_rad_poly[t];
    }
    (void)poly_mul;
}

std::shared_ptr<const CycloCtx> cyclo_ctx(int M) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloCtx>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[M];
    if (!slot) slot = std::make_shared<CycloCtx>(M);
    return slot;
}

Cyclo::Cyclo(std::shared_ptr<const CycloCtx> ctx, const Q& r) : ctx_(std::move(ctx)) {
    if (r != 0) add_zeta(0, r);
}

Cyclo Cyclo::zeta(std::shared_ptr<const CycloCtx> ctx, long k, const Q& coef) {
    Cyclo z(std::move(ctx));
    z.add_zeta(k, coef);
    return z;
}

void Cyclo::add_zeta(long k, const Q& coef) {
    if (coef == 0) return;
    const CycloCtx& C = *ctx_;
    long kk = ((k % C.M) + C.M) % C.M;
    int i = (int)(kk / C.B), j = (int)(kk % C.B);
    const auto& row = C.xpow[i];
    for (int t = 0; t < C.phi_rad; ++t) {
        if (!row[t]) continue;
        int key = t * C.B + j;
        auto it = c_.find(key);
        if (it == c_.end()) {
            c_.emplace(key, coef * row[t]);
        } else {
            it->second += coef * row[t];
            if (it->second == 0) c_.erase(it);
        }
    }
}

bool Cyclo::is_rational() const { return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0); }

Q Cyclo::rational() const {
    if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
    return c_.empty() ? Q(0) : c_.begin()->second;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
    if (!ctx_) ctx_ = o.ctx_;
    if (o.ctx_ && o.ctx_->M != ctx_->M) throw std::logic_error("cyclotomic order mismatch");
    for (const auto& [k, v] : o.c_) {
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, v);
        } else {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }
    return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) { return *this += -o; }

Cyclo Cyclo::operator-() const {
    Cyclo r = *this;
    for (auto& [k, v] : r.c_) v = -v;
    return r;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
    if (ctx_ && o.ctx_ && o.ctx_->M != ctx_->M) throw std::logic_error("cyclotomic order mismatch");
    Cyclo r(ctx_ ? ctx_ : o.ctx_);
    if (is_zero() || o.is_zero()) return r;
    std::map<long, Q> raw;
    for (const auto& [a, x] : c_)
        for (const auto& [b, y] : o.c_) raw[(a + b) % r.ctx_->M] += x * y;
    for (const auto& [k, v] : raw) r.add_zeta(k, v);
    return r;
}

Cyclo Cyclo::operator*(const Q& s) const {
    Cyclo r(ctx_);
    if (s == 0) return r;
    r.c_ = c_;
    for (auto& [k, v] : r.c_) v *= s;
    return r;
}

Cyclo Cyclo::conj() const {
    Cyclo r(ctx_);
    for (const auto& [k, v] : c_) r.add_zeta(-k, v);
    return r;
}

Cyclo Cyclo::lift(std::shared_ptr<const CycloCtx> to) const {
    if (to->M % ctx_->M != 0) throw std::logic_error("lift target order is not a multiple");
    long s = to->M / ctx_->M;
    Cyclo r(std::move(to));
    for (const auto& [k, v] : c_) r.add_zeta(k * s, v);
    return r;
}

Cyclo Cyclo::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    const CycloCtx& C = *ctx_;
    if (is_rational()) return Cyclo(ctx_, 1 / rational());
    int n = C.phi;
    if (n > 512) throw std::domain_error("cyclotomic inverse: degree too large");
    // basis exponents t*B + j, t < phi_rad, j < B; index t*B + j directly
    std::vector<std::vector<Q>> A(n, std::vector<Q>(n + 1));
    for (int col = 0; col < n; ++col) {
        Cyclo prod = *this * zeta(ctx_, col);
        for (const auto& [k, v] : prod.c_) A[k][col] = v;
    }
    A[0][n] = 1;
    for (int c = 0, r = 0; c < n; ++c, ++r) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (A[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) throw std::logic_error("singular multiplication matrix");
        std::swap(A[piv], A[r]);
        Q inv = 1 / A[r][c];
        for (int j = c; j <= n; ++j) A[r][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Q f = A[i][c];
            for (int j = c; j <= n; ++j) A[i][j] -= f * A[r][j];
        }
    }
    Cyclo r(ctx_);
    for (int i = 0; i < n; ++i)
        if (A[i][n] != 0) r.add_zeta(i, A[i][n]);
    return r;
}

bool Cyclo::operator==(const Cyclo& o) const {
    if (is_zero() && o.is_zero()) return true;
    if (ctx_ && o.ctx_ && ctx_->M != o.ctx_->M) throw std::logic_error("cyclotomic order mismatch");
    return c_ == o.c_;
}

std::complex<double> Cyclo::to_complex() const {
    std::complex<double> z = 0;
    for (const auto& [k, v] : c_) z += v.get_d() * std::polar(1.0, 2 * std::numbers::pi * k / ctx_->M);
    return z;
}

std::string Cyclo::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        if (!first) os << (v > 0 ? " + " : " - ");
        else if (v < 0) os << "-";
        first = false;
        Q a = abs(v);
        if (k == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << "z" << ctx_->M << "^" << k;
        }
    }
    return os.str();
}

Q qpow_rational(int q, int e) {
    mpz_class n;
    mpz_ui_pow_ui(n.get_mpz_t(), (unsigned long)q, (unsigned long)std::abs(e));
    return e >= 0 ? Q(n) : Q(mpz_class(1), n);
}

void MonoSum::add(Mono m, long count) {
    long long key = ((long long)m.e << 32) ^ (unsigned)m.k;
    counts_[key] += count;
}

void MonoSum::add_scaled(Mono m, const Q& coef) { scaled_[{m.k, m.e}] += coef; }

Cyclo MonoSum::value(std::shared_ptr<const CycloCtx> ctx, int q) const {
    std::map<int, Q> byk;
    for (const auto& [key, cnt] : counts_) {
        if (!cnt) continue;
        int e = (int)(key >> 32);
        int k = (int)(unsigned)(key & 0xffffffffLL);
        byk[k] += Q(cnt) * qpow_rational(q, e);
    }
    for (const auto& [ke, c] : scaled_) byk[ke.first] += c * qpow_rational(q, ke.second);
    Cyclo r(std::move(ctx));
    for (const auto& [k, v] : byk) r.add_zeta(k, v);
    return r;
}

QHalf QHalf::from(Cyclo c, int q) {
    Cyclo z(c.ctx());
    return {std::move(c), std::move(z), q};
}

QHalf QHalf::operator*(const QHalf& o) const {
    return {c0 * o.c0 + c1 * o.c1 * Q(q), c0 * o.c1 + c1 * o.c0, q};
}

std::complex<double> QHalf::to_complex() const { return c0.to_complex() + std::sqrt((double)q) * c1.to_complex(); }

std::string QHalf::str() const {
    if (c1.is_zero()) return c0.str();
    return c0.str() + " + (" + c1.str() + ")*sqrt(" + std::to_string(q) + ")";
}

CMat zero_matrix(std::shared_ptr<const CycloCtx> ctx, size_t rows, size_t cols) {
    return CMat(rows, CVec(cols, Cyclo(ctx)));
}

std::vector<size_t> rref(CMat& A) {
    std::vector<size_t> piv;
    if (A.empty()) return piv;
    size_t rows = A.size(), cols = A[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = rows;
        for (size_t i = r; i < rows; ++i)
            if (!A[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        Cyclo inv = A[r][c].inverse();
        for (size_t j = c; j < cols; ++j)
            if (!A[r][j].is_zero()) A[r][j] = A[r][j] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Cyclo f = A[i][c];
            for (size_t j = c; j < cols; ++j)
                if (!A[r][j].is_zero()) A[i][j] -= f * A[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

size_t rank(CMat A) { return rref(A).size(); }

std::vector<CVec> kernel(CMat A, size_t cols) {
    std::vector<CVec> out;
    std::shared_ptr<const CycloCtx> ctx;
    for (auto& row : A)
        for (auto& x : row)
            if (x.ctx()) ctx = x.ctx();
    auto piv = rref(A);
    if (!ctx) ctx = cyclo_ctx(1);
    std::vector<int> is_piv(cols, -1);
    for (size_t i = 0; i < piv.size(); ++i) is_piv[piv[i]] = (int)i;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f] >= 0) continue;
        CVec v(cols, Cyclo(ctx));
        v[f] = Cyclo(ctx, 1);
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -A[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

bool same_span(const std::vector<CVec>& U, const std::vector<CVec>& V) {
    size_t ru = rank(U), rv = rank(V);
    if (ru != rv) return false;
    CMat W = U;
    W.insert(W.end(), V.begin(), V.end());
    return rank(W) == ru;
}

}  // namespace nf
