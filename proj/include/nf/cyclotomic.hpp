#pragma once
// Exact arithmetic in Q(zeta_M) with sparse canonical forms, q-graded
// monomials, and small dense linear algebra over Q(zeta_M).

#include <gmpxx.h>

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace nf {

using Q = mpq_class;

// Canonical reduction modulo Phi_M(x) = Phi_r(x^B), r = rad(M), B = M/r.
class CycloCtx {
public:
    explicit CycloCtx(int M);
    int M, rad, B, phi_rad, phi;
    std::vector<std::vector<long>> xpow;  // X^i mod Phi_rad, i in [0, rad)
    std::vector<long> phi_rad_poly;
};

std::shared_ptr<const CycloCtx> cyclo_ctx(int M);

class Cyclo {
public:
    Cyclo() = default;
    explicit Cyclo(std::shared_ptr<const CycloCtx> ctx) : ctx_(std::move(ctx)) {}
    Cyclo(std::shared_ptr<const CycloCtx> ctx, const Q& r);
    static Cyclo zeta(std::shared_ptr<const CycloCtx> ctx, long k, const Q& coef = 1);

    const std::shared_ptr<const CycloCtx>& ctx() const { return ctx_; }
    int order() const { return ctx_->M; }
    bool is_zero() const { return c_.empty(); }
    bool is_rational() const;
    Q rational() const;  // requires is_rational
    const std::map<int, Q>& terms() const { return c_; }

    void add_zeta(long k, const Q& coef);
    Cyclo& operator+=(const Cyclo& o);
    Cyclo& operator-=(const Cyclo& o);
    Cyclo operator+(const Cyclo& o) const { Cyclo r = *this; return r += o; }
    Cyclo operator-(const Cyclo& o) const { Cyclo r = *this; return r -= o; }
    Cyclo operator-() const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo operator*(const Q& r) const;
    Cyclo conj() const;
    Cyclo inverse() const;
    Cyclo lift(std::shared_ptr<const CycloCtx> to) const;
    bool operator==(const Cyclo& o) const;
    bool operator!=(const Cyclo& o) const { return !(*this == o); }
    std::complex<double> to_complex() const;
    std::string str() const;

private:
    std::shared_ptr<const CycloCtx> ctx_;
    std::map<int, Q> c_;
};

// zeta_M^k * q^e
struct Mono {
    int k = 0;
    int e = 0;
    bool operator==(const Mono&) const = default;
};

inline Mono mono_mul(Mono a, Mono b, int M) { return {(a.k + b.k) % M, a.e + b.e}; }
inline Mono mono_inv(Mono a, int M) { return {(M - a.k) % M, -a.e}; }

Q qpow_rational(int q, int e);

// Sums of monomials with integer multiplicities, reduced on demand.
class MonoSum {
public:
    void add(Mono m, long count = 1);
    void add_scaled(Mono m, const Q& coef);
    Cyclo value(std::shared_ptr<const CycloCtx> ctx, int q) const;
    bool empty() const { return counts_.empty() && scaled_.empty(); }

private:
    std::unordered_map<long long, long> counts_;
    std::map<std::pair<int, int>, Q> scaled_;
};

// c0 + c1 * sqrt(q)
class QHalf {
public:
    QHalf() = default;
    QHalf(Cyclo c0, Cyclo c1, int q) : c0(std::move(c0)), c1(std::move(c1)), q(q) {}
    static QHalf from(Cyclo c, int q);
    Cyclo c0, c1;
    int q = 0;
    QHalf operator+(const QHalf& o) const { return {c0 + o.c0, c1 + o.c1, q}; }
    QHalf operator-(const QHalf& o) const { return {c0 - o.c0, c1 - o.c1, q}; }
    QHalf operator*(const QHalf& o) const;
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const QHalf& o) const { return c0 == o.c0 && c1 == o.c1; }
    std::complex<double> to_complex() const;
    std::string str() const;
};

using CVec = std::vector<Cyclo>;
using CMat = std::vector<CVec>;

CMat zero_matrix(std::shared_ptr<const CycloCtx> ctx, size_t rows, size_t cols);
// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(CMat& A);
size_t rank(CMat A);
std::vector<CVec> kernel(CMat A, size_t cols);
// span equality of the row sets
bool same_span(const std::vector<CVec>& U, const std::vector<CVec>& V);

}  // namespace nf
