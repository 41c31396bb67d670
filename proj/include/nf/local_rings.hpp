#pragma once
// Truncated local rings O_F/P^N (p-adic or power series over F_q) and the
// unramified quadratic extension O_E = O_F[sqrt(eps_F)].

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nf {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Backend { Mixed, Equal };

const char* backend_name(Backend b);
Backend parse_backend(const std::string& s);

// F_q = F_p[x]/(g), element index sum c_j p^j.
class FiniteField {
public:
    FiniteField(int p, int f);
    int p, f, q;
    std::vector<int> modulus;  // monic, degree f, low to high
    int add(int a, int b) const { return add_[a * q + b]; }
    int sub(int a, int b) const { return add_[a * q + neg_[b]]; }
    int mul(int a, int b) const { return mul_[a * q + b]; }
    int neg(int a) const { return neg_[a]; }
    int inv(int a) const;
    int pow(int a, i64 e) const;
    bool is_square(int a) const { return sq_[a]; }
    int from_int(i64 n) const;
    int trace(int a) const;  // to F_p
    int primitive() const { return prim_; }
private:
    std::vector<int> add_, mul_, neg_, inv_;
    std::vector<char> sq_;
    int prim_ = 1;
};

// Raw arithmetic in O/P^N. Elements are u64: residues mod p^N (mixed) or
// packed 4-bit digits of a truncated power series (equal).
class Ring {
public:
    Ring(Backend b, int p, int f, int N);
    Backend backend;
    int p, f, q, N;
    std::shared_ptr<const FiniteField> k;
    u64 eps;  // non-square unit

    u64 zero() const { return 0; }
    u64 one() const { return 1; }
    u64 pi() const { return backend == Backend::Mixed ? (N > 1 ? (u64)p : 0) : (N > 1 ? 16 : 0); }
    u64 from_int(i64 n) const;
    u64 constant(int digit) const;  // Teichmuller-free constant lift of a residue index
    u64 add(u64 a, u64 b) const;
    u64 sub(u64 a, u64 b) const;
    u64 neg(u64 a) const;
    u64 mul(u64 a, u64 b) const;
    u64 pow(u64 a, i64 e) const;
    int val(u64 a) const;                   // 0..N
    bool is_unit(u64 a) const { return digit(a, 0) != 0; }
    int digit(u64 a, int i) const;          // residue index of digit i
    u64 inv_unit(u64 a) const;
    u64 shift_down(u64 a, int s) const;     // a / pi^s (low digits dropped)
    u64 shift_up(u64 a, int s) const;       // a * pi^s
    u64 truncate(u64 a, int L) const;       // a mod P^L
    u64 index(u64 a, int L) const;          // canonical index of a mod P^L in [0, q^L)
    u64 from_index(u64 idx) const;
    u64 qpow(int L) const;                  // q^L
    u64 mod() const { return mod_; }        // p^N (mixed)
    u64 pi_pow(int s) const { return s >= N ? 0 : shift_up(1, s); }
    std::string str(u64 a) const;
private:
    u64 mod_ = 0;
    u64 mask_ = 0;
};

std::shared_ptr<const Ring> make_ring(Backend b, int p, int f, int N);

// Raw element of O_E/P^N: a + b sqrt(eps).
struct QElt {
    u64 a = 0, b = 0;
    bool operator==(const QElt&) const = default;
};

class QuadRing {
public:
    explicit QuadRing(std::shared_ptr<const Ring> R);
    std::shared_ptr<const Ring> R;
    QElt epsE;  // non-square unit with norm eps_F
    QElt from_base(u64 a) const { return {a, 0}; }
    QElt one() const { return {1, 0}; }
    QElt add(QElt x, QElt y) const { return {R->add(x.a, y.a), R->add(x.b, y.b)}; }
    QElt sub(QElt x, QElt y) const { return {R->sub(x.a, y.a), R->sub(x.b, y.b)}; }
    QElt neg(QElt x) const { return {R->neg(x.a), R->neg(x.b)}; }
    QElt mul(QElt x, QElt y) const;
    QElt conj(QElt x) const { return {x.a, R->neg(x.b)}; }
    u64 norm(QElt x) const;
    u64 trace(QElt x) const { return R->add(x.a, x.a); }
    int val(QElt x) const;
    bool is_unit(QElt x) const { return R->is_unit(x.a) || R->is_unit(x.b); }
    QElt inv_unit(QElt x) const;
    QElt pow(QElt x, i64 e) const;
    QElt shift_down(QElt x, int s) const { return {R->shift_down(x.a, s), R->shift_down(x.b, s)}; }
    QElt shift_up(QElt x, int s) const { return {R->shift_up(x.a, s), R->shift_up(x.b, s)}; }
    QElt truncate(QElt x, int L) const { return {R->truncate(x.a, L), R->truncate(x.b, L)}; }
    u64 index(QElt x, int L) const { return R->index(x.a, L) * R->qpow(L) + R->index(x.b, L); }
    QElt from_index(u64 idx, int L) const {
        u64 Q = R->qpow(L);
        return {R->from_index(idx / Q), R->from_index(idx % Q)};
    }
    bool is_square_unit(QElt x) const;
    std::string str(QElt x) const;
};

std::shared_ptr<const QuadRing> make_quad_ext(std::shared_ptr<const Ring> R);

// Laurent element pi^s * u with u a unit known modulo P^prec (relative
// precision), or zero known modulo P^s.
class RElem {
public:
    RElem() = default;
    RElem(std::shared_ptr<const Ring> R, i64 n);
    static RElem from_raw(std::shared_ptr<const Ring> R, u64 x, int absprec = -1);
    static RElem zero(std::shared_ptr<const Ring> R, int absprec);
    static RElem pi_power(std::shared_ptr<const Ring> R, int s);

    const std::shared_ptr<const Ring>& ring() const { return R_; }
    bool is_zero() const { return u_ == 0; }
    int valuation() const { return s_; }
    int precision() const { return is_zero() ? 0 : prec_; }  // relative
    int abs_precision() const { return is_zero() ? s_ : s_ + prec_; }
    u64 unit_part() const { return u_; }
    u64 raw() const;  // integral value mod P^N (requires valuation >= 0)
    std::vector<int> digits() const;  // N digits of the integral value

    RElem operator+(const RElem& o) const;
    RElem operator-(const RElem& o) const;
    RElem operator-() const;
    RElem operator*(const RElem& o) const;
    RElem inverse() const;
    RElem operator/(const RElem& o) const { return *this * o.inverse(); }
    bool operator==(const RElem& o) const;  // equality at common precision
    std::string str() const;

private:
    std::shared_ptr<const Ring> R_;
    int s_ = 0;
    u64 u_ = 0;
    int prec_ = 0;
    static RElem make(std::shared_ptr<const Ring> R, int s, u64 x, int prec);
};

int valuation(const RElem& x);
bool is_square_unit(const RElem& x);

class QuadElem {
    std::shared_ptr<const QuadRing> E_;

public:
    QuadElem() = default;
    QuadElem(std::shared_ptr<const QuadRing> E, RElem a, RElem b) : E_(std::move(E)), a(std::move(a)), b(std::move(b)) {}
    static QuadElem from_raw(std::shared_ptr<const QuadRing> E, QElt x);
    static QuadElem from_base(std::shared_ptr<const QuadRing> E, const RElem& a);
    const std::shared_ptr<const QuadRing>& ext() const { return E_; }
    RElem a, b;

    int valuation() const;
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    QElt raw() const { return {a.raw(), b.raw()}; }
    QuadElem operator+(const QuadElem& o) const { return {E_, a + o.a, b + o.b}; }
    QuadElem operator-(const QuadElem& o) const { return {E_, a - o.a, b - o.b}; }
    QuadElem operator-() const { return {E_, -a, -b}; }
    QuadElem operator*(const QuadElem& o) const;
    QuadElem conj() const { return {E_, a, -b}; }
    RElem norm() const;
    RElem trace() const { return a + a; }
    QuadElem inverse() const;
    bool operator==(const QuadElem& o) const { return a == o.a && b == o.b; }
    std::string str() const;
};

int valuation(const QuadElem& x);
bool is_square_unit(const QuadElem& x);

}  // namespace nf
