#pragma once

// Exact arithmetic in Q(zeta_M) with a separate square-root scale, plus a float fallback.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace finqm {

using Int = mpz_class;
using Rat = mpq_class;
using cplx = std::complex<double>;

Rat rat(long p, long q = 1);
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& r);
bool is_integer(const Rat& r);
long to_long(const Int& z);
long to_long(const Rat& r);  // requires an integer value
long floor_mod(long a, long m);
std::int64_t floor_mod64(__int128 a, std::int64_t m);
Rat frac_part(const Rat& t);  // t - floor(t), in [0, 1)
long euler_phi(long n);
std::vector<long> divisors(long n);
std::vector<std::pair<long, int>> factorize(long n);

/// Element of Q(zeta_M), stored reduced modulo Phi_M in the power basis 1, zeta, ..., zeta^{phi(M)-1}.
class Cyc {
public:
    using Term = std::pair<long, Rat>;

    Cyc() = default;
    explicit Cyc(const Rat& r);
    static Cyc zeta(long M, long k);

    long order() const { return M_; }
    bool is_zero() const { return t_.empty(); }
    const std::vector<Term>& terms() const { return t_; }
    bool is_rational() const;
    Rat rational_value() const;  // requires is_rational()

    Cyc lifted(long M) const;
    Cyc conj() const;
    Cyc galois(long a) const;
    Cyc inverse() const;
    Cyc canonical() const;  // smallest order containing the value
    cplx eval() const;
    std::string str() const;

    Cyc operator-() const;
    Cyc& operator*=(const Rat& r);
    friend Cyc operator+(const Cyc& a, const Cyc& b);
    friend Cyc operator-(const Cyc& a, const Cyc& b);
    friend Cyc operator*(const Cyc& a, const Cyc& b);
    friend Cyc operator*(const Cyc& a, const Rat& r);
    friend bool operator==(const Cyc& a, const Cyc& b);
    friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

    // Build from raw exponent/coefficient pairs (exponents taken mod M, reduced afterwards).
    static Cyc from_exponents(long M, const std::vector<std::pair<long, Rat>>& raw);

private:
    long M_ = 1;
    std::vector<Term> t_;
};

/// sqrt(s) for a positive square-free integer s, as a cyclotomic element (quadratic Gauss periods).
Cyc sqrt_cyc(const Int& squarefree);

/// Exact scale*sqrt(radicand)*cyc, or a complex double.
class Scalar {
public:
    struct Exact {
        Rat scale;
        Int rad;  // positive, square-free
        Cyc cyc;
    };
    struct Float {
        double re;
        double im;
    };

    Scalar();
    Scalar(long n);
    Scalar(const Rat& r);
    explicit Scalar(const Cyc& c);
    static Scalar exact(const Rat& scale, const Rat& radicand, const Cyc& cyc);
    static Scalar from_complex(cplx z);

    bool is_exact() const { return std::holds_alternative<Exact>(v_); }
    const Exact& ex() const { return std::get<Exact>(v_); }
    const Float& fl() const { return std::get<Float>(v_); }

    bool is_zero() const;
    cplx to_complex() const;
    Scalar conj() const;
    Scalar inv() const;
    Scalar mul_root(long M, long k) const;
    Cyc canonical() const;
    std::string str() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    std::variant<Exact, Float> v_;
};

Scalar root_of_unity(long M, long k);
Scalar turn_root(const Rat& t);  // exp(2 pi i t) for rational t
Scalar sqrt_rat(const Rat& r);   // exact sqrt(r), r >= 0
Scalar conjugate(const Scalar& s);
Scalar gauss_sum(long N);
cplx eval_complex(const Scalar& s, int precision_bits = 53);

/// exp(2 pi i num/den) with the argument reduced exactly before the float evaluation.
cplx unit_phase(std::int64_t num, std::int64_t den);
cplx unit_phase(const Rat& turn);

/// coef * sqrt(rad) * e^{2 pi i turn}: the shape of every elementary kernel amplitude.
struct Monomial {
    Rat coef{1};
    Rat rad{1};
    Rat turn{0};

    Scalar exact() const;
    cplx value() const;
    Monomial conj() const { return {coef, rad, frac_part(-turn)}; }
    friend Monomial operator*(const Monomial& x, const Monomial& y);
};

}  // namespace finqm
