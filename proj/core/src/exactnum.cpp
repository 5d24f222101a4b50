#include "finqm/exactnum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <mpfr.h>

#include "finqm/errors.hpp"

namespace finqm {

Rat rat(long p, long q) {
    if (q == 0) fail(ErrorKind::InvalidArgument, "zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

Rat parse_rat(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) fail(ErrorKind::InvalidArgument, "empty rational");
    Rat r;
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            r = Rat(Int(s));
        } else {
            Int num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) fail(ErrorKind::InvalidArgument, "zero denominator in '" + s + "'");
            r = Rat(num, den);
        }
    } catch (const std::invalid_argument&) {
        fail(ErrorKind::InvalidArgument, "not a rational: '" + s + "'");
    }
    r.canonicalize();
    return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

bool is_integer(const Rat& r) { return r.get_den() == 1; }

long to_long(const Int& z) {
    if (!z.fits_slong_p()) fail(ErrorKind::OutOfRange, "integer " + z.get_str() + " exceeds long");
    return z.get_si();
}

long to_long(const Rat& r) {
    if (!is_integer(r)) fail(ErrorKind::InvalidArgument, "expected integer, got " + r.get_str());
    return to_long(r.get_num());
}

long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t floor_mod64(__int128 a, std::int64_t m) {
    __int128 r = a % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

Rat frac_part(const Rat& t) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rat r = t - Rat(fl);
    r.canonicalize();
    return r;
}

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> out;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

long euler_phi(long n) {
    long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

std::vector<long> divisors(long n) {
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

int moebius(long n) {
    int s = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

struct CycTable {
    long M = 1;
    long phi = 1;
    // red[k] = coefficients of zeta^k in the power basis, k in [0, M)
    std::vector<std::vector<std::pair<long, long>>> red;
};

std::shared_ptr<const CycTable> build_table(long M) {
    auto t = std::make_shared<CycTable>();
    t->M = M;
    t->phi = euler_phi(M);
    std::vector<__int128> poly{1};
    auto divs = divisors(M);
    for (long d : divs) {
        if (moebius(M / d) != 1) continue;
        std::vector<__int128> next(poly.size() + d, 0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + d] += poly[i];
            next[i] -= poly[i];
        }
        poly.swap(next);
    }
    for (long d : divs) {
        if (moebius(M / d) != -1) continue;
        long deg = static_cast<long>(poly.size()) - 1;
        std::vector<__int128> q(deg - d + 1, 0);
        for (long i = deg - d; i >= 0; --i) q[i] = poly[i + d] + (i + d <= deg - d ? q[i + d] : 0);
        poly.swap(q);
    }
    const long phi = t->phi;
    if (static_cast<long>(poly.size()) != phi + 1 || poly[phi] != 1)
        fail(ErrorKind::InvalidArgument, "cyclotomic polynomial construction failed");
    t->red.resize(M);
    std::vector<__int128> cur(phi, 0);
    for (long k = 0; k < M; ++k) {
        if (k < phi) {
            t->red[k] = {{k, 1}};
            continue;
        }
        if (k == phi) {
            for (long i = 0; i < phi; ++i) cur[i] = -poly[i];
        } else {
            __int128 top = cur[phi - 1];
            for (long i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
            cur[0] = 0;
            for (long i = 0; i < phi; ++i) cur[i] -= top * poly[i];
        }
        auto& row = t->red[k];
        for (long i = 0; i < phi; ++i) {
            if (cur[i] == 0) continue;
            if (cur[i] > LONG_MAX || cur[i] < LONG_MIN) fail(ErrorKind::OutOfRange, "cyclotomic reduction overflow");
            row.emplace_back(i, static_cast<long>(cur[i]));
        }
    }
    return t;
}

std::shared_ptr<const CycTable> shared_table(long M) {
    static std::mutex mu;
    static std::unordered_map<long, std::shared_ptr<const CycTable>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(M);
        if (it != cache.end()) return it->second;
    }
    auto t = build_table(M);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(M, t).first->second;
}

std::shared_ptr<const CycTable> table(long M) {
    thread_local std::unordered_map<long, std::shared_ptr<const CycTable>> local;
    if (auto it = local.find(M); it != local.end()) return it->second;
    auto t = shared_table(M);
    local.emplace(M, t);
    return t;
}

// Accumulates c*zeta_M^k terms directly into the reduced basis.
class Acc {
public:
    explicit Acc(long M) : tab_(table(M)), pos_(tab_->phi, -1) {}
    void add(long k, const Rat& c) {
        if (sgn(c) == 0) return;
        for (const auto& [e, r] : tab_->red[floor_mod(k, tab_->M)]) {
            int& p = pos_[e];
            if (p < 0) {
                p = static_cast<int>(out_.size());
                out_.emplace_back(e, Rat(0));
            }
            Rat& dst = out_[p].second;
            if (r == 1)
                dst += c;
            else if (r == -1)
                dst -= c;
            else
                dst += c * r;
        }
    }
    std::vector<Cyc::Term> finish() {
        std::vector<Cyc::Term> t;
        t.reserve(out_.size());
        for (auto& term : out_)
            if (sgn(term.second) != 0) t.push_back(std::move(term));
        std::sort(t.begin(), t.end(), [](const Cyc::Term& a, const Cyc::Term& b) { return a.first < b.first; });
        return t;
    }

private:
    std::shared_ptr<const CycTable> tab_;
    std::vector<int> pos_;
    std::vector<Cyc::Term> out_;
};

// Solve A y = x over Q for a consistent system (columns of A given as dense vectors).
std::vector<Rat> solve_consistent(std::vector<std::vector<Rat>> cols, std::vector<Rat> rhs) {
    const size_t n = cols.size(), m = rhs.size();
    std::vector<std::vector<Rat>> a(m, std::vector<Rat>(n + 1));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = cols[j][i];
        a[i][n] = rhs[i];
    }
    std::vector<long> pivcol;
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t p = row;
        while (p < m && sgn(a[p][col]) == 0) ++p;
        if (p == m) continue;
        std::swap(a[p], a[row]);
        Rat inv = 1 / a[row][col];
        for (size_t j = col; j <= n; ++j) a[row][j] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || sgn(a[i][col]) == 0) continue;
            Rat f = a[i][col];
            for (size_t j = col; j <= n; ++j) a[i][j] -= f * a[row][j];
        }
        pivcol.push_back(static_cast<long>(col));
        ++row;
    }
    std::vector<Rat> y(n);
    for (size_t r = 0; r < pivcol.size(); ++r) y[pivcol[r]] = a[r][n];
    return y;
}

Int squarefree_part(const Int& n, Int& square_root_part) {
    // n = square_root_part^2 * result, result square-free
    Int m = n;
    square_root_part = 1;
    Int result = 1;
    if (m.fits_ulong_p()) {
        unsigned long v = m.get_ui();
        for (unsigned long p = 2; p * p <= v; ++p) {
            if (v % p) continue;
            int e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            for (int i = 0; i < e / 2; ++i) square_root_part *= p;
            if (e % 2) result *= p;
        }
        result *= v;
        return result;
    }
    for (unsigned long p = 2; p < 10000000UL; ++p) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
        int e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) square_root_part *= p;
        if (e % 2) result *= p;
        if (m == 1) break;
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
        square_root_part *= r;
    } else {
        result *= m;
    }
    return result;
}

long legendre(long a, long p) {
    long r = 1, b = floor_mod(a, p), e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = static_cast<long>((__int128)r * b % p);
        b = static_cast<long>((__int128)b * b % p);
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

}  // namespace

// ---------------------------------------------------------------- Cyc

Cyc::Cyc(const Rat& r) {
    if (sgn(r) != 0) t_.emplace_back(0, r);
}

Cyc Cyc::from_exponents(long M, const std::vector<std::pair<long, Rat>>& raw) {
    if (M < 1) fail(ErrorKind::InvalidArgument, "cyclotomic order must be positive");
    Acc acc(M);
    for (const auto& [k, c] : raw) acc.add(k, c);
    Cyc out;
    out.M_ = M;
    out.t_ = acc.finish();
    if (out.is_rational()) out.M_ = 1;
    return out;
}

Cyc Cyc::zeta(long M, long k) {
    if (M < 1) fail(ErrorKind::InvalidArgument, "root order must be positive");
    k = floor_mod(k, M);
    long g = std::gcd(k, M);
    if (k == 0) return Cyc(Rat(1));
    long m = M / g;
    k /= g;
    if (m == 2) return Cyc(Rat(-1));
    return from_exponents(m, {{k, Rat(1)}});
}

bool Cyc::is_rational() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 0); }

Rat Cyc::rational_value() const {
    if (!is_rational()) fail(ErrorKind::InvalidArgument, "cyclotomic element is not rational");
    return t_.empty() ? Rat(0) : t_[0].second;
}

Cyc Cyc::lifted(long M) const {
    if (M == M_ || t_.empty()) {
        if (t_.empty()) return Cyc();
        return *this;
    }
    if (is_rational()) {
        Cyc out = *this;
        out.M_ = M;
        return out;
    }
    if (M % M_ != 0) fail(ErrorKind::InvalidArgument, "lift target is not a multiple of the order");
    long f = M / M_;
    Acc acc(M);
    for (const auto& [e, c] : t_) acc.add(e * f, c);
    Cyc out;
    out.M_ = M;
    out.t_ = acc.finish();
    return out;
}

Cyc Cyc::galois(long a) const {
    if (std::gcd(floor_mod(a, M_), M_) != 1 && M_ > 1) fail(ErrorKind::InvalidArgument, "galois exponent not a unit");
    if (is_rational()) return *this;
    Acc acc(M_);
    for (const auto& [e, c] : t_) acc.add(static_cast<long>((__int128)e * a % M_), c);
    Cyc out;
    out.M_ = M_;
    out.t_ = acc.finish();
    if (out.is_rational()) out.M_ = 1;
    return out;
}

Cyc Cyc::conj() const { return galois(-1); }

Cyc Cyc::inverse() const {
    if (is_zero()) fail(ErrorKind::InvalidArgument, "division by zero");
    if (is_rational()) return Cyc(1 / t_[0].second);
    Cyc prod(Rat(1));
    for (long a = 2; a < M_; ++a)
        if (std::gcd(a, M_) == 1) prod = prod * galois(a);
    Cyc norm = prod * *this;
    if (!norm.is_rational()) fail(ErrorKind::InvalidArgument, "norm computation failed");
    return prod * (1 / norm.rational_value());
}

Cyc Cyc::canonical() const {
    if (is_rational()) return Cyc(is_zero() ? Rat(0) : t_[0].second);
    for (long d : divisors(M_)) {
        if (d == M_) break;
        bool inv = true;
        for (long a = 1; a < M_ && inv; ++a) {
            if (std::gcd(a, M_) != 1 || a % d != 1 % d) continue;
            if (galois(a) != *this) inv = false;
        }
        if (!inv) continue;
        if (d <= 2) return Cyc(t_[0].second);  // unreachable for non-rational values
        long ph = euler_phi(d), phM = euler_phi(M_);
        std::vector<std::vector<Rat>> cols;
        for (long j = 0; j < ph; ++j) {
            Cyc b = Cyc::from_exponents(d, {{j, Rat(1)}}).lifted(M_);
            std::vector<Rat> col(phM);
            for (const auto& [e, c] : b.t_) col[e] = c;
            cols.push_back(std::move(col));
        }
        std::vector<Rat> rhs(phM);
        for (const auto& [e, c] : t_) rhs[e] = c;
        auto y = solve_consistent(cols, rhs);
        std::vector<std::pair<long, Rat>> raw;
        for (long j = 0; j < ph; ++j)
            if (sgn(y[j]) != 0) raw.emplace_back(j, y[j]);
        return Cyc::from_exponents(d, raw);
    }
    return *this;
}

cplx Cyc::eval() const {
    long double re = 0, im = 0;
    const long double tau = 6.283185307179586476925286766559L;
    for (const auto& [e, c] : t_) {
        long double ang = tau * static_cast<long double>(e) / static_cast<long double>(M_);
        long double v = c.get_d();
        re += v * cosl(ang);
        im += v * sinl(ang);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

std::string Cyc::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : t_) {
        if (!first) os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0) os << "-";
        first = false;
        Rat a = abs(c);
        if (e == 0) {
            os << a.get_str();
            continue;
        }
        if (a != 1) os << a.get_str() << "*";
        os << "z" << M_;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

Cyc Cyc::operator-() const {
    Cyc out = *this;
    for (auto& [e, c] : out.t_) c = -c;
    return out;
}

Cyc& Cyc::operator*=(const Rat& r) {
    if (sgn(r) == 0) {
        t_.clear();
        M_ = 1;
        return *this;
    }
    for (auto& [e, c] : t_) c *= r;
    return *this;
}

Cyc operator*(const Cyc& a, const Rat& r) {
    Cyc out = a;
    out *= r;
    return out;
}

namespace {
long common_order(const Cyc& a, const Cyc& b) {
    long ma = a.is_rational() ? 1 : a.order();
    long mb = b.is_rational() ? 1 : b.order();
    return std::lcm(ma, mb);
}
}  // namespace

Cyc operator+(const Cyc& a, const Cyc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long M = common_order(a, b);
    Cyc x = a.lifted(M), y = b.lifted(M);
    std::vector<Cyc::Term> t;
    t.reserve(x.t_.size() + y.t_.size());
    size_t i = 0, j = 0;
    while (i < x.t_.size() || j < y.t_.size()) {
        if (j == y.t_.size() || (i < x.t_.size() && x.t_[i].first < y.t_[j].first)) {
            t.push_back(x.t_[i++]);
        } else if (i == x.t_.size() || y.t_[j].first < x.t_[i].first) {
            t.push_back(y.t_[j++]);
        } else {
            Rat s = x.t_[i].second + y.t_[j].second;
            if (sgn(s) != 0) t.emplace_back(x.t_[i].first, s);
            ++i;
            ++j;
        }
    }
    Cyc out;
    out.t_ = std::move(t);
    out.M_ = out.t_.empty() ? 1 : M;
    if (out.is_rational()) out.M_ = 1;
    return out;
}

Cyc operator-(const Cyc& a, const Cyc& b) { return a + (-b); }

Cyc operator*(const Cyc& a, const Cyc& b) {
    if (a.is_zero() || b.is_zero()) return Cyc();
    if (a.is_rational()) return b * a.t_[0].second;
    if (b.is_rational()) return a * b.t_[0].second;
    long M = common_order(a, b);
    Cyc x = a.lifted(M), y = b.lifted(M);
    if (x.t_.size() == 1 && y.t_.size() == 1) {
        auto tab = table(M);
        Rat c = x.t_[0].second * y.t_[0].second;
        Cyc out;
        out.M_ = M;
        for (const auto& [e, r] : tab->red[(x.t_[0].first + y.t_[0].first) % M]) out.t_.emplace_back(e, c * r);
        if (out.is_rational()) out.M_ = 1;
        return out;
    }
    Acc acc(M);
    for (const auto& [i, ci] : x.t_)
        for (const auto& [j, cj] : y.t_) acc.add(i + j, ci * cj);
    Cyc out;
    out.t_ = acc.finish();
    out.M_ = out.t_.empty() ? 1 : M;
    if (out.is_rational()) out.M_ = 1;
    return out;
}

bool operator==(const Cyc& a, const Cyc& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    long M = common_order(a, b);
    Cyc x = a.lifted(M), y = b.lifted(M);
    return x.t_ == y.t_;
}

Cyc sqrt_cyc(const Int& squarefree) {
    if (squarefree <= 0) fail(ErrorKind::InvalidArgument, "sqrt_cyc needs a positive argument");
    Cyc out(Rat(1));
    if (squarefree == 1) return out;
    long s = to_long(squarefree);
    for (auto [p, e] : factorize(s)) {
        if (e != 1) fail(ErrorKind::InvalidArgument, "sqrt_cyc argument not square-free");
        if (p == 2) {
            out = out * Cyc::from_exponents(8, {{1, Rat(1)}, {7, Rat(1)}});
            continue;
        }
        std::vector<std::pair<long, Rat>> raw;
        for (long a = 1; a < p; ++a) raw.emplace_back(a, Rat(legendre(a, p)));
        Cyc g = Cyc::from_exponents(p, raw);
        if (p % 4 == 3) g = g * Cyc::zeta(4, 3);  // g = i*sqrt(p)
        out = out * g;
    }
    return out;
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() : v_(Exact{Rat(0), Int(1), Cyc()}) {}
Scalar::Scalar(long n) : v_(Exact{Rat(1), Int(1), Cyc(Rat(n))}) {}
Scalar::Scalar(const Rat& r) : v_(Exact{Rat(1), Int(1), Cyc(r)}) {}
Scalar::Scalar(const Cyc& c) : v_(Exact{Rat(1), Int(1), c}) {}

Scalar Scalar::exact(const Rat& scale, const Rat& radicand, const Cyc& cyc) {
    if (sgn(radicand) < 0) fail(ErrorKind::InvalidArgument, "negative radicand");
    Scalar out;
    if (sgn(scale) == 0 || sgn(radicand) == 0 || cyc.is_zero()) return out;
    // sqrt(p/q) = sqrt(p*q)/q
    Int pq = radicand.get_num() * radicand.get_den();
    Int sq;
    Int sf = squarefree_part(pq, sq);
    Rat sc = scale * Rat(sq) / Rat(radicand.get_den());
    sc.canonicalize();
    out.v_ = Exact{sc, sf, cyc};
    return out;
}

Scalar Scalar::from_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(ErrorKind::InvalidArgument, "float scalar must be finite");
    Scalar s;
    s.v_ = Float{z.real(), z.imag()};
    return s;
}

bool Scalar::is_zero() const {
    if (is_exact()) return sgn(ex().scale) == 0 || ex().cyc.is_zero();
    return fl().re == 0.0 && fl().im == 0.0;
}

cplx Scalar::to_complex() const {
    if (!is_exact()) return {fl().re, fl().im};
    const auto& e = ex();
    return e.cyc.eval() * (e.scale.get_d() * std::sqrt(e.rad.get_d()));
}

Scalar Scalar::conj() const {
    if (!is_exact()) return from_complex(std::conj(to_complex()));
    Scalar out = *this;
    std::get<Exact>(out.v_).cyc = ex().cyc.conj();
    return out;
}

Scalar Scalar::inv() const {
    if (is_zero()) fail(ErrorKind::InvalidArgument, "division by zero scalar");
    if (!is_exact()) return from_complex(1.0 / to_complex());
    const auto& e = ex();
    Scalar out;
    out.v_ = Exact{Rat(1) / (e.scale * Rat(e.rad)), e.rad, e.cyc.inverse()};
    return out;
}

Scalar Scalar::mul_root(long M, long k) const {
    if (!is_exact()) return from_complex(to_complex() * unit_phase(k, M));
    if (is_zero()) return *this;
    Scalar out = *this;
    auto& e = std::get<Exact>(out.v_);
    e.cyc = e.cyc * Cyc::zeta(M, k);
    return out;
}

Cyc Scalar::canonical() const {
    if (!is_exact()) fail(ErrorKind::InvalidArgument, "canonical form needs an exact scalar");
    if (is_zero()) return Cyc();
    const auto& e = ex();
    return (e.cyc * sqrt_cyc(e.rad) * e.scale).canonical();
}

std::string Scalar::str() const {
    if (!is_exact()) {
        std::ostringstream os;
        os.precision(17);
        os << fl().re << (fl().im < 0 ? "-" : "+") << std::abs(fl().im) << "i";
        return os.str();
    }
    if (is_zero()) return "0";
    const auto& e = ex();
    std::string out;
    bool unit = e.scale == 1;
    if (!unit) out += e.scale.get_str();
    if (e.rad != 1) out += (unit ? "" : "*") + std::string("sqrt(") + e.rad.get_str() + ")", unit = false;
    if (e.cyc.is_rational() && e.cyc.rational_value() == 1 && !out.empty()) return out;
    out += (out.empty() ? "" : "*") + std::string("(") + e.cyc.str() + ")";
    return out;
}

Scalar Scalar::operator-() const {
    if (!is_exact()) return from_complex(-to_complex());
    Scalar out = *this;
    std::get<Exact>(out.v_).scale = -ex().scale;
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (!is_exact() || !o.is_exact()) return *this = from_complex(to_complex() + o.to_complex());
    const auto& a = ex();
    const auto& b = o.ex();
    if (a.rad == b.rad) {
        Cyc c = a.cyc * a.scale + b.cyc * b.scale;
        v_ = Exact{c.is_zero() ? Rat(0) : Rat(1), c.is_zero() ? Int(1) : a.rad, c};
        return *this;
    }
    Cyc c = a.cyc * sqrt_cyc(a.rad) * a.scale + b.cyc * sqrt_cyc(b.rad) * b.scale;
    v_ = Exact{c.is_zero() ? Rat(0) : Rat(1), Int(1), c};
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
    if (!is_exact() || !o.is_exact()) return *this = from_complex(to_complex() * o.to_complex());
    if (is_zero() || o.is_zero()) return *this = Scalar();
    const auto& a = ex();
    const auto& b = o.ex();
    Rat sc = a.scale * b.scale;
    Cyc cy = a.cyc * b.cyc;
    if (a.rad == 1 || b.rad == 1) {
        v_ = Exact{sc, a.rad * b.rad, cy};
        return *this;
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), a.rad.get_mpz_t(), b.rad.get_mpz_t());
    // sqrt(a)*sqrt(b) = g*sqrt(a/g * b/g) with a/g, b/g coprime and square-free
    v_ = Exact{sc * Rat(g), (a.rad / g) * (b.rad / g), cy};
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return (a - b).is_zero();
    return a.to_complex() == b.to_complex();
}

Scalar root_of_unity(long M, long k) {
    if (M < 1) fail(ErrorKind::InvalidArgument, "root_of_unity needs M >= 1");
    return Scalar(Cyc::zeta(M, k));
}

Scalar turn_root(const Rat& t) {
    Rat f = frac_part(t);
    return root_of_unity(to_long(f.get_den()), to_long(f.get_num()));
}

Scalar sqrt_rat(const Rat& r) { return Scalar::exact(Rat(1), r, Cyc(Rat(1))); }

Scalar conjugate(const Scalar& s) { return s.conj(); }

Scalar gauss_sum(long N) {
    if (N < 1) fail(ErrorKind::InvalidArgument, "gauss_sum needs N >= 1");
    std::vector<std::pair<long, Rat>> raw;
    raw.reserve(N);
    for (long m = 0; m < N; ++m) raw.emplace_back(static_cast<long>((__int128)m * m % (2 * N)), Rat(1));
    return Scalar(Cyc::from_exponents(2 * N, raw));
}

cplx eval_complex(const Scalar& s, int precision_bits) {
    if (!s.is_exact() || precision_bits <= 53) return s.to_complex();
    const auto& e = s.ex();
    mpfr_prec_t prec = precision_bits + 32;
    mpfr_t re, im, ang, c, sn, tmp, pi2;
    mpfr_inits2(prec, re, im, ang, c, sn, tmp, pi2, (mpfr_ptr)0);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
    mpfr_const_pi(pi2, MPFR_RNDN);
    mpfr_mul_ui(pi2, pi2, 2, MPFR_RNDN);
    for (const auto& [k, coef] : e.cyc.terms()) {
        mpfr_mul_si(ang, pi2, k, MPFR_RNDN);
        mpfr_div_si(ang, ang, e.cyc.order(), MPFR_RNDN);
        mpfr_sin_cos(sn, c, ang, MPFR_RNDN);
        mpfr_set_q(tmp, coef.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(c, c, tmp, MPFR_RNDN);
        mpfr_mul(sn, sn, tmp, MPFR_RNDN);
        mpfr_add(re, re, c, MPFR_RNDN);
        mpfr_add(im, im, sn, MPFR_RNDN);
    }
    mpfr_set_z(tmp, e.rad.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(tmp, tmp, MPFR_RNDN);
    mpfr_set_q(c, e.scale.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(tmp, tmp, c, MPFR_RNDN);
    mpfr_mul(re, re, tmp, MPFR_RNDN);
    mpfr_mul(im, im, tmp, MPFR_RNDN);
    cplx out(mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN));
    mpfr_clears(re, im, ang, c, sn, tmp, pi2, (mpfr_ptr)0);
    return out;
}

cplx unit_phase(std::int64_t num, std::int64_t den) {
    if (den <= 0) fail(ErrorKind::InvalidArgument, "unit_phase needs a positive denominator");
    std::int64_t r = floor_mod64(num, den);
    // fold into [-den/2, den/2] so the float angle is as small as possible
    long double x = static_cast<long double>(r) / static_cast<long double>(den);
    if (x > 0.5L) x -= 1.0L;
    const long double tau = 6.283185307179586476925286766559L;
    long double ang = tau * x;
    return {static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang))};
}

cplx unit_phase(const Rat& turn) {
    Rat f = frac_part(turn);
    const Int& num = f.get_num();
    const Int& den = f.get_den();
    if (den.fits_slong_p()) return unit_phase(num.get_si(), den.get_si());
    mpfr_t x, s, c;
    mpfr_inits2(80, x, s, c, (mpfr_ptr)0);
    mpfr_set_q(x, f.get_mpq_t(), MPFR_RNDN);
    mpfr_const_pi(s, MPFR_RNDN);
    mpfr_mul(x, x, s, MPFR_RNDN);
    mpfr_mul_ui(x, x, 2, MPFR_RNDN);
    mpfr_sin_cos(s, c, x, MPFR_RNDN);
    cplx out(mpfr_get_d(c, MPFR_RNDN), mpfr_get_d(s, MPFR_RNDN));
    mpfr_clears(x, s, c, (mpfr_ptr)0);
    return out;
}

Scalar Monomial::exact() const {
    Rat f = frac_part(turn);
    return Scalar::exact(coef, rad, Cyc::zeta(to_long(f.get_den()), to_long(f.get_num())));
}

cplx Monomial::value() const { return unit_phase(turn) * (coef.get_d() * std::sqrt(rad.get_d())); }

Monomial operator*(const Monomial& x, const Monomial& y) {
    return {Rat(x.coef * y.coef), Rat(x.rad * y.rad), frac_part(x.turn + y.turn)};
}

}  // namespace finqm
