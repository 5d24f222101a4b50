#include "finqm/transform.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "finqm/errors.hpp"

namespace finqm {

Mat2 mat2(const Rat& a, const Rat& b, const Rat& c, const Rat& d) { return {{{a, b}, {c, d}}}; }

Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 z;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            z[i][j].canonicalize();
        }
    return z;
}

Rat det(const Mat2& g) {
    Rat d = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    d.canonicalize();
    return d;
}

Mat2 inverse(const Mat2& g) {
    Rat d = det(g);
    if (sgn(d) == 0) fail(ErrorKind::BadMatrix, "singular matrix " + to_string(g));
    Mat2 r = mat2(g[1][1] / d, -g[0][1] / d, -g[1][0] / d, g[0][0] / d);
    for (auto& row : r)
        for (auto& x : row) x.canonicalize();
    return r;
}

std::string to_string(const Mat2& g) {
    return "[[" + g[0][0].get_str() + "," + g[0][1].get_str() + "],[" + g[1][0].get_str() + "," + g[1][1].get_str() + "]]";
}

StateVec dense_from_sparse(const ModulePtr& M, const SparseVec& v) {
    if (M->N > kMaxDense) fail(ErrorKind::OutOfRange, "module of dimension " + std::to_string(M->N) + " is too large to materialize");
    StateVec x = zero_vec(M);
    for (const auto& [idx, a] : v) x.amps[static_cast<size_t>(idx)] += a.exact();
    return x;
}

namespace {

void require_dense(long N) {
    if (N > kMaxDense) fail(ErrorKind::OutOfRange, "module of dimension " + std::to_string(N) + " is too large to materialize");
}

// Fill domain_vec / image_vec from the lazy forms.
void finish_lazy(RegUnitary& L) {
    auto src = L.src;
    auto dst = L.dst;
    auto ds = L.domain_sparse;
    auto amp = L.image_amp;
    L.domain_vec = [src, ds](long m) { return dense_from_sparse(src, ds(m)); };
    L.image_vec = [dst, amp](long m) {
        require_dense(dst->N);
        StateVec x = zero_vec(dst);
        for (long i = 0; i < dst->N; ++i)
            if (auto a = amp(m, i)) x.amps[static_cast<size_t>(i)] = a->exact();
        return x;
    };
}

Rat mul_mod(const Rat& qt, __int128 x, __int128 mod) {
    long r = static_cast<long>(((x % mod) + mod) % mod);
    return qt * r;
}


// Integer coordinates of w in the basis {S, T} of exponent vectors.
std::array<long, 2> basis_coords(const GenWord& S, const GenWord& T, const GenWord& w) {
    Mat2 B = mat2(S.u, S.v, T.u, T.v);
    Mat2 Bi = inverse(B);
    Rat y1 = w.u * Bi[0][0] + w.v * Bi[1][0];
    Rat y2 = w.u * Bi[0][1] + w.v * Bi[1][1];
    y1.canonicalize();
    y2.canonicalize();
    if (!is_integer(y1) || !is_integer(y2))
        fail(ErrorKind::NotInAlgebra, w.str() + " is not generated by " + S.str() + " and " + T.str());
    return {to_long(y1), to_long(y2)};
}

Int lcm_den(const std::vector<std::array<Rat, 2>>& v) {
    Int l = 1;
    for (const auto& r : v)
        for (const auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    return l;
}

// Basis (rows) of the rank-2 lattice generated by the given rational vectors.
Mat2 lattice_basis(const std::vector<std::array<Rat, 2>>& gens) {
    const Int D = lcm_den(gens);
    std::vector<std::array<Int, 2>> v;
    for (const auto& g : gens) {
        Rat x = g[0] * D, y = g[1] * D;
        x.canonicalize();
        y.canonicalize();
        v.push_back({x.get_num(), y.get_num()});
    }
    // Euclid on the first coordinate
    for (;;) {
        size_t piv = v.size();
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i][0] != 0 && (piv == v.size() || abs(v[i][0]) < abs(v[piv][0]))) piv = i;
        if (piv == v.size()) fail(ErrorKind::BadMatrix, "lattice is degenerate");
        bool done = true;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i == piv || v[i][0] == 0) continue;
            Int qq = v[i][0] / v[piv][0];
            v[i][0] -= qq * v[piv][0];
            v[i][1] -= qq * v[piv][1];
            if (v[i][0] != 0) done = false;
        }
        if (done) {
            Int h = 0;
            for (size_t i = 0; i < v.size(); ++i)
                if (i != piv) mpz_gcd(h.get_mpz_t(), h.get_mpz_t(), v[i][1].get_mpz_t());
            if (h == 0) fail(ErrorKind::BadMatrix, "lattice is degenerate");
            Rat dd(D);
            return mat2(Rat(v[piv][0]) / dd, Rat(v[piv][1]) / dd, Rat(0), Rat(h) / dd);
        }
    }
}

Eigen::MatrixXcd columns_matrix(const std::vector<StateVec>& cols, long rows) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, static_cast<long>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
        for (long r = 0; r < rows; ++r) {
            const Scalar& s = cols[c].amps[static_cast<size_t>(r)];
            if (!s.is_zero()) m(r, static_cast<long>(c)) = s.to_complex();
        }
    return m;
}

Eigen::MatrixXcd word_matrix_c(const ModulePtr& M, const GenWord& w) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(M->N, M->N);
    for (long j = 0; j < M->N; ++j) {
        StateVec y = apply_word(w, basis_vector(M, j));
        for (long i = 0; i < M->N; ++i)
            if (!y.amps[i].is_zero()) m(i, j) = y.amps[i].to_complex();
    }
    return m;
}

bool all_exact(const std::vector<StateVec>& vs) {
    for (const auto& v : vs)
        for (const auto& a : v.amps)
            if (!a.is_exact()) return false;
    return true;
}

Rat real_rational(const Scalar& s) {
    Cyc c = s.canonical();
    if (!c.is_rational()) fail(ErrorKind::InvalidArgument, "expected a rational modulus");
    return c.rational_value();
}

struct Dense {
    std::vector<StateVec> dom, img;
};

Dense materialize(const RegUnitary& L) {
    require_dense(L.src->N);
    require_dense(L.dst->N);
    Dense d;
    for (long m = 0; m < L.dim; ++m) {
        d.dom.push_back(L.domain_vec(m));
        d.img.push_back(L.image_vec(m));
    }
    return d;
}

}  // namespace

RegUnitary fourier(const ModulePtr& M) {
    const WeylDesc& A = M->alg;
    const long N = M->N;
    const Rat qt = M->q_turn();
    RegUnitary L;
    L.name = "fourier";
    L.src = M;
    L.dst = build_module_roots(A, frac_part(-M->vt), M->ut);
    L.S = GenWord::U(A.a);
    L.T = GenWord::V(A.b);
    L.S2 = GenWord::V(A.b);
    L.T2 = GenWord::U(-A.a);
    L.gL = mat2(0, 1, -1, 0);
    L.dim = N;
    L.domain_sparse = [](long m) { return SparseVec{{m, Monomial{}}}; };
    L.image_amp = [N, qt](long m, long i) -> std::optional<Monomial> {
        return Monomial{Rat(1), rat(1, N), frac_part(mul_mod(qt, (__int128)m * i, N))};
    };
    finish_lazy(L);
    return L;
}

Rat gauss_constant_turn(long n, long p) {
    if (n <= 0 || p <= 0 || (n % 2 != 0 && p % 2 != 0)) fail(ErrorKind::OddOrder, "Gauss sum needs n*p even");
    // reciprocity: G_p(n) = sqrt(n/p) e^{i pi/4} sum_{k<p} e^{-pi i n k^2/p}
    cplx s = 0;
    for (long k = 0; k < p; ++k) s += unit_phase(-static_cast<std::int64_t>((__int128)n * k * k % (2 * p)), 2 * p);
    cplx c = std::sqrt(static_cast<double>(p)) * unit_phase(-1, 8) / s;
    if (std::abs(std::abs(c) - 1) > 1e-9) fail(ErrorKind::InvalidArgument, "Gauss constant is not unimodular");
    double t = std::arg(c) / (2 * M_PI) * 8;
    long k = std::lround(t);
    if (std::abs(t - static_cast<double>(k)) > 1e-6) fail(ErrorKind::InvalidArgument, "Gauss constant is not an 8th root of unity");
    return frac_part(rat(k, 8));
}

RegUnitary gaussian(const ModulePtr& M, long b, long d) {
    const WeylDesc& A = M->alg;
    const long N = M->N;
    if (b == 0 || d <= 0) fail(ErrorKind::InvalidArgument, "Gaussian parameters need b != 0 and d > 0");
    const long ab = std::labs(b);
    if (N % (ab * d) != 0)
        fail(ErrorKind::DivisibilityViolation, "b*d = " + std::to_string(ab * d) + " must divide N = " + std::to_string(N));
    const long Nc = N / (ab * d);
    if (Nc % 2 != 0) fail(ErrorKind::OddOrder, "N/(b*d) = " + std::to_string(Nc) + " must be even");
    const Rat qt = M->q_turn();
    const long p = A.q_num();
    const long sg = b > 0 ? 1 : -1;
    Rat cturn = gauss_constant_turn(Nc, p);
    if (sg < 0) cturn = frac_part(-cturn);

    RegUnitary L;
    L.name = "gaussian(" + std::to_string(b) + "," + std::to_string(d) + ")";
    L.src = M;
    L.dst = build_module_roots(A, frac_part(M->ut + M->vt * rat(b, d)), M->vt);
    L.S = GenWord::U(A.a * d);
    L.T = GenWord::V(A.b * ab);
    L.S2 = GenWord{A.a * d, A.b * (-b), frac_part(-qt * (b * d) / 2)};
    L.T2 = L.T;
    L.gL = mat2(1, rat(-b, d), 0, 1);
    L.phase_const = turn_root(cturn);
    L.dim = Nc;
    const long Nd = N / d;
    L.domain_sparse = [=](long l) {
        SparseVec v;
        for (long j = 0; j < d; ++j) v.emplace_back(floor_mod(ab * l + j * Nd, N), Monomial{Rat(1), rat(1, d), Rat(0)});
        return v;
    };
    const Rat rad = rat(1, Nc * d);
    L.image_amp = [=](long m, long idx) -> std::optional<Monomial> {
        long i = idx % Nd;
        if (i % ab != 0) return std::nullopt;
        long ell = i / ab;
        __int128 x = (__int128)(ell - m) * (ell - m);
        long r = static_cast<long>(x % (2 * Nc));
        // q_check^{x/2} = e^{pi i p x / Nc}
        Rat t = frac_part(cturn + rat(sg * p * (r % (2 * Nc)), 2 * Nc));
        return Monomial{Rat(1), rad, t};
    };
    finish_lazy(L);
    return L;
}

RegUnitary diagonal(const ModulePtr& M, long m) {
    const WeylDesc& A = M->alg;
    const long N = M->N;
    if (m <= 0 || N % m != 0) fail(ErrorKind::NotDividing, std::to_string(m) + " does not divide N = " + std::to_string(N));
    RegUnitary L;
    L.name = "diagonal(" + std::to_string(m) + ")";
    L.src = M;
    L.dst = build_module_roots(A, M->ut / m, M->vt * m);
    L.S = GenWord::U(A.a);
    L.T = GenWord::V(A.b * m);
    L.S2 = GenWord::U(A.a * m);
    L.T2 = GenWord::V(A.b);
    L.gL = mat2(m, 0, 0, rat(1, m));
    const long n = N / m;
    L.dim = n;
    L.domain_sparse = [m](long k) { return SparseVec{{m * k, Monomial{}}}; };
    L.image_amp = [m, n](long k, long idx) -> std::optional<Monomial> {
        if (idx % n != k) return std::nullopt;
        return Monomial{Rat(1), rat(1, m), Rat(0)};
    };
    finish_lazy(L);
    return L;
}

RegUnitary free_evolution(const ModulePtr& M, const Rat& t) {
    if (sgn(t) == 0) fail(ErrorKind::InvalidArgument, "free evolution needs t != 0");
    Rat tt = t;
    tt.canonicalize();
    const long b = to_long(tt.get_num()), d = to_long(tt.get_den());
    const long N = M->N;
    const long bd = std::labs(b) * d;
    if (N % bd != 0 || (N / bd) % 2 != 0)
        fail(ErrorKind::DivisibilityViolation,
             "free evolution at t = " + tt.get_str() + " needs 2*b*d = " + std::to_string(2 * bd) + " to divide N = " + std::to_string(N));
    RegUnitary L = gaussian(M, b, d);
    L.name = "free(" + tt.get_str() + ")";
    return L;
}

RegUnitary qho_evolution(const ModulePtr& M, long e, long f, long c, std::optional<Rat> c0_turn) {
    const WeylDesc& A = M->alg;
    const long N = M->N;
    if (e <= 0 || c <= 0 || f == 0 || e * e + f * f != c * c)
        fail(ErrorKind::NotPythagorean, "(" + std::to_string(e) + "," + std::to_string(f) + "," + std::to_string(c) +
                                            ") is not a Pythagorean triple with e, c > 0 and f != 0");
    if (N % (2 * c * c * e) != 0)
        fail(ErrorKind::DivisibilityViolation, "2*c^2*e = " + std::to_string(2 * c * c * e) + " must divide N = " + std::to_string(N));
    if ((__int128)f * N % (2 * e) != 0)
        fail(ErrorKind::DivisibilityViolation, "2*e = " + std::to_string(2 * e) + " must divide f*N");
    if (sgn(M->ut) != 0 || sgn(M->vt) != 0) fail(ErrorKind::InvalidArgument, "harmonic evolution is defined on the principal module");
    const Rat qt = M->q_turn();
    const Rat c0 = frac_part(c0_turn.value_or(rat(-1, 8)));

    RegUnitary L;
    L.name = "qho(" + std::to_string(e) + "," + std::to_string(f) + "," + std::to_string(c) + ")";
    L.src = M;
    L.dst = M;
    L.S = GenWord::U(A.a * c);
    L.T = GenWord::V(A.b * (c * e));
    L.S2 = GenWord{A.a * f, A.b * (-e), frac_part(-qt * (e * f) / 2)};
    L.T2 = GenWord{A.a * (e * e), A.b * (f * e), frac_part(qt * (e * e * e * f) / 2)};
    L.gL = mat2(rat(f, c), rat(-e, c), rat(e, c), rat(f, c));
    L.phase_const = turn_root(c0);
    L.dim = N / (c * c * e);
    const long Nc = N / c, Ne = N / e;
    L.domain_sparse = [=](long m) {
        SparseVec v;
        for (long j = 0; j < c; ++j) v.emplace_back(floor_mod(c * e * m + j * Nc, N), Monomial{Rat(1), rat(1, c), Rat(0)});
        return v;
    };
    const Rat rad = rat(e, N);
    L.image_amp = [=](long m, long idx) -> std::optional<Monomial> {
        if (idx % e != 0) return std::nullopt;
        const long l = floor_mod(idx / e - static_cast<long>((__int128)m * f % Ne), Ne);
        const __int128 ee = e;
        __int128 x = ee * f * ((__int128)l * l - ee * ee * m * m) - 2 * ee * ee * ee * m * l;
        return Monomial{Rat(1), rad, frac_part(c0 + mul_mod(qt, x, 2 * (__int128)N) / 2)};
    };
    // same amplitude in double: turn = c0 + p x / (2N) over the common denominator lcm(8, 2N)
    const long p = A.q_num();
    const std::int64_t D = std::lcm<std::int64_t>(to_long(c0.get_den()), 2 * N);
    const std::int64_t c0n = to_long(c0.get_num()) * (D / to_long(c0.get_den()));
    const double modulus = std::sqrt(static_cast<double>(e) / static_cast<double>(N));
    L.image_amp_f = [=](long m, long idx) -> std::optional<cplx> {
        if (idx % e != 0) return std::nullopt;
        const long l = floor_mod(idx / e - static_cast<long>((__int128)m * f % Ne), Ne);
        const __int128 ee = e;
        __int128 x = ee * f * ((__int128)l * l - ee * ee * m * m) - 2 * ee * ee * ee * m * l;
        __int128 num = (__int128)c0n + (__int128)p * (((x % (2 * N)) + 2 * N) % (2 * N)) * (D / (2 * N));
        return modulus * unit_phase(static_cast<std::int64_t>(num % D), D);
    };
    finish_lazy(L);
    return L;
}

GenWord sigma_apply(const RegUnitary& L, const GenWord& w) {
    auto [y1, y2] = basis_coords(L.S, L.T, w);
    GenWord w0 = power(L.S, y1) * power(L.T, y2);
    GenWord img = power(L.S2, y1) * power(L.T2, y2);
    return img.with_turn(w.turn - w0.turn);
}

Eigen::MatrixXcd domain_matrix(const RegUnitary& L) {
    require_dense(L.src->N);
    std::vector<StateVec> cols;
    for (long m = 0; m < L.dim; ++m) cols.push_back(L.domain_vec(m));
    return columns_matrix(cols, L.src->N);
}

Eigen::MatrixXcd image_matrix(const RegUnitary& L) {
    require_dense(L.dst->N);
    std::vector<StateVec> cols;
    for (long m = 0; m < L.dim; ++m) cols.push_back(L.image_vec(m));
    return columns_matrix(cols, L.dst->N);
}

Eigen::MatrixXcd operator_matrix(const RegUnitary& L) { return image_matrix(L) * domain_matrix(L).adjoint(); }

RegUnitary compose(const RegUnitary& L2, const RegUnitary& L1) {
    if (!same_module(*L1.dst, *L2.src))
        fail(ErrorKind::ModuleMismatch, "range of " + L1.name + " and domain of " + L2.name + " are different modules");
    const Eigen::MatrixXcd D1 = domain_matrix(L1), I1 = image_matrix(L1);
    const Eigen::MatrixXcd D2 = domain_matrix(L2), I2 = image_matrix(L2);
    const Eigen::MatrixXcd K = I1 - D2 * (D2.adjoint() * I1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K.adjoint() * K);
    std::vector<long> keep;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < 1e-10) keep.push_back(i);
    if (keep.empty()) fail(ErrorKind::NoCommonSubalgebra, L1.name + " and " + L2.name + " share no common domain");
    Eigen::MatrixXcd alpha(D1.cols(), static_cast<long>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) alpha.col(static_cast<long>(j)) = es.eigenvectors().col(keep[j]);
    const Eigen::MatrixXcd Dc = D1 * alpha;
    const Eigen::MatrixXcd Ic = I2 * (D2.adjoint() * (I1 * alpha));

    auto to_vecs = [](const ModulePtr& M, const Eigen::MatrixXcd& X) {
        auto out = std::make_shared<std::vector<StateVec>>();
        for (long c = 0; c < X.cols(); ++c) {
            StateVec v = zero_vec(M);
            for (long r = 0; r < X.rows(); ++r)
                if (std::abs(X(r, c)) > 1e-14) v.amps[static_cast<size_t>(r)] = Scalar::from_complex(X(r, c));
            out->push_back(std::move(v));
        }
        return out;
    };

    RegUnitary L;
    L.name = L2.name + "*" + L1.name;
    L.src = L1.src;
    L.dst = L2.dst;
    L.gL = L1.gL * L2.gL;
    L.phase_const = L1.phase_const * L2.phase_const;
    L.dim = static_cast<long>(keep.size());
    auto dv = to_vecs(L.src, Dc);
    auto iv = to_vecs(L.dst, Ic);
    L.domain_vec = [dv](long m) { return (*dv)[static_cast<size_t>(m)]; };
    L.image_vec = [iv](long m) { return (*iv)[static_cast<size_t>(m)]; };

    // Common subalgebra: words of dom(L1) that sigma_1 sends into dom(L2).
    const Mat2 B1p = mat2(L1.S2.u, L1.S2.v, L1.T2.u, L1.T2.v);
    const Mat2 B2 = mat2(L2.S.u, L2.S.v, L2.T.u, L2.T.v);
    const Mat2 Mr = B1p * inverse(B2);
    std::vector<std::array<Rat, 2>> gens{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Mr[0][0], Mr[1][0]}, {Mr[0][1], Mr[1][1]}};
    const Mat2 G = lattice_basis(gens);
    const Mat2 Gi = inverse(G);
    // dual basis rows = columns of G^{-1}
    std::array<std::array<long, 2>, 2> z{};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) z[r][c] = to_long(Gi[c][r]);
    auto word_of = [&](int r) { return power(L1.S, z[r][0]) * power(L1.T, z[r][1]); };
    L.S = word_of(0);
    L.T = word_of(1);
    L.S2 = sigma_apply(L2, sigma_apply(L1, L.S));
    L.T2 = sigma_apply(L2, sigma_apply(L1, L.T));
    return L;
}

RegUnitary inverse(const RegUnitary& L) {
    RegUnitary R;
    R.name = "inverse(" + L.name + ")";
    R.src = L.dst;
    R.dst = L.src;
    R.S = L.S2;
    R.T = L.T2;
    R.S2 = L.S;
    R.T2 = L.T;
    R.gL = inverse(L.gL);
    R.phase_const = L.phase_const.conj();
    R.dim = L.dim;
    R.domain_vec = L.image_vec;
    R.image_amp_f = nullptr;
    R.image_vec = L.domain_vec;
    if (L.domain_sparse) {
        auto ds = L.domain_sparse;
        R.image_amp = [ds](long m, long idx) -> std::optional<Monomial> {
            for (const auto& [i, a] : ds(m))
                if (i == idx) return a;
            return std::nullopt;
        };
    }
    return R;
}

std::vector<Intertwining> sigma_identities(const RegUnitary& L) {
    return {{"sigma(" + L.S.str() + ") = " + L.S2.str(), L.S, L.S2}, {"sigma(" + L.T.str() + ") = " + L.T2.str(), L.T, L.T2}};
}

std::vector<ConjugationReport> verify_conjugation(const RegUnitary& L, const std::vector<Intertwining>& ids, double tol) {
    Dense d = materialize(L);
    std::vector<ConjugationReport> out;
    const bool exact = all_exact(d.dom) && all_exact(d.img);

    // owner[i] = domain vector whose support contains index i, when supports are disjoint
    std::vector<long> owner(static_cast<size_t>(L.src->N), -1);
    bool disjoint = exact;
    for (long m = 0; m < L.dim && disjoint; ++m)
        for (long i = 0; i < L.src->N; ++i)
            if (!d.dom[m].amps[i].is_zero()) {
                if (owner[i] >= 0) {
                    disjoint = false;
                    break;
                }
                owner[i] = m;
            }

    if (disjoint) {
        for (const auto& id : ids) {
            ConjugationReport rep{id.name, true, 0.0, true};
            for (long m = 0; m < L.dim && rep.holds; ++m) {
                StateVec y = apply_word(id.X, d.dom[m]);
                long i0 = 0;
                while (i0 < y.dim() && y.amps[i0].is_zero()) ++i0;
                long j = i0 < y.dim() ? owner[i0] : -1;
                if (j < 0) {
                    rep.holds = false;
                    rep.residual = 1;
                    break;
                }
                const Scalar& a = d.dom[j].amps[i0];
                Scalar c = y.amps[i0] * a.conj() * Scalar(Rat(1) / real_rational(a * a.conj()));
                if (y != d.dom[j].scaled(c)) {
                    rep.holds = false;
                    rep.residual = max_abs_diff(y, d.dom[j].scaled(c));
                    break;
                }
                StateVec lhs = d.img[j].scaled(c);
                StateVec rhs = apply_word(id.Y, d.img[m]);
                if (lhs != rhs) {
                    rep.holds = false;
                    rep.residual = std::max(rep.residual, max_abs_diff(lhs, rhs));
                }
            }
            out.push_back(rep);
        }
        return out;
    }

    const Eigen::MatrixXcd D = columns_matrix(d.dom, L.src->N);
    const Eigen::MatrixXcd I = columns_matrix(d.img, L.dst->N);
    for (const auto& id : ids) {
        Eigen::MatrixXcd XD = word_matrix_c(L.src, id.X) * D;
        Eigen::MatrixXcd C = D.adjoint() * XD;
        double r1 = (XD - D * C).cwiseAbs().maxCoeff();
        double r2 = (I * C - word_matrix_c(L.dst, id.Y) * I).cwiseAbs().maxCoeff();
        double r = std::max(r1, r2);
        out.push_back({id.name, r <= tol, r, false});
    }
    return out;
}

ConjugationReport verify_isometry(const RegUnitary& L, double tol) {
    Dense d = materialize(L);
    if (all_exact(d.img) && L.dim * L.dim * L.dst->N <= 4'000'000) {
        ConjugationReport rep{"isometry", true, 0.0, true};
        for (long i = 0; i < L.dim; ++i)
            for (long j = i; j < L.dim; ++j) {
                Scalar ip = inner(d.img[i], d.img[j]);
                Scalar want(i == j ? 1L : 0L);
                if (ip != want) {
                    rep.holds = false;
                    rep.residual = std::max(rep.residual, std::abs(ip.to_complex() - want.to_complex()));
                }
            }
        return rep;
    }
    const Eigen::MatrixXcd I = columns_matrix(d.img, L.dst->N);
    double r = (I.adjoint() * I - Eigen::MatrixXcd::Identity(L.dim, L.dim)).cwiseAbs().maxCoeff();
    return {"isometry", r <= tol, r, false};
}

cplx kernel_value(const RegUnitary& L, long n, long m) {
    if (!L.lazy()) fail(ErrorKind::InvalidArgument, L.name + " has no sparse form");
    if (!same_module(*L.src, *L.dst)) fail(ErrorKind::ModuleMismatch, "kernel needs domain and range in one module");
    cplx s = 0;
    for (const auto& [idx, a] : L.domain_sparse(n)) {
        if (L.image_amp_f) {
            if (auto b = L.image_amp_f(m, idx)) s += std::conj(a.value()) * *b;
        } else if (auto b = L.image_amp(m, idx)) {
            s += std::conj(a.value()) * b->value();
        }
    }
    return s;
}

Scalar kernel_exact(const RegUnitary& L, long n, long m) {
    if (!L.lazy()) fail(ErrorKind::InvalidArgument, L.name + " has no sparse form");
    if (!same_module(*L.src, *L.dst)) fail(ErrorKind::ModuleMismatch, "kernel needs domain and range in one module");
    Scalar s;
    for (const auto& [idx, a] : L.domain_sparse(n))
        if (auto b = L.image_amp(m, idx)) s += (a.conj() * *b).exact();
    return s;
}

Mat2 realized_matrix(const RegUnitary& L) {
    auto c1 = coords(L.S, L.src->alg), c2 = coords(L.T, L.src->alg);
    auto d1 = coords(L.S2, L.dst->alg), d2 = coords(L.T2, L.dst->alg);
    Mat2 R = mat2(c1[0], c1[1], c2[0], c2[1]);
    Mat2 Rp = mat2(d1[0], d1[1], d2[0], d2[1]);
    return inverse(R) * Rp;
}

std::vector<Scalar> gaussian_regularity_phases(const WeylDesc& A, long b, long d, long n) {
    const ModulePtr M0 = build_module(A);
    const Rat qt = M0->q_turn();
    const long s = d * n;
    const ModulePtr M1 = build_module_roots(A, Rat(0), frac_part(qt * s));
    RegUnitary G0 = gaussian(M0, b, d), G1 = gaussian(M1, b, d);
    const long N = M0->N;
    const long j = b * n;
    auto iota = [&](const StateVec& x, const ModulePtr& to, long shift) {
        StateVec y = zero_vec(to);
        for (long k = 0; k < N; ++k)
            if (!x.amps[k].is_zero())
                y.amps[floor_mod(k + shift, N)] = x.amps[k] * turn_root(frac_part(qt * static_cast<long>((__int128)k * s % N)));
        return y;
    };
    std::vector<Scalar> out;
    for (long m = 0; m < G0.dim; ++m) {
        StateVec a = G0.image_vec(m);
        StateVec x0 = iota(G1.domain_vec(m), M0, 0);
        // iota(w1_m) = c w0_m
        Scalar c = inner(G0.domain_vec(m), x0);
        StateVec lhs = a.scaled(c);
        StateVec rhs = iota(G1.image_vec(m), G0.dst, j);
        Scalar z = inner(lhs, rhs);
        if (rhs != lhs.scaled(z)) fail(ErrorKind::InvalidArgument, "Gaussian images are not proportional");
        out.push_back(Scalar(z.canonical()));
    }
    return out;
}

namespace {

using CVec = std::vector<cplx>;

cplx amp_f(const RegUnitary& L, long m, long idx) {
    if (L.image_amp_f) {
        auto a = L.image_amp_f(m, idx);
        return a ? *a : cplx(0);
    }
    auto a = L.image_amp(m, idx);
    return a ? a->value() : cplx(0);
}

// Coefficients of x on the domain basis, the leftover norm, and L applied to the projection.
CVec apply_lazy(const RegUnitary& L, const CVec& x, double& outside) {
    const long N = L.dst->N;
    CVec proj(x.size(), 0), y(static_cast<size_t>(N), 0);
    for (long n = 0; n < L.dim; ++n) {
        auto dom = L.domain_sparse(n);
        cplx a = 0;
        for (const auto& [idx, w] : dom) a += std::conj(w.value()) * x[idx];
        if (std::abs(a) < 1e-14) continue;
        for (const auto& [idx, w] : dom) proj[idx] += a * w.value();
        for (long i = 0; i < N; ++i) {
            cplx b = amp_f(L, n, i);
            if (b != cplx(0)) y[i] += a * b;
        }
    }
    double r = 0;
    for (size_t i = 0; i < x.size(); ++i) r += std::norm(x[i] - proj[i]);
    outside = std::sqrt(r);
    return y;
}

}  // namespace

SemigroupReport qho_semigroup(const ModulePtr& M, long e1, long f1, long c1, long e2, long f2, long c2, long max_vectors) {
    long e = e1 * f2 + f1 * e2, f = f1 * f2 - e1 * e2, c = c1 * c2;
    const long g = std::gcd(std::gcd(std::labs(e), std::labs(f)), c);
    e /= g;
    f /= g;
    c /= g;
    if (e <= 0 || f == 0) fail(ErrorKind::InvalidArgument, "sum of the two times has sin <= 0 or cos = 0");
    RegUnitary K1 = qho_evolution(M, e1, f1, c1), K2 = qho_evolution(M, e2, f2, c2), K = qho_evolution(M, e, f, c);
    SemigroupReport rep;
    rep.e = e;
    rep.f = f;
    rep.c = c;
    const long N = M->N;
    std::vector<cplx> ratios;
    for (long m = 0; m < std::min(K.dim, max_vectors); ++m) {
        CVec x(static_cast<size_t>(N), 0);
        for (const auto& [idx, w] : K.domain_sparse(m)) x[idx] += w.value();
        double out1 = 0, out2 = 0;
        CVec y = apply_lazy(K1, x, out1);
        CVec z = apply_lazy(K2, y, out2);
        CVec w(static_cast<size_t>(N), 0);
        for (long i = 0; i < N; ++i) w[i] = amp_f(K, m, i);
        cplx ip = 0;
        for (long i = 0; i < N; ++i) ip += std::conj(w[i]) * z[i];
        double mis = 0;
        for (long i = 0; i < N; ++i) mis = std::max(mis, std::abs(z[i] - ip * w[i]));
        rep.domain_residual = std::max({rep.domain_residual, out1, out2});
        rep.mismatch = std::max(rep.mismatch, mis);
        ratios.push_back(ip);
        ++rep.checked;
    }
    if (!ratios.empty()) {
        rep.phase_ratio = ratios[0];
        for (const auto& r : ratios) rep.phase_spread = std::max(rep.phase_spread, std::abs(r - ratios[0]));
    }
    return rep;
}

}  // namespace finqm
