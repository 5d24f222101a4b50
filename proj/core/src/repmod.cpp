#include "finqm/repmod.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "finqm/errors.hpp"

namespace finqm {

std::string ModuleRep::str() const {
    return "V_A(" + alg.str() + ")[u=e(" + ut.get_str() + "),v=e(" + vt.get_str() + ")]";
}

bool same_module(const ModuleRep& x, const ModuleRep& y) {
    return x.alg == y.alg && frac_part(x.ut) == frac_part(y.ut) && frac_part(x.vt) == frac_part(y.vt);
}

ModulePtr build_module_roots(const WeylDesc& A, const Rat& ut, const Rat& vt) {
    auto m = std::make_shared<ModuleRep>(ModuleRep{A, SpecPoint(ut * A.N(), vt * A.N()), frac_part(ut), frac_part(vt), A.N()});
    return m;
}

ModulePtr build_module(const WeylDesc& A, const SpecPoint& alpha) {
    const long N = A.N();
    return build_module_roots(A, alpha.tu / N, alpha.tv / N);
}

namespace {
void require_same(const StateVec& x, const StateVec& y) {
    if (!x.mod || !y.mod || !same_module(*x.mod, *y.mod))
        fail(ErrorKind::ModuleMismatch, "vectors live in different modules");
}
}  // namespace

StateVec StateVec::scaled(const Scalar& s) const {
    StateVec out{mod, amps};
    for (auto& a : out.amps)
        if (!a.is_zero()) a *= s;
    return out;
}

StateVec StateVec::to_float() const {
    StateVec out{mod, {}};
    out.amps.reserve(amps.size());
    for (const auto& a : amps) out.amps.push_back(Scalar::from_complex(a.to_complex()));
    return out;
}

StateVec zero_vec(const ModulePtr& M) { return {M, std::vector<Scalar>(static_cast<size_t>(M->N))}; }

StateVec basis_vector(const ModulePtr& M, long k) {
    StateVec x = zero_vec(M);
    x.amps[static_cast<size_t>(floor_mod(k, M->N))] = Scalar(1);
    return x;
}

StateVec operator+(const StateVec& x, const StateVec& y) {
    require_same(x, y);
    StateVec out = x;
    for (size_t i = 0; i < out.amps.size(); ++i)
        if (!y.amps[i].is_zero()) out.amps[i] += y.amps[i];
    return out;
}

StateVec operator-(const StateVec& x, const StateVec& y) {
    require_same(x, y);
    StateVec out = x;
    for (size_t i = 0; i < out.amps.size(); ++i)
        if (!y.amps[i].is_zero()) out.amps[i] -= y.amps[i];
    return out;
}

bool operator==(const StateVec& x, const StateVec& y) {
    require_same(x, y);
    for (size_t i = 0; i < x.amps.size(); ++i)
        if (x.amps[i] != y.amps[i]) return false;
    return true;
}

double max_abs_diff(const StateVec& x, const StateVec& y) {
    require_same(x, y);
    double m = 0;
    for (size_t i = 0; i < x.amps.size(); ++i) m = std::max(m, std::abs(x.amps[i].to_complex() - y.amps[i].to_complex()));
    return m;
}

std::vector<StateVec> u_basis(const ModulePtr& M) {
    std::vector<StateVec> out;
    for (long k = 0; k < M->N; ++k) out.push_back(basis_vector(M, k));
    return out;
}

StateVec v_vector(const ModulePtr& M, long m) {
    const long N = M->N;
    StateVec x = zero_vec(M);
    const Rat qt = M->q_turn();
    const Rat scale = Rat(1, 1);
    for (long k = 0; k < N; ++k) {
        Rat t = frac_part(qt * static_cast<long>((__int128)floor_mod(m, N) * k % N));
        x.amps[k] = Scalar::exact(scale, rat(1, N), Cyc::zeta(to_long(t.get_den()), to_long(t.get_num())));
    }
    return x;
}

std::vector<StateVec> v_basis(const ModulePtr& M) {
    std::vector<StateVec> out;
    for (long m = 0; m < M->N; ++m) out.push_back(v_vector(M, m));
    return out;
}

Scalar inner(const StateVec& x, const StateVec& y) {
    require_same(x, y);
    Scalar s;
    for (size_t i = 0; i < x.amps.size(); ++i) {
        if (x.amps[i].is_zero() || y.amps[i].is_zero()) continue;
        s += x.amps[i].conj() * y.amps[i];
    }
    return s;
}

Scalar norm2(const StateVec& x) { return inner(x, x); }

namespace {

struct WordAction {
    long k = 0, l = 0;
    Rat base;  // turn independent of the index
    Rat qt;
    long N = 1;
    // W e_j = e(base + k (j - l) qt) e_{j-l}
    Rat turn_at(long j) const { return frac_part(base + qt * static_cast<long>((__int128)k * floor_mod(j - l, N) % N)); }
    long target(long j) const { return floor_mod(j - l, N); }
};

WordAction word_action(const ModulePtr& M, const GenWord& w) {
    auto [k, l] = coords(w, M->alg);
    WordAction a;
    a.k = k;
    a.l = l;
    a.N = M->N;
    a.qt = M->q_turn();
    a.base = frac_part(w.turn + M->ut * k + M->vt * l);
    return a;
}

Scalar times_turn(const Scalar& s, const Rat& t) {
    Rat f = frac_part(t);
    if (sgn(f) == 0) return s;
    return s.mul_root(to_long(f.get_den()), to_long(f.get_num()));
}

}  // namespace

StateVec apply_word(const GenWord& w, const StateVec& x) {
    const auto act = word_action(x.mod, w);
    StateVec out = zero_vec(x.mod);
    for (long j = 0; j < x.dim(); ++j) {
        const Scalar& a = x.amps[j];
        if (a.is_zero()) continue;
        out.amps[act.target(j)] = times_turn(a, act.turn_at(j));
    }
    return out;
}

Rat central_turn(const ModulePtr& M, const GenWord& w) {
    auto [k, l] = coords(w, M->alg);
    if (k % M->N != 0 || l % M->N != 0) fail(ErrorKind::InvalidArgument, w.str() + " does not act as a scalar");
    return frac_part(w.turn + M->ut * k + M->vt * l);
}

SBasis s_basis(const ModulePtr& M, const GenWord& S, const GenWord& T, long first_seed) {
    const WeylDesc& A = M->alg;
    if (!in_algebra(S, A) || !in_algebra(T, A)) fail(ErrorKind::NotInAlgebra, "S or T outside A(" + A.str() + ")");
    if (commutator_turn(S, T) != frac_part(A.ab()))
        fail(ErrorKind::NotGenerating, "T*S != q*S*T for S=" + S.str() + ", T=" + T.str());
    const long N = M->N;
    SBasis out;
    out.s_turn = frac_part(central_turn(M, power(S, N))) / N;
    out.t_turn = frac_part(central_turn(M, power(T, N))) / N;
    const auto sa = word_action(M, S);

    StateVec p;
    Scalar n2;
    bool found = false;
    for (long attempt = 0; attempt < N && !found; ++attempt) {
        const long seed = floor_mod(first_seed + attempt, N);
        std::map<long, Scalar> acc;
        long idx = seed;
        Rat tau(0);
        for (long k = 0; k < N; ++k) {
            acc[idx] += turn_root(tau - out.s_turn * k);
            tau = frac_part(tau + sa.turn_at(idx));
            idx = sa.target(idx);
        }
        p = zero_vec(M);
        for (auto& [i, s] : acc) p.amps[i] = s;
        n2 = norm2(p);
        if (!n2.is_zero()) {
            found = true;
            out.seed = seed;
        }
    }
    if (!found) fail(ErrorKind::InvalidArgument, "no S-eigenvector found");
    Cyc n2c = n2.canonical();
    if (!n2c.is_rational()) fail(ErrorKind::InvalidArgument, "projected norm is not rational");
    size_t first = 0;
    while (p.amps[first].is_zero()) ++first;
    const Scalar& a = p.amps[first];
    Cyc aa = (a * a.conj()).canonical();
    if (!aa.is_rational()) fail(ErrorKind::InvalidArgument, "leading amplitude has irrational modulus");
    Scalar fix = a.conj() * sqrt_rat(Rat(1) / (aa.rational_value() * n2c.rational_value()));
    p = p.scaled(fix);

    out.vecs.assign(static_cast<size_t>(N), StateVec{});
    out.vecs[0] = p;
    const Rat tinv = frac_part(-out.t_turn);
    for (long k = N - 1; k >= 1; --k) {
        StateVec y = apply_word(T, out.vecs[(k + 1) % N]);
        for (auto& amp : y.amps)
            if (!amp.is_zero()) amp = times_turn(amp, tinv);
        out.vecs[k] = std::move(y);
    }

    if (sgn(S.v) == 0 && S.u == A.a && N <= 256) {
        // twobases(iii) style exponent, recorded rather than assumed
        std::vector<std::pair<long, Scalar>> lead;
        for (const auto& v : out.vecs) {
            long j = 0;
            while (j < N && v.amps[j].is_zero()) ++j;
            lead.emplace_back(j, v.amps[j]);
        }
        const Rat qt = M->q_turn();
        for (long n = 0; n < N && !out.quadratic_n; ++n) {
            bool ok = true;
            for (long k = 0; k < N && ok; ++k) {
                if (lead[k].first != floor_mod(lead[0].first + k, N)) ok = false;
                else if (lead[k].second != times_turn(lead[0].second, -qt * (n * (k * (k + 1) / 2 % N))))
                    ok = false;
            }
            if (ok) out.quadratic_n = n;
        }
    }
    return out;
}

Matrix Matrix::identity(long n) {
    Matrix m(n, n);
    for (long i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Matrix Matrix::from_columns(const std::vector<StateVec>& cols) {
    if (cols.empty()) return {};
    Matrix m(cols[0].dim(), static_cast<long>(cols.size()));
    for (long c = 0; c < m.cols; ++c)
        for (long r = 0; r < m.rows; ++r) m(r, c) = cols[c].amps[r];
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols, rows);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(c, r) = (*this)(r, c).conj();
    return m;
}

StateVec Matrix::column(const ModulePtr& M, long c) const {
    StateVec x = zero_vec(M);
    if (M->N != rows) fail(ErrorKind::ModuleMismatch, "matrix height differs from module dimension");
    for (long r = 0; r < rows; ++r) x.amps[r] = (*this)(r, c);
    return x;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) fail(ErrorKind::InvalidArgument, "matrix shapes do not match");
    Matrix m(x.rows, y.cols);
    for (long i = 0; i < x.rows; ++i)
        for (long k = 0; k < x.cols; ++k) {
            const Scalar& a = x(i, k);
            if (a.is_zero()) continue;
            for (long j = 0; j < y.cols; ++j) {
                const Scalar& b = y(k, j);
                if (b.is_zero()) continue;
                m(i, j) += a * b;
            }
        }
    return m;
}

bool operator==(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) return false;
    for (size_t i = 0; i < x.a.size(); ++i)
        if (x.a[i] != y.a[i]) return false;
    return true;
}

Matrix word_matrix(const ModulePtr& M, const GenWord& w) {
    std::vector<StateVec> cols;
    for (long j = 0; j < M->N; ++j) cols.push_back(apply_word(w, basis_vector(M, j)));
    return Matrix::from_columns(cols);
}

Matrix gamma_generator(const ModulePtr& M, GammaGen which) {
    const long N = M->N;
    Matrix m(N, N);
    const Rat qt = M->q_turn();
    for (long j = 0; j < N; ++j) {
        if (which == GammaGen::Mu)
            m(floor_mod(j - 1, N), j) = Scalar(1);
        else
            m(j, j) = times_turn(Scalar(1), -qt * j);
    }
    return m;
}

}  // namespace finqm
