#include "finqm/morphism.hpp"

#include "finqm/errors.hpp"

namespace finqm {

namespace {

struct Layout {
    long k = 1, l = 1;  // B = A(k a, l b)
    long N = 1, NB = 1, P = 1;
    Rat qt, qbt;
};

Layout layout(const ModulePtr& M, const WeylDesc& B) {
    const WeylDesc& A = M->alg;
    if (!includes(B, A)) fail(ErrorKind::NotIncluded, "A(" + B.str() + ") is not contained in A(" + A.str() + ")");
    Layout L;
    L.k = to_long(Rat(B.a / A.a));
    L.l = to_long(Rat(B.b / A.b));
    L.N = M->N;
    if (L.N % (L.k * L.l) != 0)
        fail(ErrorKind::DivisibilityViolation, "k*l = " + std::to_string(L.k * L.l) + " must divide N = " + std::to_string(L.N));
    L.NB = L.N / (L.k * L.l);
    L.P = L.N / L.k;
    L.qt = M->q_turn();
    L.qbt = frac_part(B.ab());
    return L;
}

Rat sub_ut(const ModulePtr& M, const Layout& L, long r) { return frac_part(M->ut * L.k + L.qt * (L.k * r)); }
Rat sub_vt(const ModulePtr& M, const Layout& L, long ell) { return frac_part(M->vt * L.l + L.qt * (ell * L.l)); }

// w'_i = (1/sqrt k) sum_t q^{ell (l i + t P)} e_{r + l i + t P}
std::vector<std::pair<long, Scalar>> wvec(const Layout& L, long r, long ell, long i) {
    i = floor_mod(i, L.NB);
    std::vector<std::pair<long, Scalar>> out;
    for (long t = 0; t < L.k; ++t) {
        long pos = L.l * i + t * L.P;
        Rat turn = frac_part(L.qt * static_cast<long>((__int128)ell * pos % L.N));
        out.emplace_back(floor_mod(r + pos, L.N),
                         Scalar::exact(Rat(1), rat(1, L.k), Cyc::zeta(to_long(turn.get_den()), to_long(turn.get_num()))));
    }
    return out;
}

SpecPoint beta_of(const ModulePtr& M, const Layout& L, long r, long ell) {
    return SpecPoint(sub_ut(M, L, r) * L.NB, sub_vt(M, L, ell) * L.NB);
}

long solve_shift(const Rat& diff, const Rat& step, long n) {
    for (long j = 0; j < n; ++j)
        if (frac_part(diff - step * j) == 0) return j;
    fail(ErrorKind::BadBranch, "root choice does not lie over the summand");
}

}  // namespace

std::vector<Summand> decompose(const ModulePtr& M, const WeylDesc& B) {
    const Layout L = layout(M, B);
    std::vector<Summand> out;
    for (long r = 0; r < L.l; ++r)
        for (long ell = 0; ell < L.k; ++ell) {
            Summand s;
            s.r = r;
            s.ell = ell;
            s.index = static_cast<long>(out.size());
            s.sub = build_module_roots(B, sub_ut(M, L, r), sub_vt(M, L, ell));
            s.beta = s.sub->point;
            for (long i = 0; i < L.NB; ++i) {
                StateVec x = zero_vec(M);
                for (auto& [pos, a] : wvec(L, r, ell, i)) x.amps[pos] = a;
                s.basis.push_back(std::move(x));
            }
            out.push_back(std::move(s));
        }
    return out;
}

Embedding embed_pbeta(const ModulePtr& Msub, const ModulePtr& Mamb, long branch, long g) {
    const WeylDesc& B = Msub->alg;
    const Layout L = layout(Mamb, B);
    if (g < 0 || g >= L.NB) fail(ErrorKind::InvalidArgument, "root choice g must lie in [0, n_B)");
    long found_r = -1, found_ell = -1, idx = 0, found_idx = -1;
    for (long r = 0; r < L.l && found_r < 0; ++r)
        for (long ell = 0; ell < L.k; ++ell, ++idx)
            if (beta_of(Mamb, L, r, ell) == Msub->point) {
                found_r = r;
                found_ell = ell;
                found_idx = idx;
                break;
            }
    if (found_r < 0) fail(ErrorKind::BadBranch, "spectral point of the submodule does not lie over the ambient point");
    if (branch >= 0 && branch != found_idx)
        fail(ErrorKind::BadBranch, "branch " + std::to_string(branch) + " does not carry this spectral point");
    const long j = solve_shift(Msub->ut - sub_ut(Mamb, L, found_r), L.qbt, L.NB);
    const long s = solve_shift(Msub->vt - sub_vt(Mamb, L, found_ell), L.qbt, L.NB);

    Embedding e{B, Mamb->alg, Msub->point, found_idx, g, Msub, Mamb, {}};
    for (long i = 0; i < L.NB; ++i) {
        Rat turn = frac_part(L.qbt * (s * i) + rat(g, L.NB));
        Scalar c = turn_root(turn);
        auto col = wvec(L, found_r, found_ell, i + j);
        for (auto& [pos, a] : col) a *= c;
        e.cols.push_back(std::move(col));
    }
    return e;
}

StateVec Embedding::apply(const StateVec& x) const {
    if (!x.mod || !same_module(*x.mod, *src)) fail(ErrorKind::ModuleMismatch, "vector is not in the embedded module");
    StateVec y = zero_vec(dst);
    for (size_t i = 0; i < cols.size(); ++i) {
        const Scalar& xi = x.amps[i];
        if (xi.is_zero()) continue;
        for (const auto& [pos, a] : cols[i]) y.amps[pos] += xi * a;
    }
    return y;
}

Matrix Embedding::matrix() const {
    Matrix m(dst->N, static_cast<long>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i)
        for (const auto& [pos, a] : cols[i]) m(pos, static_cast<long>(i)) = a;
    return m;
}

PairingResult pairing(const StateVec& e, const StateVec& f) {
    const WeylDesc& B = e.mod->alg;
    const WeylDesc& D = f.mod->alg;
    const WeylDesc A = join(B, D);
    SpecPoint a1 = spectrum_project(B, A, e.mod->point);
    SpecPoint a2 = spectrum_project(D, A, f.mod->point);
    if (a1 != a2) return {Scalar(), false};
    ModulePtr MA = build_module(A, a1);
    StateVec pe = embed_pbeta(e.mod, MA).apply(e);
    StateVec pf = embed_pbeta(f.mod, MA).apply(f);
    Scalar s = inner(pe, pf);
    Scalar v = s * s.conj();
    if (v.is_exact()) v = Scalar(v.canonical());
    return {v, true};
}

Scalar pairing_row_sum(const std::vector<StateVec>& basis, const StateVec& f) {
    Scalar sum;
    for (const auto& e : basis) sum += pairing(e, f).value;
    if (sum.is_exact()) sum = Scalar(sum.canonical());
    return sum;
}

}  // namespace finqm
