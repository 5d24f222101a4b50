#include "finqm/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "finqm/errors.hpp"
#include "finqm/morphism.hpp"

namespace finqm {

namespace {

constexpr double kTwoPi = 2 * M_PI;

double to_double(const Rat& r) { return r.get_d(); }

}  // namespace

ScaleParams::ScaleParams(const Rat& h_, long mu_) : h(h_), mu(mu_) {
    h.canonicalize();
    if (sgn(h) <= 0) fail(ErrorKind::InvalidArgument, "h must be positive");
    if (mu <= 0) fail(ErrorKind::InvalidArgument, "mu must be positive");
    Rat n = Rat(mu) * Rat(mu) / h;
    n.canonicalize();
    if (!is_integer(n) || n.get_num() % 2 != 0)
        fail(ErrorKind::DivisibilityViolation, "mu^2/h = " + n.get_str() + " must be an even integer (mu = " + std::to_string(mu) +
                                                   ", h = " + h.get_str() + ")");
}

long ScaleParams::N() const {
    Rat n = Rat(mu) * Rat(mu) / h;
    n.canonicalize();
    return to_long(n);
}

double ScaleParams::hbar() const { return kTwoPi * to_double(h); }
double ScaleParams::dirac_c() const { return std::sqrt(kTwoPi * hbar()); }
WeylDesc ScaleParams::algebra() const { return WeylDesc(rat(1, mu), h / mu); }
ModulePtr ScaleParams::module() const { return build_module(algebra()); }

long auto_mu(const Rat& h, const std::vector<long>& divides_N, long scale) {
    if (scale <= 0) fail(ErrorKind::InvalidArgument, "scale must be positive");
    const Int r = h.get_num(), s = h.get_den();
    for (long mu = 1; mu <= 100'000'000; ++mu) {
        Int num = Int(mu) * mu * s;
        if (num % r != 0) continue;
        Int n = num / r;
        if (n % 2 != 0) continue;
        bool ok = true;
        for (long d : divides_N)
            if (d != 0 && n % std::labs(d) != 0) {
                ok = false;
                break;
            }
        if (ok) return mu * scale;
    }
    fail(ErrorKind::OutOfRange, "no admissible mu found");
}

std::vector<long> free_divisors(const Rat& t) {
    Rat tt = t;
    tt.canonicalize();
    return {2 * std::labs(to_long(tt.get_num())) * to_long(tt.get_den())};
}

std::vector<long> qho_divisors(long e, long f, long c, bool with_trace) {
    std::vector<long> d{2 * c * c * e, 2 * e / std::gcd(2 * e, std::labs(f))};
    if (with_trace) d.push_back(4 * e * c * c * (c - f));
    return d;
}

RescaleCtx delta_k(const GenWord& r, const GenWord& s, const ScaleParams& P) {
    const WeylDesc A = P.algebra();
    const long N = P.N();
    auto [k1, l1] = coords(r, A);
    auto [k2, l2] = coords(s, A);
    RescaleCtx ctx;
    ctx.r = r;
    ctx.s = s;
    ctx.aR = std::gcd(std::labs(k1), std::labs(l1));
    ctx.aS = std::gcd(std::labs(k2), std::labs(l2));
    if (ctx.aR == 0 || ctx.aS == 0) fail(ErrorKind::InvalidArgument, "rescaling words must not be scalars");
    Rat c = commutator_turn(r, s) * N;
    c.canonicalize();
    const long bb = floor_mod(to_long(c), N);
    const double sqrtN = std::sqrt(static_cast<double>(N));
    if (bb == 0) {
        ctx.commuting = true;
        ctx.b = 0;
        ctx.delta = P.dirac_c() * std::sqrt(static_cast<double>(ctx.aR)) / sqrtN;
    } else {
        ctx.b = std::min(bb, N - bb);
        ctx.delta = static_cast<double>(ctx.b) * P.dirac_c() / (static_cast<double>(ctx.aR) * ctx.aS * sqrtN);
    }
    return ctx;
}

cplx dirac_inner(const StateVec& e, const StateVec& f, const RescaleCtx& ctx) { return inner(e, f).to_complex() / ctx.delta; }

cplx free_closed_form(double x1, double x2, double t, double hbar) {
    // (2 pi i hbar t)^{-1/2} with the principal root of i
    const double d = x1 - x2;
    return std::polar(1.0 / std::sqrt(kTwoPi * hbar * t), -M_PI / 4 + d * d / (2 * t * hbar));
}

cplx qho_closed_form(double x1, double x2, double cos_t, double sin_t, double hbar) {
    const double ph = ((x1 * x1 + x2 * x2) * cos_t - 2 * x1 * x2) / (2 * hbar * sin_t);
    return std::polar(1.0 / std::sqrt(kTwoPi * hbar * sin_t), -M_PI / 4 + ph);
}

KernelSample xp_kernel(double x, double p, const ScaleParams& P) {
    const long N = P.N();
    const double step = P.hbar() / P.mu;
    const long k = std::llround(x / step), m = std::llround(p / step);
    if (2 * std::labs(k) >= N || 2 * std::labs(m) >= N) fail(ErrorKind::OutOfRange, "point lies outside the lattice window");
    const ModulePtr M = P.module();
    const RegUnitary F = fourier(M);
    const RescaleCtx ctx = delta_k(GenWord::U(M->alg.a), GenWord::V(M->alg.b), P);
    KernelSample s;
    s.i1 = k;
    s.i2 = m;
    s.x1 = k * step;
    s.x2 = m * step;
    s.value = kernel_value(F, floor_mod(k, N), floor_mod(m, N)) / ctx.delta;
    s.closed = std::polar(1.0 / P.dirac_c(), s.x1 * s.x2 / P.hbar());
    return s;
}

KernelSample free_propagator(double x1, double x2, const Rat& t, const ScaleParams& P) {
    if (sgn(t) <= 0) fail(ErrorKind::InvalidArgument, "free propagator needs t > 0");
    Rat tt = t;
    tt.canonicalize();
    const ModulePtr M = P.module();
    const RegUnitary K = free_evolution(M, tt);
    const long b = to_long(tt.get_num());
    const double step = static_cast<double>(b) * P.hbar() / P.mu;
    const RescaleCtx ctx = delta_k(K.S, K.S2, P);
    KernelSample s;
    s.i1 = std::llround(x1 / step);
    s.i2 = std::llround(x2 / step);
    s.x1 = s.i1 * step;
    s.x2 = s.i2 * step;
    s.value = kernel_value(K, s.i1, s.i2) / ctx.delta;
    s.closed = free_closed_form(s.x1, s.x2, to_double(tt), P.hbar());
    return s;
}

KernelSample qho_propagator(double x1, double x2, long e, long f, long c, const ScaleParams& P, std::optional<Rat> c0_turn) {
    const ModulePtr M = P.module();
    const RegUnitary K = qho_evolution(M, e, f, c, c0_turn);
    const double step = static_cast<double>(c * e) * P.hbar() / P.mu;
    const RescaleCtx ctx = delta_k(K.S, K.S2, P);
    KernelSample s;
    s.i1 = std::llround(x1 / step);
    s.i2 = std::llround(x2 / step);
    s.x1 = s.i1 * step;
    s.x2 = s.i2 * step;
    s.value = kernel_value(K, s.i1, s.i2) / ctx.delta;
    s.closed = qho_closed_form(s.x1, s.x2, static_cast<double>(f) / c, static_cast<double>(e) / c, P.hbar());
    return s;
}

TraceResult qho_trace(long e, long f, long c, const ScaleParams& P) {
    const ModulePtr M = P.module();
    const RegUnitary K = qho_evolution(M, e, f, c);
    const long N = M->N;
    const long need = 4 * e * c * c * (c - f);
    if (N % need != 0)
        fail(ErrorKind::DivisibilityViolation, "trace needs 4*e*c^2*(c-f) = " + std::to_string(need) + " to divide N = " + std::to_string(N));
    TraceResult r;
    r.terms = N / (e * c * (c - f));
    for (long n = 0; n < r.terms; ++n) r.brute += kernel_value(K, n, n);
    const double half = std::sqrt(static_cast<double>(c - f) / (2.0 * c));  // |sin(t/2)|
    r.closed = cplx(0, -1.0 / half);
    return r;
}

RefinementSample refinement_check(long k, long m, long e, long f, const ScaleParams& P) {
    const ModulePtr M = P.module();
    const WeylDesc& A = M->alg;
    const WeylDesc B(A.a * e, A.b * f);
    const auto sums = decompose(M, B);
    const Summand& s0 = sums.front();
    const long nb = static_cast<long>(s0.basis.size());
    const StateVec& r = s0.basis[floor_mod(k, nb)];
    const StateVec& w = s0.basis[floor_mod(m, nb)];
    const RegUnitary F = fourier(M);
    StateVec img = zero_vec(F.dst);
    for (long j = 0; j < M->N; ++j)
        if (!w.amps[j].is_zero()) img = img + F.image_vec(j).scaled(w.amps[j]);
    const RescaleCtx ctx = delta_k(GenWord::U(A.a * e), GenWord::V(A.b * e), P);
    RefinementSample out;
    out.refined = dirac_inner(r, img, ctx);
    const double step = P.hbar() / P.mu;
    out.x = static_cast<double>(f * floor_mod(k, nb)) * step;
    out.p = static_cast<double>(f * floor_mod(m, nb)) * step;
    out.plain = xp_kernel(out.x, out.p, P).value;
    return out;
}

ExtReal st_mu(long m, const ScaleParams& P, double window) {
    const long N = P.N();
    const long r = floor_mod(m + N / 2, N) - N / 2;
    ExtReal x;
    x.value = static_cast<double>(r) / P.mu;
    if (x.value > window) x.inf = 1;
    if (x.value < -window) x.inf = -1;
    return x;
}

namespace {

long inverse_mod(long a, long n) {
    Int r;
    Int aa(floor_mod(a, n)), nn(n);
    if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), nn.get_mpz_t()) == 0) fail(ErrorKind::InvalidArgument, "not invertible");
    return to_long(r);
}

}  // namespace

std::vector<WeakRingSample> weak_ring_samples(const ScaleParams& P, long count, double window, std::uint64_t seed) {
    if (P.h.get_num() != 1)
        fail(ErrorKind::DivisibilityViolation, "weak ring relation needs 1/h to be an integer, got h = " + P.h.get_str());
    const long N = P.N();
    const long W = static_cast<long>(std::floor(window * P.mu));
    if (2 * W >= N) fail(ErrorKind::OutOfRange, "window does not fit inside [-N/2, N/2)");
    // m2 = g r2 with g | N; n2 is then determined modulo N/g, which must fit inside the window.
    std::vector<long> gs;
    for (long g : divisors(N))
        if (g <= W && N / g <= W) gs.push_back(g);
    if (gs.empty()) fail(ErrorKind::OutOfRange, "window too small for mu");
    std::mt19937_64 rng(seed);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    std::vector<WeakRingSample> out;
    out.reserve(static_cast<size_t>(count));
    while (static_cast<long>(out.size()) < count) {
        const long g = gs[static_cast<size_t>(uniform(0, static_cast<long>(gs.size()) - 1))];
        const long K = N / g;
        const long rmax = W / g;
        const long r1 = uniform(-rmax, rmax), r2 = uniform(-rmax, rmax);
        if (r2 == 0 || std::gcd(std::labs(r2), K) != 1) continue;
        const long n1 = uniform(-W, W);
        const long base = static_cast<long>(floor_mod64((__int128)r1 * n1 % K * inverse_mod(r2, K), K));
        const long jlo = static_cast<long>(std::ceil(static_cast<double>(-W - base) / K));
        const long jhi = static_cast<long>(std::floor(static_cast<double>(W - base) / K));
        if (jlo > jhi) continue;
        const long n2 = base + uniform(jlo, jhi) * K;
        WeakRingSample s{g * r1, n1, g * r2, n2, 0, 0, 0, 0, 0};
        if (floor_mod64((__int128)s.m1 * s.n1 - (__int128)s.m2 * s.n2, N) != 0) fail(ErrorKind::InvalidArgument, "sampler produced a non-relation");
        s.x1 = st_mu(s.m1, P, window).value;
        s.y1 = st_mu(s.n1, P, window).value;
        s.x2 = st_mu(s.m2, P, window).value;
        s.y2 = st_mu(s.n2, P, window).value;
        s.deviation = std::abs(std::polar(1.0, kTwoPi * s.x1 * s.y1) - std::polar(1.0, kTwoPi * s.x2 * s.y2));
        out.push_back(s);
    }
    return out;
}

namespace {

using SparseC = std::map<long, cplx>;

SparseC act(const GenWord& w, const SparseC& x, const WeylDesc& A, long N) {
    auto [k, l] = coords(w, A);
    const Rat qt = frac_part(A.ab());
    SparseC y;
    for (const auto& [j, a] : x) {
        const long t = floor_mod(j - l, N);
        Rat turn = frac_part(w.turn + qt * static_cast<long>((__int128)k * t % N));
        y[t] += a * unit_phase(turn);
    }
    return y;
}

SparseC combo(const SparseC& x, cplx a, const SparseC& y, cplx b) {
    SparseC z;
    for (const auto& [j, v] : x) z[j] += a * v;
    for (const auto& [j, v] : y) z[j] += b * v;
    return z;
}

// mu (W - W^{-1}) / 2i
SparseC self_adjoint_part(const GenWord& w, const SparseC& x, const WeylDesc& A, long N, double mu) {
    const cplx f = mu / cplx(0, 2);
    return combo(act(w, x, A, N), f, act(inverse(w), x, A, N), -f);
}

}  // namespace

CcrResult ccr_residual(CcrKind kind, const ScaleParams& P) {
    const WeylDesc A = P.algebra();
    const long N = P.N();
    const double mu = static_cast<double>(P.mu), hbar = P.hbar();
    // Operators written in the coordinates of the chosen eigenbasis: X there is sigma^{-1}(X) on e_j.
    GenWord Uc = GenWord::U(A.a), Vc = GenWord::V(A.b);
    if (kind == CcrKind::Momentum) {
        Uc = GenWord::V(-A.b);
        Vc = GenWord::U(A.a);
    } else if (kind == CcrKind::Gaussian) {
        Uc = GenWord{A.a, A.b, frac_part(A.ab()) / 2};
    }
    SparseC e{{0, cplx(1)}};
    SparseC QPe = self_adjoint_part(Uc, self_adjoint_part(Vc, e, A, N, mu), A, N, mu);
    SparseC PQe = self_adjoint_part(Vc, self_adjoint_part(Uc, e, A, N, mu), A, N, mu);
    SparseC C = combo(QPe, 1, PQe, -1);
    const cplx target(0, hbar);
    cplx total = 0;
    double transport = 0, lit = 0;
    for (const auto& [j, c] : C) {
        const long jc = floor_mod(j + N / 2, N) - N / 2;
        total += c;
        transport += std::abs(c) * std::abs(static_cast<double>(jc) * hbar / mu);
        lit += std::norm(j == 0 ? c - target : c);
    }
    if (C.find(0) == C.end()) lit += std::norm(target);
    CcrResult r;
    r.residual = (std::abs(total - target) + transport) / hbar;
    r.literal = std::sqrt(lit) / hbar;
    return r;
}

Eigen::MatrixXcd q_matrix(const ScaleParams& P) {
    const long N = P.N();
    if (N > kMaxDense) fail(ErrorKind::OutOfRange, "N too large for a dense matrix");
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N, N);
    for (long j = 0; j < N; ++j) Q(j, j) = static_cast<double>(P.mu) * (unit_phase(j, N) - unit_phase(-j, N)) / cplx(0, 2);
    return Q;
}

Eigen::MatrixXcd p_matrix(const ScaleParams& P) {
    const long N = P.N();
    if (N > kMaxDense) fail(ErrorKind::OutOfRange, "N too large for a dense matrix");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    const cplx f = static_cast<double>(P.mu) / cplx(0, 2);
    for (long j = 0; j < N; ++j) {
        M(floor_mod(j - 1, N), j) += f;
        M(floor_mod(j + 1, N), j) -= f;
    }
    return M;
}

double fit_loglog(const std::vector<long>& mus, const std::vector<double>& residuals) {
    const size_t n = mus.size();
    if (n < 2) return 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(static_cast<double>(mus[i])), y = std::log(residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    return den == 0 ? 0 : (n * sxy - sx * sy) / den;
}

ConvergenceReport converge_study(Quantity q, const std::vector<long>& mus, const StudyOptions& opt) {
    if (mus.empty()) fail(ErrorKind::InvalidArgument, "empty mu list");
    for (size_t i = 1; i < mus.size(); ++i)
        if (mus[i] <= mus[i - 1]) fail(ErrorKind::InvalidArgument, "mu list must be strictly increasing");
    ConvergenceReport rep;
    rep.mus = mus;
    for (long mu : mus) {
        const ScaleParams P(opt.h, mu);
        double r = 0;
        switch (q) {
            case Quantity::Ccr:
                r = ccr_residual(CcrKind::Position, P).residual;
                break;
            case Quantity::Free:
                for (double x1 : opt.grid)
                    for (double x2 : opt.grid) r = std::max(r, free_propagator(x1, x2, opt.t, P).abs_err());
                break;
            case Quantity::Qho:
                for (double x1 : opt.grid)
                    for (double x2 : opt.grid) r = std::max(r, qho_propagator(x1, x2, opt.e, opt.f, opt.c, P).abs_err());
                break;
            case Quantity::WeakRing:
                for (const auto& s : weak_ring_samples(P, opt.samples, opt.window, opt.seed)) r = std::max(r, s.deviation);
                break;
        }
        rep.residuals.push_back(std::max(r, std::numeric_limits<double>::min()));
    }
    rep.fitted_order = fit_loglog(rep.mus, rep.residuals);
    return rep;
}

}  // namespace finqm
