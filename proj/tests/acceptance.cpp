// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "finqm/finqm.hpp"

using namespace finqm;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Accumulate y += s * x without allocating a new vector.
void axpy(StateVec& y, const Scalar& s, const StateVec& x) {
    for (long i = 0; i < x.dim(); ++i)
        if (!x.amps[i].is_zero()) y.amps[i] += s * x.amps[i];
}

ModulePtr principal(long N) { return build_module(WeylDesc(Rat(1), rat(1, N))); }

// Exact basis identity <u_k|v_m> = q^{km}/sqrt N.
Outcome basis_identity() {
    Outcome o;
    const auto t0 = Clock::now();
    long bad = 0;
    for (long N = 2; N <= 64; ++N) {
        const ModulePtr M = principal(N);
        const auto ub = u_basis(M), vb = v_basis(M);
        const Scalar s = sqrt_rat(rat(1, N));
        for (long k = 0; k < N; ++k)
            for (long m = 0; m < N; ++m)
                if (inner(ub[k], vb[m]) != turn_root(rat(k * m % N, N)) * s) ++bad;
    }
    const double dt = seconds_since(t0);
    o.pass = bad == 0 && dt < 10;
    o.detail = "N=2..64, mismatches " + std::to_string(bad) + ", " + std::to_string(dt) + " s";
    return o;
}

// Float oracle for G(N) = sum_{m<N} e^{pi i m^2/N}; m^2 reduced mod 2N before the trig call.
cplx gauss_oracle(long N) {
    cplx s = 0;
    for (long m = 0; m < N; ++m) {
        const long r = static_cast<long>((static_cast<__int128>(m) * m) % (2 * N));
        s += std::polar(1.0, M_PI * static_cast<double>(r) / static_cast<double>(N));
    }
    return s;
}

Outcome gauss_constant() {
    Outcome o;
    const auto t0 = Clock::now();
    long bad_exact = 0;
    const Scalar target = root_of_unity(8, -1);
    for (long N = 2; N <= 64; N += 2) {
        if (sqrt_rat(Rat(N)) / gauss_sum(N) != target) ++bad_exact;
        if (frac_part(gauss_constant_turn(N, 1)) != rat(7, 8)) ++bad_exact;  // e^{-i pi/4} as a turn
    }
    double worst = 0;
    const cplx c = std::polar(1.0, -M_PI / 4);
    for (long N = 2; N <= 4096; N += 2) worst = std::max(worst, std::abs(std::sqrt(static_cast<double>(N)) / gauss_oracle(N) - c));
    const double dt = seconds_since(t0);
    o.pass = bad_exact == 0 && worst <= 1e-12 && dt < 30;
    std::ostringstream d;
    d << "exact mismatches " << bad_exact << " (N<=64), float max dev " << worst << " (N<=4096), " << dt << " s";
    o.detail = d.str();
    return o;
}

Outcome fourier_structure() {
    Outcome o;
    long bad_unitary = 0, bad_parity = 0, bad_matrix = 0;
    const Mat2 J = mat2(Rat(0), Rat(1), Rat(-1), Rat(0));
    for (long N = 2; N <= 64; ++N) {
        const ModulePtr M = principal(N);
        const RegUnitary F = fourier(M);
        if (F.gL != J || realized_matrix(F) != J) ++bad_matrix;
        std::vector<StateVec> im;
        for (long j = 0; j < N; ++j) im.push_back(F.image_vec(j));
        for (long j = 0; j < N; ++j)
            for (long k = j; k < N; ++k)
                if (inner(im[j], im[k]) != Scalar(j == k ? 1L : 0L)) ++bad_unitary;
        // Phi is unitary, so Phi^2 e_m = e_{-m} follows from <e_{-m}|Phi^2 e_m> = <Phi^* e_{-m}|Phi e_m> = 1.
        for (long m = 0; m < N; ++m) {
            StateVec row = zero_vec(M);
            for (long j = 0; j < N; ++j) row.amps[j] = im[j].amps[floor_mod(-m, N)].conj();
            if (inner(row, im[m]) != Scalar(1L)) ++bad_parity;
        }
    }
    o.pass = bad_unitary + bad_parity + bad_matrix == 0;
    o.detail = "N=2..64: unitarity failures " + std::to_string(bad_unitary) + ", parity failures " + std::to_string(bad_parity) +
               ", matrix failures " + std::to_string(bad_matrix);
    return o;
}

Outcome gaussian_relation() {
    Outcome o;
    long bad = 0, bad_zeta = 0, sampled = 0;
    for (long N = 2; N <= 64; N += 2) {
        const ModulePtr M = principal(N);
        const RegUnitary G = gaussian(M, 1, 1);
        std::vector<StateVec> im;
        for (long l = 0; l < N; ++l) im.push_back(G.image_vec(l));
        const Rat qt = M->q_turn();
        for (long n = 0; n < N; ++n) {
            const StateVec vn = v_vector(M, n);
            StateVec y = zero_vec(G.dst);
            for (long l = 0; l < N; ++l) axpy(y, vn.amps[l], im[l]);
            if (y != v_vector(G.dst, n).scaled(turn_root(frac_part(-qt * (n * n) / 2)))) ++bad;
        }
    }
    // regularity phases under the substitution of roots (1, q^{dn})
    for (long N : {8L, 12L, 16L, 24L, 36L, 48L})
        for (long b : {1L, 2L, -1L})
            for (long d : {1L, 2L}) {
                if (N % (std::labs(b) * d) != 0 || (N / (std::labs(b) * d)) % 2 != 0) continue;
                const WeylDesc A(Rat(1), rat(1, N));
                for (long n : {1L, 2L, 5L}) {
                    for (const auto& z : gaussian_regularity_phases(A, b, d, n)) {
                        Scalar p(1L);
                        for (long i = 0; i < 2 * N; ++i) p *= z;
                        if (p != Scalar(1L)) ++bad_zeta;
                        ++sampled;
                    }
                }
            }
    o.pass = bad == 0 && bad_zeta == 0 && sampled > 0;
    o.detail = "even N<=64 eigen-relation failures " + std::to_string(bad) + "; zeta^{2N} != 1 in " + std::to_string(bad_zeta) + " of " +
               std::to_string(sampled) + " sampled phases";
    return o;
}

Outcome morphism_suite() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    long pairs = 0, bad_int = 0, bad_inner = 0, bad_choices = 0, bad_rows = 0;
    while (pairs < 50) {
        const long N = pick(2, 120);
        std::vector<std::pair<long, long>> kl;
        for (long k : divisors(N))
            for (long l : divisors(N / k)) kl.emplace_back(k, l);
        auto [k, l] = kl[static_cast<size_t>(pick(0, static_cast<long>(kl.size()) - 1))];
        long p = pick(1, N);
        while (std::gcd(p, N) != 1) p = pick(1, N);
        const long s = pick(1, 3);
        const WeylDesc A(rat(1, s), rat(p * s, N));
        const WeylDesc B(A.a * k, A.b * l);
        const SpecPoint alpha(rat(pick(0, 3), 4), rat(pick(0, 2), 3));
        const ModulePtr MA = build_module(A, alpha);
        const auto fiber = spectrum_fiber(B, A, alpha);
        const SpecPoint beta = fiber[static_cast<size_t>(pick(0, static_cast<long>(fiber.size()) - 1))];
        const ModulePtr MB = build_module(B, beta);
        const long nB = MB->N;
        const Embedding e0 = embed_pbeta(MB, MA);
        const GenWord UB = GenWord::U(B.a), VB = GenWord::V(B.b);
        std::vector<StateVec> img;
        for (long i = 0; i < nB; ++i) {
            const StateVec x = basis_vector(MB, i);
            img.push_back(e0.apply(x));
            if (e0.apply(apply_word(UB, x)) != apply_word(UB, img.back()) || e0.apply(apply_word(VB, x)) != apply_word(VB, img.back()))
                ++bad_int;
        }
        for (long i = 0; i < nB; ++i)
            for (long j = i; j < nB; ++j)
                if (inner(img[i], img[j]) != Scalar(i == j ? 1L : 0L)) ++bad_inner;
        // the root choices g = 0..nB-1 are the zeta_{nB}^g multiples of one embedding, and nothing else is accepted
        long distinct = 0;
        for (long g = 0; g < nB; ++g) {
            const Embedding eg = embed_pbeta(MB, MA, -1, g);
            const StateVec y = eg.apply(basis_vector(MB, 0));
            if (y == img[0].scaled(root_of_unity(nB, g))) ++distinct;
        }
        bool rejected = false;
        try {
            embed_pbeta(MB, MA, -1, nB);
        } catch (const Error& err) {
            rejected = err.kind() == ErrorKind::InvalidArgument;
        }
        if (distinct != nB || !rejected) ++bad_choices;
        // sum over an orthonormal basis of the whole B-bundle
        const StateVec f = pick(0, 1) ? basis_vector(MA, pick(0, MA->N - 1)) : v_vector(MA, pick(0, MA->N - 1));
        Scalar sum;
        for (const auto& b : fiber) {
            const ModulePtr Mb = build_module(B, b);
            sum += pairing_row_sum(u_basis(Mb), f);
        }
        if (Scalar(sum.canonical()) != Scalar(1L)) ++bad_rows;
        ++pairs;
    }
    o.pass = bad_int + bad_inner + bad_choices + bad_rows == 0;
    o.detail = std::to_string(pairs) + " nested pairs: intertwining " + std::to_string(bad_int) + ", inner " + std::to_string(bad_inner) +
               ", root choices " + std::to_string(bad_choices) + ", row sums " + std::to_string(bad_rows) + " failures";
    return o;
}

Outcome sl2_bookkeeping() {
    Outcome o;
    std::mt19937_64 rng(7);
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    const long N = 48;
    long chains = 0, bad_det = 0, bad_real = 0, bad_conj = 0, total_len = 0;
    while (chains < 200) {
        const long len = pick(1, 6);
        ModulePtr cur = principal(N);
        RegUnitary acc;
        Mat2 g = mat2(Rat(1), Rat(0), Rat(0), Rat(1));
        bool ok = true;
        for (long s = 0; s < len && ok; ++s) {
            RegUnitary L;
            switch (pick(0, 2)) {
                case 0:
                    L = fourier(cur);
                    break;
                case 1: {
                    const long b = pick(0, 1) ? pick(1, 2) : -pick(1, 2), d = pick(1, 2);
                    L = gaussian(cur, b, d);
                    break;
                }
                default:
                    L = diagonal(cur, pick(0, 1) ? 2 : 3);
                    break;
            }
            if (det(L.gL) != 1) ++bad_det;
            g = g * L.gL;
            if (s == 0) {
                acc = L;
            } else {
                try {
                    acc = compose(L, acc);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NoCommonSubalgebra) throw;
                    ok = false;  // the chain has an empty common domain; draw another
                }
            }
            cur = L.dst;
        }
        if (!ok) continue;
        ++chains;
        total_len += len;
        if (det(acc.gL) != 1 || acc.gL != g) ++bad_det;
        if (realized_matrix(acc) != g) ++bad_real;
        for (const auto& r : verify_conjugation(acc, sigma_identities(acc)))
            if (!r.holds) {
                ++bad_conj;
                break;
            }
    }
    o.pass = bad_det + bad_real + bad_conj == 0;
    o.detail = std::to_string(chains) + " chains (mean length " + std::to_string(static_cast<double>(total_len) / chains) +
               "): det/product failures " + std::to_string(bad_det) + ", realization failures " + std::to_string(bad_real) +
               ", conjugation failures " + std::to_string(bad_conj);
    return o;
}

Outcome ccr_rate() {
    Outcome o;
    const auto t0 = Clock::now();
    const std::vector<long> mus{60, 120, 240, 480};
    std::ostringstream d;
    bool ok = true;
    for (auto [kind, name] : {std::pair{CcrKind::Position, "position"}, {CcrKind::Momentum, "momentum"}, {CcrKind::Gaussian, "gaussian"}}) {
        std::vector<double> r;
        for (long mu : mus) r.push_back(ccr_residual(kind, ScaleParams(Rat(1), mu)).residual);
        const double slope = fit_loglog(mus, r);
        ok = ok && slope >= -1.2 && slope <= -0.8;
        d << name << " slope " << slope << "; ";
    }
    const double dt = seconds_since(t0);
    o.pass = ok && dt < 120;
    d << dt << " s";
    o.detail = d.str();
    return o;
}

const std::vector<double> kGrid{-1.0, -0.5, 0.0, 0.5, 1.0};

// max |value - closed|, |(|value| - |closed|)| and phase-ratio deviation against the (0,0) sample
struct GridErr {
    double abs = 0, modulus = 0, ratio = 0;
    void add(const std::vector<KernelSample>& s) {
        const KernelSample& ref = s[s.size() / 2];
        for (const auto& k : s) {
            abs = std::max(abs, k.abs_err());
            modulus = std::max(modulus, std::abs(std::abs(k.value) - std::abs(k.closed)));
            ratio = std::max(ratio, std::abs(k.value / ref.value - k.closed / ref.closed));
        }
    }
    bool within(double tol) const { return abs <= tol && modulus <= tol && ratio <= tol; }
    std::string str() const {
        std::ostringstream d;
        d << "max abs err " << abs << ", modulus " << modulus << ", phase ratio " << ratio;
        return d.str();
    }
};

Outcome free_propagator_match() {
    Outcome o;
    const auto t0 = Clock::now();
    GridErr err;
    for (long k : {1L, 2L})
        for (const Rat& t : {rat(1, 2), Rat(1), rat(3, 2)}) {
            const ScaleParams P(Rat(1), 2520 * k);
            std::vector<KernelSample> s;
            for (double x1 : kGrid)
                for (double x2 : kGrid) s.push_back(free_propagator(x1, x2, t, P));
            err.add(s);
        }
    const double dt = seconds_since(t0);
    o.pass = err.within(1e-9) && dt < 60;
    o.detail = "mu=2520,5040, t=1/2,1,3/2: " + err.str() + ", " + std::to_string(dt) + " s";
    return o;
}

Outcome qho_propagator_match() {
    Outcome o;
    const auto t0 = Clock::now();
    GridErr err;
    std::ostringstream mus;
    for (auto [e, f, c] : {std::array<long, 3>{3, 4, 5}, {5, 12, 13}})
        for (long scale : {1L, 2L}) {
            const long mu = auto_mu(Rat(1), qho_divisors(e, f, c, false), scale);
            mus << mu << " ";
            const ScaleParams P(Rat(1), mu);
            std::vector<KernelSample> s;
            for (double x1 : kGrid)
                for (double x2 : kGrid) s.push_back(qho_propagator(x1, x2, e, f, c, P));
            err.add(s);
        }
    const double dt = seconds_since(t0);
    o.pass = err.within(1e-9) && dt < 120;
    o.detail = "(3,4,5),(5,12,13) at mu " + mus.str() + ": " + err.str() + ", " + std::to_string(dt) + " s";
    return o;
}

Outcome qho_trace_match() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst = 0, abs345 = 0;
    for (auto [e, f, c] : {std::array<long, 3>{3, 4, 5}, {5, 12, 13}, {8, 15, 17}}) {
        const ScaleParams P(Rat(1), auto_mu(Rat(1), qho_divisors(e, f, c, true)));
        const TraceResult T = qho_trace(e, f, c, P);
        worst = std::max(worst, T.abs_err());
        if (c == 5) abs345 = std::abs(T.brute);
    }
    const double dt = seconds_since(t0);
    const bool digits = std::abs(abs345 - std::sqrt(10.0)) < 5e-9;
    o.pass = worst <= 1e-9 && digits && dt < 60;
    std::ostringstream d;
    d.precision(12);
    d << "max |brute - closed| " << worst << ", |Tr(3,4,5)| = " << abs345 << ", " << dt << " s";
    o.detail = d.str();
    return o;
}

Outcome weak_ring() {
    Outcome o;
    const ScaleParams P(Rat(1), 10000);
    double worst = 0;
    long violations = 0;
    const auto samples = weak_ring_samples(P, 10000, 8.0, 424242);
    for (const auto& s : samples) {
        if (floor_mod64(static_cast<__int128>(s.m1) * s.n1 - static_cast<__int128>(s.m2) * s.n2, P.N()) != 0) ++violations;
        worst = std::max(worst, s.deviation);
    }
    o.pass = samples.size() == 10000 && violations == 0 && worst <= 1e-6;
    std::ostringstream d;
    d << samples.size() << " quadruples at mu=10^4, max deviation " << worst;
    o.detail = d.str();
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact basis identity <u_k|v_m> = q^{km}/sqrt N", basis_identity},
        {"Gauss constant sqrt N / G(N) = e^{-i pi/4}", gauss_constant},
        {"Fourier unitary, square is parity, matrix [[0,1],[-1,0]]", fourier_structure},
        {"Gaussian eigen-relation and regularity phases", gaussian_relation},
        {"morphism suite on random nested pairs", morphism_suite},
        {"SL(2,Q) bookkeeping on random composition chains", sl2_bookkeeping},
        {"CCR residual decays as O(1/mu)", ccr_rate},
        {"free propagator matches closed form", free_propagator_match},
        {"harmonic propagator matches closed form", qho_propagator_match},
        {"harmonic trace equals 1/(i|sin(t/2)|)", qho_trace_match},
        {"weak-ring coordinatization", weak_ring},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2zu  %s  [%s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
