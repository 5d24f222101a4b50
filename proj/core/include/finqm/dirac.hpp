#pragma once

// Physical scale (h, mu), Dirac rescaling, finite-N propagators and traces against their
// continuum closed forms, the st_mu coordinatization and CCR residuals.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finqm/transform.hpp"

namespace finqm {

/// N = mu^2/h, hbar = 2 pi h, dirac_c = sqrt(2 pi hbar).  The algebra is A(1/mu, h/mu).
struct ScaleParams {
    Rat h{1};
    long mu = 2;

    ScaleParams() = default;
    ScaleParams(const Rat& h, long mu);  // throws DivisibilityViolation unless N is an even integer

    long N() const;
    double hbar() const;
    double dirac_c() const;
    WeylDesc algebra() const;
    ModulePtr module() const;  // principal module
};

/// Smallest mu with every d in `divides_N` dividing mu^2/h (and N even), times scale.
long auto_mu(const Rat& h, const std::vector<long>& divides_N, long scale = 1);
std::vector<long> free_divisors(const Rat& t);
std::vector<long> qho_divisors(long e, long f, long c, bool with_trace);

struct RescaleCtx {
    GenWord r, s;
    long b = 0;        // minimal positive commutation exponent (0 if commuting)
    long aR = 1, aS = 1;
    double delta = 0;  // Delta k
    bool commuting = false;
};

RescaleCtx delta_k(const GenWord& r, const GenWord& s, const ScaleParams& P);
cplx dirac_inner(const StateVec& e, const StateVec& f, const RescaleCtx& ctx);

struct KernelSample {
    double x1 = 0, x2 = 0;  // snapped to the lattice
    long i1 = 0, i2 = 0;    // lattice indices
    cplx value, closed;
    bool phase_free = true;
    double abs_err() const { return std::abs(value - closed); }
};

/// <x|p>_Dir against e^{ixp/hbar}/sqrt(2 pi hbar).
KernelSample xp_kernel(double x, double p, const ScaleParams& P);
/// Finite kernel of K^t, t = b/d > 0, on the step b hbar/mu.
KernelSample free_propagator(double x1, double x2, const Rat& t, const ScaleParams& P);
/// Finite kernel of the harmonic evolution on the step c e hbar/mu.
KernelSample qho_propagator(double x1, double x2, long e, long f, long c, const ScaleParams& P,
                            std::optional<Rat> c0_turn = std::nullopt);
cplx free_closed_form(double x1, double x2, double t, double hbar);
cplx qho_closed_form(double x1, double x2, double cos_t, double sin_t, double hbar);

struct TraceResult {
    cplx brute, closed;
    long terms = 0;
    double abs_err() const { return std::abs(brute - closed); }
};
TraceResult qho_trace(long e, long f, long c, const ScaleParams& P);

/// Dirac value of the Fourier restriction to <U^e, V^f> against the plain one
/// at the same physical point (indices k, m on the refined lattice).
struct RefinementSample {
    cplx refined, plain;
    double x = 0, p = 0;
};
RefinementSample refinement_check(long k, long m, long e, long f, const ScaleParams& P);

/// st_mu: m reduced into [-N/2, N/2), then m/mu; +-infinity outside |m/mu| <= window.
struct ExtReal {
    double value = 0;
    int inf = 0;  // -1, 0, +1
    bool finite() const { return inf == 0; }
};
ExtReal st_mu(long m, const ScaleParams& P, double window);

struct WeakRingSample {
    long m1, n1, m2, n2;
    double x1, y1, x2, y2;
    double deviation;  // |e^{2 pi i x1 y1} - e^{2 pi i x2 y2}|
};
/// Quadruples on the window with m1 n1 = m2 n2 mod N.  Needs 1/h integral.
std::vector<WeakRingSample> weak_ring_samples(const ScaleParams& P, long count, double window, std::uint64_t seed);

enum class CcrKind { Position, Momentum, Gaussian };
struct CcrResult {
    double residual = 0;  // distance compatible with the limit identification
    double literal = 0;   // ||(QP-PQ)e - i hbar e|| / hbar
};
CcrResult ccr_residual(CcrKind kind, const ScaleParams& P);
/// Q = mu (U^ - U^-1)/2i, P = mu (V^ - V^-1)/2i as dense matrices (small N only).
Eigen::MatrixXcd q_matrix(const ScaleParams& P);
Eigen::MatrixXcd p_matrix(const ScaleParams& P);

enum class Quantity { Ccr, Free, Qho, WeakRing };

struct StudyOptions {
    Rat h{1};
    Rat t{1};
    long e = 3, f = 4, c = 5;
    std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    long samples = 1000;
    double window = 8;
    std::uint64_t seed = 1;
};

struct ConvergenceReport {
    std::vector<long> mus;
    std::vector<double> residuals;
    double fitted_order = 0;
};

ConvergenceReport converge_study(Quantity q, const std::vector<long>& mus, const StudyOptions& opt);
double fit_loglog(const std::vector<long>& mus, const std::vector<double>& residuals);

}  // namespace finqm
