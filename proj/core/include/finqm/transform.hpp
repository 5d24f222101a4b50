#pragma once

// Regular unitary transformations L: V_B -> V_D between submodules, carried with the
// automorphism sigma they implement (L X = sigma(X) L on the domain) and its matrix g_L.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "finqm/repmod.hpp"

namespace finqm {

/// 2x2 rational matrix acting on row vectors of exponents: (k, l) -> (k, l) g.
using Mat2 = std::array<std::array<Rat, 2>, 2>;

Mat2 mat2(const Rat& a, const Rat& b, const Rat& c, const Rat& d);
Mat2 operator*(const Mat2& x, const Mat2& y);
Rat det(const Mat2& g);
Mat2 inverse(const Mat2& g);
std::string to_string(const Mat2& g);

using SparseVec = std::vector<std::pair<long, Monomial>>;

// Largest module dimension for which dense vectors are built.
inline constexpr long kMaxDense = 4096;

struct RegUnitary {
    std::string name;
    ModulePtr src, dst;
    GenWord S, T;    // generators of the domain algebra
    GenWord S2, T2;  // their images under sigma
    Mat2 gL{};
    Scalar phase_const{1};  // overall constant in front of the image vectors
    long dim = 0;

    std::function<StateVec(long)> domain_vec;
    std::function<StateVec(long)> image_vec;
    // Optional lazy forms, used when N is too large to materialize.
    std::function<SparseVec(long)> domain_sparse;
    std::function<std::optional<Monomial>(long, long)> image_amp;  // (m, index)
    std::function<std::optional<cplx>(long, long)> image_amp_f;    // float shortcut, if provided

    bool lazy() const { return domain_sparse && image_amp; }
};

/// Fourier transform e_m -> (1/sqrt N) sum_k q^{mk} e'_k; target roots (v^{-1}, u).
RegUnitary fourier(const ModulePtr& M);

/// Gaussian transform on <U^d, V^b> (b may be negative): sigma(U^d) = q^{-bd/2} U^d V^{-b}, sigma(V^b) = V^b.
/// Needs bd | N and N/(bd) even.
RegUnitary gaussian(const ModulePtr& M, long b, long d);

/// e_{mk} -> (1/sqrt m) sum_l e'_{k + lN/m}; sigma(U) = U^m, sigma(V^m) = V.
RegUnitary diagonal(const ModulePtr& M, long m);

/// Free evolution K^t for t = b/d: the Gaussian transform with these parameters.
RegUnitary free_evolution(const ModulePtr& M, const Rat& t);

/// Harmonic evolution for cos t = f/c, sin t = e/c on a principal module.
/// c0_turn overrides the constant e^{-i pi/4} (turn -1/8).
RegUnitary qho_evolution(const ModulePtr& M, long e, long f, long c, std::optional<Rat> c0_turn = std::nullopt);

/// L2 after L1; the domain is the largest subspace of dom(L1) mapped into dom(L2). Dense, float.
RegUnitary compose(const RegUnitary& L2, const RegUnitary& L1);
RegUnitary inverse(const RegUnitary& L);

/// sigma applied to any word of the domain algebra.
GenWord sigma_apply(const RegUnitary& L, const GenWord& w);

/// Constant sqrt(n)/G_p(n) with G_p(n) = sum_{m<n} e^{pi i p m^2/n}, as a turn k/8.
Rat gauss_constant_turn(long n, long p);

struct Intertwining {
    std::string name;
    GenWord X, Y;  // L X = Y L on the domain
};

struct ConjugationReport {
    std::string name;
    bool holds = false;
    double residual = 0;
    bool exact = false;  // decided by exact arithmetic
};

std::vector<Intertwining> sigma_identities(const RegUnitary& L);
std::vector<ConjugationReport> verify_conjugation(const RegUnitary& L, const std::vector<Intertwining>& ids,
                                                  double tol = 1e-9);
ConjugationReport verify_isometry(const RegUnitary& L, double tol = 1e-9);

/// <domain_n | image_m>, computed from the sparse forms (src and dst must be the same module).
cplx kernel_value(const RegUnitary& L, long n, long m);
Scalar kernel_exact(const RegUnitary& L, long n, long m);

/// Dense operator sum_m |image_m><domain_m| (dst x src).
Eigen::MatrixXcd operator_matrix(const RegUnitary& L);
Eigen::MatrixXcd domain_matrix(const RegUnitary& L);
Eigen::MatrixXcd image_matrix(const RegUnitary& L);

/// Realized g_L: exponent coordinates of sigma(S), sigma(T) against those of S, T.
Mat2 realized_matrix(const RegUnitary& L);

/// Phases zeta_m relating the Gaussian built with roots (1, q^{dn}) to the one with principal
/// roots after identifying both modules.
std::vector<Scalar> gaussian_regularity_phases(const WeylDesc& A, long b, long d, long n);

/// K^{t2} K^{t1} against K^{t1+t2} on domain vectors of the latter (float, lazy).
struct SemigroupReport {
    long e = 0, f = 0, c = 0;       // triple of t1 + t2
    long checked = 0;               // domain vectors tested
    double domain_residual = 0;     // part of K^{t1} x outside dom(K^{t2})
    double mismatch = 0;            // after dividing out phase_ratio
    cplx phase_ratio;               // <K^{t1+t2} x | K^{t2} K^{t1} x>
    double phase_spread = 0;        // variation of that ratio across x
};
SemigroupReport qho_semigroup(const ModulePtr& M, long e1, long f1, long c1, long e2, long f2, long c2, long max_vectors = 4);

StateVec dense_from_sparse(const ModulePtr& M, const SparseVec& v);

}  // namespace finqm
