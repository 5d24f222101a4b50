#pragma once

// Irreducible modules V_A(alpha) in the clock/shift model:
//   U^a e_k = u q^k e_k,   V^b e_k = v e_{k-1 mod N}.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "finqm/exactnum.hpp"
#include "finqm/weyl_lattice.hpp"

namespace finqm {

struct ModuleRep {
    WeylDesc alg;
    SpecPoint point;
    Rat ut{0}, vt{0};  // u = e^{2 pi i ut}, v = e^{2 pi i vt}; N ut = point.tu mod 1
    long N = 1;

    Rat q_turn() const { return frac_part(alg.ab()); }
    Rat qhalf_turn() const { return q_turn() / 2; }
    Scalar u() const { return turn_root(ut); }
    Scalar v() const { return turn_root(vt); }
    Scalar q() const { return turn_root(q_turn()); }
    std::string str() const;
};

using ModulePtr = std::shared_ptr<const ModuleRep>;

bool same_module(const ModuleRep& x, const ModuleRep& y);

/// Roots default to the principal ones (tu/N, tv/N).
ModulePtr build_module(const WeylDesc& A, const SpecPoint& alpha = SpecPoint::principal());
ModulePtr build_module_roots(const WeylDesc& A, const Rat& ut, const Rat& vt);

struct StateVec {
    ModulePtr mod;
    std::vector<Scalar> amps;

    long dim() const { return static_cast<long>(amps.size()); }
    StateVec scaled(const Scalar& s) const;
    StateVec to_float() const;
};

StateVec zero_vec(const ModulePtr& M);
StateVec basis_vector(const ModulePtr& M, long k);
StateVec operator+(const StateVec& x, const StateVec& y);
StateVec operator-(const StateVec& x, const StateVec& y);
bool operator==(const StateVec& x, const StateVec& y);
inline bool operator!=(const StateVec& x, const StateVec& y) { return !(x == y); }
double max_abs_diff(const StateVec& x, const StateVec& y);

std::vector<StateVec> u_basis(const ModulePtr& M);
StateVec v_vector(const ModulePtr& M, long m);  // (1/sqrt N) sum_k q^{mk} e_k
std::vector<StateVec> v_basis(const ModulePtr& M);

Scalar inner(const StateVec& x, const StateVec& y);
Scalar norm2(const StateVec& x);

StateVec apply_word(const GenWord& w, const StateVec& x);
// e^{2 pi i (result)} is the scalar by which a central word acts.
Rat central_turn(const ModulePtr& M, const GenWord& w);

struct SBasis {
    std::vector<StateVec> vecs;
    Rat s_turn, t_turn;  // s, t: S s_k = s q^k s_k, T s_k = t s_{k-1}
    long seed = 0;       // index of the reference vector that was projected
    // Observed n with s_k = c q^{-n k(k+1)/2} e_{k+j}, when S is a power of U^a.
    std::optional<long> quadratic_n;
};

/// Canonical S-basis with T acting as decrement. Requires T*S = q*S*T.
SBasis s_basis(const ModulePtr& M, const GenWord& S, const GenWord& T, long first_seed = 0);

/// Dense matrix of scalars (row-major).
struct Matrix {
    long rows = 0, cols = 0;
    std::vector<Scalar> a;

    Matrix() = default;
    Matrix(long r, long c) : rows(r), cols(c), a(static_cast<size_t>(r * c)) {}
    static Matrix identity(long n);
    static Matrix from_columns(const std::vector<StateVec>& cols);

    Scalar& operator()(long r, long c) { return a[static_cast<size_t>(r * cols + c)]; }
    const Scalar& operator()(long r, long c) const { return a[static_cast<size_t>(r * cols + c)]; }
    Matrix adjoint() const;
    StateVec column(const ModulePtr& M, long c) const;
};

Matrix operator*(const Matrix& x, const Matrix& y);
bool operator==(const Matrix& x, const Matrix& y);
Matrix word_matrix(const ModulePtr& M, const GenWord& w);

enum class GammaGen { Mu, Nu };
/// mu: e_m -> e_{m-1};  nu: e_m -> q^{-m} e_m.
Matrix gamma_generator(const ModulePtr& M, GammaGen which);

}  // namespace finqm
