#pragma once

// Rational Weyl algebras A(a,b) = <U^a, V^b> and the divisibility lattice between them.
// Convention throughout: V^y U^x = e^{2 pi i xy} U^x V^y.

#include <array>
#include <string>
#include <vector>

#include "finqm/exactnum.hpp"

namespace finqm {

struct WeylDesc {
    Rat a, b;

    WeylDesc(const Rat& a, const Rat& b);
    static WeylDesc parse(const std::string& text);  // "a,b"

    long N() const;  // order of q = e^{2 pi i ab}
    bool commutative() const { return N() == 1; }
    Rat ab() const { return a * b; }
    long q_num() const;  // q = zeta_N^{q_num}
    std::string str() const;

    friend bool operator==(const WeylDesc& x, const WeylDesc& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const WeylDesc& x, const WeylDesc& y) { return !(x == y); }
};

/// e^{2 pi i turn} U^u V^v.
struct GenWord {
    Rat u{0}, v{0};
    Rat turn{0};

    static GenWord U(const Rat& x) { return {x, Rat(0), Rat(0)}; }
    static GenWord V(const Rat& y) { return {Rat(0), y, Rat(0)}; }
    GenWord with_turn(const Rat& t) const;  // multiply by e^{2 pi i t}

    bool is_scalar() const { return sgn(u) == 0 && sgn(v) == 0; }
    // Phase in units of q^{1/2} of the algebra A, if representable.
    long phase_pow(const WeylDesc& A) const;
    std::string str() const;

    friend GenWord operator*(const GenWord& x, const GenWord& y);
    friend bool operator==(const GenWord& x, const GenWord& y);
    friend bool operator!=(const GenWord& x, const GenWord& y) { return !(x == y); }
};

GenWord inverse(const GenWord& w);
GenWord power(const GenWord& w, long n);
// c with T*S = e^{2 pi i c} S*T, reduced to [0,1).
Rat commutator_turn(const GenWord& S, const GenWord& T);
bool in_algebra(const GenWord& w, const WeylDesc& A);
// Integer coordinates (k, l) with w = phase * U^{ka} V^{lb}; throws NotInAlgebra.
std::array<long, 2> coords(const GenWord& w, const WeylDesc& A);

struct AutDesc {
    std::array<std::array<long, 2>, 2> g{{{1, 0}, {0, 1}}};
    long n = 0, m = 0;
};

/// Spectral point of the center Z(A): U^{Na} acts as e^{2 pi i tu}, V^{Nb} as e^{2 pi i tv}.
struct SpecPoint {
    Rat tu{0}, tv{0};

    static SpecPoint principal() { return {}; }
    SpecPoint(const Rat& tu = Rat(0), const Rat& tv = Rat(0));
    bool principal_p() const { return sgn(tu) == 0 && sgn(tv) == 0; }
    friend bool operator==(const SpecPoint& x, const SpecPoint& y) { return x.tu == y.tu && x.tv == y.tv; }
    friend bool operator!=(const SpecPoint& x, const SpecPoint& y) { return !(x == y); }
};

long q_order(const WeylDesc& A);
WeylDesc center(const WeylDesc& A);
WeylDesc up_functor(const WeylDesc& C);
bool includes(const WeylDesc& B, const WeylDesc& A);  // B subset of A
WeylDesc join(const WeylDesc& A, const WeylDesc& B);
// Center-intersection form (Z(A) meet Z(B))^up; agrees with join when A, B and the join all have ab = 1/N.
WeylDesc join_via_centers(const WeylDesc& A, const WeylDesc& B);

/// Generators W = U^{g1 a} V^{g2 b}, one per cyclic subgroup of order N in (Z/N)^2.
std::vector<GenWord> maximal_commutative(const WeylDesc& A);
std::vector<std::array<long, 2>> cyclic_subgroup_reps(long N);
long count_cyclic_subgroups(long N);  // N prod (1 + 1/p)

SpecPoint spectrum_project(const WeylDesc& B, const WeylDesc& A, const SpecPoint& beta);
std::vector<SpecPoint> spectrum_fiber(const WeylDesc& B, const WeylDesc& A, const SpecPoint& alpha);

GenWord apply_automorphism(const AutDesc& xi, const GenWord& w, const WeylDesc& A);

}  // namespace finqm
