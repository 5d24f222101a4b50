#include <doctest.h>

#include <random>

#include "finqm/errors.hpp"
#include "finqm/weyl_lattice.hpp"

using namespace finqm;

namespace {

WeylDesc W(const char* s) { return WeylDesc::parse(s); }

}  // namespace

TEST_CASE("order of q") {
    CHECK(q_order(W("1,1")) == 1);
    CHECK(q_order(W("1/2,1/2")) == 4);
    for (long m : {2L, 6L, 10L, 12L})
        for (long h : {1L, 2L, 4L})
            if ((m * m) % h == 0) CHECK(q_order(WeylDesc(rat(1, m), rat(h, m))) == m * m / h);
    CHECK_THROWS_AS(WeylDesc::parse("1/2"), Error);
}

TEST_CASE("center and the up functor") {
    CHECK(center(W("1,1")) == W("1,1"));
    CHECK(center(W("1/2,1/2")) == W("2,2"));
    CHECK(up_functor(W("1,1")) == W("1,1"));
    CHECK(up_functor(W("2,2")) == W("1/2,1/2"));
    CHECK(up_functor(W("3,1")) == W("1,1/3"));
    std::mt19937 rng(11);
    for (int t = 0; t < 50; ++t) {
        const long p = std::uniform_int_distribution<long>(1, 12)(rng), q = std::uniform_int_distribution<long>(1, 12)(rng);
        const long r = std::uniform_int_distribution<long>(1, 12)(rng), s = std::uniform_int_distribution<long>(1, 12)(rng);
        const WeylDesc A(rat(p, q), rat(r, s));
        const WeylDesc C = center(A);
        CHECK(C.commutative());
        CHECK(center(up_functor(C)) == C);
        CHECK(includes(C, A));
    }
}

TEST_CASE("inclusion and join") {
    CHECK(includes(W("1,1"), W("1/2,1/2")));
    CHECK_FALSE(includes(W("1/2,1/2"), W("1,1")));
    CHECK(includes(W("1/2,1"), W("1/6,1/2")));
    CHECK(join(W("1,1/2"), W("1/2,1")) == W("1/2,1/2"));
    // with ab = 2/3 the center form overshoots
    CHECK(join(W("1,1/3"), W("1,2/3")) == W("1,1/3"));
    CHECK(join_via_centers(W("1,1/3"), W("1,2/3")) == W("1/2,1/3"));
    std::mt19937 rng(5);
    auto r = [&] { return rat(std::uniform_int_distribution<long>(1, 9)(rng), std::uniform_int_distribution<long>(1, 9)(rng)); };
    for (int t = 0; t < 100; ++t) {
        const WeylDesc A(r(), r()), B(r(), r());
        CHECK(join(A, A) == A);
        const WeylDesc J = join(A, B);
        CHECK(includes(A, J));
        CHECK(includes(B, J));
        CHECK(join(A, B) == join(B, A));
        // the center-intersection form agrees when q is a primitive root with ab = 1/N throughout
        auto primitive = [](const WeylDesc& X) { return !X.commutative() && X.ab() * Rat(X.N()) == 1; };
        if (primitive(A) && primitive(B) && primitive(J)) CHECK(join_via_centers(A, B) == J);
    }
}

TEST_CASE("maximal commutative subalgebras") {
    CHECK(maximal_commutative(W("1,1")).size() == 1);
    CHECK(maximal_commutative(W("1,1/2")).size() == 3);
    for (long p : {3L, 5L, 7L, 11L}) CHECK(maximal_commutative(WeylDesc(Rat(1), rat(1, p))).size() == static_cast<size_t>(p + 1));
    for (long N = 1; N <= 60; ++N) {
        long psi = N;
        for (auto [p, e] : factorize(N)) psi = psi / p * (p + 1);
        CHECK(count_cyclic_subgroups(N) == psi);
        CHECK(static_cast<long>(cyclic_subgroup_reps(N).size()) == psi);
    }
    // every generator commutes with itself trivially and generates a commutative algebra with the center
    const WeylDesc A = W("1/2,1/3");
    for (const auto& w : maximal_commutative(A)) {
        CHECK(in_algebra(w, A));
        CHECK(commutator_turn(w, GenWord::U(A.a * A.N())) == 0);
    }
}

TEST_CASE("spectral projection") {
    const WeylDesc A = W("1/2,1/3"), B = W("1,1/3");
    CHECK(spectrum_project(B, A, SpecPoint::principal()) == SpecPoint::principal());
    const SpecPoint a(rat(1, 5), rat(2, 7));
    CHECK(spectrum_project(A, A, a) == a);
    CHECK(spectrum_fiber(W("1,1/3"), A, a).size() == 2);
    CHECK(spectrum_fiber(W("1,2/3"), A, a).size() == 1);
    CHECK(spectrum_fiber(W("3,1"), A, a).size() == 2);
    for (const WeylDesc& Bs : {W("1,1/3"), W("1/2,2/3"), W("1,2/3"), W("3,1")}) {
        if (!includes(Bs, A)) continue;
        const auto fib = spectrum_fiber(Bs, A, a);
        // index of Z(A) in Z(B); equals A.N()/Bs.N() only when both have ab = 1/N
        const Rat idx = A.ab() * Rat(A.N()) * Rat(A.N()) / (Bs.ab() * Rat(Bs.N()) * Rat(Bs.N()));
        CHECK(Rat(static_cast<long>(fib.size())) == idx);
        for (const auto& b : fib) CHECK(spectrum_project(Bs, A, b) == a);
    }
}

TEST_CASE("automorphisms") {
    const WeylDesc A = W("1/2,1/4");
    const GenWord U = GenWord::U(A.a), V = GenWord::V(A.b);
    AutDesc id;
    CHECK(apply_automorphism(id, U, A) == U);
    AutDesc J;
    J.g = {{{0, 1}, {-1, 0}}};
    const GenWord JU = apply_automorphism(J, U, A), JV = apply_automorphism(J, V, A);
    CHECK(JU.u == 0);
    CHECK(JU.v == A.b);
    CHECK(commutator_turn(JU, JV) == commutator_turn(U, V));
    std::mt19937 rng(2);
    for (int t = 0; t < 30; ++t) {
        AutDesc xi;
        const long k = std::uniform_int_distribution<long>(-3, 3)(rng);
        xi.g = {{{1, k}, {0, 1}}};
        xi.n = std::uniform_int_distribution<long>(0, 7)(rng);
        xi.m = std::uniform_int_distribution<long>(0, 7)(rng);
        CHECK(commutator_turn(apply_automorphism(xi, U, A), apply_automorphism(xi, V, A)) == commutator_turn(U, V));
    }
}

TEST_CASE("words") {
    const GenWord U = GenWord::U(rat(1, 2)), V = GenWord::V(rat(1, 3));
    // V^y U^x = e^{2 pi i xy} U^x V^y
    CHECK(V * U == (U * V).with_turn(rat(1, 6)));
    CHECK(commutator_turn(U, V) == rat(1, 6));
    CHECK((U * inverse(U)).is_scalar());
    CHECK(power(U * V, 3) == power(U * V, 2) * (U * V));
    const WeylDesc A = W("1/2,1/3");
    CHECK(coords(power(U, 3) * power(V, -2), A) == std::array<long, 2>{3, -2});
    CHECK_THROWS_AS(coords(GenWord::U(rat(1, 4)), A), Error);
}
