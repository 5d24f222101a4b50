#include "finqm/weyl_lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "finqm/errors.hpp"

namespace finqm {

namespace {

Rat reduced(Rat r) {
    r.canonicalize();
    return r;
}

Int gcd_int(const Int& x, const Int& y) {
    Int g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return g;
}

Int lcm_int(const Int& x, const Int& y) {
    Int l;
    mpz_lcm(l.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return l;
}

// Generator of the group xZ + yZ for positive rationals.
Rat rat_gcd(const Rat& x, const Rat& y) { return reduced(Rat(gcd_int(x.get_num(), y.get_num()), lcm_int(x.get_den(), y.get_den()))); }

// Generator of xZ meet yZ.
Rat rat_lcm(const Rat& x, const Rat& y) { return reduced(Rat(lcm_int(x.get_num(), y.get_num()), gcd_int(x.get_den(), y.get_den()))); }

bool is_multiple(const Rat& x, const Rat& of) { return is_integer(reduced(x / of)); }

}  // namespace

WeylDesc::WeylDesc(const Rat& a_, const Rat& b_) : a(reduced(abs(a_))), b(reduced(abs(b_))) {
    if (sgn(a) == 0 || sgn(b) == 0) fail(ErrorKind::InvalidArgument, "Weyl algebra exponents must be nonzero");
}

WeylDesc WeylDesc::parse(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) fail(ErrorKind::InvalidArgument, "expected 'a,b', got '" + text + "'");
    return WeylDesc(parse_rat(text.substr(0, comma)), parse_rat(text.substr(comma + 1)));
}

long WeylDesc::N() const { return to_long(ab().get_den()); }

long WeylDesc::q_num() const {
    Rat f = frac_part(ab());
    return to_long(f.get_num());
}

std::string WeylDesc::str() const { return a.get_str() + "," + b.get_str(); }

GenWord GenWord::with_turn(const Rat& t) const { return {u, v, frac_part(turn + t)}; }

long GenWord::phase_pow(const WeylDesc& A) const {
    // q^{k/2} = e^{pi i k ab}
    const long N2 = 2 * A.N();
    Rat half = A.ab() / 2;
    for (long k = 0; k < N2; ++k)
        if (frac_part(Rat(k) * half) == frac_part(turn)) return k;
    fail(ErrorKind::InvalidArgument, "phase e^{2 pi i " + turn.get_str() + "} is not a power of q^{1/2}");
}

std::string GenWord::str() const {
    std::string s;
    if (sgn(turn) != 0) s += "e(" + turn.get_str() + ")*";
    s += "U^" + u.get_str() + "*V^" + v.get_str();
    return s;
}

GenWord operator*(const GenWord& x, const GenWord& y) {
    return {reduced(x.u + y.u), reduced(x.v + y.v), frac_part(x.turn + y.turn + y.u * x.v)};
}

bool operator==(const GenWord& x, const GenWord& y) {
    return x.u == y.u && x.v == y.v && frac_part(x.turn) == frac_part(y.turn);
}

GenWord inverse(const GenWord& w) { return {reduced(-w.u), reduced(-w.v), frac_part(-w.turn + w.u * w.v)}; }

GenWord power(const GenWord& w, long n) {
    if (n < 0) return power(inverse(w), -n);
    Rat nn(n);
    Rat tri = Rat(n) * Rat(n - 1) / 2;
    return {reduced(w.u * nn), reduced(w.v * nn), frac_part(w.turn * nn + w.u * w.v * tri)};
}

Rat commutator_turn(const GenWord& S, const GenWord& T) { return frac_part(S.u * T.v - T.u * S.v); }

bool in_algebra(const GenWord& w, const WeylDesc& A) { return is_multiple(w.u, A.a) && is_multiple(w.v, A.b); }

std::array<long, 2> coords(const GenWord& w, const WeylDesc& A) {
    if (!in_algebra(w, A)) fail(ErrorKind::NotInAlgebra, w.str() + " is not in A(" + A.str() + ")");
    return {to_long(reduced(w.u / A.a)), to_long(reduced(w.v / A.b))};
}

SpecPoint::SpecPoint(const Rat& u, const Rat& v) : tu(frac_part(u)), tv(frac_part(v)) {}

long q_order(const WeylDesc& A) { return A.N(); }

WeylDesc center(const WeylDesc& A) {
    Rat n(A.N());
    return WeylDesc(A.a * n, A.b * n);
}

WeylDesc up_functor(const WeylDesc& C) {
    if (!C.commutative()) fail(ErrorKind::NotCommutative, "A(" + C.str() + ") is not commutative");
    Rat n = C.ab();
    return WeylDesc(C.a / n, C.b / n);
}

bool includes(const WeylDesc& B, const WeylDesc& A) { return is_multiple(B.a, A.a) && is_multiple(B.b, A.b); }

WeylDesc join(const WeylDesc& A, const WeylDesc& B) { return WeylDesc(rat_gcd(A.a, B.a), rat_gcd(A.b, B.b)); }

WeylDesc join_via_centers(const WeylDesc& A, const WeylDesc& B) {
    WeylDesc za = center(A), zb = center(B);
    return up_functor(WeylDesc(rat_lcm(za.a, zb.a), rat_lcm(za.b, zb.b)));
}

long count_cyclic_subgroups(long N) {
    long r = N;
    for (auto [p, e] : factorize(N)) r = r / p * (p + 1);
    return r;
}

std::vector<std::array<long, 2>> cyclic_subgroup_reps(long N) {
    if (N < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    if (N == 1) return {{1, 0}};
    std::vector<long> units;
    for (long u = 1; u < N; ++u)
        if (std::gcd(u, N) == 1) units.push_back(u);
    std::vector<std::array<long, 2>> out;
    // Every orbit under units has a representative (d, g2) with d = gcd(g1, N).
    for (long d : divisors(N)) {
        long first = d % N;
        std::vector<long> stab;
        for (long u : units)
            if ((u * d) % N == first) stab.push_back(u);
        std::set<long> seen;
        for (long g2 = 0; g2 < N; ++g2) {
            if (std::gcd(std::gcd(d, g2), N) != 1) continue;
            long best = g2;
            for (long u : stab) best = std::min(best, static_cast<long>((__int128)u * g2 % N));
            if (seen.insert(best).second) out.push_back({first, best});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<GenWord> maximal_commutative(const WeylDesc& A) {
    std::vector<GenWord> out;
    for (auto [g1, g2] : cyclic_subgroup_reps(A.N())) out.push_back({reduced(A.a * g1), reduced(A.b * g2), Rat(0)});
    return out;
}

namespace {
std::array<long, 2> relative_powers(const WeylDesc& B, const WeylDesc& A) {
    if (!includes(B, A)) fail(ErrorKind::NotIncluded, "A(" + B.str() + ") is not contained in A(" + A.str() + ")");
    WeylDesc zb = center(B), za = center(A);
    Rat ku = reduced(za.a / zb.a), kv = reduced(za.b / zb.b);
    if (!is_integer(ku) || !is_integer(kv))
        fail(ErrorKind::NotIncluded, "center of A(" + A.str() + ") is not contained in the center of A(" + B.str() + ")");
    return {to_long(ku), to_long(kv)};
}
}  // namespace

SpecPoint spectrum_project(const WeylDesc& B, const WeylDesc& A, const SpecPoint& beta) {
    auto [ku, kv] = relative_powers(B, A);
    return SpecPoint(beta.tu * ku, beta.tv * kv);
}

std::vector<SpecPoint> spectrum_fiber(const WeylDesc& B, const WeylDesc& A, const SpecPoint& alpha) {
    auto [ku, kv] = relative_powers(B, A);
    std::vector<SpecPoint> out;
    for (long i = 0; i < ku; ++i)
        for (long j = 0; j < kv; ++j) out.emplace_back((alpha.tu + i) / ku, (alpha.tv + j) / kv);
    return out;
}

GenWord apply_automorphism(const AutDesc& xi, const GenWord& w, const WeylDesc& A) {
    const long N = A.N();
    long det = xi.g[0][0] * xi.g[1][1] - xi.g[0][1] * xi.g[1][0];
    if (floor_mod(det - 1, N) != 0) fail(ErrorKind::BadMatrix, "automorphism matrix has det " + std::to_string(det) + " != 1 mod " + std::to_string(N));
    auto [k, l] = coords(w, A);
    const Rat half = A.ab() / 2;
    GenWord X{A.a * xi.g[0][0], A.b * xi.g[0][1], frac_part(half * (2 * xi.n))};
    GenWord Y{A.a * xi.g[1][0], A.b * xi.g[1][1], frac_part(half * (2 * xi.m))};
    // U^{ka} V^{lb} = (U^a)^k (V^b)^l exactly
    GenWord img = power(X, k) * power(Y, l);
    return img.with_turn(w.turn);
}

}  // namespace finqm
