// finqm: command-line driver for lattice queries, basis dumps, transformation checks,
// propagators, traces and convergence sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "finqm/finqm.hpp"

using json = nlohmann::ordered_json;
using namespace finqm;

namespace {

const char* kAutoPolicy =
    "auto: the smallest mu for which N = mu^2/h is an even integer divisible by every index the "
    "computation needs (2|b|d for t = b/d; 2c^2e and 2e/gcd(2e,f) for a triple, plus 4ec^2(c-f) for the trace), "
    "multiplied by --scale";

struct Config {
    std::string h = "1";
    std::string mu = "auto";
    long scale = 1;
    std::string triple = "3,4,5";
    std::string t = "1";
    std::string grid = "-1,-0.5,0,0.5,1";
    std::string mode = "float";
    double tol = -1;  // negative: per-command default
    std::string out;
    std::string format;  // empty: text for lattice, json otherwise
    unsigned jobs = 1;
    std::uint64_t seed = 1;
};

struct Check {
    std::string name;
    double value = 0;
    double bound = 0;
    bool pass = false;
};

struct Report {
    json meta = json::object();
    json results = json::array();
    std::vector<Check> checks;
    std::vector<std::array<std::string, 10>> rows;  // CSV rows
    std::string text;                               // plain output for the lattice command
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::array<long, 3> parse_triple(const std::string& s) {
    auto p = split(s, ',');
    if (p.size() != 3) fail(ErrorKind::InvalidArgument, "triple must be 'e,f,c', got '" + s + "'");
    return {std::stol(p[0]), std::stol(p[1]), std::stol(p[2])};
}

// "a,b,c" or "lo:hi:step"
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> g;
    auto colon = split(s, ':');
    if (colon.size() == 3) {
        const double lo = std::stod(colon[0]), hi = std::stod(colon[1]), st = std::stod(colon[2]);
        if (st <= 0) fail(ErrorKind::InvalidArgument, "grid step must be positive");
        for (long i = 0; lo + i * st <= hi + 1e-12; ++i) g.push_back(lo + i * st);
    } else {
        for (auto& x : split(s, ',')) g.push_back(std::stod(x));
    }
    if (g.empty()) fail(ErrorKind::InvalidArgument, "empty grid");
    return g;
}

std::vector<long> parse_mus(const Config& C, const Rat& h, const std::vector<long>& divs) {
    if (C.mu == "auto") return {auto_mu(h, divs, C.scale)};
    std::vector<long> mus;
    for (auto& x : split(C.mu, ',')) mus.push_back(std::stol(x));
    if (mus.empty()) fail(ErrorKind::InvalidArgument, "empty mu list");
    return mus;
}

std::string num(double x) {
    std::ostringstream o;
    o << std::setprecision(17) << x;
    return o.str();
}

// Run f(i) for i in [0, n) on up to `jobs` threads; results are stored by index so output order is fixed.
void parallel_for(long n, unsigned jobs, const std::function<void(long)>& f) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max(1L, n))));
    if (jobs == 1) {
        for (long i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (long i; (i = next++) < n;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

json scalar_json(const Scalar& s, const std::string& mode) {
    if (mode == "exact") return s.str();
    const cplx z = s.to_complex();
    return json::array({z.real(), z.imag()});
}

json vec_json(const StateVec& v, const std::string& mode) {
    json a = json::array();
    for (const auto& s : v.amps) a.push_back(scalar_json(s, mode));
    return a;
}

void add_kernel_row(Report& R, long mu, long N, const std::string& q, const KernelSample& s) {
    R.rows.push_back({std::to_string(mu), std::to_string(N), q, num(s.x1), num(s.x2), num(s.value.real()), num(s.value.imag()),
                      num(s.closed.real()), num(s.closed.imag()), num(s.abs_err())});
    R.results.push_back({{"mu", mu},
                         {"N", N},
                         {"quantity", q},
                         {"x1", s.x1},
                         {"x2", s.x2},
                         {"re", s.value.real()},
                         {"im", s.value.imag()},
                         {"closed_re", s.closed.real()},
                         {"closed_im", s.closed.imag()},
                         {"abs_err", s.abs_err()}});
}

// ---- lattice ------------------------------------------------------------------------------

struct LatticeArgs {
    std::string center, up, join, maximal, sub, amb;
};

void run_lattice(const LatticeArgs& L, Report& R) {
    auto emit = [&](const std::string& query, const std::string& input, const json& value, const std::string& text) {
        R.results.push_back({{"query", query}, {"input", input}, {"value", value}});
        R.text += text + "\n";
    };
    if (!L.center.empty()) {
        auto z = center(WeylDesc::parse(L.center)).str();
        emit("center", L.center, z, z);
    }
    if (!L.up.empty()) {
        auto z = up_functor(WeylDesc::parse(L.up)).str();
        emit("up", L.up, z, z);
    }
    if (!L.join.empty()) {
        auto parts = split(L.join, ';');
        if (parts.size() != 2) fail(ErrorKind::InvalidArgument, "--join expects 'a,b;c,d'");
        auto z = join(WeylDesc::parse(parts[0]), WeylDesc::parse(parts[1])).str();
        emit("join", L.join, z, z);
    }
    if (!L.sub.empty() || !L.amb.empty()) {
        if (L.sub.empty() || L.amb.empty()) fail(ErrorKind::InvalidArgument, "--sub and --amb go together");
        bool inc = includes(WeylDesc::parse(L.sub), WeylDesc::parse(L.amb));
        emit("includes", L.sub + " in " + L.amb, inc, inc ? "true" : "false");
    }
    if (!L.maximal.empty()) {
        json arr = json::array();
        std::string text;
        for (const auto& w : maximal_commutative(WeylDesc::parse(L.maximal))) {
            arr.push_back(w.str());
            text += (text.empty() ? "" : "\n") + w.str();
        }
        emit("maximal_commutative", L.maximal, arr, text);
    }
    if (R.results.empty()) fail(ErrorKind::InvalidArgument, "lattice needs one of --center, --up, --join, --sub/--amb, --maximal");
}

// ---- basis / pairing -----------------------------------------------------------------------

struct ModuleArgs {
    std::string alg = "1/2,1/2";
    std::string point = "0,0";
};

ModulePtr module_of(const ModuleArgs& a) {
    auto p = split(a.point, ',');
    if (p.size() != 2) fail(ErrorKind::InvalidArgument, "point must be 'tu,tv'");
    return build_module(WeylDesc::parse(a.alg), SpecPoint(parse_rat(p[0]), parse_rat(p[1])));
}

GenWord parse_word(const std::string& s) {
    auto p = split(s, ',');
    if (p.size() < 2 || p.size() > 3) fail(ErrorKind::InvalidArgument, "word must be 'u,v[,turn]', got '" + s + "'");
    GenWord w{parse_rat(p[0]), parse_rat(p[1]), Rat(0)};
    if (p.size() == 3) w = w.with_turn(parse_rat(p[2]));
    return w;
}

struct BasisArgs {
    ModuleArgs mod;
    std::string kind = "u";
    std::string S, T;
};

void run_basis(const BasisArgs& B, const Config& C, Report& R) {
    ModulePtr M = module_of(B.mod);
    R.meta["module"] = M->str();
    R.meta["N"] = M->N;
    std::vector<StateVec> vecs;
    if (B.kind == "u") {
        vecs = u_basis(M);
    } else if (B.kind == "v") {
        vecs = v_basis(M);
    } else if (B.kind == "s") {
        if (B.S.empty() || B.T.empty()) fail(ErrorKind::InvalidArgument, "s basis needs --S and --T");
        auto sb = s_basis(M, parse_word(B.S), parse_word(B.T));
        vecs = sb.vecs;
        R.meta["s_turn"] = sb.s_turn.get_str();
        R.meta["t_turn"] = sb.t_turn.get_str();
        if (sb.quadratic_n) R.meta["quadratic_n"] = *sb.quadratic_n;
    } else {
        fail(ErrorKind::InvalidArgument, "basis kind must be u, v or s");
    }
    for (const auto& v : vecs) R.results.push_back(vec_json(v, C.mode));
}

struct PairingArgs {
    ModuleArgs b, d;
    std::string e = "u:0", f = "v:0";
};

StateVec labelled(const ModulePtr& M, const std::string& label) {
    auto p = split(label, ':');
    if (p.size() != 2) fail(ErrorKind::InvalidArgument, "basis label must be 'u:k' or 'v:m'");
    const long k = floor_mod(std::stol(p[1]), M->N);
    if (p[0] == "u") return basis_vector(M, k);
    if (p[0] == "v") return v_vector(M, k);
    fail(ErrorKind::InvalidArgument, "basis label must start with u or v");
}

void run_pairing(const PairingArgs& P, const Config& C, Report& R) {
    ModulePtr MB = module_of(P.b), MD = module_of(P.d);
    auto res = pairing(labelled(MB, P.e), labelled(MD, P.f));
    R.results.push_back({{"e", P.e}, {"f", P.f}, {"value", scalar_json(res.value, C.mode)}, {"compatible", res.compatible}});
}

// ---- transform -----------------------------------------------------------------------------

struct TransformArgs {
    ModuleArgs mod{"1/2,1/8", "0,0"};
    std::string name = "fourier";
    long b = 1, d = 1, m = 2;
    long samples = 4;
};

void run_transform(const TransformArgs& T, const Config& C, Report& R) {
    ModulePtr M = module_of(T.mod);
    RegUnitary L;
    if (T.name == "fourier") {
        L = fourier(M);
    } else if (T.name == "gaussian") {
        L = gaussian(M, T.b, T.d);
    } else if (T.name == "diagonal") {
        L = diagonal(M, T.m);
    } else if (T.name == "free") {
        L = free_evolution(M, parse_rat(C.t));
    } else if (T.name == "qho") {
        auto [e, f, c] = parse_triple(C.triple);
        L = qho_evolution(M, e, f, c);
    } else {
        fail(ErrorKind::InvalidArgument, "unknown transform '" + T.name + "'");
    }
    const double tol = C.tol < 0 ? 1e-9 : C.tol;
    R.meta["module"] = M->str();
    R.meta["N"] = M->N;
    R.meta["transform"] = L.name;
    json info = {{"dim", L.dim},
                 {"gL", to_string(L.gL)},
                 {"realized_gL", to_string(realized_matrix(L))},
                 {"S", L.S.str()},
                 {"T", L.T.str()},
                 {"sigma_S", L.S2.str()},
                 {"sigma_T", L.T2.str()}};
    auto reps = verify_conjugation(L, sigma_identities(L), tol);
    reps.push_back(verify_isometry(L, tol));
    json conj = json::array();
    for (const auto& r : reps) {
        conj.push_back({{"name", r.name}, {"holds", r.holds}, {"exact", r.exact}, {"residual", r.residual}});
        R.checks.push_back({r.name, r.residual, tol, r.holds});
    }
    info["conjugation"] = conj;
    json entries = json::array();
    if (same_module(*L.src, *L.dst)) {
        const long n = std::min(T.samples, L.dim);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                const cplx z = kernel_value(L, i, j);
                entries.push_back({{"n", i}, {"m", j}, {"re", z.real()}, {"im", z.imag()}});
            }
    }
    info["kernel_samples"] = entries;
    R.results.push_back(info);
}

// ---- physics -------------------------------------------------------------------------------

void scale_meta(Report& R, const Config& C, const std::vector<long>& divs) {
    R.meta["h"] = C.h;
    R.meta["mu_policy"] = C.mu == "auto" ? kAutoPolicy : "explicit";
    R.meta["required_divisors"] = divs;
    R.meta["scale"] = C.scale;
    R.meta["seed"] = C.seed;
    R.meta["mode"] = C.mode;
}

void run_propagator(const std::string& kind, const Config& C, Report& R) {
    const Rat h = parse_rat(C.h);
    const auto grid = parse_grid(C.grid);
    const double tol = C.tol < 0 ? 1e-9 : C.tol;
    std::vector<long> divs;
    std::array<long, 3> tr{};
    Rat t;
    if (kind == "free") {
        t = parse_rat(C.t);
        divs = free_divisors(t);
        R.meta["t"] = C.t;
    } else if (kind == "qho") {
        tr = parse_triple(C.triple);
        divs = qho_divisors(tr[0], tr[1], tr[2], false);
        R.meta["triple"] = C.triple;
    } else {
        fail(ErrorKind::InvalidArgument, "propagator kind must be free or qho");
    }
    scale_meta(R, C, divs);
    const auto mus = parse_mus(C, h, divs);
    R.meta["mu"] = mus;
    for (long mu : mus) {
        const ScaleParams P(h, mu);
        const long G = static_cast<long>(grid.size());
        std::vector<KernelSample> out(static_cast<size_t>(G * G));
        parallel_for(G * G, C.jobs, [&](long i) {
            const double x1 = grid[i / G], x2 = grid[i % G];
            out[i] = kind == "free" ? free_propagator(x1, x2, t, P) : qho_propagator(x1, x2, tr[0], tr[1], tr[2], P);
        });
        double worst = 0;
        for (const auto& s : out) {
            add_kernel_row(R, mu, P.N(), kind, s);
            worst = std::max(worst, s.abs_err());
        }
        R.checks.push_back({"max_abs_err mu=" + std::to_string(mu), worst, tol, worst <= tol});
    }
}

void run_trace(const std::string& kind, const Config& C, Report& R) {
    if (kind != "qho") fail(ErrorKind::InvalidArgument, "only 'trace qho' is available");
    const Rat h = parse_rat(C.h);
    const auto tr = parse_triple(C.triple);
    const double tol = C.tol < 0 ? 1e-9 : C.tol;
    const auto divs = qho_divisors(tr[0], tr[1], tr[2], true);
    scale_meta(R, C, divs);
    R.meta["triple"] = C.triple;
    const auto mus = parse_mus(C, h, divs);
    R.meta["mu"] = mus;
    for (long mu : mus) {
        const ScaleParams P(h, mu);
        const auto T = qho_trace(tr[0], tr[1], tr[2], P);
        R.rows.push_back({std::to_string(mu), std::to_string(P.N()), "trace", "", "", num(T.brute.real()), num(T.brute.imag()),
                          num(T.closed.real()), num(T.closed.imag()), num(T.abs_err())});
        R.results.push_back({{"mu", mu},
                             {"N", P.N()},
                             {"quantity", "trace"},
                             {"re", T.brute.real()},
                             {"im", T.brute.imag()},
                             {"closed_re", T.closed.real()},
                             {"closed_im", T.closed.imag()},
                             {"abs_err", T.abs_err()},
                             {"tr_abs", std::abs(T.brute)},
                             {"terms", T.terms}});
        R.checks.push_back({"trace mu=" + std::to_string(mu), T.abs_err(), tol, T.abs_err() <= tol});
    }
}

void run_converge(const std::string& kind, const Config& C, Report& R) {
    static const std::map<std::string, Quantity> kinds{
        {"ccr", Quantity::Ccr}, {"free", Quantity::Free}, {"qho", Quantity::Qho}, {"weakring", Quantity::WeakRing}};
    auto it = kinds.find(kind);
    if (it == kinds.end()) fail(ErrorKind::InvalidArgument, "converge kind must be ccr, free, qho or weakring");
    StudyOptions opt;
    opt.h = parse_rat(C.h);
    opt.t = parse_rat(C.t);
    auto tr = parse_triple(C.triple);
    opt.e = tr[0];
    opt.f = tr[1];
    opt.c = tr[2];
    opt.grid = parse_grid(C.grid);
    opt.seed = C.seed;
    std::vector<long> divs{2};
    if (kind == "free") divs = free_divisors(opt.t);
    if (kind == "qho") divs = qho_divisors(opt.e, opt.f, opt.c, false);
    scale_meta(R, C, divs);
    if (kind == "free") R.meta["t"] = C.t;
    if (kind == "qho") R.meta["triple"] = C.triple;
    std::vector<long> mus = parse_mus(C, opt.h, divs);
    R.meta["mu"] = mus;
    // one study per mu, run in parallel, then fitted together
    std::vector<double> res(mus.size());
    parallel_for(static_cast<long>(mus.size()), C.jobs,
                 [&](long i) { res[i] = converge_study(it->second, {mus[i]}, opt).residuals[0]; });
    const double order = fit_loglog(mus, res);
    for (size_t i = 0; i < mus.size(); ++i) {
        const long N = ScaleParams(opt.h, mus[i]).N();
        R.rows.push_back({std::to_string(mus[i]), std::to_string(N), kind, "", "", num(res[i]), "0", "", "", num(res[i])});
        R.results.push_back({{"mu", mus[i]}, {"N", N}, {"quantity", kind}, {"residual", res[i]}});
    }
    R.meta["fitted_order"] = order;
    if (kind == "ccr") {
        if (mus.size() >= 2) R.checks.push_back({"|fitted_order + 1|", std::abs(order + 1.0), 0.2, std::abs(order + 1.0) <= 0.2});
    } else {
        const double tol = C.tol >= 0 ? C.tol : (kind == "weakring" ? 1e-6 : 1e-9);
        const double worst = *std::max_element(res.begin(), res.end());
        R.checks.push_back({"max_residual", worst, tol, worst <= tol});
    }
}

// ---- output --------------------------------------------------------------------------------

void write_report(const Report& R, const Config& C, const std::string& command, bool text_default) {
    std::ofstream file;
    if (!C.out.empty()) {
        file.open(C.out);
        if (!file) fail(ErrorKind::InvalidArgument, "cannot open output file '" + C.out + "'");
    }
    std::ostream& os = C.out.empty() ? std::cout : file;
    if (C.format == "csv") {
        os << "mu,N,quantity,x1,x2,re,im,closed_re,closed_im,abs_err\n";
        for (const auto& r : R.rows) {
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return;
    }
    if (C.format == "text" || (text_default && C.format.empty())) {
        if (!R.text.empty()) {
            os << R.text;
        } else if (!R.checks.empty()) {
            for (const auto& c : R.checks) os << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  " << c.value << " <= " << c.bound << "\n";
        } else {
            os << json(R.results).dump(2) << "\n";
        }
        return;
    }
    json meta = R.meta;
    meta["command"] = command;
    json checks = json::array();
    for (const auto& c : R.checks) checks.push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
    json doc = {{"meta", meta}, {"results", R.results}, {"checks", checks}};
    os << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite quantum mechanics toolkit: Weyl algebras at roots of unity, regular transformations, "
                 "and finite-N propagators"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");
    Config C;

    auto common = [&](CLI::App* sc, bool physics) {
        sc->set_help_flag("--help", "Print this help message and exit");
        sc->add_option("--format", C.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
        sc->add_option("--out", C.out, "Write output to this file instead of stdout");
        sc->add_option("--mode", C.mode, "Scalar output: exact strings or floats")->check(CLI::IsMember({"exact", "float"}));
        sc->add_option("--tol", C.tol, "Tolerance for pass/fail checks");
        if (!physics) return;
        sc->add_option("--h", C.h, "Planck parameter h as 'p/q' (hbar = 2 pi h)");
        sc->add_option("--mu", C.mu, std::string("Scale mu: an integer, a comma list, or ") + kAutoPolicy);
        sc->add_option("--scale", C.scale, "Multiplier applied to the auto mu")->check(CLI::PositiveNumber);
        sc->add_option("--triple", C.triple, "Pythagorean triple e,f,c with sin t = e/c, cos t = f/c");
        sc->add_option("--t", C.t, "Free evolution time b/d");
        sc->add_option("--grid", C.grid, "Positions: 'x1,x2,...' or 'lo:hi:step'");
        sc->add_option("--jobs", C.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sc->add_option("--seed", C.seed, "Sampler seed");
    };

    LatticeArgs LA;
    auto* lat = app.add_subcommand("lattice", "Weyl algebra lattice queries");
    lat->add_option("--center", LA.center, "Center Z(A) of A(a,b), given as 'a,b'");
    lat->add_option("--up", LA.up, "Smallest algebra with the given commutative algebra as center");
    lat->add_option("--join", LA.join, "Join of two algebras 'a,b;c,d'");
    lat->add_option("--sub", LA.sub, "Inclusion test: candidate subalgebra");
    lat->add_option("--amb", LA.amb, "Inclusion test: ambient algebra");
    lat->add_option("--maximal", LA.maximal, "Maximal commutative subalgebras O(A)");
    common(lat, false);

    BasisArgs BA;
    auto* bas = app.add_subcommand("basis", "Dump u, v or canonical S bases");
    bas->add_option("--alg", BA.mod.alg, "Algebra 'a,b'");
    bas->add_option("--point", BA.mod.point, "Spectral point 'tu,tv' (turns)");
    bas->add_option("--kind", BA.kind, "u, v or s")->check(CLI::IsMember({"u", "v", "s"}));
    bas->add_option("--S", BA.S, "S word 'u,v[,turn]' for kind s");
    bas->add_option("--T", BA.T, "T word 'u,v[,turn]' for kind s");
    common(bas, false);

    PairingArgs PA;
    auto* par = app.add_subcommand("pairing", "Pairing [e|f] of two basis vectors");
    par->add_option("--alg-b", PA.b.alg, "Algebra of e");
    par->add_option("--point-b", PA.b.point, "Spectral point of e");
    par->add_option("--alg-d", PA.d.alg, "Algebra of f");
    par->add_option("--point-d", PA.d.point, "Spectral point of f");
    par->add_option("--e", PA.e, "Label of e: u:k or v:m");
    par->add_option("--f", PA.f, "Label of f: u:k or v:m");
    common(par, false);

    TransformArgs TA;
    auto* trf = app.add_subcommand("transform", "Build a regular transformation and verify its conjugation identities");
    trf->add_option("name", TA.name, "fourier, gaussian, diagonal, free or qho")
        ->check(CLI::IsMember({"fourier", "gaussian", "diagonal", "free", "qho"}));
    trf->add_option("--alg", TA.mod.alg, "Algebra 'a,b'");
    trf->add_option("--point", TA.mod.point, "Spectral point 'tu,tv'");
    trf->add_option("--b", TA.b, "Gaussian parameter b");
    trf->add_option("--d", TA.d, "Gaussian parameter d");
    trf->add_option("--m", TA.m, "Diagonal index m");
    trf->add_option("--samples", TA.samples, "Kernel entries sampled per axis");
    common(trf, true);

    std::string kind;
    auto* prop = app.add_subcommand("propagator", "Finite-N propagator against its closed form");
    prop->add_option("kind", kind, "free or qho")->required()->check(CLI::IsMember({"free", "qho"}));
    common(prop, true);

    auto* trc = app.add_subcommand("trace", "Trace of the harmonic evolution");
    trc->add_option("kind", kind, "qho")->required()->check(CLI::IsMember({"qho"}));
    common(trc, true);

    auto* conv = app.add_subcommand("converge", "Residual sweep over mu with a log-log fitted order");
    conv->add_option("kind", kind, "ccr, free, qho or weakring")->required()->check(CLI::IsMember({"ccr", "free", "qho", "weakring"}));
    common(conv, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Report R;
    std::string command;
    bool text_default = false;
    try {
        if (lat->parsed()) {
            command = "lattice";
            text_default = true;
            run_lattice(LA, R);
        } else if (bas->parsed()) {
            command = "basis";
            run_basis(BA, C, R);
        } else if (par->parsed()) {
            command = "pairing";
            run_pairing(PA, C, R);
        } else if (trf->parsed()) {
            command = "transform";
            run_transform(TA, C, R);
        } else if (prop->parsed()) {
            command = "propagator " + kind;
            run_propagator(kind, C, R);
        } else if (trc->parsed()) {
            command = "trace " + kind;
            run_trace(kind, C, R);
        } else if (conv->parsed()) {
            command = "converge " + kind;
            run_converge(kind, C, R);
        }
        write_report(R, C, command, text_default);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    bool ok = std::all_of(R.checks.begin(), R.checks.end(), [](const Check& c) { return c.pass; });
    if (!ok) {
        for (const auto& c : R.checks)
            if (!c.pass) std::cerr << "check failed: " << c.name << " value " << c.value << " bound " << c.bound << "\n";
    }
    return ok ? 0 : 1;
}
