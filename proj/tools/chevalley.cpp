#include "chevalley/amplifier.hpp"
#include "chevalley/arch.hpp"
#include "chevalley/config.hpp"
#include "chevalley/envelope.hpp"
#include "chevalley/json_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

using namespace chevalley;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const json& j) { std::cout << record(j) << "\n"; }

std::vector<double> parse_reals(const std::string& s) {
    std::string t = s;
    for (char& ch : t)
        if (ch == '[' || ch == ']' || ch == ':') ch = ',';
    std::vector<double> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(to_double(parse_rational(item)));
    return out;
}

Weight parse_weight(const RootDatum& rd, std::string s) {
    // "w1", "varpi2", "ϖ" (rank one) or integer coordinates "[1,0]"
    const std::string pi = "ϖ";
    if (s.rfind(pi, 0) == 0) s = "w" + s.substr(pi.size());
    if (s.rfind("varpi", 0) == 0) s = "w" + s.substr(5);
    Weight w(rd.rank, Lattice::DualCharacter);
    if (!s.empty() && s[0] == 'w') {
        int i = s.size() == 1 ? 1 : std::stoi(s.substr(1));
        if (i < 1 || i > rd.rank) throw Error("usage", "no fundamental weight " + s);
        w[i - 1] = 1;
        return w;
    }
    auto v = parse_reals(s);
    if (static_cast<int>(v.size()) != rd.rank) throw Error("usage", "weight needs " + std::to_string(rd.rank) + " coordinates");
    for (int i = 0; i < rd.rank; ++i) {
        if (v[i] != std::floor(v[i])) throw Error("usage", "weight coordinates must be integers");
        w[i] = static_cast<int>(v[i]);
    }
    if (!rd.in_character_lattice(w)) throw Error("usage", w.str() + " is not a character of the dual torus");
    return w;
}

// "h:w1^2*e:[1,1]", "1"
InvariantFunction parse_moment(const RootDatumPtr& rd, const std::string& s) {
    InvariantFunction out = InvariantFunction::constant(rd, GaussQ(Rational(1)));
    if (s == "1") return out;
    std::stringstream ss(s);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
        int power = 1;
        auto caret = factor.rfind('^');
        if (caret != std::string::npos) {
            power = std::stoi(factor.substr(caret + 1));
            factor = factor.substr(0, caret);
        }
        if (factor.size() < 3 || factor[1] != ':') throw Error("usage", "moment factors look like h:w1 or e:[1,0]");
        Weight w = parse_weight(*rd, factor.substr(2));
        InvariantFunction f;
        if (factor[0] == 'h')
            f = weyl_character(rd, w);
        else if (factor[0] == 'e')
            f = orbit_average(rd, w);
        else
            throw Error("usage", "moment basis must be h or e");
        for (int k = 0; k < power; ++k) out = multiply(out, f);
    }
    return out;
}

double parse_prime(const std::string& s) {
    if (s == "inf" || s == "oo" || s == "st" || s == "0") return 0;
    try {
        double p = std::stod(s);
        if (p < 2) throw Error("usage", "p must be a prime or inf");
        return p;
    } catch (const std::invalid_argument&) {
        throw Error("usage", "p must be a prime or inf");
    }
}

json complex_json(Complex z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

json function_terms(const InvariantFunction& f) {
    json a = json::array();
    if (f.exact())
        for (auto& [w, c] : f.exact_coefficients()) a.push_back({{"lambda", weight_json(w)}, {"coeff", c.str()}});
    else
        for (auto& [w, c] : f.numeric_coefficients()) a.push_back({{"lambda", weight_json(w)}, {"coeff", complex_json(c)}});
    return a;
}

TorusRegion parse_region(const RootDatumPtr& rd, const std::vector<std::string>& specs) {
    TorusGeometry g(rd);
    std::vector<TorusBall> balls;
    for (auto& s : specs) {
        if (s.empty()) continue;
        TorusBall b = parse_ball(s);
        if (static_cast<int>(b.center.size()) != rd->rank) throw Error("usage", "ball centre needs rank coordinates");
        if (b.radius > 0) balls.push_back(b);
    }
    if (balls.empty()) throw Error("empty region", "empty region");
    return TorusRegion::make(g, balls);
}

SpectralRegion parse_spectral_region(const RootDatum& rd, const std::string& s) {
    // "ball:t" or "ball:t@c1,c2" (centre in varpi coordinates of i a0^*)
    if (s.rfind("ball:", 0) != 0) throw Error("usage", "region must look like ball:t or ball:t@c1,c2");
    std::string body = s.substr(5);
    auto at = body.find('@');
    double t = to_double(parse_rational(body.substr(0, at)));
    if (!(t >= 0)) throw Error("usage", "radius must be nonnegative");
    if (at == std::string::npos) return SpectralRegion::ball(rd.rank, t);
    auto c = parse_reals(body.substr(at + 1));
    if (static_cast<int>(c.size()) != rd.rank) throw Error("usage", "centre needs rank coordinates");
    SpectralRegion D;
    if (t > 0) D.balls.push_back({c, t});
    return D;
}

AmplifierConfig amp_config(const RunConfig& rc) {
    AmplifierConfig c;
    c.shrink = rc.get_double("amplifier.shrink", c.shrink);
    c.safety = rc.get_double("amplifier.safety", c.safety);
    c.degree_budget = rc.get_int("amplifier.degree_budget", c.degree_budget);
    c.grid_n = rc.get_int("amplifier.grid_n", c.grid_n);
    c.panel = rc.panel;
    return c;
}

template <class T, class F>
std::vector<T> run_pool(size_t n, int workers, F&& job) {
    std::vector<T> out(n);
    for (size_t start = 0; start < n; start += static_cast<size_t>(workers)) {
        std::vector<std::future<T>> fs;
        size_t end = std::min(n, start + static_cast<size_t>(workers));
        for (size_t i = start; i < end; ++i) fs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, job, i));
        for (size_t i = start; i < end; ++i) out[i] = fs[i - start].get();
    }
    return out;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    bool ok;
    double value, tolerance;
};

std::vector<Check> verify_suite(const RootDatumPtr& rd, bool quick, const RunConfig& rc) {
    std::vector<Check> out;
    const RootDatum& R = *rd;
    out.push_back({"positive_roots_equal_d_minus_r", static_cast<int>(R.positive_roots.size()) == R.dim_d - R.rank,
                   static_cast<double>(R.positive_roots.size()), 0});
    out.push_back({"weyl_order", BigInt(R.weyl().order()) == RootDatum::expected_weyl_order(R.series, R.rank),
                   static_cast<double>(R.weyl().order()), 0});
    bool rho_ok = true;
    for (int i = 0; i < R.rank; ++i) rho_ok = rho_ok && R.rho[i] == 1;
    out.push_back({"rho_pairs_to_one", rho_ok, 0, 0});

    // gram invariance under simple reflections, exact
    bool gram_ok = true;
    for (int s = 0; s < R.rank; ++s) {
        size_t w = R.weyl().simple(s);
        for (int a = 0; a < R.rank; ++a)
            for (int b = 0; b < R.rank; ++b) {
                Rational v = 0;
                for (int i = 0; i < R.rank; ++i)
                    for (int j = 0; j < R.rank; ++j)
                        v += Rational(R.weyl().varpi_entry(w, i, a)) * R.gram[i][j] * R.weyl().varpi_entry(w, j, b);
                gram_ok = gram_ok && v == R.gram[a][b];
            }
    }
    out.push_back({"gram_weyl_invariant", gram_ok, 0, 0});

    // h_lambda(1) = dim V_lambda and the L1 sandwich on small dominant lambda
    bool dim_ok = true, sandwich_ok = true;
    long cases = 0;
    std::vector<Weight> lams;
    {
        std::vector<int> k(R.rank, 0);
        for (;;) {
            Weight w(R.rank, Lattice::DualCharacter);
            for (int i = 0; i < R.rank; ++i) w[i] = k[i];
            if (R.in_character_lattice(w) && R.pair_rho(w) <= 4) lams.push_back(w);
            int i = 0;
            while (i < R.rank && ++k[i] > 8) k[i++] = 0;
            if (i == R.rank) break;
        }
    }
    for (auto& lam : lams) {
        InvariantFunction e = to_orbit_basis(weyl_character(rd, lam));
        Rational at1 = 0;
        for (auto& [mu, c] : e.exact_coefficients()) at1 += c.re;  // e_mu(1) = 1
        dim_ok = dim_ok && at1 == Rational(weyl_dimension(R, lam));
        for (long long p : {2LL, 3LL}) {
            QSqrt v = character_at_rho_p(R, lam, p);
            Rational e2 = 2 * R.pair_rho(lam);
            long long n = static_cast<long long>(e2.convert_to<double>());
            QSqrt low;
            Rational pk = Rational(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n / 2)));
            if (n % 2 == 0)
                low.a = pk;
            else
                low.b = pk;
            QSqrt d1{v.a - low.a, v.b - low.b};
            Rational dim(weyl_dimension(R, lam));
            QSqrt d2{dim * low.a - v.a, dim * low.b - v.b};
            sandwich_ok = sandwich_ok && sign(d1, p) >= 0 && sign(d2, p) >= 0;
            ++cases;
        }
    }
    out.push_back({"character_at_identity_is_dimension", dim_ok, static_cast<double>(lams.size()), 0});
    out.push_back({"l1_sandwich", sandwich_ok, static_cast<double>(cases), 0});

    // beta two ways
    {
        std::mt19937_64 rng(rc.seed);
        std::uniform_real_distribution<double> U(-20, 20);
        double worst = 0;
        for (int k = 0; k < (quick ? 100 : 1000); ++k) {
            std::vector<double> v(R.rank);
            for (auto& x : v) x = U(rng);
            auto l = SpectralParameter::imaginary(v);
            double a = beta(R, l), b = beta_via_c(R, l);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        out.push_back({"beta_two_paths", worst <= 1e-10, worst, 1e-10});
    }

    // Plancherel masses
    for (double p : {0.0, 2.0, 5.0}) {
        PlancherelMeasure m(rd, p, rc.quad_tol);
        auto v = m.integrate(InvariantFunction::constant(rd, GaussQ(Rational(1))));
        double err = std::abs(v.value - 1.0);
        out.push_back({p == 0 ? "plancherel_mass_sato_tate" : "plancherel_mass_p" + std::to_string(static_cast<int>(p)),
                       err <= 1e-8, err, 1e-8});
    }

    if (!quick) {
        auto sp = make_special(PWFunction::bump(rd, 1.0), rc.cert_slack, rc.seed);
        out.push_back({"special_function_certified", sp.certified, sp.sampled_sup, sp.bound});
        if (R.rank == 1) {
            TorusGeometry g(rd);
            auto c = g.lattice_to_alpha({0.25});
            auto U = TorusRegion::make(g, {TorusBall{c, 0.15, {}}});
            auto d = design_amplifier(rd, U, amp_config(rc));
            auto e = build_amplifier(d, 2);
            out.push_back({"amplifier_p2", e.cert.ok, e.cert.min_S, 1e-6});
        }
    }
    return out;
}

// ---------------------------------------------------------------- subcommands

struct Globals {
    std::string config, group;
    std::string cache_dir, format;
    unsigned seed = 0;
    int workers = 0;
    RunConfig rc;
};

RootDatumPtr group_of(const Globals& g) { return RootDatum::parse(g.rc.group); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chevalley: character ring, Plancherel measures, amplifiers and Weyl-law envelopes"};
    app.require_subcommand(1);
    Globals G;
    app.add_option("--config", G.config, "key-value config file with [sections]");
    app.add_option("--group", G.group, "root datum, e.g. A1sc, A2adj, G2");
    app.add_option("--cache-dir", G.cache_dir, "cache directory (default CHEVALLEY_CACHE_DIR or ./cache)");
    app.add_option("--format", G.format, "json or csv");
    app.add_option("--seed", G.seed, "seed for every sampled check");
    app.add_option("--workers", G.workers, "worker pool size");
    app.fallthrough();

    auto* rootdata = app.add_subcommand("rootdata", "root datum as JSON");

    auto* chr = app.add_subcommand("char", "characters and base change");
    std::string lambda_s, basis_s = "character", to_s, p_s, theta_s;
    chr->add_option("--lambda", lambda_s, "dominant dual character: w1, [1,0], ...")->required();
    chr->add_option("--basis", basis_s, "character (h) or orbit (e)")->check(CLI::IsMember({"character", "orbit", "h", "e"}));
    chr->add_option("--to", to_s, "express in this basis")->check(CLI::IsMember({"character", "orbit", "h", "e"}));
    chr->add_option("--p", p_s, "evaluate at p^rho");
    chr->add_option("--theta", theta_s, "evaluate at exp(2 pi i theta), simple-root coordinates");

    auto* planch = app.add_subcommand("plancherel", "p-adic and Sato-Tate Plancherel integrals");
    planch->require_subcommand(1);
    auto* padic = planch->add_subcommand("padic", "integrate a moment");
    std::string pp_s = "inf", moment_s = "1";
    padic->add_option("--p", pp_s, "prime, or inf for Sato-Tate");
    padic->add_option("--moment", moment_s, "product of h:WEIGHT or e:WEIGHT factors with optional ^k");
    auto* moments = planch->add_subcommand("moments", "table of mu(h_lambda) and mu(h_lambda^2)");
    int max_level = 4;
    moments->add_option("--p", pp_s, "prime, or inf for Sato-Tate");
    moments->add_option("--max", max_level, "largest <lambda, rho>");

    auto* amp = app.add_subcommand("amplify", "amplifiers, separation data and theta");
    amp->require_subcommand(1);
    auto* build = amp->add_subcommand("build", "certified amplifier tau_{U,p}");
    std::vector<std::string> U_s;
    std::vector<long long> primes;
    build->add_option("--U", U_s, "ball center=a:b,r=x (simple-root coordinates); repeatable");
    build->add_option("--p", primes, "primes (default: the panel)")->delimiter(',');
    auto* separate = amp->add_subcommand("separate", "separation datum for a proper Levi");
    int levi = 0;
    long replay = 0;
    separate->add_option("--levi", levi, "index of the proper standard Levi");
    separate->add_option("--replay", replay, "random replay samples");
    auto* theta = amp->add_subcommand("theta", "multi-prime amplifier theta");
    double X = 30;
    long long N = 4;
    std::string mu_s;
    theta->add_option("--X", X, "prime bound");
    theta->add_option("--N", N, "modulus");
    theta->add_option("--mu", mu_s, "imaginary spectral parameter, varpi coordinates")->required();
    theta->add_option("--levi", levi, "index of the proper standard Levi");

    auto* arch = app.add_subcommand("arch", "archimedean Plancherel and Paley-Wiener functions");
    arch->require_subcommand(1);
    auto* abeta = arch->add_subcommand("beta", "Plancherel density at an imaginary lambda");
    std::string lam_s;
    abeta->add_option("--lambda", lam_s, "varpi coordinates of Im lambda")->required();
    auto* avol = arch->add_subcommand("weyl-volume", "mu_pl of the ball of radius t");
    double t = 100;
    avol->add_option("--t", t, "radius");
    auto* aspec = arch->add_subcommand("special", "certified special Paley-Wiener function");
    double R = 1.0;
    aspec->add_option("--R", R, "Paley-Wiener type");

    auto* env = app.add_subcommand("envelope", "main term and remainder envelopes");
    std::string D_s = "ball:100", theta_file, S_s;
    double vK = 1, delta = 0.1;
    EnvelopeConstants consts;
    long long level_N = 0;
    env->add_option("--D", D_s, "ball:t or ball:t@c1,c2");
    env->add_option("--vK", vK, "volume v_K");
    env->add_option("--delta", delta, "saving exponent");
    env->add_option("--A", consts.A, "amplifier exponent");
    env->add_option("--C-boundary", consts.C_boundary, "constant of the boundary term");
    env->add_option("--C-saving", consts.C_saving, "constant of the saving term");
    env->add_option("--theta", theta_file, "theta certificate (output of amplify theta)");
    env->add_option("--S", S_s, "ramified primes, comma separated");
    env->add_option("--N", level_N, "Dirichlet level (default: product of S)");

    auto* verify = app.add_subcommand("verify", "certificate and property suite");
    bool quick = false;
    verify->add_flag("--quick", quick, "skip the slow checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!G.config.empty()) G.rc = RunConfig::load(G.config);
        if (!G.group.empty()) G.rc.group = G.group;
        if (!G.cache_dir.empty()) G.rc.cache_dir = G.cache_dir;
        if (!G.format.empty()) G.rc.format = G.format;
        if (G.seed) G.rc.seed = G.seed;
        if (G.workers) G.rc.workers = G.workers;
        G.rc.validate();
        const RunConfig& rc = G.rc;
        if (rc.format == "csv" && !moments->parsed()) throw Error("usage", "csv output exists for moment tables only");
        Cache cache(rc.cache_dir);
        auto rd = group_of(G);

        if (rootdata->parsed()) {
            json j = to_json(*rd);
            j["hash"] = root_datum_hash(*rd);
            if (!cache.get(*rd, "rootdata")) cache.put(*rd, "rootdata", j);
            emit(j);
            return 0;
        }

        if (chr->parsed()) {
            Weight lam = parse_weight(*rd, lambda_s);
            if (!lam.is_dominant()) throw Error("usage", "lambda must be dominant");
            bool as_char = basis_s == "character" || basis_s == "h";
            InvariantFunction f = as_char ? weyl_character(rd, lam) : orbit_average(rd, lam);
            if (!to_s.empty()) f = (to_s == "character" || to_s == "h") ? to_character_basis(f) : to_orbit_basis(f);
            json j;
            j["group"] = rd->name();
            j["lambda"] = weight_json(lam);
            j["basis"] = basis_name(f.basis());
            j["support"] = function_terms(f);
            TorusPoint pt = TorusPoint::compact(std::vector<double>(rd->rank, 0.0));
            if (!p_s.empty()) {
                double p = parse_prime(p_s);
                if (p == 0) throw Error("usage", "--p needs a finite prime");
                std::vector<double> rho_a(rd->rank);
                for (int i = 0; i < rd->rank; ++i) rho_a[i] = to_double(rd->rho_alpha[i]);
                pt = TorusPoint::prime_power(rho_a, p);
            } else if (!theta_s.empty()) {
                auto th = parse_reals(theta_s);
                if (static_cast<int>(th.size()) != rd->rank) throw Error("usage", "theta needs rank coordinates");
                pt = TorusPoint::compact(th);
            }
            j["value"] = complex_json(evaluate(f, pt));
            j["tolerance"] = 1e-12;
            if (as_char) j["character_table"] = character_table(rd, lam, &cache);
            emit(j);
            return 0;
        }

        if (padic->parsed()) {
            double p = parse_prime(pp_s);
            PlancherelMeasure m(rd, p, rc.quad_tol);
            auto f = parse_moment(rd, moment_s);
            auto v = m.integrate(f);
            emit({{"group", rd->name()},
                  {"p", p == 0 ? json("inf") : json(p)},
                  {"moment", moment_s},
                  {"value", complex_json(v.value)},
                  {"nodes", v.nodes},
                  {"residual", num(v.residual)},
                  {"tolerance", rc.quad_tol}});
            return 0;
        }

        if (moments->parsed()) {
            double p = parse_prime(pp_s);
            PlancherelMeasure m(rd, p, rc.quad_tol);
            std::vector<Weight> lams;
            std::vector<int> k(rd->rank, 0);
            for (;;) {
                Weight w(rd->rank, Lattice::DualCharacter);
                for (int i = 0; i < rd->rank; ++i) w[i] = k[i];
                if (rd->in_character_lattice(w) && rd->pair_rho(w) <= max_level) lams.push_back(w);
                int i = 0;
                while (i < rd->rank && ++k[i] > 2 * max_level) k[i++] = 0;
                if (i == rd->rank) break;
            }
            std::sort(lams.begin(), lams.end(), [&](const Weight& a, const Weight& b) {
                auto pa = rd->pair_rho(a), pb = rd->pair_rho(b);
                return pa != pb ? pa < pb : a < b;
            });
            auto rows = run_pool<json>(lams.size(), rc.workers, [&](size_t i) {
                auto h = weyl_character(rd, lams[i]);
                auto v1 = m.integrate(h), v2 = m.integrate(multiply(h, star(h)));
                return json{{"lambda", lams[i].str()},
                            {"rho_pairing", to_string(rd->pair_rho(lams[i]))},
                            {"mu_h", num(v1.value.real())},
                            {"mu_h_sq", num(v2.value.real())},
                            {"residual", num(std::max(v1.residual, v2.residual))}};
            });
            if (rc.format == "csv") {
                std::cout << "lambda,rho_pairing,mu_h,mu_h_sq,residual\n";
                for (auto& r : rows)
                    std::cout << '"' << r["lambda"].get<std::string>() << "\"," << r["rho_pairing"].get<std::string>() << ","
                              << r["mu_h"].dump() << "," << r["mu_h_sq"].dump() << "," << r["residual"].dump() << "\n";
            } else {
                emit({{"group", rd->name()}, {"p", p == 0 ? json("inf") : json(p)}, {"rows", rows}, {"tolerance", rc.quad_tol}});
            }
            return 0;
        }

        if (build->parsed()) {
            TorusRegion U = parse_region(rd, U_s);
            auto cfg = amp_config(rc);
            auto d = design_amplifier(rd, U, cfg);
            if (primes.empty()) primes = cfg.panel.empty() ? primes_up_to(97) : cfg.panel;
            auto els = run_pool<AmplifierElement>(primes.size(), rc.workers, [&](size_t i) { return build_amplifier(d, primes[i]); });
            bool ok = true;
            for (auto& e : els) {
                emit(to_json(e));
                ok = ok && e.cert.ok;
            }
            if (!ok) throw Failure("amplifier certificate failed");
            return 0;
        }

        if (separate->parsed()) {
            auto s = separation_find(rd, levi);
            json j = to_json(s);
            bool ok = s.certified;
            if (replay > 0) {
                auto rr = replay_separation(s, replay, rc.seed);
                j["replay"] = {{"samples", rr.samples}, {"violations", rr.violations}, {"seed", rc.seed}};
                ok = ok && rr.violations == 0;
            }
            emit(j);
            if (!ok) throw Failure("separation certificate failed");
            return 0;
        }

        if (theta->parsed()) {
            auto mu = SpectralParameter::imaginary(parse_reals(mu_s));
            if (mu.rank() != rd->rank) throw Error("usage", "mu needs rank coordinates");
            auto s = separation_find(rd, levi);
            auto designs = theta_designs(s, amp_config(rc));
            auto th = assemble_theta(s, designs, mu, X, N);
            bool ok = th.l1_ok && th.l2_ok && th.ms_ok;
            for (auto& c : th.comps) ok = ok && c.tau.cert.ok;
            emit({{"group", rd->name()}, {"separation", to_json(s)}, {"theta", to_json(th)}, {"ok", ok}});
            if (!ok) throw Failure("theta certificate failed");
            return 0;
        }

        if (abeta->parsed()) {
            auto v = parse_reals(lam_s);
            if (static_cast<int>(v.size()) != rd->rank) throw Error("usage", "lambda needs rank coordinates");
            auto l = SpectralParameter::imaginary(v);
            double a = beta(*rd, l), b = beta_via_c(*rd, l);
            emit({{"group", rd->name()},
                  {"value", num(a)},
                  {"certificate", {{"via_c_function", num(b)}, {"relative_difference", num(std::abs(a - b) / std::abs(b))},
                                   {"tolerance", 1e-10}}}});
            return 0;
        }

        if (avol->parsed()) {
            auto v = plancherel_volume_ball(*rd, t);
            emit({{"group", rd->name()},
                  {"t", t},
                  {"value", num(v.value)},
                  {"certificate", {{"weyl_constant", num(weyl_constant(rd->dim_d))}, {"ratio", num(v.ratio)},
                                   {"residual", num(v.residual)}, {"nodes", v.nodes}}}});
            return 0;
        }

        if (aspec->parsed()) {
            auto sp = make_special(PWFunction::bump(rd, R), rc.cert_slack, rc.seed);
            emit({{"group", rd->name()},
                  {"value", {{"R", R}, {"c", num(sp.c)}, {"t", num(sp.t)}}},
                  {"certificate", {{"gradient_bound", num(sp.bound)}, {"sampled_sup", num(sp.sampled_sup)},
                                   {"fd_discrepancy", num(sp.fd_discrepancy)}, {"samples", sp.samples},
                                   {"slack", rc.cert_slack}, {"certified", sp.certified}}}});
            if (!sp.certified) throw Failure("special function certificate failed");
            return 0;
        }

        if (env->parsed()) {
            SpectralRegion D = parse_spectral_region(*rd, D_s);
            auto level = LevelData::make(vK, parse_int_list(S_s), level_N);
            EnvelopeReport e;
            json extra;
            if (!theta_file.empty()) {
                std::ifstream in(theta_file);
                if (!in) throw Error("usage", "cannot read " + theta_file);
                json tj;
                try {
                    tj = json::parse(in);
                } catch (const json::exception&) {
                    throw Error("usage", "theta certificate is not JSON");
                }
                auto ts = theta_summary(tj);
                EnvelopeConstants c = consts;
                if (ts.A > 0) c.A = ts.A;
                e = hecke_envelope(*rd, D, delta, ts.l1_total, ts.ms_bound, c, ts.log_l1_total);
                extra = {{"l1_total", num(ts.l1_total)}, {"ms_bound", num(ts.ms_bound)}, {"A", num(ts.A)}};
            } else {
                e = remainder_envelope(*rd, D, delta, consts);
            }
            e.main_term = main_term(level, *rd, D, &e.main_residual);
            json j = to_json(e);
            j["group"] = rd->name();
            j["D"] = D_s;
            j["level"] = {{"v_K", vK}, {"N", level.N}, {"S", level.S}};
            if (!extra.is_null()) j["theta"] = extra;
            emit(j);
            return 0;
        }

        if (verify->parsed()) {
            auto checks = verify_suite(rd, quick, rc);
            json arr = json::array();
            int failed = 0;
            for (auto& c : checks) {
                arr.push_back({{"name", c.name}, {"ok", c.ok}, {"value", num(c.value)}, {"tolerance", num(c.tolerance)}});
                if (!c.ok) ++failed;
            }
            emit({{"group", rd->name()},
                  {"quick", quick},
                  {"checks", arr},
                  {"passed", static_cast<int>(checks.size()) - failed},
                  {"failed", failed}});
            return failed ? 1 : 0;
        }
    } catch (const Failure& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        if (e.kind == "usage" || e.kind == "invalid-type" || e.kind == "parse" || e.kind == "lattice" ||
            e.kind == "non-dominant" || e.kind == "invalid-delta") {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        emit({{"error", e.kind}, {"message", e.what()}});
        return 1;
    } catch (const std::exception& e) {
        emit({{"error", "internal"}, {"message", e.what()}});
        return 1;
    }
    return 2;
}
