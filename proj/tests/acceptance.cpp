// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include "chevalley/amplifier.hpp"
#include "chevalley/arch.hpp"
#include "chevalley/envelope.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace chevalley;

namespace {

constexpr double kVolumeTolA1 = 0.03, kVolumeTolA2 = 0.05, kVolumeSeconds = 60;
constexpr double kBetaTol = 1e-10, kBetaSeconds = 10;
constexpr double kMassTol = 1e-8, kMassSeconds = 30;
constexpr double kSatoTateTol = 1e-6, kMonotoneNoise = 1e-12;
constexpr double kIdentityTol = 1e-7, kPositivityTol = 1e-6, kSlopeTol = 0.01, kCertSeconds = 600;
constexpr long kReplaySamples = 100000;
constexpr int kFloorSamples = 10000, kFloorCentres = 10, kDecayOrder = 4;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Weight> dominant_below(const RootDatum& rd, const Rational& level) {
    std::vector<Weight> out;
    std::vector<int> k(rd.rank, 0);
    const int cap = 2 * static_cast<int>(std::ceil(to_double(level))) + 2;
    for (;;) {
        Weight w(rd.rank, Lattice::DualCharacter);
        for (int i = 0; i < rd.rank; ++i) w[i] = k[i];
        if (rd.in_character_lattice(w) && rd.pair_rho(w) <= level) out.push_back(w);
        int i = 0;
        while (i < rd.rank && ++k[i] > cap) k[i++] = 0;
        if (i == rd.rank) break;
    }
    return out;
}

// 1. Weyl main-term constant
Outcome weyl_constant_check() {
    std::ostringstream s;
    bool ok = true;
    struct Case {
        const char* g;
        double t, tol;
    };
    for (auto c : {Case{"A1sc", 100, kVolumeTolA1}, Case{"A2adj", 50, kVolumeTolA2}}) {
        auto t0 = std::chrono::steady_clock::now();
        auto rd = RootDatum::parse(c.g);
        auto v = plancherel_volume_ball(*rd, c.t);
        double ratio = v.value / (std::pow(c.t, rd->dim_d) * weyl_constant(rd->dim_d));
        double sec = seconds_since(t0);
        bool pass = std::abs(ratio - 1) <= c.tol && sec <= kVolumeSeconds;
        ok = ok && pass;
        s << c.g << " t=" << c.t << " ratio=" << ratio << " (" << sec << "s) ";
    }
    return {ok, s.str()};
}

// 2. beta two-path
Outcome beta_check() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0, worst_oracle = 0;
    for (auto name : {"A1sc", "A2adj", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> U(-25, 25);
        std::vector<double> ones(rd->rank, 1.0);
        for (int k = 0; k < 1000; ++k) {
            std::vector<double> v(rd->rank);
            for (auto& x : v) x = U(rng);
            auto l = SpectralParameter::imaginary(v);
            double a = beta(*rd, l), b = beta_via_c(*rd, l);
            std::vector<double> lp, rp;
            for (size_t j = 0; j < rd->positive_roots.size(); ++j) {
                lp.push_back(rd->pair_coroot(v, static_cast<int>(j)));
                rp.push_back(rd->pair_coroot(ones, static_cast<int>(j)));
            }
            double o = oracle::beta_closed_form(lp, rp);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
            worst_oracle = std::max(worst_oracle, std::abs(a - o) / std::abs(o));
        }
    }
    double sec = seconds_since(t0);
    std::ostringstream s;
    s << "max rel err " << worst << ", vs closed form " << worst_oracle << " (" << sec << "s)";
    return {worst <= kBetaTol && worst_oracle <= kBetaTol && sec <= kBetaSeconds, s.str()};
}

// 3. p-adic Plancherel masses
Outcome mass_check() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    for (auto name : {"A1sc", "A1adj", "A2sc", "A2adj", "B2sc", "B2adj"}) {
        auto rd = RootDatum::parse(name);
        for (double p : {2.0, 3.0, 5.0, 101.0, 0.0}) {
            PlancherelMeasure m(rd, p);
            auto v = m.integrate(InvariantFunction::constant(rd, GaussQ(Rational(1))));
            worst = std::max(worst, std::abs(v.value - 1.0));
        }
    }
    double sec = seconds_since(t0);
    std::ostringstream s;
    s << "max |mass - 1| " << worst << " (" << sec << "s)";
    return {worst <= kMassTol && sec <= kMassSeconds, s.str()};
}

// 4. Sato-Tate second moment and monotone approach
Outcome sato_tate_check() {
    auto rd = RootDatum::parse("A1adj");
    Weight w1(1, Lattice::DualCharacter);
    w1[0] = 1;
    auto h = weyl_character(rd, w1);
    auto h2 = multiply(h, h);
    double st = PlancherelMeasure(rd, 0).integrate(h2).value.real();
    double oracle_value = oracle::sato_tate_trace_second_moment(256);
    bool ok = std::abs(st - oracle_value) <= kSatoTateTol && std::abs(st - 1) <= kSatoTateTol;
    std::ostringstream s;
    s << "ST " << st << " oracle " << oracle_value << "; |mu_p(h^2)-1|:";
    double prev = INFINITY;
    for (double p : {2.0, 5.0, 101.0, 1009.0}) {
        double gap = std::abs(PlancherelMeasure(rd, p).integrate(h2).value.real() - 1);
        ok = ok && gap <= prev + kMonotoneNoise;
        prev = gap;
        s << " " << gap;
    }
    return {ok, s.str()};
}

// 5. L1 sandwich and the rank one oracle
Outcome l1_check() {
    long cases = 0, bad = 0;
    for (auto name : {"A1sc", "A1adj", "A2sc", "A2adj", "B2sc", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        for (auto& lam : dominant_below(*rd, 6))
            for (long long p : {2LL, 3LL, 5LL, 101LL}) {
                QSqrt v = character_at_rho_p(*rd, lam, p);
                long long n = static_cast<long long>(to_double(2 * rd->pair_rho(lam)));
                Rational pk(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n / 2)));
                QSqrt low;
                (n % 2 == 0 ? low.a : low.b) = pk;
                Rational dim(oracle::weyl_dimension(rd->cartan, lam.vec()));
                bool lo = sign(QSqrt{v.a - low.a, v.b - low.b}, p) >= 0;
                bool hi = sign(QSqrt{dim * low.a - v.a, dim * low.b - v.b}, p) >= 0;
                ++cases;
                if (!lo || !hi) ++bad;
            }
    }
    auto a1 = RootDatum::parse("A1adj");
    Weight w1(1, Lattice::DualCharacter);
    w1[0] = 1;
    bool rank_one = true;
    for (long long p : {2LL, 3LL, 5LL, 101LL}) {
        auto b = l1_norm_bound(weyl_character(a1, w1), p);
        rank_one = rank_one && b.exact && b.exact_value.a == 0 && b.exact_value.b == Rational(oracle::pgl2_hecke_cosets(p), p);
    }
    std::ostringstream s;
    s << cases << " sandwich cases, " << bad << " violations; rank one exact: " << (rank_one ? "yes" : "no");
    return {bad == 0 && rank_one, s.str()};
}

// 6. certificate suite
Outcome certificate_check() {
    auto t0 = std::chrono::steady_clock::now();
    struct Region {
        const char* g;
        std::vector<double> u;  // centre in period-lattice coordinates
        double r;
    };
    const std::vector<Region> regions = {
        {"A1sc", {0.25}, 0.15},  {"A1sc", {0.3}, 0.1},
        {"A1adj", {0.25}, 0.15}, {"A1adj", {0.35}, 0.1},
        {"A2adj", {1.0 / 3, 1.0 / 3}, 0.12}, {"A2adj", {1.0 / 3, 1.0 / 3}, 0.15},
    };
    auto primes = primes_up_to(97);
    bool ok = true;
    std::ostringstream s;
    double worst_id = 0, worst_min = INFINITY, worst_slope_excess = -INFINITY;
    bool l2_ok = true;
    for (auto& R : regions) {
        auto rd = RootDatum::parse(R.g);
        TorusGeometry g(rd);
        auto U = TorusRegion::make(g, {TorusBall{g.lattice_to_alpha(R.u), R.r, {}}});
        std::shared_ptr<const AmplifierDesign> d;
        try {
            d = design_amplifier(rd, U);
        } catch (const Error& e) {
            s << R.g << " design failed (" << e.kind << ") ";
            ok = false;
            continue;
        }
        std::vector<double> lp, ll;
        double A = 0;
        for (long long p : primes) {
            auto e = build_amplifier(d, p);
            const auto& c = e.cert;
            worst_id = std::max(worst_id, c.identity_residual);
            worst_min = std::min(worst_min, c.min_S);
            l2_ok = l2_ok && c.l2 <= d->X + 1;
            ok = ok && c.identity_residual <= kIdentityTol && c.min_S >= 1 - kPositivityTol && c.l2 <= d->X + 1;
            A = std::max(A, to_double(exponent_A(e.g)));
            lp.push_back(std::log(static_cast<double>(p)));
            ll.push_back(c.l1.log_value);
        }
        // growth exponent of ||tau||_1 in p: least-squares slope of log ||tau||_1 against log p
        double mx = 0, my = 0;
        for (size_t k = 0; k < lp.size(); ++k) {
            mx += lp[k];
            my += ll[k];
        }
        mx /= lp.size();
        my /= lp.size();
        double sxy = 0, sxx = 0;
        for (size_t k = 0; k < lp.size(); ++k) {
            sxy += (lp[k] - mx) * (ll[k] - my);
            sxx += (lp[k] - mx) * (lp[k] - mx);
        }
        double slope = sxy / sxx;
        worst_slope_excess = std::max(worst_slope_excess, slope - A);
        ok = ok && slope <= A + kSlopeTol;
        s << R.g << "[r=" << R.r << "] slope " << slope << " A " << A << "; ";
    }
    double sec = seconds_since(t0);
    s << "max identity residual " << worst_id << ", min S tau " << worst_min << ", l2<=X+1 " << (l2_ok ? "yes" : "no")
      << " (" << sec << "s)";
    return {ok && sec <= kCertSeconds, s.str()};
}

// 7. separation for the maximal-parabolic Levi of A2
Outcome separation_check() {
    auto rd = RootDatum::parse("A2adj");
    int levi = -1;
    for (size_t k = 0; k < rd->levis.size(); ++k)
        if (rd->levis[k].subset.size() == 1) {
            levi = static_cast<int>(k);
            break;
        }
    if (levi < 0) return {false, "no maximal Levi"};
    auto sep = separation_find(rd, levi);
    auto rep = replay_separation(sep, kReplaySamples, 7);
    std::ostringstream s;
    s << "levi " << levi << " delta1 " << sep.delta1 << ", replay " << rep.samples << " samples, " << rep.violations
      << " violations";
    return {sep.certified && sep.delta1 > 0 && rep.samples == kReplaySamples && rep.violations == 0, s.str()};
}

// 8. theta bookkeeping
Outcome theta_check() {
    auto rd = RootDatum::parse("A1adj");
    auto sep = separation_find(rd, 0);
    if (!sep.certified) return {false, "separation not certified"};
    auto designs = theta_designs(sep);
    auto t = assemble_theta(sep, designs, SpectralParameter::imaginary({7.3}), 30, 4);
    double l2 = 0;
    for (auto& c : t.comps) l2 += c.l2_sq;
    bool ok = t.Y == 4;
    ok = ok && t.l2_sq_total == l2;
    ok = ok && t.l1_total <= t.B * std::pow(30.0, t.A) * static_cast<double>(t.Y);
    ok = ok && t.ms_bound <= t.a_max * std::log(29.0);
    std::ostringstream s;
    s << "Y=" << t.Y << " l2_sq_total " << t.l2_sq_total << " (sum " << l2 << "), l1_total " << t.l1_total
      << " <= " << t.B * std::pow(30.0, t.A) * t.Y << ", ms " << t.ms_bound << " <= " << t.a_max * std::log(29.0);
    return {ok, s.str()};
}

// 9. localization
Outcome localization_check() {
    std::ostringstream s;
    bool ok = true;
    for (auto name : {"A1sc", "A2adj"}) {
        auto rd = RootDatum::parse(name);
        auto sp = make_special(PWFunction::bump(rd, 1.0));
        ok = ok && sp.certified;
        Frame fr(*rd);
        const int r = rd->rank;
        const double rho = rd->rho_norm();
        std::mt19937_64 rng(99);
        std::normal_distribution<double> N(0, 1);
        std::uniform_real_distribution<double> U(0, 1), C(-40, 40);
        auto in_ball = [&](double rad) {
            std::vector<double> z(r);
            double n = 0;
            for (auto& v : z) {
                v = N(rng);
                n += v * v;
            }
            double sc = rad * std::pow(U(rng), 1.0 / r) / std::sqrt(n);
            for (auto& v : z) v *= sc;
            return z;
        };
        long violations = 0;
        double worst = INFINITY, worst_slope = -INFINITY;
        bool decay_ok = true;
        for (int m = 0; m < kFloorCentres; ++m) {
            std::vector<double> mz(r);
            for (auto& v : mz) v = C(rng);
            auto mu = fr.to_varpi(mz);
            auto gm = sp.g.localized(mu);
            for (int k = 0; k < kFloorSamples; ++k) {
                auto re = in_ball(rho), im = in_ball(1.0);
                for (int i = 0; i < r; ++i) im[i] += mz[i];
                SpectralParameter l;
                l.re = fr.to_varpi(re);
                l.im = fr.to_varpi(im);
                double a = std::abs(gm(l));
                worst = std::min(worst, a);
                if (a < 1) ++violations;
            }
            if (m < 3) {
                auto fit = localized_decay(gm, kDecayOrder, 4000, 11 + m);
                decay_ok = decay_ok && fit.bounded && std::isfinite(fit.C);
                worst_slope = std::max(worst_slope, fit.slope);
            }
        }
        ok = ok && violations == 0 && decay_ok;
        s << name << ": floor min " << worst << ", " << violations << " violations, decay slope " << worst_slope << "; ";
    }
    return {ok, s.str()};
}

// 10. exact combinatorics
Outcome combinatorics_check() {
    long checks = 0, bad = 0;
    auto expect = [&](bool c) {
        ++checks;
        if (!c) ++bad;
    };
    struct T {
        char s;
        int r;
    };
    for (auto t : {T{'A', 1}, T{'A', 2}, T{'A', 3}, T{'B', 2}, T{'B', 3}, T{'C', 2}, T{'C', 3}, T{'D', 4}, T{'G', 2}, T{'F', 4},
                   T{'E', 6}})
        for (auto iso : {Isogeny::SimplyConnected, Isogeny::Adjoint}) {
            if (t.s == 'G' || t.s == 'F' || t.s == 'E') {
                if (iso == Isogeny::SimplyConnected && t.s != 'E') continue;
            }
            auto rd = RootDatum::build(t.s, t.r, iso);
            auto C = oracle::cartan(t.s, t.r);
            expect(rd->cartan == C);
            expect(rd->weyl().order() == oracle::weyl_order(C));
            auto roots = oracle::positive_roots(C);
            expect(roots.size() == rd->positive_roots.size());
            expect(static_cast<int>(rd->positive_roots.size()) == rd->dim_d - rd->rank);
            if (t.r > 3) continue;
            for (auto& lam : dominant_below(*rd, 4)) {
                auto e = to_orbit_basis(weyl_character(rd, lam));
                Rational at1 = 0;
                bool tri = true;
                for (auto& [mu, c] : e.exact_coefficients()) {
                    at1 += c.re;
                    tri = tri && rd->dominance_leq(mu, lam) && c.im == 0;
                }
                expect(at1 == Rational(oracle::weyl_dimension(C, lam.vec())));
                expect(tri);
                expect(e.exact_coefficients().at(lam).re == Rational(static_cast<long long>(oracle::dual_orbit(C, lam.vec()).size())));
            }
        }
    std::ostringstream s;
    s << checks << " exact checks, " << bad << " failures";
    return {bad == 0, s.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Weyl main-term constant", weyl_constant_check},
        {"beta two-path agreement", beta_check},
        {"p-adic Plancherel mass", mass_check},
        {"Sato-Tate second moment", sato_tate_check},
        {"L1 norm sandwich", l1_check},
        {"amplifier certificates", certificate_check},
        {"separation certificate", separation_check},
        {"theta bookkeeping", theta_check},
        {"localization", localization_check},
        {"exact combinatorics", combinatorics_check},
    };
    // optional arguments select criteria by number; default is all of them
    std::vector<bool> run(criteria.size(), argc == 1);
    for (int a = 1; a < argc; ++a) {
        size_t k = std::strtoul(argv[a], nullptr, 10);
        if (k >= 1 && k <= criteria.size()) run[k - 1] = true;
    }
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        if (!run[k]) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %zu %s: %s  %s [%.1fs]\n", k + 1, criteria[k].first, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
