#include "chevalley/arch.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace chevalley;

TEST_CASE("Gamma and phi") {
    CHECK(gamma_fn(Complex(5.0)).real() == doctest::Approx(24.0).epsilon(1e-13));
    CHECK(gamma_fn(Complex(0.5)).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    Complex z(0.3, 2.5);
    CHECK(std::abs(gamma_fn(z + 1.0) - z * gamma_fn(z)) < 1e-12 * std::abs(gamma_fn(z + 1.0)));
    // |phi(iy)|^{-2} = (y/2) tanh(pi y/2) / pi
    for (double y : {0.1, 1.0, 7.5}) {
        double v = 1 / std::norm(phi_factor(Complex(0, y)));
        CHECK(v == doctest::Approx(y / 2 * std::tanh(M_PI * y / 2) / M_PI).epsilon(1e-12));
    }
}

TEST_CASE("beta: product formula, c-function and a closed form agree") {
    for (auto name : {"A1sc", "A2adj", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> U(-20, 20);
        double worst = 0;
        for (int k = 0; k < 300; ++k) {
            std::vector<double> v(rd->rank);
            for (auto& x : v) x = U(rng);
            auto l = SpectralParameter::imaginary(v);
            std::vector<double> lp, rp;
            std::vector<double> ones(rd->rank, 1.0);
            for (size_t j = 0; j < rd->positive_roots.size(); ++j) {
                lp.push_back(rd->pair_coroot(v, static_cast<int>(j)));
                rp.push_back(rd->pair_coroot(ones, static_cast<int>(j)));
            }
            double b = beta(*rd, l), bc = beta_via_c(*rd, l), o = oracle::beta_closed_form(lp, rp);
            worst = std::max(worst, std::abs(b - bc) / o);
            CHECK(b == doctest::Approx(o).epsilon(1e-10));
        }
        CHECK(worst <= 1e-10);
        CHECK(beta(*rd, SpectralParameter::imaginary(std::vector<double>(rd->rank, 0.0))) == 0.0);
    }
}

TEST_CASE("beta tilde dominates beta up to constants") {
    auto rd = RootDatum::parse("A2adj");
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-40, 40);
    double hi = 0;
    for (int k = 0; k < 500; ++k) {
        auto l = SpectralParameter::imaginary({U(rng), U(rng)});
        hi = std::max(hi, beta(*rd, l) / beta_tilde(*rd, l));
    }
    CHECK(hi < 10);
}

TEST_CASE("ball volumes and the Weyl constant") {
    CHECK(weyl_constant(2) == doctest::Approx(1 / (4 * M_PI)));
    auto a1 = RootDatum::parse("A1sc");
    auto v = plancherel_volume_ball(*a1, 60);
    CHECK(v.ratio == doctest::Approx(1.0).epsilon(0.03));
    CHECK(plancherel_volume(*a1, SpectralRegion{}).value == 0.0);
    // monotone in t
    CHECK(plancherel_volume_ball(*a1, 20).value < plancherel_volume_ball(*a1, 30).value);
}

TEST_CASE("region quadrature integrates constants to Euclidean volumes") {
    auto a2 = RootDatum::parse("A2adj");
    auto D = SpectralRegion::ball(2, 5.0);
    double area = integrate_region(*a2, D, [](const std::vector<double>&) { return 1.0; }, 4, 256);
    CHECK(area == doctest::Approx(M_PI * 25).epsilon(1e-6));
    // a ball away from the walls is counted once per W-translate
    SpectralRegion E{{SpectralBall{{10.0, 10.0}, 1.0}}};
    double e = integrate_region(*a2, E, [](const std::vector<double>&) { return 1.0; }, 4, 256);
    CHECK(e == doctest::Approx(6 * M_PI).epsilon(1e-6));
}

TEST_CASE("Paley-Wiener bump and special functions") {
    for (auto name : {"A1sc", "A2adj"}) {
        auto rd = RootDatum::parse(name);
        auto g0 = PWFunction::bump(rd, 1.0);
        auto zero = SpectralParameter::imaginary(std::vector<double>(rd->rank, 0.0));
        CHECK(g0(zero).real() > 0);
        auto s = make_special(g0);
        CHECK(s.certified);
        CHECK(s.g.special());
        CHECK(s.g(zero).real() == doctest::Approx(2.0 * rd->weyl().order()));
        CHECK(s.sampled_sup * 1.1 <= s.bound * (1 + 1e-12));
        CHECK(s.fd_discrepancy < 1e-4);

        // W-invariance and nonnegativity on the imaginary axis
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(-3, 3);
        for (int k = 0; k < 50; ++k) {
            std::vector<double> v(rd->rank);
            for (auto& x : v) x = U(rng);
            Complex a = s.g(SpectralParameter::imaginary(v));
            CHECK(a.real() >= 0);
            CHECK(std::abs(a.imag()) < 1e-10 * (1 + std::abs(a)));
            std::vector<double> w(rd->rank);
            rd->weyl().act_varpi(rd->weyl().longest(), v.data(), w.data());
            CHECK(std::abs(s.g(SpectralParameter::imaginary(w)) - a) < 1e-10 * (1 + std::abs(a)));
        }

        // localization floor next to mu
        std::vector<double> mu(rd->rank, 2.5);
        auto gm = s.g.localized(mu);
        auto l = SpectralParameter::imaginary(mu);
        l.re.assign(rd->rank, 0.3);
        CHECK(std::abs(gm(l)) >= 1.0);
        CHECK(sup_operator(gm, SpectralParameter::imaginary(mu)) >= std::abs(gm(SpectralParameter::imaginary(mu))));
    }
    auto a1 = RootDatum::parse("A1sc");
    auto g = PWFunction::bump(a1, 1.0);
    CHECK_THROWS_AS(make_special(g.localized({1.0})), Error);
}

TEST_CASE("decay of the localized function") {
    auto rd = RootDatum::parse("A1sc");
    auto s = make_special(PWFunction::bump(rd, 1.0));
    auto fit = localized_decay(s.g.localized({4.0}), 4, 4000, 3);
    CHECK(fit.bounded);
    CHECK(fit.C > 0);
    CHECK(std::isfinite(fit.C));
    CHECK(fit.shell_max.size() == fit.shell_edges.size() - 1);
}

TEST_CASE("region smoothing") {
    auto rd = RootDatum::parse("A1sc");
    auto g = PWFunction::bump(rd, 4.0);
    double mass = g.integral();
    CHECK(mass > 0);
    auto D = SpectralRegion::ball(1, 10.0);
    // well inside D the smoothed indicator is close to one, far outside close to zero
    CHECK(region_smooth(g, D, SpectralParameter::imaginary({0.0}), mass) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(region_smooth(g, D, SpectralParameter::imaginary({60.0}), mass)) < 0.02);
}
