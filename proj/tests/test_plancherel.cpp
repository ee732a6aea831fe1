#include "chevalley/plancherel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>

using namespace chevalley;

namespace {

Weight dual(std::initializer_list<int> v) {
    Weight w(static_cast<int>(v.size()), Lattice::DualCharacter);
    int i = 0;
    for (int x : v) w[i++] = x;
    return w;
}

}  // namespace

TEST_CASE("density values") {
    auto a1 = RootDatum::parse("A1adj");
    PlancherelMeasure st(a1, 0);
    for (double th : {0.0, 0.1, 0.25, 0.4}) CHECK(st.density({th}) == doctest::Approx(4 * std::pow(std::sin(2 * M_PI * th), 2)));
    for (double p : {2.0, 5.0}) {
        PlancherelMeasure m(a1, p);
        CHECK(m.density({0.25}) == doctest::Approx(4 / std::pow(1 + 1 / p, 2)));
        CHECK(m.density({0.0}) == 0);
    }
}

TEST_CASE("total mass is one") {
    for (auto name : {"A1sc", "A1adj", "A2adj", "B2sc", "G2"})
        for (double p : {0.0, 2.0, 3.0, 101.0}) {
            auto rd = RootDatum::parse(name);
            PlancherelMeasure m(rd, p);
            auto v = m.integrate(InvariantFunction::constant(rd, GaussQ(Rational(1))));
            CHECK(std::abs(v.value - 1.0) <= 1e-10);
        }
}

TEST_CASE("rank one moments against the Hecke algebra of PGL2") {
    auto a1 = RootDatum::parse("A1adj");
    for (double p : {2.0, 3.0, 7.0, 101.0}) {
        PlancherelMeasure m(a1, p);
        for (int n = 0; n <= 8; ++n) {
            auto v = m.integrate(weyl_character(a1, dual({n})));
            CHECK(v.value.real() == doctest::Approx(oracle::pgl2_plancherel({{n, 1.0}}, p)).epsilon(1e-10));
            CHECK(std::abs(v.value.imag()) < 1e-12);
        }
        auto h = weyl_character(a1, dual({1}));
        auto sq = m.integrate(multiply(h, h));
        CHECK(sq.value.real() == doctest::Approx(1 + 1 / p).epsilon(1e-10));
        CHECK(m.l2_norm(h).value.real() == doctest::Approx(std::sqrt((p + 1) / p)).epsilon(1e-10));
    }
}

TEST_CASE("Sato-Tate second moment") {
    auto a1 = RootDatum::parse("A1adj");
    PlancherelMeasure st(a1, 0);
    auto h = weyl_character(a1, dual({1}));
    double v = st.integrate(multiply(h, h)).value.real();
    CHECK(v == doctest::Approx(oracle::sato_tate_trace_second_moment(64)).epsilon(1e-12));
    CHECK(std::abs(v - 1) < 1e-10);

    // orthonormality of characters
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            auto f = multiply(weyl_character(a1, dual({a})), star(weyl_character(a1, dual({b}))));
            CHECK(std::abs(st.integrate(f).value - Complex(a == b ? 1.0 : 0.0)) < 1e-10);
        }
    auto a2 = RootDatum::parse("A2adj");
    PlancherelMeasure st2(a2, 0);
    auto g = weyl_character(a2, dual({1, 1}));
    CHECK(std::abs(st2.integrate(multiply(g, star(g))).value - Complex(1.0)) < 1e-10);
}

TEST_CASE("weak-* convergence towards Sato-Tate") {
    auto a2 = RootDatum::parse("A2adj");
    auto g = weyl_character(a2, dual({1, 1}));
    auto f = multiply(g, star(g));
    double prev = INFINITY;
    for (double p : {2.0, 5.0, 101.0, 1009.0}) {
        PlancherelMeasure m(a2, p);
        double gap = std::abs(m.integrate(f).value.real() - 1);
        CHECK(gap < prev + 1e-10);
        prev = gap;
    }
    CHECK(prev < 0.01);
}

TEST_CASE("identity recovery from the Fourier table") {
    // mu(h_lambda) is the coefficient of the identity in the Hecke element, which is 0 for lambda != 0 at p -> infinity
    auto b2 = RootDatum::parse("B2sc");
    PlancherelMeasure st(b2, 0);
    for (auto lam : {dual({1, 0}), dual({0, 2}), dual({2, 2})})
        if (b2->in_character_lattice(lam)) CHECK(std::abs(st.integrate(weyl_character(b2, lam)).value) < 1e-10);
}

TEST_CASE("open set mass") {
    auto a1 = RootDatum::parse("A1adj");
    PlancherelMeasure st(a1, 0);
    TorusGeometry g(a1);
    CHECK(st.open_set_mass(TorusRegion::whole()) == 1.0);
    CHECK(st.open_set_mass(TorusRegion{}) == 0.0);
    auto c = g.lattice_to_alpha({0.25});
    auto U = TorusRegion::make(g, {TorusBall{c, 0.1, {}}});
    double m = st.open_set_mass(U);
    // Sato-Tate mass of the ball and its W-translate in the lattice coordinate u:
    // normalized density 1 - cos(4 pi u) integrated over |u - 1/4| < 0.1 and |u - 3/4| < 0.1
    double exact = 2 * (0.2 - (std::sin(4 * M_PI * 0.35) - std::sin(4 * M_PI * 0.15)) / (4 * M_PI));
    CHECK(m == doctest::Approx(exact).epsilon(1e-3));
    CHECK(m > 0);
    CHECK(m < 1);
}

TEST_CASE("reference quadrature and recorded fixture") {
    // A1adj, p = 5, f = e_{2 varpi}: direct 10^4-node midpoint rule on the explicit density
    const double p = 5;
    const int n = 10000;
    double num = 0, den = 0;
    for (int k = 0; k < n; ++k) {
        double th = (k + 0.5) / n;
        std::complex<double> z = std::polar(1.0, 4 * M_PI * th);
        double d = std::norm(1.0 - z) / std::norm(1.0 - z / p);
        num += std::cos(4 * M_PI * th) * d;
        den += d;
    }
    auto a1 = RootDatum::parse("A1adj");
    PlancherelMeasure m(a1, p);
    double v = m.integrate(orbit_average(a1, dual({2}))).value.real();
    CHECK(std::abs(v - num / den) <= 1e-8);

    std::ifstream in(std::string(CHEVALLEY_FIXTURE_DIR) + "/plancherel/a1adj_p5_e2.json");
    REQUIRE(in.good());
    auto j = nlohmann::json::parse(in);
    CHECK(std::abs(j["value"]["re"].get<double>() - v) <= 1e-12);
}

TEST_CASE("density is W-invariant") {
    for (auto name : {"A2adj", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> U(0, 1);
        for (double p : {0.0, 3.0}) {
            PlancherelMeasure m(rd, p);
            for (int k = 0; k < 50; ++k) {
                std::vector<double> th = {U(rng), U(rng)}, wt(2);
                double d = m.density(th);
                for (size_t w = 0; w < rd->weyl().order(); ++w) {
                    rd->weyl().act_alpha(w, th.data(), wt.data());
                    CHECK(std::abs(m.density(wt) - d) <= 1e-12 * (1 + d));
                }
            }
        }
    }
}

TEST_CASE("Sato-Tate against Haar measure on SU(2)") {
    // trace of a Haar-random unit quaternion is 2a with (a, b, c, d) uniform on S^3
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0, 1);
    const int n = 1000000;
    double m2 = 0, m4 = 0;
    for (int k = 0; k < n; ++k) {
        double a = N(rng), b = N(rng), c = N(rng), d = N(rng);
        double tr = 2 * a / std::sqrt(a * a + b * b + c * c + d * d);
        m2 += tr * tr;
        m4 += tr * tr * tr * tr;
    }
    m2 /= n;
    m4 /= n;
    auto a1 = RootDatum::parse("A1adj");
    PlancherelMeasure st(a1, 0);
    auto h = weyl_character(a1, dual({1}));
    auto h2 = multiply(h, h);
    CHECK(st.integrate(h2).value.real() == doctest::Approx(m2).epsilon(5e-3));
    CHECK(st.integrate(multiply(h2, h2)).value.real() == doctest::Approx(m4).epsilon(5e-3));
}

TEST_CASE("wall neighbourhoods lose mass") {
    auto a1 = RootDatum::parse("A1adj");
    TorusGeometry g(a1);
    for (double p : {0.0, 5.0}) {
        PlancherelMeasure m(a1, p);
        double prev = INFINITY;
        for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01}) {
            auto U = TorusRegion::make(g, {TorusBall{{0.0}, eps, {}}});
            double v = m.open_set_mass(U);
            CHECK(v < prev);
            prev = v;
        }
        CHECK(prev < 1e-4);
    }
}
