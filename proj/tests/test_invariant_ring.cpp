#include "chevalley/invariant_ring.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace chevalley;

namespace {

Weight dual(std::initializer_list<int> v) {
    Weight w(static_cast<int>(v.size()), Lattice::DualCharacter);
    int i = 0;
    for (int x : v) w[i++] = x;
    return w;
}

std::vector<Weight> dominant_up_to(const RootDatum& rd, int level) {
    std::vector<Weight> out;
    std::vector<int> k(rd.rank, 0);
    for (;;) {
        Weight w(rd.rank, Lattice::DualCharacter);
        for (int i = 0; i < rd.rank; ++i) w[i] = k[i];
        if (rd.in_character_lattice(w) && rd.pair_rho(w) <= level) out.push_back(w);
        int i = 0;
        while (i < rd.rank && ++k[i] > 2 * level) k[i++] = 0;
        if (i == rd.rank) break;
    }
    return out;
}

std::vector<double> random_theta(std::mt19937_64& rng, int r) {
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<double> t(r);
    for (auto& x : t) x = U(rng);
    return t;
}

}  // namespace

TEST_CASE("orbit averages") {
    auto a1 = RootDatum::parse("A1adj");
    auto e0 = orbit_average(a1, dual({0}));
    CHECK(evaluate(e0, TorusPoint::compact({0.3})) == Complex(1.0));
    auto e2 = orbit_average(a1, dual({2}));
    auto v = evaluate(e2, TorusPoint::compact({0.25}));
    CHECK(v.real() == doctest::Approx(-1.0));
    CHECK(std::abs(v.imag()) < 1e-14);
    CHECK_THROWS_AS(orbit_average(a1, dual({-1})), Error);

    // W-invariance at random points
    for (auto name : {"A2adj", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        std::mt19937_64 rng(1);
        auto f = add(orbit_average(rd, dual({1, 1})), scale(weyl_character(rd, dual({2, 0})), GaussQ(Rational(3), Rational(1))));
        for (int k = 0; k < 20; ++k) {
            TorusPoint t = TorusPoint::compact(random_theta(rng, 2));
            t.x = {0.3 * k / 20, -0.1};
            Complex v0 = evaluate(f, t);
            const auto& W = rd->weyl();
            for (size_t w = 0; w < W.order(); ++w) {
                TorusPoint s;
                s.x.resize(2);
                s.theta.resize(2);
                W.act_alpha(w, t.x.data(), s.x.data());
                W.act_alpha(w, t.theta.data(), s.theta.data());
                CHECK(std::abs(evaluate(f, s) - v0) <= 1e-10 * (1 + std::abs(v0)));
            }
        }
    }
}

TEST_CASE("Weyl characters") {
    auto a1 = RootDatum::parse("A1adj");
    auto h0 = weyl_character(a1, dual({0}));
    CHECK(to_orbit_basis(h0).exact_coefficients().size() == 1);
    auto h1 = to_orbit_basis(weyl_character(a1, dual({1})));
    REQUIRE(h1.exact_coefficients().size() == 1);
    CHECK(h1.exact_coefficients().at(dual({1})) == GaussQ(Rational(2)));
    auto h2 = weyl_character(a1, dual({2}));
    CHECK(evaluate(h2, TorusPoint::compact({0.0})).real() == doctest::Approx(3.0));
    CHECK(weyl_dimension(*a1, dual({2})) == 3);
}

TEST_CASE("characters against the alternant formula and the Weyl dimension formula") {
    for (auto name : {"A1adj", "A2sc", "A2adj", "B2sc", "B2adj", "G2", "A3adj"}) {
        auto rd = RootDatum::parse(name);
        std::mt19937_64 rng(2);
        for (auto& lam : dominant_up_to(*rd, 4)) {
            CHECK(weyl_dimension(*rd, lam) == oracle::weyl_dimension(rd->cartan, lam.vec()));
            auto h = weyl_character(rd, lam);
            auto th = random_theta(rng, rd->rank);
            Complex a = evaluate(h, TorusPoint::compact(th));
            Complex b = oracle::character_alternant(rd->cartan, lam.vec(), th);
            CHECK(std::abs(a - b) <= 1e-8 * (1 + std::abs(b)));
        }
    }
}

TEST_CASE("base change is triangular with orbit-size diagonal") {
    for (auto name : {"A1sc", "A2adj", "B2adj", "G2"}) {
        auto rd = RootDatum::parse(name);
        for (auto& lam : dominant_up_to(*rd, 6)) {
            auto e = to_orbit_basis(weyl_character(rd, lam));
            for (auto& [mu, c] : e.exact_coefficients()) CHECK(rd->dominance_leq(mu, lam));
            CHECK(e.exact_coefficients().at(lam).re == Rational(static_cast<long long>(rd->orbit(lam).size())));
        }
    }
}

TEST_CASE("to_character_basis") {
    auto a1 = RootDatum::parse("A1adj");
    auto e0 = to_character_basis(orbit_average(a1, dual({0})));
    CHECK(e0.exact_coefficients().size() == 1);
    CHECK(e0.exact_coefficients().at(dual({0})) == GaussQ(Rational(1)));
    auto f = add(scale(orbit_average(a1, dual({2})), GaussQ(Rational(2))), orbit_average(a1, dual({0})));
    auto h = to_character_basis(f);
    REQUIRE(h.exact_coefficients().size() == 1);
    CHECK(h.exact_coefficients().at(dual({2})) == GaussQ(Rational(1)));

    // round trip and the alternant path agree exactly
    auto a2 = RootDatum::parse("A2adj");
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> U(-5, 5);
    auto g = InvariantFunction(a2, Basis::OrbitAverage, true);
    for (auto& lam : dominant_up_to(*a2, 4)) g.add_term(lam, GaussQ(Rational(U(rng), 1 + (U(rng) + 5)), Rational(U(rng))));
    auto hc = to_character_basis(g);
    CHECK(to_orbit_basis(hc).exact_coefficients() == g.exact_coefficients());
    CHECK(to_character_basis_alternant(g).exact_coefficients() == hc.exact_coefficients());
}

TEST_CASE("evaluation") {
    auto a1 = RootDatum::parse("A1adj");
    auto one = InvariantFunction::constant(a1, GaussQ(Rational(1)));
    CHECK(evaluate(one, TorusPoint::compact({0.37})) == Complex(1.0));
    auto h = weyl_character(a1, dual({1}));
    auto rho = TorusPoint::prime_power({to_double(a1->rho_alpha[0])}, 5);
    CHECK(evaluate(h, rho).real() == doctest::Approx(std::sqrt(5.0) + 1 / std::sqrt(5.0)).epsilon(1e-13));

    // |h|^2 is real and nonnegative on hermitian points
    auto hh = multiply(h, star(h));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int k = 0; k < 100; ++k) {
        TorusPoint t;
        if (k % 2) {
            t = TorusPoint::compact({U(rng)});
        } else {
            t.x = {U(rng)};
            t.theta = {k % 4 == 0 ? 0.0 : 0.5};
        }
        REQUIRE(hermitian_witness(*a1, t).has_value());
        Complex v = evaluate(hh, t);
        CHECK(std::abs(v.imag()) <= 1e-9 * (1 + std::abs(v)));
        CHECK(v.real() >= -1e-12);
    }
}

TEST_CASE("star") {
    auto a1 = RootDatum::parse("A1adj");
    auto f = add(weyl_character(a1, dual({3})), orbit_average(a1, dual({1})));
    CHECK(star(f).exact_coefficients() == f.exact_coefficients());
    auto a2 = RootDatum::parse("A2adj");
    auto s = star(orbit_average(a2, dual({1, 0})));
    REQUIRE(s.exact_coefficients().size() == 1);
    CHECK(s.exact_coefficients().begin()->first == dual({0, 1}));
    auto g = InvariantFunction(a1, Basis::OrbitAverage, true);
    g.add_term(dual({2}), GaussQ(Rational(2), Rational(1)));
    CHECK(star(g).exact_coefficients().at(dual({2})) == GaussQ(Rational(2), Rational(-1)));
    CHECK(star(star(g)).exact_coefficients() == g.exact_coefficients());

    // evaluate(star f, t) = conj(evaluate(f, conj(t)^{-1}))
    auto a2a = RootDatum::parse("A2adj");
    auto q = InvariantFunction(a2a, Basis::OrbitAverage, true);
    q.add_term(dual({1, 0}), GaussQ(Rational(1), Rational(2)));
    q.add_term(dual({2, 1}), GaussQ(Rational(-3), Rational(1, 2)));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int k = 0; k < 50; ++k) {
        TorusPoint t{{U(rng), U(rng)}, {U(rng), U(rng)}};
        TorusPoint inv{{-t.x[0], -t.x[1]}, {t.theta[0], t.theta[1]}};
        Complex a = evaluate(star(q), t), b = std::conj(evaluate(q, inv));
        CHECK(std::abs(a - b) <= 1e-10 * (1 + std::abs(a)));
    }
}

TEST_CASE("exponent A") {
    auto a1 = RootDatum::parse("A1adj");
    CHECK(exponent_A(InvariantFunction::constant(a1, GaussQ(Rational(1)))) == 0);
    CHECK(exponent_A(weyl_character(a1, dual({1}))) == Rational(1, 2));
    auto f = add(weyl_character(a1, dual({2})), scale(weyl_character(a1, dual({0})), GaussQ(Rational(7))));
    CHECK(exponent_A(f) == 1);
    CHECK(exponent_A(InvariantFunction(a1, Basis::WeylCharacter, true)) == 0);
}

TEST_CASE("L1 norm bound") {
    auto a1 = RootDatum::parse("A1adj");
    auto h0 = weyl_character(a1, dual({0}));
    CHECK(l1_norm_bound(h0, 7).value == 1.0);
    for (long p : {2L, 5L, 101L}) {
        auto b = l1_norm_bound(weyl_character(a1, dual({1})), p);
        REQUIRE(b.exact);
        // brute force: p + 1 cosets of K diag(p,1) K, scaled by p^{-1/2}
        long cosets = oracle::pgl2_hecke_cosets(p);
        CHECK(b.exact_value.a == 0);
        CHECK(b.exact_value.b == Rational(cosets, p));
        CHECK(b.value == doctest::Approx(std::sqrt(double(p)) + 1 / std::sqrt(double(p))));
    }
    CHECK(l1_norm_bound(weyl_character(a1, dual({1})), 5).value == doctest::Approx(2.683).epsilon(1e-3));

    // leading-term sandwich for a combination
    auto a2 = RootDatum::parse("A2adj");
    auto f = add(scale(weyl_character(a2, dual({1, 1})), GaussQ(Rational(-2))), weyl_character(a2, dual({3, 0})));
    for (long p : {2L, 3L, 101L}) {
        auto b = l1_norm_bound(f, p);
        double A = to_double(b.A);
        CHECK(b.value >= std::pow(double(p), A) * 1 * (1 - 1e-12));
        CHECK(b.value <= b.B * std::pow(double(p), A) * (1 + 1e-12));
    }
}

TEST_CASE("exact L1 sandwich") {
    for (auto name : {"A1sc", "A1adj", "A2adj", "B2sc", "G2"}) {
        auto rd = RootDatum::parse(name);
        for (auto& lam : dominant_up_to(*rd, 6))
            for (long long p : {2LL, 3LL, 5LL, 101LL}) {
                QSqrt v = character_at_rho_p(*rd, lam, p);
                Rational e2 = 2 * rd->pair_rho(lam);
                long long n = static_cast<long long>(to_double(e2));
                Rational pk(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(n / 2)));
                QSqrt low;
                (n % 2 == 0 ? low.a : low.b) = pk;
                Rational dim(weyl_dimension(*rd, lam));
                CHECK(sign(QSqrt{v.a - low.a, v.b - low.b}, p) >= 0);
                CHECK(sign(QSqrt{dim * low.a - v.a, dim * low.b - v.b}, p) >= 0);
            }
    }
}

TEST_CASE("support radius") {
    auto a1 = RootDatum::parse("A1adj");
    CHECK(support_radius(InvariantFunction::constant(a1, GaussQ(Rational(1)))) == 0);
    auto h1 = weyl_character(a1, dual({1}));
    CHECK(support_radius(h1) == 1);
    auto h3 = weyl_character(a1, dual({3}));
    CHECK(support_radius(add(h1, h3)) <= std::max(support_radius(h1), support_radius(h3)));
}

TEST_CASE("hermitian witness") {
    auto a2 = RootDatum::parse("A2adj");
    TorusPoint t{{0.4, 0.0}, {0.0, 0.0}};
    auto w = hermitian_witness(*a2, t);
    REQUIRE(w.has_value());
    std::vector<double> wx(2), wt(2);
    a2->weyl().act_alpha(*w, t.x.data(), wx.data());
    CHECK(wx[0] == doctest::Approx(-t.x[0]));
    CHECK(wx[1] == doctest::Approx(-t.x[1]));
    TorusPoint u{{0.4, 0.1}, {0.13, 0.71}};
    CHECK_FALSE(hermitian_witness(*a2, u).has_value());
}
