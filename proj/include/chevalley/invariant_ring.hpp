#pragma once

#include "chevalley/root_datum.hpp"

#include <complex>
#include <map>
#include <optional>

namespace chevalley {

using Complex = std::complex<double>;

// exact Gaussian rational
struct GaussQ {
    Rational re, im;
    GaussQ() = default;
    GaussQ(Rational r) : re(std::move(r)) {}
    GaussQ(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
    GaussQ operator-(const GaussQ& o) const { return {re - o.re, im - o.im}; }
    GaussQ operator*(const GaussQ& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GaussQ& operator+=(const GaussQ& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussQ conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }
    bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
    Complex to_complex() const { return {to_double(re), to_double(im)}; }
    std::string str() const;
};

enum class Basis { OrbitAverage, WeylCharacter };

// t = exp(x + 2 pi i theta), x and theta in simple-root coordinates of a0^*
struct TorusPoint {
    std::vector<double> x, theta;
    static TorusPoint compact(std::vector<double> theta);
    // p^chi for chi in simple-root coords (rho_p uses chi = rho)
    static TorusPoint prime_power(const std::vector<double>& chi_alpha, double p);
    bool on_compact(double tol = 0) const;
};

// theta - theta' in the period lattice X^*(T0)?
bool congruent_mod_period(const RootDatum& rd, const std::vector<double>& a, const std::vector<double>& b,
                          double tol = 1e-12);
std::vector<double> reduce_mod_period(const RootDatum& rd, const std::vector<double>& theta);
// w with w(x) = -x and w(theta) = theta mod periods, i.e. w(conj t) = t^{-1}
std::optional<size_t> hermitian_witness(const RootDatum& rd, const TorusPoint& t, double tol = 1e-12);

class InvariantFunction {
public:
    InvariantFunction() = default;
    InvariantFunction(RootDatumPtr rd, Basis b, bool exact) : rd_(std::move(rd)), basis_(b), exact_(exact) {}

    static InvariantFunction constant(RootDatumPtr rd, const GaussQ& c);
    static InvariantFunction constant_numeric(RootDatumPtr rd, Complex c);

    const RootDatumPtr& rd() const { return rd_; }
    Basis basis() const { return basis_; }
    bool exact() const { return exact_; }
    size_t size() const { return exact_ ? q_.size() : z_.size(); }
    bool is_zero() const { return size() == 0; }

    const std::map<Weight, GaussQ>& exact_coefficients() const { return q_; }
    const std::map<Weight, Complex>& numeric_coefficients() const { return z_; }
    std::vector<Weight> support() const;
    Complex coefficient(const Weight& w) const;

    void add_term(const Weight& w, const GaussQ& c);
    void add_term(const Weight& w, Complex c);
    InvariantFunction to_numeric() const;
    // drop numeric coefficients with |c| <= tol * max|c|
    void prune(double rel_tol);

private:
    RootDatumPtr rd_;
    Basis basis_ = Basis::OrbitAverage;
    bool exact_ = true;
    std::map<Weight, GaussQ> q_;
    std::map<Weight, Complex> z_;
    void check_weight(const Weight& w) const;
};

InvariantFunction orbit_average(const RootDatumPtr& rd, const Weight& lambda);
InvariantFunction weyl_character(const RootDatumPtr& rd, const Weight& lambda);

// dominant weight multiplicities of the dual-group irrep V_lambda (Freudenthal)
const std::map<Weight, BigInt>& dominant_multiplicities(const RootDatumPtr& rd, const Weight& lambda);
BigInt weyl_dimension(const RootDatum& rd, const Weight& lambda);

InvariantFunction add(const InvariantFunction& f, const InvariantFunction& g);
InvariantFunction scale(const InvariantFunction& f, const GaussQ& c);
InvariantFunction scale(const InvariantFunction& f, Complex c);
InvariantFunction multiply(const InvariantFunction& f, const InvariantFunction& g);
InvariantFunction star(const InvariantFunction& f);
InvariantFunction to_character_basis(const InvariantFunction& f);
InvariantFunction to_orbit_basis(const InvariantFunction& f);
// character expansion by the alternant (Weyl numerator) instead of elimination
InvariantFunction to_character_basis_alternant(const InvariantFunction& f);

Complex evaluate(const InvariantFunction& f, const TorusPoint& t);
// t^nu for a dual character
Complex monomial(const Weight& nu, const TorusPoint& t);

Rational exponent_A(const InvariantFunction& f);

// h_lambda(p^rho) = a + b sqrt(p)
struct QSqrt {
    Rational a, b;
    double value(double p) const;
};
// exact sign of a + b sqrt(p)
int sign(const QSqrt& q, long long p);
QSqrt character_at_rho_p(const RootDatum& rd, const Weight& lambda, long long p);
double log_character_at_rho_p(const RootDatum& rd, const Weight& lambda, double p);

struct L1Bound {
    bool exact = false;
    QSqrt exact_value;  // valid when exact
    double log_value = 0;
    double value = 0;   // may be +inf for huge exponents; log_value stays finite
    Rational A;
    double B = 0;       // sum |c_lambda| dim V_lambda
};
L1Bound l1_norm_bound(const InvariantFunction& f, long long p);

Rational support_radius(const InvariantFunction& f);

std::string basis_name(Basis b);

}  // namespace chevalley
