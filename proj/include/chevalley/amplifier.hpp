#pragma once

#include "chevalley/plancherel.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

namespace chevalley {

// Small dominant characters of the dual torus used to build h and the localizer:
// every nonzero dominant nu with <nu, rho> no larger than that of the smallest
// lattice multiples of the fundamental coweights.
std::vector<Weight> generator_weights(const RootDatum& rd);

// h = |S|^{-1} sum_{nu in S} e_nu e_nu^*; max 1 on the compact torus, attained at 1
InvariantFunction proper_function(const RootDatumPtr& rd);
// w = sum_{nu in S} |e_nu - e_nu(c)|^2, vanishing exactly on the orbit of c
InvariantFunction localizer(const RootDatumPtr& rd, const std::vector<double>& center_alpha);

// sum_nu beta_nu |e_nu - e_nu(c)|^2 over small dominant nu, with beta chosen so that the gap in
// phi = 2 asin sqrt(w / max w) between the ball of radius r_in and the complement of the ball of
// radius r_out is as large as possible per unit of degree
InvariantFunction tuned_localizer(const RootDatumPtr& rd, const std::vector<double>& c, double r_in, double r_out,
                                  double* gap = nullptr);

// Half of the distance from c to its nearest nontrivial W-translate (torus metric).
double regularity_margin(const TorusGeometry& g, const std::vector<double>& c);

// Component of the hermitian set attached to an involution w:
// t = exp(x + 2 pi i (theta0 + theta_plus)), x in E_{-1}(w), theta_plus in E_{+1}(w).
struct HermitianComponent {
    size_t w = 0;
    std::vector<std::vector<double>> minus_basis;  // orthonormal for the torus metric
    std::vector<std::vector<double>> plus_gens;    // lattice vectors spanning a finite-index part of Lambda cap E_+
    std::vector<std::vector<double>> theta0;       // representatives of the discrete part
};
std::vector<HermitianComponent> hermitian_components(const TorusGeometry& g);

// Monotone step P(u) = int_0^u K^2 / int_0^1 K^2 with K(u) a symmetric Fejer kernel in
// phi (u = sin^2(phi/2)) centred at phi0. P' = K^2 / Z >= 0 on the whole line.
struct StepCoeffs;
struct StepPolynomial {
    int m = 0;
    double phi0 = 0;
    std::shared_ptr<const StepCoeffs> coeffs;
    static StepPolynomial make(int m, double phi0);
    int degree() const { return 2 * m + 1; }
    double operator()(double u) const;  // 100-digit Clenshaw
    double fast(double u) const;        // quadrature in phi, u <= 1
    // coefficients of P^2 (or (1-P)^2) in T_k(1 - 2u)
    std::vector<double> square_chebyshev(bool complement) const;
};

struct SeparatorCertificate {
    double Wc = 0;            // certified max of w on the compact torus
    double w_inner = 0;       // certified max of w on C1
    double w_outer = 0;       // certified min of w on the compact part of C2
    double w_outer_nt = 0;    // certified min of w on the sampled nontempered box
    double lipschitz = 0;     // torus-metric Lipschitz constant of w
    double grid_radius = 0;   // covering radius of the compact grid
    double u1 = 0, u2 = 0;
    double f_max_C1 = 0, f_min_C2 = 0, f_max_compact = 1;  // normal orientation
    double f_min_C1 = 0, f_max_C2 = 0;                     // complement orientation
    long compact_samples = 0, nontempered_samples = 0;
    int degree = 0;
    bool ok = false;
};

struct Separator {
    InvariantFunction w;   // localizer
    InvariantFunction f;   // separator in the ring
    std::vector<double> chebyshev;  // f = sum_k a_k T_k(1 - 2u), u = w / Wc
    StepPolynomial step;
    double Wc = 1;
    bool complement = false;
    SeparatorCertificate cert;
    double value_from_w(double wv) const;  // f as a function of the localizer value
};

struct HermitianCloud {
    // localizer / proper-function values at sample points
    std::vector<double> compact_w, compact_h;       // compact grid nodes outside U
    std::vector<double> nt_w, nt_h;                 // nontempered nodes with h <= level
    std::vector<double> shell_w, shell_h;           // level < h <= 2 level
    double level = 0;
    double box_radius = 0;
    long nt_nodes = 0;
    double nt_w_cert = INFINITY;                    // certified min of w over the whole box
    double ring_gap_compact = 0;                    // |ring f - structural f| on compact nodes
    double ring_gap_nt = 0;                         // gap at nontempered spot checks over sum |c_nu t^nu|
    int compact_n = 0;
    std::vector<double> compact_f;                  // ring values of f at compact_w nodes
    std::vector<double> nt_f, shell_f;              // f from the step polynomial at the nontempered samples
};

struct SeparatorInput {
    RootDatumPtr rd;
    TorusRegion C1;            // V^cl
    TorusRegion U;             // C2 = C minus U
    std::vector<double> center;  // localizer centre (alpha coords)
    double eps = 0.25;
    double level = 0;          // C = {h <= level} on the hermitian set
    int degree_budget = 400;
    int grid_n = 0;            // compact grid per axis (0 = default)
    bool complement = false;
};

Separator sw_separator(const SeparatorInput& in, HermitianCloud* cloud = nullptr);

struct AmplifierConfig {
    double shrink = 0.6;
    double safety = 0.9;
    std::vector<long long> panel;  // empty = primes <= 97
    double delta_floor = 1e-4;
    int degree_budget = 400;
    int grid_n = 0;
};

struct AmplifierDesign {
    RootDatumPtr rd;
    TorusRegion U, V;
    double shrink = 0;
    std::vector<double> center;
    double delta = 0, X = 0, eps = 0;
    std::vector<std::pair<long long, double>> panel_masses;  // p = 0 is Sato-Tate
    InvariantFunction h, h_char;
    Separator sep;
    InvariantFunction f_char;
    HermitianCloud cloud;
    double h_level = 0;
};

std::shared_ptr<const AmplifierDesign> design_amplifier(const RootDatumPtr& rd, const TorusRegion& U,
                                                        const AmplifierConfig& cfg = {});

struct AmplifierCertificate {
    double identity_residual = 0;
    double min_S_compact = 0, min_S_nontempered = 0, min_S_shell = 0, min_S = 0;
    double certified_lower = 0;  // X (f_min_C2 - mu f) - mu h on C minus U
    double tail_lower = 0;       // X + 2 - X mu f - mu h outside C
    double l2 = 0, l2_residual = 0;
    L1Bound l1;
    double A = 0, B = 0;
    double support_radius = 0;
    double mu_f = 0, mu_h = 0;
    long samples = 0;
    bool item[5] = {false, false, false, false, false};
    bool ok = false;
};

struct AmplifierElement {
    long long p = 0;
    std::shared_ptr<const AmplifierDesign> design;
    InvariantFunction g;
    AmplifierCertificate cert;
};

AmplifierElement build_amplifier(const std::shared_ptr<const AmplifierDesign>& d, long long p);
AmplifierElement build_amplifier(const RootDatumPtr& rd, const TorusRegion& U, long long p, const AmplifierConfig& cfg = {});

// ---- separation for a proper standard Levi ----

struct SeparationDatum {
    RootDatumPtr rd;
    int levi = 0;                    // index into rd->levis
    std::vector<double> c1, c2;      // orbit centres (alpha coords)
    double rho1 = 0, rho2 = 0;       // radii of U1, U2 (torus metric)
    double d = 0;                    // distance between O1 T^M and O2 T^M
    double margin = 0;               // distance between U1^cl T^M and U2^cl T^M (lower bound)
    double delta1 = 0;               // radius of U (torus metric)
    double delta1_killing = 0;       // the same radius for lambda in the Killing metric
    double sampled_distance = 0;
    double sample_resolution = 0;
    double lipschitz_slack = 0;
    long samples = 0;
    bool certified = false;
    TorusRegion U1, U2, U;
};

SeparationDatum separation_find(const RootDatumPtr& rd, int levi, int resolution = 12, int max_resolution = 48);
// distance between a and b modulo the subtorus of the Levi and the period lattice
double levi_distance(const TorusGeometry& g, const StandardLevi& M, const std::vector<double>& a, const std::vector<double>& b);
struct ReplayResult {
    long samples = 0, violations = 0;
};
ReplayResult replay_separation(const SeparationDatum& s, long samples, unsigned seed);

struct IndexChoice {
    int j = 1;
    bool certified1 = false, certified2 = false;
    double dist1 = 0, dist2 = 0;
};
IndexChoice index_selector(const SeparationDatum& s, const SpectralParameter& mu, long long p);

std::vector<long long> primes_up_to(long long X);
std::vector<long long> primes_in_progression(double X, long long N);

struct ThetaComponent {
    long long p = 0;
    int j = 1;
    AmplifierElement tau;
    double l1 = 0, l2_sq = 0, ms = 0;
};

struct ThetaOperator {
    SpectralParameter mu;
    int levi = 0;
    double X = 0;
    long long N = 1;
    std::vector<long long> primes;
    long long Y = 0;
    std::vector<ThetaComponent> comps;
    double l1_total = 0, l2_sq_total = 0, ms_bound = 0;
    double A = 0, B = 0, a_max = 0;
    bool l1_ok = true, l2_ok = true, ms_ok = true;
};

struct ThetaDesigns {
    std::shared_ptr<const AmplifierDesign> d1, d2;
};
ThetaDesigns theta_designs(const SeparationDatum& s, const AmplifierConfig& cfg = {});
ThetaOperator assemble_theta(const SeparationDatum& s, const ThetaDesigns& d, const SpectralParameter& mu, double X, long long N);

double choose_X(const RootDatum& rd, const SpectralParameter& mu, double A, double C3 = 2);
double ms_bound(const InvariantFunction& f, double p);
double ms_bound(const ThetaOperator& t);

}  // namespace chevalley
