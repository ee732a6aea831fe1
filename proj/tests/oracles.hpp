#pragma once

// Independent reference computations used by the tests. Nothing here calls into the
// library except for plain data types.

#include "chevalley/rational.hpp"

#include <complex>
#include <map>
#include <vector>

namespace oracle {

using IMat = chevalley::IMat;
using IVec = chevalley::IVec;

IMat cartan(char series, int rank);  // textbook tables, C[i][j] = <alpha_j, alpha_i^vee>

// positive roots in simple-root coordinates by closing the simple roots under reflections
std::vector<IVec> positive_roots(const IMat& C);
// |W| by breadth-first search over the reflection matrices
size_t weyl_order(const IMat& C);

// dimension of the dual-group irrep with highest weight lambda (fundamental coweight coords)
chevalley::BigInt weyl_dimension(const IMat& C, const IVec& lambda);
// h_lambda(exp(2 pi i theta)) from the Weyl character formula as a ratio of alternants
std::complex<double> character_alternant(const IMat& C, const IVec& lambda, const std::vector<double>& theta);
// orbit of a dual character (coweight coords) under W
std::vector<IVec> dual_orbit(const IMat& C, const IVec& lambda);
// orbit of a G-weight (varpi coords, doubles)
std::vector<std::vector<double>> weight_orbit(const IMat& C, const std::vector<double>& v);
// inverse Killing form on a0^* in the varpi basis
std::vector<std::vector<double>> killing_dual_gram(const IMat& C);

// (1/2 pi) int 4 cos^2 t 2 sin^2 t dt by the trapezoid rule
double sato_tate_trace_second_moment(int nodes);

// PGL2 spherical Hecke algebra in the basis T_{p^k}; f given by coefficients of X_n = h_{n varpi}
// (X_1 = p^{-1/2} T_p). Returns the T_1 coefficient, i.e. the Plancherel integral of f.
double pgl2_plancherel(const std::map<int, double>& x_coeffs, double p);
// number of left K-cosets in K diag(p, 1) K by explicit enumeration
long pgl2_hecke_cosets(long p);

std::vector<long long> primes_by_trial_division(long long X);

// explicit |c(lambda)/c(rho)|^{-2} for imaginary lambda with real Gamma products only;
// pairings <lambda, alpha^vee>/i and <rho, alpha^vee> supplied per positive root
double beta_closed_form(const std::vector<double>& lambda_pairings, const std::vector<double>& rho_pairings);

}  // namespace oracle
