#include "chevalley/envelope.hpp"

#include "chevalley/amplifier.hpp"

#include <cmath>

namespace chevalley {

LevelData LevelData::make(double v_K, std::vector<long long> S, long long N) {
    if (!(v_K > 0)) throw Error("usage", "v_K must be positive");
    long long prod = 1;
    for (long long p : S) {
        if (p < 2) throw Error("usage", "ramified set must consist of primes");
        prod *= p;
    }
    if (N == 0) N = prod;
    if (N < 1 || N % prod != 0) throw Error("usage", "N must be divisible by the product of S");
    LevelData l;
    l.v_K = v_K;
    l.N = N;
    l.S = std::move(S);
    return l;
}

double ball_volume(int r, double t) {
    if (t <= 0) return 0.0;
    return std::pow(M_PI, 0.5 * r) / std::tgamma(0.5 * r + 1) * std::pow(t, r);
}

double boundary_volume(const RootDatum& rd, const SpectralRegion& D, bool* exact) {
    if (exact) *exact = true;
    if (D.empty()) return 0.0;
    const int r = rd.rank;
    if (D.balls.size() == 1 && rd.norm_varpi(D.balls[0].center) < 1e-12) {
        double t = D.balls[0].radius;
        return ball_volume(r, t + 1) - ball_volume(r, t - 1);
    }
    if (exact) *exact = false;
    SpectralRegion outer = D, inner;
    for (auto& b : outer.balls) b.radius += 1;
    for (auto& b : D.balls)
        if (b.radius > 1) inner.balls.push_back({b.center, b.radius - 1});
    auto one = [](const std::vector<double>&) { return 1.0; };
    double vo = integrate_region(rd, outer, one, 8, 256);
    double vi = integrate_region(rd, inner, one, 8, 256);
    return std::max(0.0, vo - vi);
}

double main_term(const LevelData& level, const RootDatum& rd, const SpectralRegion& D, double* residual) {
    if (D.empty()) {
        if (residual) *residual = 0;
        return 0.0;
    }
    VolumeResult v = plancherel_volume(rd, D);
    if (residual) *residual = level.v_K * v.residual;
    return level.v_K * v.value;
}

EnvelopeReport remainder_envelope(const RootDatum& rd, const SpectralRegion& D, double delta, const EnvelopeConstants& c) {
    if (!(c.A > 0)) throw Error("usage", "A must be positive");
    double dmax = 1.0 / (4 * c.A + 2);
    if (!(delta > 0 && delta < dmax)) throw Error("invalid-delta", "delta must lie in (0, 1/(4A+2))");
    if (!(c.C_boundary >= 0 && c.C_saving >= 0)) throw Error("usage", "constants must be nonnegative");
    EnvelopeReport e;
    e.d = rd.dim_d;
    e.r = rd.rank;
    e.delta = delta;
    e.delta_max = dmax;
    e.constants = c;
    e.norm_D = D.norm(rd);
    e.vol_boundary = boundary_volume(rd, D, &e.vol_boundary_exact);
    double lb = std::log1p(e.norm_D);
    e.boundary_term = c.C_boundary * e.vol_boundary * std::exp((e.d - e.r) * lb);
    e.saving_term = c.C_saving * std::exp((e.d - delta) * lb);
    e.log_boundary_term = std::log(e.boundary_term);
    e.log_saving_term = std::log(e.saving_term);
    return e;
}

EnvelopeReport hecke_envelope(const RootDatum& rd, const SpectralRegion& D, double delta, double tau_l1, double tau_ms,
                              const EnvelopeConstants& c, double log_tau_l1) {
    if (std::isnan(log_tau_l1)) log_tau_l1 = std::log(tau_l1);
    if (!(log_tau_l1 > -INFINITY) || !(tau_ms >= 0)) throw Error("usage", "need l1 > 0 and ms >= 0");
    EnvelopeReport e = remainder_envelope(rd, D, delta, c);
    e.hecke = true;
    e.tau_l1 = tau_l1;
    e.log_tau_l1 = log_tau_l1;
    e.tau_ms = tau_ms;
    e.l1_factor = tau_l1;
    e.ms_factor = std::pow(1 + tau_ms, e.r);
    if (tau_l1 != 1) {
        e.boundary_term *= tau_l1;
        e.saving_term *= tau_l1 * e.ms_factor;
        e.log_boundary_term += log_tau_l1;
        e.log_saving_term += log_tau_l1 + e.r * std::log1p(tau_ms);
    } else if (tau_ms != 0) {
        e.saving_term *= e.ms_factor;
        e.log_saving_term += e.r * std::log1p(tau_ms);
    }
    return e;
}

EnvelopeReport hecke_envelope(const RootDatum& rd, const SpectralRegion& D, double delta, const ThetaOperator& theta,
                              const EnvelopeConstants& c) {
    EnvelopeConstants cc = c;
    if (theta.A > 0) cc.A = theta.A;
    return hecke_envelope(rd, D, delta, theta.l1_total, theta.ms_bound, cc);
}

}  // namespace chevalley
