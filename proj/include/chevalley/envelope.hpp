#pragma once

#include "chevalley/arch.hpp"

#include <vector>

namespace chevalley {

struct ThetaOperator;

struct LevelData {
    double v_K = 1;
    long long N = 1;
    std::vector<long long> S;
    // N = 0 means: take the product of S
    static LevelData make(double v_K, std::vector<long long> S, long long N = 0);
};

// implicit constants of the bounds; all default to 1 and are echoed in every report
struct EnvelopeConstants {
    double A = 1;           // exponent from the amplifier
    double C_boundary = 1;
    double C_saving = 1;
};

struct EnvelopeReport {
    double main_term = 0;
    double main_residual = 0;
    double boundary_term = 0;     // C_b vol(d_1 D) (1 + |D|)^{d - r} [* l1]
    double saving_term = 0;       // C_s (1 + |D|)^{d - delta} [* l1 (1 + ms)^r]
    double log_boundary_term = 0, log_saving_term = 0;
    double vol_boundary = 0;
    bool vol_boundary_exact = false;
    double norm_D = 0;
    double delta = 0, delta_max = 0;
    int d = 0, r = 0;
    EnvelopeConstants constants;
    bool hecke = false;
    double tau_l1 = 1, log_tau_l1 = 0, tau_ms = 0;
    double l1_factor = 1, ms_factor = 1;
};

// Killing-Lebesgue volume of the 1-neighbourhood of the boundary of D in i a0^*.
// Closed form for a single ball about 0; otherwise vol(D^{+1}) - vol(D^{-1}) with
// D^{+-1} the unions of the orbit balls with radii shifted by one.
double boundary_volume(const RootDatum& rd, const SpectralRegion& D, bool* exact = nullptr);
double ball_volume(int r, double t);  // Euclidean volume of the r-ball

double main_term(const LevelData& level, const RootDatum& rd, const SpectralRegion& D, double* residual = nullptr);
EnvelopeReport remainder_envelope(const RootDatum& rd, const SpectralRegion& D, double delta,
                                  const EnvelopeConstants& c = {});
EnvelopeReport hecke_envelope(const RootDatum& rd, const SpectralRegion& D, double delta, double tau_l1, double tau_ms,
                              const EnvelopeConstants& c = {}, double log_tau_l1 = NAN);
EnvelopeReport hecke_envelope(const RootDatum& rd, const SpectralRegion& D, double delta, const ThetaOperator& theta,
                              const EnvelopeConstants& c = {});

}  // namespace chevalley
