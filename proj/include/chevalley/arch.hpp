#pragma once

#include "chevalley/root_datum.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace chevalley {

using Complex = std::complex<double>;

Complex log_gamma(Complex z);  // Lanczos, reflection for Re z < 1/2
Complex gamma_fn(Complex z);
Complex phi_factor(Complex s);  // Gamma_R(s)/Gamma_R(s+1)

Complex c_function(const RootDatum& rd, const SpectralParameter& l);
double beta(const RootDatum& rd, const SpectralParameter& l);          // explicit product
double beta_via_c(const RootDatum& rd, const SpectralParameter& l);    // |c(l)/c(rho)|^{-2}
double beta_tilde(const RootDatum& rd, const SpectralParameter& l);
// constant in d mu_pl = kappa * beta * (2 pi)^{-r} d lambda (Killing Lebesgue measure)
double plancherel_kappa(const RootDatum& rd);
double weyl_constant(int d);  // 1 / ((4 pi)^{d/2} Gamma(d/2 + 1))

// orthonormal (Killing) coordinates z of a0^*: ||v||^2 = |z|^2
struct Frame {
    explicit Frame(const RootDatum& rd);
    std::vector<double> to_z(const std::vector<double>& v) const;
    std::vector<double> to_varpi(const std::vector<double>& z) const;
    std::vector<std::vector<double>> R;  // R[w] row-major r x r orthogonal action on z
    int r;
    std::vector<double> L, Linv;  // gram = L L^T, z = L^T v
};

// W-orbit balls in i a0^*; centres in varpi coordinates
struct SpectralBall {
    std::vector<double> center;
    double radius = 0;
};
struct SpectralRegion {
    std::vector<SpectralBall> balls;
    static SpectralRegion ball(int rank, double t);
    bool empty() const { return balls.empty(); }
    double norm(const RootDatum& rd) const;  // max ||centre|| + radius
};

struct SpecialResult;

class PWFunction {
public:
    // W-averaged product of sinh(a z)/(a z) over a Killing-orthonormal frame, raised to 2k
    static PWFunction bump(RootDatumPtr rd, double R, int k = 2);

    const RootDatumPtr& rd() const { return rd_; }
    double type() const { return R_; }
    int decay_order() const { return 2 * k_; }
    double scale() const { return t_; }
    double constant() const { return c_; }
    bool special() const { return special_; }
    bool nonneg() const { return true; }
    const std::vector<double>& center() const { return mu_; }

    // lambda = re + i im, varpi coordinates
    Complex operator()(const SpectralParameter& l) const;
    // holomorphic gradient in orthonormal coordinates
    std::vector<Complex> gradient(const SpectralParameter& l) const;

    PWFunction scaled(double c, double t) const;
    PWFunction localized(const std::vector<double>& mu_im) const;
    PWFunction conj_function() const { return *this; }  // real-coefficient entire function: g* = g

    double gradient_bound() const;  // (||rho||^2 + 1)^{-1/2}
    // sup of ||grad|| over the slab ||Re|| <= ||rho|| by sampling
    double sampled_gradient_sup(int samples, unsigned seed) const;
    double finite_difference_check(int samples, unsigned seed, double h = 1e-5) const;
    // integral over i a0^* (Killing Lebesgue) of g(i z); exact trapezoid for band-limited g
    double integral() const;

private:
    RootDatumPtr rd_;
    std::shared_ptr<Frame> frame_;
    double R_ = 1, a_ = 1, c_ = 1, t_ = 1;
    int k_ = 2;
    bool special_ = false;
    std::vector<double> mu_;  // localization centre (imaginary part), empty = none
    Complex base(const std::vector<Complex>& z, std::vector<Complex>* grad) const;
    Complex eval_unlocalized(const std::vector<Complex>& z, std::vector<Complex>* grad) const;
    friend SpecialResult make_special(const PWFunction& g, double slack, unsigned seed);
};

struct SpecialResult {
    PWFunction g;
    double c = 0, t = 0;
    double bound = 0, sampled_sup = 0, fd_discrepancy = 0;
    int samples = 0;
    bool certified = false;
};
SpecialResult make_special(const PWFunction& g, double slack = 0.10, unsigned seed = 1);

// Sum over the overlapping orbit balls of D with weights 1/multiplicity.
// f is evaluated at orthonormal coordinates z of the integration point.
struct RegionQuadrature {
    int radial_panels = 0;
    int nodes = 0;
};
double integrate_region(const RootDatum& rd, const SpectralRegion& D, const std::function<double(const std::vector<double>&)>& f,
                        int radial_per_unit = 1, int angular = 256, RegionQuadrature* info = nullptr);

struct VolumeResult {
    double value = 0;
    double ratio = 0;  // value / (t^d weyl_constant) for balls about 0
    double residual = 0;
    int nodes = 0;
};
VolumeResult plancherel_volume(const RootDatum& rd, const SpectralRegion& D);
VolumeResult plancherel_volume_ball(const RootDatum& rd, double t);

// g_D(lambda) = int_D g(lambda - mu) d mu, g normalised to total mass one
double region_smooth(const PWFunction& g, const SpectralRegion& D, const SpectralParameter& l, double g_mass);

// |g_mu(l)| (1 + min_w ||l - w mu||)^n sampled on the slab ||Re l|| <= ||rho|| in shells of
// growing distance from the orbit; C is the largest value, shell_max the per-shell maxima
struct DecayFit {
    int n = 0;
    double C = 0;
    std::vector<double> shell_edges, shell_max;
    double slope = 0;      // log-log slope of shell_max over the outer half of the shells
    long samples = 0;
    bool bounded = false;  // slope <= 1/2
};
DecayFit localized_decay(const PWFunction& g_mu, int n, int samples, unsigned seed, int shells = 8);

// max over real x with ||x|| <= ||rho|| of |g(l + x)|
double sup_operator(const PWFunction& g, const SpectralParameter& l, int directions = 64, int radii = 8);

}  // namespace chevalley
