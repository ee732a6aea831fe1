#include "chevalley/arch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

namespace chevalley {

namespace {
constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
                                 14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
                                 .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
                                 -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
                                 .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

// Gauss-Legendre nodes on [-1,1] by Newton iteration
struct GL {
    std::vector<double> x, w;
};
const GL& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GL> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GL g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (x * p1 - p0) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        g.x[i] = x;
        g.w[i] = 2 / ((1 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(g)).first->second;
}

double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0;
    while (v.size() > 1) {
        std::vector<double> nxt((v.size() + 1) / 2);
        for (size_t i = 0; i < nxt.size(); ++i) nxt[i] = v[2 * i] + (2 * i + 1 < v.size() ? v[2 * i + 1] : 0.0);
        v.swap(nxt);
    }
    return v[0];
}

// sinh(x)/x and its derivative
Complex shc(Complex x) {
    if (std::abs(x) < 1e-3) {
        Complex x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}
Complex shc_prime(Complex x) {
    if (std::abs(x) < 1e-3) {
        Complex x2 = x * x;
        return x / 3.0 + x * x2 / 30.0;
    }
    return (x * std::cosh(x) - std::sinh(x)) / (x * x);
}

double dnorm(const std::vector<double>& z) {
    double s = 0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}
}  // namespace

Complex log_gamma(Complex z) {
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    Complex ser = kLanczos[0];
    for (int j = 1; j < 15; ++j) ser += kLanczos[j] / (z + static_cast<double>(j));
    Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(ser);
}

Complex gamma_fn(Complex z) { return std::exp(log_gamma(z)); }

Complex phi_factor(Complex s) {
    // poles of Gamma(s/2) at s = 0, -2, -4, ...
    double re = s.real();
    if (std::fabs(s.imag()) < 1e-12 && re <= 1e-12) {
        double k = std::round(-re / 2);
        if (std::fabs(re + 2 * k) < 1e-12) throw Error("pole", "c-function pole at <lambda, alpha^vee> = " + std::to_string(re));
    }
    return std::exp(0.5 * std::log(kPi) + log_gamma(s / 2.0) - log_gamma((s + 1.0) / 2.0));
}

Complex c_function(const RootDatum& rd, const SpectralParameter& l) {
    Complex c = 1;
    for (size_t k = 0; k < rd.positive_roots.size(); ++k) c *= phi_factor(rd.pair_coroot(l, static_cast<int>(k)));
    return c;
}

namespace {
double rho_coroot(const RootDatum& rd, int k) {
    double s = 0;
    for (long long v : rd.positive_roots[k].coalpha) s += static_cast<double>(v);
    return s;
}
}  // namespace

double beta(const RootDatum& rd, const SpectralParameter& l) {
    double b = 1;
    for (size_t k = 0; k < rd.positive_roots.size(); ++k) {
        double m = rho_coroot(rd, static_cast<int>(k));
        double g = std::exp(std::lgamma(m / 2) - std::lgamma((m + 1) / 2));
        double y = rd.pair_coroot(l.im, static_cast<int>(k));
        b *= g * g * (y / 2) * std::tanh(kPi * y / 2);
    }
    return b;
}

double beta_via_c(const RootDatum& rd, const SpectralParameter& l) {
    SpectralParameter rho;
    rho.re.assign(rd.rank, 1.0);
    rho.im.assign(rd.rank, 0.0);
    // product of per-root ratios avoids the zero of c(lambda)^{-1} structure
    double b = 1;
    for (size_t k = 0; k < rd.positive_roots.size(); ++k) {
        Complex s = rd.pair_coroot(l, static_cast<int>(k));
        Complex sr = rd.pair_coroot(rho, static_cast<int>(k));
        if (std::abs(s) < 1e-300) return 0.0;
        b *= std::norm(phi_factor(sr)) / std::norm(phi_factor(s));
    }
    return b;
}

double beta_tilde(const RootDatum& rd, const SpectralParameter& l) {
    double b = 1;
    for (size_t k = 0; k < rd.positive_roots.size(); ++k) b *= 1 + std::fabs(rd.pair_coroot(l.im, static_cast<int>(k)));
    return b;
}

double plancherel_kappa(const RootDatum& rd) {
    double k = 1.0 / static_cast<double>(rd.weyl().order());
    for (size_t j = 0; j < rd.positive_roots.size(); ++j) {
        double m = rho_coroot(rd, static_cast<int>(j));
        double B = std::exp(std::lgamma(0.5) + std::lgamma(m / 2) - std::lgamma((m + 1) / 2));
        k *= rd.root_norm(static_cast<int>(j)) / B;
    }
    return k;
}

double weyl_constant(int d) { return 1.0 / (std::pow(4 * kPi, d / 2.0) * std::tgamma(d / 2.0 + 1)); }

Frame::Frame(const RootDatum& rd) : r(rd.rank) {
    Eigen::MatrixXd G(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) G(i, j) = rd.gram_d()[i * r + j];
    Eigen::MatrixXd Lm = G.llt().matrixL();
    Eigen::MatrixXd Li = Lm.inverse();
    L.resize(r * r);
    Linv.resize(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            L[i * r + j] = Lm(i, j);
            Linv[i * r + j] = Li(i, j);
        }
    const auto& W = rd.weyl();
    R.resize(W.order());
    std::vector<double> e(r), v(r), wv(r);
    for (size_t w = 0; w < W.order(); ++w) {
        R[w].assign(r * r, 0.0);
        for (int j = 0; j < r; ++j) {
            std::fill(e.begin(), e.end(), 0.0);
            e[j] = 1;
            v = to_varpi(e);
            W.act_varpi(w, v.data(), wv.data());
            auto z = to_z(wv);
            for (int i = 0; i < r; ++i) R[w][i * r + j] = z[i];
        }
    }
}

std::vector<double> Frame::to_z(const std::vector<double>& v) const {
    std::vector<double> z(r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) z[i] += L[j * r + i] * v[j];
    return z;
}

std::vector<double> Frame::to_varpi(const std::vector<double>& z) const {
    // v = L^{-T} z
    std::vector<double> v(r, 0.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) v[i] += Linv[j * r + i] * z[j];
    return v;
}

SpectralRegion SpectralRegion::ball(int rank, double t) {
    SpectralRegion D;
    if (t > 0) D.balls.push_back({std::vector<double>(rank, 0.0), t});
    return D;
}

double SpectralRegion::norm(const RootDatum& rd) const {
    double m = 0;
    for (auto& b : balls) m = std::max(m, rd.norm_varpi(b.center) + b.radius);
    return m;
}

PWFunction PWFunction::bump(RootDatumPtr rd, double R, int k) {
    if (!(R > 0)) throw Error("usage", "Paley-Wiener type must be positive");
    if (k < 1) throw Error("usage", "power must be positive");
    PWFunction g;
    g.frame_ = std::make_shared<Frame>(*rd);
    g.rd_ = std::move(rd);
    g.R_ = R;
    g.k_ = k;
    g.a_ = R / (2 * k * std::sqrt(static_cast<double>(g.rd_->rank)));
    return g;
}

Complex PWFunction::base(const std::vector<Complex>& z, std::vector<Complex>* grad) const {
    const int r = frame_->r;
    const size_t nw = frame_->R.size();
    Complex F = 0;
    std::vector<Complex> dF(r, 0.0), y(r), s(r), sp(r);
    for (size_t w = 0; w < nw; ++w) {
        const auto& Rw = frame_->R[w];
        for (int i = 0; i < r; ++i) {
            Complex acc = 0;
            for (int j = 0; j < r; ++j) acc += Rw[i * r + j] * z[j];
            y[i] = a_ * acc;
            s[i] = shc(y[i]);
        }
        Complex prod = 1;
        for (int i = 0; i < r; ++i) prod *= s[i];
        F += prod;
        if (grad) {
            for (int i = 0; i < r; ++i) {
                Complex others = 1;
                for (int l = 0; l < r; ++l)
                    if (l != i) others *= s[l];
                Complex di = a_ * shc_prime(y[i]) * others;
                for (int j = 0; j < r; ++j) dF[j] += di * Rw[i * r + j];
            }
        }
    }
    F /= static_cast<double>(nw);
    if (grad) {
        for (auto& d : dF) d /= static_cast<double>(nw);
        grad->assign(r, 0.0);
    }
    Complex val = c_ * std::pow(F, 2 * k_);
    if (grad) {
        Complex f = c_ * 2.0 * static_cast<double>(k_) * std::pow(F, 2 * k_ - 1);
        for (int j = 0; j < r; ++j) (*grad)[j] = f * dF[j];
    }
    return val;
}

Complex PWFunction::eval_unlocalized(const std::vector<Complex>& z, std::vector<Complex>* grad) const {
    std::vector<Complex> zt(z.size());
    for (size_t i = 0; i < z.size(); ++i) zt[i] = t_ * z[i];
    Complex v = base(zt, grad);
    if (grad)
        for (auto& g : *grad) g *= t_;
    return v;
}

namespace {
std::vector<Complex> complex_z(const Frame& fr, const SpectralParameter& l) {
    auto zr = fr.to_z(l.re.empty() ? std::vector<double>(fr.r, 0.0) : l.re);
    auto zi = fr.to_z(l.im);
    std::vector<Complex> z(fr.r);
    for (int i = 0; i < fr.r; ++i) z[i] = Complex(zr[i], zi[i]);
    return z;
}
}  // namespace

Complex PWFunction::operator()(const SpectralParameter& l) const {
    auto z = complex_z(*frame_, l);
    if (mu_.empty()) return eval_unlocalized(z, nullptr);
    const int r = frame_->r;
    auto m = frame_->to_z(mu_);
    Complex s = 0;
    std::vector<Complex> zz(r);
    for (size_t w = 0; w < frame_->R.size(); ++w) {
        const auto& Rw = frame_->R[w];
        for (int i = 0; i < r; ++i) {
            double wm = 0;
            for (int j = 0; j < r; ++j) wm += Rw[i * r + j] * m[j];
            zz[i] = z[i] - Complex(0, wm);
        }
        s += eval_unlocalized(zz, nullptr);
    }
    return s / static_cast<double>(frame_->R.size());
}

std::vector<Complex> PWFunction::gradient(const SpectralParameter& l) const {
    auto z = complex_z(*frame_, l);
    const int r = frame_->r;
    std::vector<Complex> g;
    if (mu_.empty()) {
        eval_unlocalized(z, &g);
        return g;
    }
    auto m = frame_->to_z(mu_);
    std::vector<Complex> acc(r, 0.0), zz(r), gi;
    for (size_t w = 0; w < frame_->R.size(); ++w) {
        const auto& Rw = frame_->R[w];
        for (int i = 0; i < r; ++i) {
            double wm = 0;
            for (int j = 0; j < r; ++j) wm += Rw[i * r + j] * m[j];
            zz[i] = z[i] - Complex(0, wm);
        }
        eval_unlocalized(zz, &gi);
        for (int i = 0; i < r; ++i) acc[i] += gi[i];
    }
    for (auto& v : acc) v /= static_cast<double>(frame_->R.size());
    return acc;
}

PWFunction PWFunction::scaled(double c, double t) const {
    PWFunction g = *this;
    g.c_ = c_ * c;
    g.t_ = t_ * t;
    g.R_ = R_ * t;
    g.special_ = false;
    return g;
}

PWFunction PWFunction::localized(const std::vector<double>& mu_im) const {
    if (!mu_.empty()) throw Error("usage", "function is already localized");
    PWFunction g = *this;
    g.mu_ = mu_im;
    return g;
}

double PWFunction::gradient_bound() const {
    double rn = rd_->rho_norm();
    return 1.0 / std::sqrt(rn * rn + 1);
}

namespace {
// random point of the slab: Re uniform in the ball of radius rho_re, Im in a ball of radius im_r about centre
SpectralParameter slab_point(const Frame& fr, std::mt19937_64& rng, double re_r, double im_r, const std::vector<double>& im_c,
                             bool boundary) {
    std::normal_distribution<double> N(0, 1);
    std::uniform_real_distribution<double> U(0, 1);
    const int r = fr.r;
    auto sphere = [&](double rad, bool on) {
        std::vector<double> z(r);
        for (auto& v : z) v = N(rng);
        double n = dnorm(z);
        double s = on ? rad : rad * std::pow(U(rng), 1.0 / r);
        for (auto& v : z) v *= s / std::max(n, 1e-300);
        return z;
    };
    SpectralParameter l;
    l.re = fr.to_varpi(sphere(re_r, boundary));
    auto zi = sphere(im_r, false);
    auto ci = fr.to_z(im_c);
    for (int i = 0; i < r; ++i) zi[i] += ci[i];
    l.im = fr.to_varpi(zi);
    return l;
}
}  // namespace

double PWFunction::sampled_gradient_sup(int samples, unsigned seed) const {
    std::mt19937_64 rng(seed);
    const double rr = rd_->rho_norm();
    // g decays on the scale 1/(a t) in imaginary directions
    const double im_r = 12.0 / (a_ * t_);
    std::vector<double> c = mu_.empty() ? std::vector<double>(rd_->rank, 0.0) : mu_;
    double best = 0;
    for (int s = 0; s < samples; ++s) {
        auto l = slab_point(*frame_, rng, rr, (s % 4 == 0) ? im_r * 4 : im_r, c, s % 2 == 0);
        auto g = gradient(l);
        double n = 0;
        for (auto& v : g) n += std::norm(v);
        best = std::max(best, std::sqrt(n));
    }
    return best;
}

double PWFunction::finite_difference_check(int samples, unsigned seed, double h) const {
    std::mt19937_64 rng(seed);
    const double rr = rd_->rho_norm();
    std::vector<double> c = mu_.empty() ? std::vector<double>(rd_->rank, 0.0) : mu_;
    double worst = 0;
    const int r = rd_->rank;
    for (int s = 0; s < samples; ++s) {
        auto l = slab_point(*frame_, rng, rr, 3.0 / (a_ * t_), c, false);
        auto g = gradient(l);
        auto zr = frame_->to_z(l.re), zi = frame_->to_z(l.im);
        double scale = 1e-12;
        for (auto& v : g) scale = std::max(scale, std::abs(v));
        for (int j = 0; j < r; ++j) {
            // derivative along real direction j of the orthonormal frame
            auto shifted = [&](double d) {
                auto z = zr;
                z[j] += d;
                SpectralParameter q;
                q.re = frame_->to_varpi(z);
                q.im = frame_->to_varpi(zi);
                return (*this)(q);
            };
            Complex fd = (shifted(h) - shifted(-h)) / (2 * h);
            worst = std::max(worst, std::abs(fd - g[j]) / scale);
        }
    }
    return worst;
}

double PWFunction::integral() const {
    // g restricted to i a0^* is band-limited to the ball of radius t R, so the
    // trapezoid rule with spacing below 2 pi / (t R) is exact up to truncation
    const int r = rd_->rank;
    const double h = kPi / (t_ * R_);
    double Z = 200.0 / (a_ * t_);
    int n = static_cast<int>(std::ceil(Z / h));
    const int cap = r == 1 ? 200000 : r == 2 ? 1200 : 120;
    n = std::min(n, cap);
    std::vector<double> shell;
    std::vector<int> idx(r, -n);
    std::vector<Complex> z(r);
    std::vector<double> partial;
    for (;;) {
        for (int i = 0; i < r; ++i) z[i] = Complex(0, idx[i] * h);
        partial.push_back(eval_unlocalized(z, nullptr).real());
        int i = 0;
        while (i < r && ++idx[i] > n) {
            idx[i] = -n;
            ++i;
        }
        if (i == r) break;
    }
    return pairwise_sum(std::move(partial)) * std::pow(h, r);
}

SpecialResult make_special(const PWFunction& g0, double slack, unsigned seed) {
    if (!g0.mu_.empty()) throw Error("usage", "make_special expects an unlocalized function");
    SpectralParameter zero;
    zero.re.assign(g0.rd_->rank, 0.0);
    zero.im.assign(g0.rd_->rank, 0.0);
    double g00 = g0(zero).real();
    if (!(g00 > 0)) throw Error("usage", "make_special needs g(0) > 0");
    const double target = 2.0 * static_cast<double>(g0.rd_->weyl().order());
    SpecialResult res;
    double t = 1;
    const int samples = 4000;
    for (int iter = 0; iter < 200; ++iter) {
        PWFunction g = g0;
        g.c_ = target;  // F(0) = 1, so g(0) = c exactly
        g.t_ = g0.t_ * t;
        g.R_ = g0.R_ * t;
        double sup = g.sampled_gradient_sup(samples, seed);
        double bound = g.gradient_bound();
        if (sup * (1 + slack) <= bound) {
            g.special_ = true;
            res.g = g;
            res.c = target;
            res.t = t;
            res.bound = bound;
            res.sampled_sup = sup;
            res.samples = samples;
            res.fd_discrepancy = g.finite_difference_check(50, seed + 1);
            res.certified = res.fd_discrepancy < 1e-4;
            return res;
        }
        t *= 0.8;
        if (t < 1e-12) break;
    }
    throw Error("resource", "scale underflow while certifying the gradient bound");
}

double integrate_region(const RootDatum& rd, const SpectralRegion& D, const std::function<double(const std::vector<double>&)>& f,
                        int radial_per_unit, int angular, RegionQuadrature* info) {
    if (D.empty()) return 0.0;
    const int r = rd.rank;
    if (r > 3) throw Error("usage", "region quadrature is implemented for rank <= 3");
    Frame fr(rd);
    // expand W-orbits of the balls
    struct B {
        std::vector<double> c;
        double rad;
    };
    std::vector<B> balls;
    const auto& W = rd.weyl();
    for (auto& b : D.balls) {
        if (b.radius <= 0) continue;
        std::vector<double> wc(r);
        for (size_t w = 0; w < W.order(); ++w) {
            W.act_varpi(w, b.center.data(), wc.data());
            auto z = fr.to_z(wc);
            bool dup = false;
            for (auto& q : balls) {
                double d = 0;
                for (int i = 0; i < r; ++i) d += (q.c[i] - z[i]) * (q.c[i] - z[i]);
                if (std::sqrt(d) < 1e-12 && std::fabs(q.rad - b.radius) < 1e-12) dup = true;
            }
            if (!dup) balls.push_back({z, b.radius});
        }
    }
    auto multiplicity = [&](const std::vector<double>& z) {
        int m = 0;
        for (auto& q : balls) {
            double d = 0;
            for (int i = 0; i < r; ++i) d += (q.c[i] - z[i]) * (q.c[i] - z[i]);
            if (std::sqrt(d) <= q.rad * (1 + 1e-12)) ++m;
        }
        return std::max(m, 1);
    };
    // angular resolution follows the steepest coroot direction
    double cn = 0;
    for (size_t k = 0; k < rd.positive_roots.size(); ++k) cn = std::max(cn, 2.0 / rd.root_norm(static_cast<int>(k)));
    const GL& gl = gauss_legendre(8);
    int nodes = 0, panels_total = 0;
    std::vector<double> shell_sums;
    std::vector<double> z(r);
    for (auto& b : balls) {
        int panels = std::max(1, static_cast<int>(std::ceil(b.rad * radial_per_unit / 2.0)));
        panels_total += panels;
        const double plen = b.rad / panels;
        for (int P = 0; P < panels; ++P) {
            for (int q = 0; q < 8; ++q) {
                double s = plen * (P + 0.5 * (gl.x[q] + 1));
                double ws = 0.5 * plen * gl.w[q];
                std::vector<double> terms;
                auto at = [&](const std::vector<double>& dir, double wdir) {
                    for (int i = 0; i < r; ++i) z[i] = b.c[i] + s * dir[i];
                    terms.push_back(wdir * f(z) / multiplicity(z));
                    ++nodes;
                };
                if (r == 1) {
                    at({1.0}, 1.0);
                    at({-1.0}, 1.0);
                } else if (r == 2) {
                    int M = std::max(angular, static_cast<int>(std::ceil(angular / 16.0 * cn * s)));
                    for (int m = 0; m < M; ++m) {
                        double ph = 2 * kPi * m / M;
                        at({std::cos(ph), std::sin(ph)}, s * 2 * kPi / M);
                    }
                } else {
                    int nt = std::max(angular / 4, static_cast<int>(std::ceil(angular / 64.0 * cn * s)));
                    const GL& gt = gauss_legendre(std::min(nt, 256));
                    int M = 2 * static_cast<int>(gt.x.size());
                    for (size_t a = 0; a < gt.x.size(); ++a) {
                        double ct = gt.x[a], st = std::sqrt(std::max(0.0, 1 - ct * ct));
                        for (int m = 0; m < M; ++m) {
                            double ph = 2 * kPi * m / M;
                            at({st * std::cos(ph), st * std::sin(ph), ct}, s * s * gt.w[a] * 2 * kPi / M);
                        }
                    }
                }
                shell_sums.push_back(ws * pairwise_sum(std::move(terms)));
            }
        }
    }
    if (info) {
        info->radial_panels = panels_total;
        info->nodes = nodes;
    }
    return pairwise_sum(std::move(shell_sums));
}

VolumeResult plancherel_volume(const RootDatum& rd, const SpectralRegion& D) {
    VolumeResult res;
    if (D.empty()) return res;
    Frame fr(rd);
    const double k = plancherel_kappa(rd) * std::pow(2 * kPi, -rd.rank);
    auto f = [&](const std::vector<double>& z) {
        SpectralParameter l = SpectralParameter::imaginary(fr.to_varpi(z));
        return beta(rd, l);
    };
    RegionQuadrature q1, q2;
    double a = integrate_region(rd, D, f, 4, 128, &q1);
    double b = integrate_region(rd, D, f, 8, 256, &q2);
    res.value = k * b;
    res.residual = k * std::fabs(b - a);
    res.nodes = q2.nodes;
    if (res.residual > 1e-4 * std::fabs(res.value) + 1e-12) throw Error("quadrature-nonconvergence", "Plancherel volume did not stabilise");
    return res;
}

VolumeResult plancherel_volume_ball(const RootDatum& rd, double t) {
    if (t < 0) throw Error("usage", "radius must be nonnegative");
    VolumeResult res = plancherel_volume(rd, SpectralRegion::ball(rd.rank, t));
    if (t > 0) res.ratio = res.value / (std::pow(t, rd.dim_d) * weyl_constant(rd.dim_d));
    return res;
}

double region_smooth(const PWFunction& g, const SpectralRegion& D, const SpectralParameter& l, double g_mass) {
    if (D.empty()) return 0.0;
    Frame fr(*g.rd());
    // resolution follows the scale of g
    double feature = 1.0 / std::max(1e-12, g.type());
    int per_unit = std::max(1, static_cast<int>(std::ceil(2.0 / feature)));
    auto f = [&](const std::vector<double>& z) {
        auto mu = fr.to_varpi(z);
        SpectralParameter q = l;
        if (q.re.empty()) q.re.assign(mu.size(), 0.0);
        for (size_t i = 0; i < mu.size(); ++i) q.im[i] -= mu[i];
        return g(q).real();
    };
    return integrate_region(*g.rd(), D, f, per_unit, 64) / g_mass;
}

DecayFit localized_decay(const PWFunction& g, int n, int samples, unsigned seed, int shells) {
    if (g.center().empty()) throw Error("usage", "decay fit expects a localized function");
    const RootDatum& rd = *g.rd();
    const int r = rd.rank;
    Frame fr(rd);
    const auto& W = rd.weyl();
    std::vector<std::vector<double>> orbit;
    {
        std::vector<double> wm(r);
        for (size_t w = 0; w < W.order(); ++w) {
            W.act_varpi(w, g.center().data(), wm.data());
            orbit.push_back(fr.to_z(wm));
        }
    }
    // g decays on the scale 1/(t R); the shells reach 400 of those units
    const double L = 1.0 / (g.scale() * g.type());
    const double rr = rd.rho_norm();
    DecayFit out;
    out.n = n;
    for (int s = 0; s <= shells; ++s) out.shell_edges.push_back(s == 0 ? 0.0 : 400.0 * L * std::pow(2.0, s - shells));
    out.shell_max.assign(shells, 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0, 1);
    std::uniform_real_distribution<double> U(0, 1);
    auto unit = [&] {
        std::vector<double> z(r);
        for (auto& v : z) v = N(rng);
        double m = dnorm(z);
        for (auto& v : z) v /= m;
        return z;
    };
    for (int k = 0; k < samples; ++k) {
        int sh = k % shells;
        double lo = out.shell_edges[sh], hi = out.shell_edges[sh + 1];
        auto re = unit();
        double rad = rr * std::pow(U(rng), 1.0 / r);
        for (auto& v : re) v *= rad;
        auto dir = unit();
        double d = lo + (hi - lo) * U(rng);
        const auto& c = orbit[k % orbit.size()];
        std::vector<double> im(r);
        for (int i = 0; i < r; ++i) im[i] = c[i] + d * dir[i];
        double dist = INFINITY;
        for (auto& o : orbit) {
            double q = rad * rad;
            for (int i = 0; i < r; ++i) q += (im[i] - o[i]) * (im[i] - o[i]);
            dist = std::min(dist, std::sqrt(q));
        }
        SpectralParameter l;
        l.re = fr.to_varpi(re);
        l.im = fr.to_varpi(im);
        double v = std::abs(g(l)) * std::pow(1 + dist, n);
        // bin by the true distance to the orbit
        int b = shells - 1;
        while (b > 0 && dist < out.shell_edges[b]) --b;
        out.shell_max[b] = std::max(out.shell_max[b], v);
        out.C = std::max(out.C, v);
        ++out.samples;
    }
    // growth exponent of the shell maxima over the outer half; a decay weaker than
    // (1 + dist)^{-n} shows up as a positive slope
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int s = shells / 2; s < shells; ++s) {
        if (!(out.shell_max[s] > 0)) continue;
        double x = std::log(0.5 * (out.shell_edges[s] + out.shell_edges[s + 1])), y = std::log(out.shell_max[s]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    out.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    out.bounded = m >= 2 && out.slope <= 0.5;
    return out;
}

double sup_operator(const PWFunction& g, const SpectralParameter& l, int directions, int radii) {
    const RootDatum& rd = *g.rd();
    const int r = rd.rank;
    Frame fr(rd);
    const double rr = rd.rho_norm();
    auto val = [&](const std::vector<double>& x) {
        SpectralParameter q = l;
        auto v = fr.to_varpi(x);
        q.re.assign(r, 0.0);
        if (!l.re.empty())
            for (int i = 0; i < r; ++i) q.re[i] = l.re[i];
        for (int i = 0; i < r; ++i) q.re[i] += v[i];
        return std::abs(g(q));
    };
    std::vector<double> best_x(r, 0.0);
    double best = val(best_x);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N(0, 1);
    std::vector<std::vector<double>> dirs;
    if (r == 1) {
        dirs = {{1.0}, {-1.0}};
    } else if (r == 2) {
        for (int m = 0; m < directions; ++m) dirs.push_back({std::cos(2 * kPi * m / directions), std::sin(2 * kPi * m / directions)});
    } else {
        for (int m = 0; m < directions * r; ++m) {
            std::vector<double> d(r);
            for (auto& v : d) v = N(rng);
            double n = dnorm(d);
            for (auto& v : d) v /= n;
            dirs.push_back(d);
        }
    }
    for (auto& d : dirs)
        for (int k = 1; k <= radii; ++k) {
            std::vector<double> x(r);
            for (int i = 0; i < r; ++i) x[i] = rr * k / radii * d[i];
            double v = val(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
        }
    // coordinate refinement inside the ball
    double step = rr / radii;
    for (int it = 0; it < 60 && step > 1e-9 * (1 + rr); ++it) {
        bool moved = false;
        for (int i = 0; i < r; ++i)
            for (double sgn : {1.0, -1.0}) {
                auto x = best_x;
                x[i] += sgn * step;
                double n = dnorm(x);
                if (n > rr)
                    for (auto& v : x) v *= rr / n;
                double v = val(x);
                if (v > best) {
                    best = v;
                    best_x = x;
                    moved = true;
                }
            }
        if (!moved) step /= 2;
    }
    return best;
}

}  // namespace chevalley
