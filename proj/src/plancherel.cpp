#include "chevalley/plancherel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chevalley {

namespace {
std::mutex g_fftw_mu;
constexpr size_t kMaxGrid = size_t(1) << 24;

size_t ipow(int n, int r) {
    size_t s = 1;
    for (int i = 0; i < r; ++i) s *= static_cast<size_t>(n);
    return s;
}

// in-place multi-dimensional DFT with e^{+2 pi i} sign
void dft_backward(std::vector<Complex>& a, int n, int r) {
    std::vector<int> dims(r, n);
    std::lock_guard<std::mutex> lock(g_fftw_mu);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan = fftw_plan_dft(r, dims.data(), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

size_t flat_index(const std::vector<int>& m, int n) {
    size_t idx = 0;
    for (int k : m) idx = idx * n + static_cast<size_t>(((k % n) + n) % n);
    return idx;
}
}  // namespace

size_t PlancherelQuadrature::size() const { return ipow(n, rank); }

int default_nodes(int rank, int degree) {
    int n = 16;
    while (n < 2 * degree + 24) n *= 2;
    (void)rank;
    return n;
}

PlancherelMeasure::PlancherelMeasure(RootDatumPtr rd, double p, double tol)
    : rd_(rd), geo_(rd), p_(p), tol_(tol) {
    if (p != 0 && p < 2) throw Error("usage", "prime must be >= 2");
    const int r = rd_->rank;
    BigInt den = 1;
    for (auto& row : rd_->period_basis)
        for (auto& q : row) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(q));
    pb_den_ = static_cast<long long>(den);
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < r; ++j) pb_num_.push_back(static_cast<long long>(numerator(Rational(rd_->period_basis[k][j] * den))));
    for (auto& rt : rd_->positive_roots) coroot_index_.push_back(lattice_index(rt.coroot));
    // normalization by doubling until stable
    int n = 8;
    double prev = raw_mean(n);
    for (;;) {
        n *= 2;
        if (ipow(n, rd_->rank) > kMaxGrid) throw Error("quadrature-nonconvergence", "normalization did not stabilise");
        double cur = raw_mean(n);
        z_residual_ = std::fabs(cur - prev);
        prev = cur;
        if (z_residual_ <= 1e-3 * tol_ * cur) break;
    }
    n0_ = n;
    Z_ = prev;
}

std::vector<int> PlancherelMeasure::lattice_index(const Weight& nu) const {
    const int r = rd_->rank;
    std::vector<int> m(r);
    for (int k = 0; k < r; ++k) {
        long long s = 0;
        for (int j = 0; j < r; ++j) s += pb_num_[k * r + j] * nu[j];
        if (s % pb_den_ != 0) throw Error("lattice", nu.str() + " is not a character of the dual torus");
        m[k] = static_cast<int>(s / pb_den_);
    }
    return m;
}

double PlancherelMeasure::density_lattice(const double* u) const {
    double d = 1;
    const double inv = p_ == 0 ? 0.0 : 1.0 / p_;
    for (auto& m : coroot_index_) {
        double ph = 0;
        for (int k = 0; k < rd_->rank; ++k) ph += m[k] * u[k];
        double c = std::cos(2 * std::numbers::pi * ph);
        double num = 2 - 2 * c;
        double den = 1 - 2 * c * inv + inv * inv;
        d *= num / den;
    }
    return d;
}

double PlancherelMeasure::density(const std::vector<double>& theta) const {
    auto u = geo_.alpha_to_lattice(theta);
    return density_lattice(u.data());
}

double PlancherelMeasure::raw_mean(int n) const {
    const int r = rd_->rank;
    const size_t N = ipow(n, r);
    std::vector<double> vals(N);
    std::vector<double> u(r);
    for (size_t i = 0; i < N; ++i) {
        size_t t = i;
        for (int k = r - 1; k >= 0; --k) {
            u[k] = static_cast<double>(t % n) / n;
            t /= n;
        }
        vals[i] = density_lattice(u.data());
    }
    // pairwise summation keeps the reduction order fixed
    while (vals.size() > 1) {
        std::vector<double> nxt((vals.size() + 1) / 2);
        for (size_t i = 0; i < nxt.size(); ++i) nxt[i] = vals[2 * i] + (2 * i + 1 < vals.size() ? vals[2 * i + 1] : 0.0);
        vals.swap(nxt);
    }
    return vals[0] / static_cast<double>(N);
}

const std::vector<double>& PlancherelMeasure::weights(int n) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = weights_.find(n);
        if (it != weights_.end()) return *it->second;
    }
    const int r = rd_->rank;
    const size_t N = ipow(n, r);
    if (N > kMaxGrid) throw Error("quadrature-nonconvergence", "grid too large");
    auto w = std::make_unique<std::vector<double>>(N);
    std::vector<double> u(r);
    const double scale = 1.0 / (Z_ * static_cast<double>(N));
    for (size_t i = 0; i < N; ++i) {
        size_t t = i;
        for (int k = r - 1; k >= 0; --k) {
            u[k] = static_cast<double>(t % n) / n;
            t /= n;
        }
        (*w)[i] = density_lattice(u.data()) * scale;
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, fresh] = weights_.emplace(n, std::move(w));
    return *it->second;
}

const std::vector<Complex>& PlancherelMeasure::table(int n) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = tables_.find(n);
        if (it != tables_.end()) return *it->second;
    }
    const auto& w = weights(n);
    auto t = std::make_unique<std::vector<Complex>>(w.begin(), w.end());
    dft_backward(*t, n, rd_->rank);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, fresh] = tables_.emplace(n, std::move(t));
    return *it->second;
}

Complex PlancherelMeasure::monomial_moment(const Weight& nu, int n) const {
    auto m = lattice_index(nu);
    for (int k : m)
        if (2 * std::abs(k) >= n) throw Error("quadrature-nonconvergence", "grid too coarse for monomial " + nu.str());
    return table(n)[flat_index(m, n)];
}

int PlancherelMeasure::degree(const InvariantFunction& f) const {
    InvariantFunction g = to_orbit_basis(f);
    int deg = 0;
    for (auto& lam : g.support())
        for (auto& nu : rd_->orbit(lam))
            for (int k : lattice_index(nu)) deg = std::max(deg, std::abs(k));
    return deg;
}

PlancherelMeasure::Value PlancherelMeasure::integrate(const InvariantFunction& f0) const {
    InvariantFunction f = to_orbit_basis(f0).to_numeric();
    const int r = rd_->rank;
    int n = std::max(n0_, default_nodes(r, degree(f)));
    auto at = [&](int nn) {
        Complex s = 0;
        for (auto& [lam, c] : f.numeric_coefficients()) {
            const auto& orb = rd_->orbit(lam);
            Complex acc = 0;
            for (auto& nu : orb) acc += monomial_moment(nu, nn);
            s += c * acc / static_cast<double>(orb.size());
        }
        return s;
    };
    Complex v = at(n);
    for (int tries = 0; tries < 4; ++tries) {
        if (ipow(2 * n, r) > kMaxGrid) break;
        Complex v2 = at(2 * n);
        double res = std::abs(v2 - v);
        double scale = 1.0;
        for (auto& kv : f.numeric_coefficients()) scale += std::abs(kv.second);
        n *= 2;
        v = v2;
        if (res <= tol_ * scale) return {v, n, res};
        if (tries == 3) break;
    }
    throw Error("quadrature-nonconvergence", "integral did not stabilise under grid doubling");
}

std::vector<Complex> PlancherelMeasure::grid_values(const InvariantFunction& f0, int n) const {
    InvariantFunction f = to_orbit_basis(f0).to_numeric();
    const int r = rd_->rank;
    const size_t N = ipow(n, r);
    if (N > kMaxGrid) throw Error("quadrature-nonconvergence", "grid too large");
    std::vector<Complex> a(N, Complex(0));
    for (auto& [lam, c] : f.numeric_coefficients()) {
        const auto& orb = rd_->orbit(lam);
        Complex per = c / static_cast<double>(orb.size());
        for (auto& nu : orb) {
            auto m = lattice_index(nu);
            for (int k : m)
                if (2 * std::abs(k) >= n) throw Error("quadrature-nonconvergence", "grid too coarse for evaluation");
            a[flat_index(m, n)] += per;
        }
    }
    dft_backward(a, n, r);
    return a;
}

PlancherelMeasure::Value PlancherelMeasure::l2_norm(const InvariantFunction& f) const {
    const int r = rd_->rank;
    if (f.is_zero()) return {0.0, 0, 0.0};
    int n = std::max(n0_, default_nodes(r, 2 * degree(f)));
    auto at = [&](int nn) {
        auto g = grid_values(f, nn);
        const auto& w = weights(nn);
        std::vector<double> terms(g.size());
        for (size_t i = 0; i < g.size(); ++i) terms[i] = std::norm(g[i]) * w[i];
        while (terms.size() > 1) {
            std::vector<double> nxt((terms.size() + 1) / 2);
            for (size_t i = 0; i < nxt.size(); ++i)
                nxt[i] = terms[2 * i] + (2 * i + 1 < terms.size() ? terms[2 * i + 1] : 0.0);
            terms.swap(nxt);
        }
        return terms[0];
    };
    double v = at(n);
    for (int tries = 0; tries < 4; ++tries) {
        if (ipow(2 * n, r) > kMaxGrid) break;
        double v2 = at(2 * n);
        double res = std::fabs(v2 - v);
        n *= 2;
        v = v2;
        if (res <= tol_ * (1 + v)) return {std::sqrt(std::max(0.0, v)), n, res};
    }
    throw Error("quadrature-nonconvergence", "L2 norm did not stabilise under grid doubling");
}

double PlancherelMeasure::open_set_mass(const TorusRegion& U, int n) const {
    const int r = rd_->rank;
    if (U.is_whole) return 1.0;
    if (U.empty()) return 0.0;
    if (n == 0) n = r == 1 ? 8192 : r == 2 ? 512 : 64;
    const auto& w = weights(n);
    std::vector<double> u(r);
    double s = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        size_t t = i;
        for (int k = r - 1; k >= 0; --k) {
            u[k] = static_cast<double>(t % n) / n;
            t /= n;
        }
        if (U.contains(geo_, geo_.lattice_to_alpha(u))) s += w[i];
    }
    return s;
}

}  // namespace chevalley
