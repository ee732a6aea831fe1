#include "chevalley/torus_region.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace chevalley {

TorusGeometry::TorusGeometry(RootDatumPtr rd) : rd_(std::move(rd)), r_(rd_->rank) {
    const int r = r_;
    B_.resize(r * r);
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < r; ++j) B_[k * r + j] = to_double(rd_->period_basis[k][j]);
    Eigen::MatrixXd B(r, r), G(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            B(i, j) = B_[i * r + j];
            G(i, j) = rd_->gram_alpha_d()[i * r + j];
        }
    Eigen::MatrixXd Binv = B.inverse();
    Binv_.resize(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) Binv_[i * r + j] = Binv(i, j);
    // volume of the torus in the Killing metric = sqrt(det(B G B^T))
    double det = (B * G * B.transpose()).determinant();
    double s2 = std::pow(det, -1.0 / r);
    scale_ = std::sqrt(s2);
    metric_.resize(r * r);
    for (int i = 0; i < r * r; ++i) metric_[i] = s2 * rd_->gram_alpha_d()[i];
    int reach = r <= 2 ? 2 : 1;
    std::vector<int> k(r, -reach);
    for (;;) {
        shifts_.push_back(k);
        int i = 0;
        while (i < r && ++k[i] > reach) k[i++] = -reach;
        if (i == r) break;
    }
}

std::vector<double> TorusGeometry::lattice_to_alpha(const std::vector<double>& u) const {
    std::vector<double> t(r_, 0.0);
    for (int k = 0; k < r_; ++k)
        for (int j = 0; j < r_; ++j) t[j] += u[k] * B_[k * r_ + j];
    return t;
}

std::vector<double> TorusGeometry::alpha_to_lattice(const std::vector<double>& t) const {
    // theta = B^T u  =>  u = B^{-T} theta
    std::vector<double> u(r_, 0.0);
    for (int k = 0; k < r_; ++k)
        for (int j = 0; j < r_; ++j) u[k] += Binv_[j * r_ + k] * t[j];
    return u;
}

double TorusGeometry::norm(const std::vector<double>& v) const {
    double s = 0;
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < r_; ++j) s += v[i] * metric_[i * r_ + j] * v[j];
    return std::sqrt(std::max(0.0, s));
}

double TorusGeometry::dist(const std::vector<double>& a, const std::vector<double>& b) const {
    std::vector<double> d(r_);
    for (int i = 0; i < r_; ++i) d[i] = a[i] - b[i];
    std::vector<double> u = alpha_to_lattice(d);
    for (double& x : u) x -= std::round(x);
    double best = INFINITY;
    std::vector<double> v(r_), w(r_);
    for (auto& k : shifts_) {
        for (int i = 0; i < r_; ++i) v[i] = u[i] + k[i];
        for (int j = 0; j < r_; ++j) {
            double s = 0;
            for (int i = 0; i < r_; ++i) s += v[i] * B_[i * r_ + j];
            w[j] = s;
        }
        best = std::min(best, norm(w));
    }
    return best;
}

std::vector<std::vector<double>> TorusGeometry::orbit_points(const std::vector<double>& c) const {
    const auto& W = rd_->weyl();
    std::vector<std::vector<double>> pts;
    std::vector<double> wc(r_);
    for (size_t w = 0; w < W.order(); ++w) {
        W.act_alpha(w, c.data(), wc.data());
        bool dup = false;
        for (auto& q : pts)
            if (dist(q, wc) < 1e-12) {
                dup = true;
                break;
            }
        if (!dup) pts.push_back(wc);
    }
    return pts;
}

double TorusGeometry::dist_to_points(const std::vector<double>& t, const std::vector<std::vector<double>>& pts) const {
    double best = INFINITY;
    for (auto& q : pts) best = std::min(best, dist(t, q));
    return best;
}

TorusRegion TorusRegion::make(const TorusGeometry& g, std::vector<TorusBall> balls) {
    TorusRegion R;
    for (auto& b : balls) {
        if (!(b.radius > 0)) throw Error("empty region", "ball radius must be positive");
        if (static_cast<int>(b.center.size()) != g.rank()) throw Error("usage", "ball centre has wrong dimension");
        b.orbit = g.orbit_points(b.center);
        R.balls.push_back(std::move(b));
    }
    return R;
}

TorusRegion TorusRegion::whole() {
    TorusRegion R;
    R.is_whole = true;
    return R;
}

double TorusRegion::signed_distance(const TorusGeometry& g, const std::vector<double>& theta) const {
    if (is_whole) return -INFINITY;
    double best = INFINITY;
    for (auto& b : balls) best = std::min(best, g.dist_to_points(theta, b.orbit) - b.radius);
    return best;
}

bool TorusRegion::contains(const TorusGeometry& g, const std::vector<double>& theta) const {
    return signed_distance(g, theta) < 0;
}

TorusRegion TorusRegion::shrunk(const TorusGeometry& g, double factor) const {
    if (is_whole) return *this;
    std::vector<TorusBall> bs = balls;
    for (auto& b : bs) b.radius *= factor;
    return make(g, bs);
}

TorusBall parse_ball(const std::string& spec) {
    // accepts "center=a:b,r=x" or "a:b,x"
    TorusBall b;
    std::string s = spec;
    auto comma = s.rfind(',');
    if (comma == std::string::npos) throw Error("usage", "ball must look like center=a:b,r=x");
    std::string c = s.substr(0, comma), r = s.substr(comma + 1);
    if (c.rfind("center=", 0) == 0) c = c.substr(7);
    if (r.rfind("r=", 0) == 0) r = r.substr(2);
    std::stringstream ss(c);
    std::string item;
    while (std::getline(ss, item, ':')) b.center.push_back(to_double(parse_rational(item)));
    b.radius = to_double(parse_rational(r));
    return b;
}

}  // namespace chevalley
