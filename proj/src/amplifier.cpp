#include "chevalley/amplifier.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>

namespace chevalley {

using MP = boost::multiprecision::cpp_bin_float_100;

namespace {

constexpr double kPi = std::numbers::pi;

// flat list of monomials c_nu t^nu of an invariant function
struct MonoList {
    int r = 0;
    std::vector<double> nu;  // r per monomial, coweight coords
    std::vector<Complex> c;
    std::vector<double> dual;  // dual norm for the torus metric
    size_t size() const { return c.size(); }
};

std::vector<double> inverse_metric(const TorusGeometry& g) {
    const int r = g.rank();
    Eigen::MatrixXd M(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(i, j) = g.metric()[i * r + j];
    Eigen::MatrixXd Mi = M.inverse();
    std::vector<double> out(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out[i * r + j] = Mi(i, j);
    return out;
}

MonoList expand(const InvariantFunction& f0, const TorusGeometry& g) {
    InvariantFunction f = to_orbit_basis(f0).to_numeric();
    const RootDatum& rd = *f.rd();
    const int r = rd.rank;
    auto Mi = inverse_metric(g);
    MonoList m;
    m.r = r;
    for (auto& [lam, c] : f.numeric_coefficients()) {
        const auto& orb = rd.orbit(lam);
        Complex per = c / static_cast<double>(orb.size());
        for (auto& nu : orb) {
            double s = 0;
            for (int i = 0; i < r; ++i) {
                m.nu.push_back(nu[i]);
                for (int j = 0; j < r; ++j) s += nu[i] * Mi[i * r + j] * nu[j];
            }
            m.c.push_back(per);
            m.dual.push_back(std::sqrt(std::max(0.0, s)));
        }
    }
    return m;
}

Complex eval(const MonoList& m, const double* x, const double* th) {
    Complex s = 0;
    for (size_t k = 0; k < m.size(); ++k) {
        const double* nu = &m.nu[k * m.r];
        double a = 0, b = 0;
        for (int i = 0; i < m.r; ++i) {
            a += nu[i] * x[i];
            b += nu[i] * th[i];
        }
        s += m.c[k] * std::polar(std::exp(a), 2 * kPi * b);
    }
    return s;
}

double eval_abs(const MonoList& m, const double* x) {
    double s = 0;
    for (size_t k = 0; k < m.size(); ++k) {
        const double* nu = &m.nu[k * m.r];
        double a = 0;
        for (int i = 0; i < m.r; ++i) a += nu[i] * x[i];
        s += std::abs(m.c[k]) * std::exp(a);
    }
    return s;
}

size_t ipow(int n, int r) {
    size_t s = 1;
    for (int i = 0; i < r; ++i) s *= static_cast<size_t>(n);
    return s;
}

void node_lattice(size_t i, int n, int r, std::vector<double>& u) {
    for (int k = r - 1; k >= 0; --k) {
        u[k] = static_cast<double>(i % n) / n;
        i /= n;
    }
}

int default_compact_grid(int r) { return r == 1 ? 4096 : r == 2 ? 512 : 64; }

double grid_cover_radius(const TorusGeometry& g, int n) {
    const int r = g.rank();
    double s = 0;
    for (int k = 0; k < r; ++k) {
        std::vector<double> e(r, 0.0);
        e[k] = 1;
        s += g.norm(g.lattice_to_alpha(e));
    }
    return s / (2.0 * n);
}

// Certified max (sign +1) or min (sign -1) of w over a set, starting from the n-grid values.
// near(theta, rho) tells whether the ball of radius rho at theta can meet the set; cells whose
// bound is loose are halved until within tol of the best sampled value or max_depth is reached.
template <class Near>
double refine_extreme(const TorusGeometry& g, const MonoList& m, double L, int n, const std::vector<Complex>& coarse,
                      int sign, Near near, double tol, int max_depth = 12) {
    const int r = g.rank();
    const double rho0 = grid_cover_radius(g, n);
    struct Cell {
        std::vector<double> u;
        int lev;
        double v;
    };
    std::vector<Cell> work;
    double best = -INFINITY;
    std::vector<double> u(r), zero(r, 0.0);
    for (size_t i = 0; i < coarse.size(); ++i) {
        node_lattice(i, n, r, u);
        auto th = g.lattice_to_alpha(u);
        if (!near(th, rho0)) continue;
        double v = sign * coarse[i].real();
        if (near(th, 0.0)) best = std::max(best, v);
        work.push_back({u, 0, v});
    }
    double result = -INFINITY;
    while (!work.empty()) {
        Cell c = std::move(work.back());
        work.pop_back();
        double rho = rho0 / std::ldexp(1.0, c.lev);
        double bound = c.v + L * rho;
        if (bound <= best + tol || c.lev >= max_depth) {
            result = std::max(result, bound);
            continue;
        }
        double q = 0.25 / (n * std::ldexp(1.0, c.lev));
        for (int mask = 0; mask < (1 << r); ++mask) {
            std::vector<double> cu = c.u;
            for (int k = 0; k < r; ++k) cu[k] += (mask >> k & 1) ? q : -q;
            auto th = g.lattice_to_alpha(cu);
            if (!near(th, rho / 2)) continue;
            double v = sign * eval(m, zero.data(), th.data()).real();
            if (near(th, 0.0)) best = std::max(best, v);
            work.push_back({std::move(cu), c.lev + 1, v});
        }
    }
    return sign * result;
}

std::vector<long long> default_panel() { return primes_up_to(97); }

}  // namespace

// ---------------------------------------------------------------- generators

namespace {

// nonzero dominant lattice weights with <nu, rho> <= factor * max_i <k_i varpi_i, rho>
std::vector<Weight> weights_up_to(const RootDatum& rd, int factor) {
    const int r = rd.rank;
    std::vector<Rational> rp(r);
    Rational bound = 0;
    for (int i = 0; i < r; ++i) {
        Weight e(r, Lattice::DualCharacter);
        e[i] = 1;
        rp[i] = rd.pair_rho(e);
        int k = 1;
        while (!rd.in_character_lattice(e * k)) ++k;
        Rational bk = rp[i] * k;
        if (bk > bound) bound = bk;
    }
    bound *= factor;
    std::vector<Weight> out;
    std::vector<int> lim(r);
    for (int i = 0; i < r; ++i) lim[i] = static_cast<int>(to_double(bound / rp[i]) + 1e-9);
    Weight v(r, Lattice::DualCharacter);
    for (;;) {
        if (!v.is_zero() && rd.in_character_lattice(v) && rd.pair_rho(v) <= bound) out.push_back(v);
        int i = 0;
        while (i < r && ++v[i] > lim[i]) v[i++] = 0;
        if (i == r) break;
    }
    return out;
}

}  // namespace

std::vector<Weight> generator_weights(const RootDatum& rd) { return weights_up_to(rd, 1); }

InvariantFunction proper_function(const RootDatumPtr& rd) {
    auto S = generator_weights(*rd);
    if (S.empty()) throw Error("normalization-failure", "no generating characters");
    InvariantFunction h(rd, Basis::OrbitAverage, true);
    for (auto& lam : S) {
        InvariantFunction e = orbit_average(rd, lam);
        h = add(h, multiply(e, star(e)));
    }
    return scale(h, GaussQ(Rational(1, static_cast<long long>(S.size()))));
}

InvariantFunction localizer(const RootDatumPtr& rd, const std::vector<double>& c) {
    auto S = generator_weights(*rd);
    TorusPoint t = TorusPoint::compact(c);
    InvariantFunction w(rd, Basis::OrbitAverage, false);
    for (auto& lam : S) {
        InvariantFunction e = orbit_average(rd, lam).to_numeric();
        Complex a = evaluate(e, t);
        InvariantFunction d = add(e, InvariantFunction::constant_numeric(rd, -a));
        w = add(w, multiply(d, star(d)));
    }
    // imaginary parts are rounding noise: w is self-adjoint
    InvariantFunction out(rd, Basis::OrbitAverage, false);
    for (auto& [lam, cc] : w.numeric_coefficients()) {
        Complex sym = 0.5 * (cc + std::conj(w.coefficient(rd->star(lam))));
        out.add_term(lam, sym);
    }
    return out;
}

namespace {

// points of the sphere of radius rad around c in the torus metric
std::vector<std::vector<double>> sphere_points(const TorusGeometry& g, const std::vector<double>& c, double rad, int count) {
    const int r = g.rank();
    Eigen::MatrixXd M(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(i, j) = g.metric()[i * r + j];
    Eigen::MatrixXd Linv = Eigen::LLT<Eigen::MatrixXd>(M).matrixL().transpose();
    Linv = Linv.inverse().eval();
    std::vector<std::vector<double>> out;
    auto push = [&](const Eigen::VectorXd& e) {
        Eigen::VectorXd v = Linv * e * rad;
        std::vector<double> p(c);
        for (int i = 0; i < r; ++i) p[i] += v(i);
        out.push_back(std::move(p));
    };
    if (r == 1) {
        for (double sgn : {-1.0, 1.0}) push(Eigen::VectorXd::Constant(1, sgn));
    } else if (r == 2) {
        for (int k = 0; k < count; ++k) {
            double a = 2 * kPi * k / count;
            Eigen::VectorXd e(2);
            e << std::cos(a), std::sin(a);
            push(e);
        }
    } else {
        // Fibonacci sphere
        for (int k = 0; k < count; ++k) {
            double z = 1 - 2 * (k + 0.5) / count, ph = kPi * (3 - std::sqrt(5.0)) * k;
            double q = std::sqrt(std::max(0.0, 1 - z * z));
            Eigen::VectorXd e = Eigen::VectorXd::Zero(r);
            e(0) = q * std::cos(ph);
            e(1) = q * std::sin(ph);
            e(2) = z;
            push(e);
        }
    }
    return out;
}

struct GapProblem {
    // rows: sample points, columns: candidate terms |e_nu - e_nu(c)|^2
    std::vector<std::vector<double>> inner, outer, all;
    size_t terms = 0;
    double gap(const std::vector<double>& beta) const {
        auto val = [&](const std::vector<double>& row) {
            double s = 0;
            for (size_t k = 0; k < terms; ++k) s += beta[k] * row[k];
            return s;
        };
        double wi = 0, wo = INFINITY, wc = 0;
        for (auto& row : inner) wi = std::max(wi, val(row));
        for (auto& row : outer) wo = std::min(wo, val(row));
        for (auto& row : all) wc = std::max(wc, val(row));
        if (!(wc > 0)) return -10;
        wc = std::max(wc, wi);
        return 2 * std::asin(std::sqrt(std::min(1.0, wo / wc))) - 2 * std::asin(std::sqrt(std::min(1.0, wi / wc)));
    }
};

double gap_objective(const gsl_vector* y, void* params) {
    auto* P = static_cast<const GapProblem*>(params);
    std::vector<double> beta(P->terms);
    for (size_t k = 0; k < P->terms; ++k) beta[k] = std::exp(std::clamp(gsl_vector_get(y, k), -30.0, 30.0));
    return -P->gap(beta);
}

std::vector<double> maximize_gap(const GapProblem& P) {
    const size_t n = P.terms;
    std::vector<double> beta(n, 1.0);
    if (n == 1) return beta;
    gsl_multimin_function fn{&gap_objective, n, const_cast<GapProblem*>(&P)};
    gsl_vector* x = gsl_vector_calloc(n);
    gsl_vector* st = gsl_vector_alloc(n);
    gsl_vector_set_all(st, 1.0);
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(m, &fn, x, st);
    for (int it = 0; it < 4000; ++it) {
        if (gsl_multimin_fminimizer_iterate(m)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-4) == GSL_SUCCESS) break;
    }
    for (size_t k = 0; k < n; ++k) beta[k] = std::exp(std::clamp(gsl_vector_get(m->x, k), -30.0, 30.0));
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(st);
    gsl_vector_free(x);
    return beta;
}

}  // namespace

InvariantFunction tuned_localizer(const RootDatumPtr& rd, const std::vector<double>& c, double r_in, double r_out,
                                  double* gap_out) {
    TorusGeometry g(rd);
    const int r = rd->rank;
    TorusRegion U = TorusRegion::make(g, {TorusBall{c, r_out, {}}});
    TorusRegion V = TorusRegion::make(g, {TorusBall{c, r_in, {}}});
    const int n = r == 1 ? 512 : r == 2 ? 64 : 14;
    std::vector<std::vector<double>> grid;
    std::vector<double> u(r);
    for (size_t i = 0; i < ipow(n, r); ++i) {
        node_lattice(i, n, r, u);
        grid.push_back(g.lattice_to_alpha(u));
    }
    std::vector<std::vector<double>> in_pts, out_pts;
    const int dirs = r == 2 ? 96 : 200;
    for (double f : {0.25, 0.5, 0.75, 1.0})
        for (auto& p : sphere_points(g, c, f * r_in, dirs)) in_pts.push_back(p);
    for (double f : {1.0, 1.05, 1.15, 1.3, 1.5})
        for (auto& p : sphere_points(g, c, f * r_out, dirs))
            if (U.signed_distance(g, p) >= 0) out_pts.push_back(p);
    for (auto& p : grid) {
        if (V.signed_distance(g, p) <= 0) in_pts.push_back(p);
        if (U.signed_distance(g, p) >= 0) out_pts.push_back(p);
    }
    const TorusPoint tc = TorusPoint::compact(c);

    double best_score = -INFINITY, best_gap = 0;
    InvariantFunction best(rd, Basis::OrbitAverage, false);
    for (int level = 1; level <= 3; ++level) {
        auto cand = weights_up_to(*rd, level);
        std::vector<InvariantFunction> es;
        std::vector<Complex> as;
        GapProblem P;
        P.terms = cand.size();
        for (auto& lam : cand) {
            es.push_back(orbit_average(rd, lam).to_numeric());
            as.push_back(evaluate(es.back(), tc));
        }
        auto rows = [&](const std::vector<std::vector<double>>& pts, std::vector<std::vector<double>>& out) {
            for (auto& p : pts) {
                TorusPoint t = TorusPoint::compact(p);
                std::vector<double> row;
                for (size_t k = 0; k < es.size(); ++k) row.push_back(std::norm(evaluate(es[k], t) - as[k]));
                out.push_back(std::move(row));
            }
        };
        rows(in_pts, P.inner);
        rows(out_pts, P.outer);
        rows(grid, P.all);
        auto beta = maximize_gap(P);
        // drop negligible terms; they only raise the degree
        double bmax = *std::max_element(beta.begin(), beta.end());
        double deg = 0;
        for (size_t k = 0; k < beta.size(); ++k) {
            if (beta[k] < 1e-3 * bmax)
                beta[k] = 0;
            else
                deg = std::max(deg, to_double(rd->pair_rho(cand[k])));
        }
        double gp = P.gap(beta);
        double score = gp / deg;
        if (score > best_score * 1.05) {
            best_score = score;
            best_gap = gp;
            InvariantFunction w(rd, Basis::OrbitAverage, false);
            for (size_t k = 0; k < beta.size(); ++k) {
                if (beta[k] == 0) continue;
                InvariantFunction d = add(es[k], InvariantFunction::constant_numeric(rd, -as[k]));
                w = add(w, scale(multiply(d, star(d)), Complex(beta[k] / bmax)));
            }
            best = w;
        }
    }
    if (gap_out) *gap_out = best_gap;
    InvariantFunction out(rd, Basis::OrbitAverage, false);
    for (auto& [lam, cc] : best.numeric_coefficients()) {
        Complex sym = 0.5 * (cc + std::conj(best.coefficient(rd->star(lam))));
        out.add_term(lam, sym);
    }
    return out;
}

double regularity_margin(const TorusGeometry& g, const std::vector<double>& c) {
    const auto& W = g.rd()->weyl();
    std::vector<double> wc(g.rank());
    double best = INFINITY;
    for (size_t w = 1; w < W.order(); ++w) {
        W.act_alpha(w, c.data(), wc.data());
        best = std::min(best, g.dist(c, wc));
    }
    return best / 2;
}

// ---------------------------------------------------------------- hermitian set

std::vector<HermitianComponent> hermitian_components(const TorusGeometry& g) {
    const RootDatum& rd = *g.rd();
    const auto& W = rd.weyl();
    const int r = rd.rank;
    std::vector<std::vector<double>> basis(r, std::vector<double>(r));
    for (int k = 0; k < r; ++k) {
        std::vector<double> e(r, 0.0);
        e[k] = 1;
        basis[k] = g.lattice_to_alpha(e);
    }
    const auto& M = g.metric();
    auto ip = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) s += a[i] * M[i * r + j] * b[j];
        return s;
    };
    std::vector<HermitianComponent> out;
    for (size_t w = 1; w < W.order(); ++w) {
        if (W.compose(w, w) != W.identity()) continue;
        HermitianComponent hc;
        hc.w = w;
        std::vector<double> wb(r);
        for (int k = 0; k < r; ++k) {
            W.act_alpha(w, basis[k].data(), wb.data());
            std::vector<double> mv(r), pv(r);
            for (int i = 0; i < r; ++i) {
                mv[i] = basis[k][i] - wb[i];
                pv[i] = basis[k][i] + wb[i];
            }
            // Gram-Schmidt for the minus part
            for (auto& q : hc.minus_basis) {
                double t = ip(mv, q);
                for (int i = 0; i < r; ++i) mv[i] -= t * q[i];
            }
            double nm = std::sqrt(std::max(0.0, ip(mv, mv)));
            if (nm > 1e-9) {
                for (double& x : mv) x /= nm;
                hc.minus_basis.push_back(mv);
            }
            // independent plus generators (kept as lattice vectors)
            std::vector<double> res = pv;
            std::vector<std::vector<double>> ortho;
            for (auto& q : hc.plus_gens) {
                std::vector<double> qq = q;
                for (auto& o : ortho) {
                    double t = ip(qq, o);
                    for (int i = 0; i < r; ++i) qq[i] -= t * o[i];
                }
                double n2 = std::sqrt(ip(qq, qq));
                for (double& x : qq) x /= n2;
                ortho.push_back(qq);
            }
            for (auto& o : ortho) {
                double t = ip(res, o);
                for (int i = 0; i < r; ++i) res[i] -= t * o[i];
            }
            if (std::sqrt(std::max(0.0, ip(res, res))) > 1e-9) hc.plus_gens.push_back(pv);
        }
        // discrete part: theta0 = m/2 with m in the lattice and w m = -m
        std::vector<int> k(r, -2);
        std::vector<double> m(r), wm(r);
        for (;;) {
            std::fill(m.begin(), m.end(), 0.0);
            for (int j = 0; j < r; ++j)
                for (int i = 0; i < r; ++i) m[i] += k[j] * basis[j][i];
            W.act_alpha(w, m.data(), wm.data());
            bool anti = true;
            for (int i = 0; i < r; ++i) anti = anti && std::fabs(wm[i] + m[i]) < 1e-9;
            if (anti) {
                std::vector<double> t0(r);
                for (int i = 0; i < r; ++i) t0[i] = m[i] / 2;
                bool dup = false;
                for (auto& q : hc.theta0) {
                    // same component if the difference lies in the lattice plus E_+
                    std::vector<double> d(r);
                    for (int i = 0; i < r; ++i) d[i] = t0[i] - q[i];
                    if (g.dist(d, std::vector<double>(r, 0.0)) < 1e-9) dup = true;
                }
                if (!dup) hc.theta0.push_back(t0);
            }
            int i = 0;
            while (i < r && ++k[i] > 2) k[i++] = -2;
            if (i == r) break;
        }
        out.push_back(std::move(hc));
    }
    return out;
}

namespace {

// Samples every hermitian component on a box |y|_inf <= R in orthonormal
// x-coordinates; R grows until h exceeds 2*level on the box boundary.
void sample_nontempered(const TorusGeometry& g, const MonoList& wl, const MonoList& hl, double level,
                        HermitianCloud& cloud) {
    const int r = g.rank();
    auto comps = hermitian_components(g);
    cloud.level = level;
    cloud.nt_w_cert = INFINITY;
    auto point = [&](const HermitianComponent& hc, const std::vector<double>& t0, const std::vector<double>& y,
                     const std::vector<double>& s, std::vector<double>& x, std::vector<double>& th) {
        x.assign(r, 0.0);
        th = t0;
        for (size_t j = 0; j < y.size(); ++j)
            for (int i = 0; i < r; ++i) x[i] += y[j] * hc.minus_basis[j][i];
        for (size_t j = 0; j < s.size(); ++j)
            for (int i = 0; i < r; ++i) th[i] += s[j] * hc.plus_gens[j][i];
    };
    // box radius
    double R = 0.5;
    for (int iter = 0;; ++iter) {
        if (iter > 40) throw Error("infeasible", "proper function does not dominate on the hermitian set");
        double hmin = INFINITY;
        for (auto& hc : comps) {
            const int km = static_cast<int>(hc.minus_basis.size()), kp = static_cast<int>(hc.plus_gens.size());
            const int ns = 32, nb = 64;
            for (auto& t0 : hc.theta0) {
                std::vector<double> y(km), s(kp), x, th;
                size_t total = ipow(ns, kp) * static_cast<size_t>(km == 1 ? 2 : 4 * nb);
                for (size_t q = 0; q < total; ++q) {
                    size_t qq = q;
                    for (int j = 0; j < kp; ++j) {
                        s[j] = (static_cast<double>(qq % ns) + 0.5) / ns;
                        qq /= ns;
                    }
                    if (km == 1) {
                        y[0] = (qq % 2) ? R : -R;
                    } else {
                        int side = static_cast<int>(qq % 4);
                        double tpar = -R + 2 * R * (static_cast<double>(qq / 4 % nb) + 0.5) / nb;
                        std::fill(y.begin(), y.end(), 0.0);
                        y[side / 2] = (side % 2) ? R : -R;
                        y[1 - side / 2] = tpar;
                        for (int j = 2; j < km; ++j) y[j] = 0;
                    }
                    point(hc, t0, y, s, x, th);
                    hmin = std::min(hmin, eval(hl, x.data(), th.data()).real());
                }
            }
        }
        if (hmin > 2 * level) break;
        R *= 1.25;
    }
    cloud.box_radius = R;
    for (auto& hc : comps) {
        const int km = static_cast<int>(hc.minus_basis.size()), kp = static_cast<int>(hc.plus_gens.size());
        int ny = km == 1 ? (kp == 0 ? 4000 : 800) : (km == 2 ? 240 : 60);
        int ns = kp == 0 ? 1 : kp == 1 ? 256 : 64;
        double hy = 2 * R / ny, hs = 1.0 / ns;
        double rho_y = 0.5 * hy * std::sqrt(static_cast<double>(km));
        // per-monomial derivative factors
        std::vector<double> dy(wl.size()), ds(wl.size());
        for (size_t k = 0; k < wl.size(); ++k) {
            const double* nu = &wl.nu[k * r];
            double a = 0, b = 0;
            for (int j = 0; j < km; ++j) {
                double t = 0;
                for (int i = 0; i < r; ++i) t += nu[i] * hc.minus_basis[j][i];
                a += std::fabs(t);
            }
            for (int j = 0; j < kp; ++j) {
                double t = 0;
                for (int i = 0; i < r; ++i) t += nu[i] * hc.plus_gens[j][i];
                b += std::fabs(t);
            }
            dy[k] = a * hy / 2;
            ds[k] = 2 * kPi * b * hs / 2;
        }
        for (auto& t0 : hc.theta0) {
            std::vector<double> y(km), s(kp), x, th;
            size_t total = ipow(ny, km) * ipow(ns, kp);
            for (size_t q = 0; q < total; ++q) {
                size_t qq = q;
                for (int j = 0; j < kp; ++j) {
                    s[j] = (static_cast<double>(qq % ns) + 0.5) * hs;
                    qq /= ns;
                }
                for (int j = 0; j < km; ++j) {
                    y[j] = -R + (static_cast<double>(qq % ny) + 0.5) * hy;
                    qq /= ny;
                }
                point(hc, t0, y, s, x, th);
                double wv = 0, slack = 0;
                for (size_t k = 0; k < wl.size(); ++k) {
                    const double* nu = &wl.nu[k * r];
                    double a = 0, b = 0;
                    for (int i = 0; i < r; ++i) {
                        a += nu[i] * x[i];
                        b += nu[i] * th[i];
                    }
                    wv += (wl.c[k] * std::polar(std::exp(a), 2 * kPi * b)).real();
                    slack += std::abs(wl.c[k]) * std::exp(a + wl.dual[k] * rho_y) * (dy[k] + ds[k]);
                }
                double hv = eval(hl, x.data(), th.data()).real();
                cloud.nt_w_cert = std::min(cloud.nt_w_cert, wv - slack);
                ++cloud.nt_nodes;
                if (hv <= level) {
                    cloud.nt_w.push_back(wv);
                    cloud.nt_h.push_back(hv);
                } else if (hv <= 2 * level) {
                    cloud.shell_w.push_back(wv);
                    cloud.shell_h.push_back(hv);
                }
            }
        }
    }
}

// Laurent polynomial stored densely on the period-lattice index box |m_k| <= D, in quad precision
using Quad = __float128;
struct QC {
    Quad re = 0, im = 0;
};

struct Dense {
    int r = 0, D = 0;
    std::vector<QC> a;
    static Dense zero(int r, int D) {
        Dense d;
        d.r = r;
        d.D = D;
        d.a.assign(ipow(2 * D + 1, r), QC{});
        return d;
    }
};

struct Sparse {
    std::vector<std::vector<int>> m;
    std::vector<QC> c;
    int D = 0;
};

Quad to_quad(const MP& x) {
    double hi = static_cast<double>(x);
    double lo = static_cast<double>(x - MP(hi));
    return static_cast<Quad>(hi) + static_cast<Quad>(lo);
}

// Z = 1 - 2 w / Wc as a sparse Laurent polynomial
Sparse sparse_z(const InvariantFunction& w0, double Wc, const PlancherelMeasure& st) {
    InvariantFunction f = to_orbit_basis(w0).to_numeric();
    const RootDatum& rd = *f.rd();
    Sparse s;
    const Quad k = Quad(-2) / Quad(Wc);
    bool has_zero = false;
    for (auto& [lam, c] : f.numeric_coefficients()) {
        const auto& orb = rd.orbit(lam);
        const Quad n = static_cast<Quad>(orb.size());
        for (auto& nu : orb) {
            auto m = st.lattice_index(nu);
            for (int q : m) s.D = std::max(s.D, std::abs(q));
            QC v{k * Quad(c.real()) / n, k * Quad(c.imag()) / n};
            if (lam.is_zero()) {
                v.re += 1;
                has_zero = true;
            }
            s.m.push_back(m);
            s.c.push_back(v);
        }
    }
    if (!has_zero) {
        s.m.push_back(std::vector<int>(rd.rank, 0));
        s.c.push_back(QC{1, 0});
    }
    return s;
}

// coordinates of flat index i in a box of half-width D
void decode(size_t i, int D, int r, std::vector<int>& c) {
    const size_t side = static_cast<size_t>(2 * D + 1);
    for (int k = r - 1; k >= 0; --k) {
        c[k] = static_cast<int>(i % side) - D;
        i /= side;
    }
}

size_t encode(const std::vector<int>& c, int D) {
    const size_t side = static_cast<size_t>(2 * D + 1);
    size_t i = 0;
    for (int k : c) i = i * side + static_cast<size_t>(k + D);
    return i;
}

// sum_k a_k T_k(Z) by Clenshaw: b_k = a_k + 2 Z b_{k+1} - b_{k+2}
Dense clenshaw(const std::vector<Quad>& a, const Sparse& Z, int r) {
    const int N = static_cast<int>(a.size()) - 1;
    Dense b1 = Dense::zero(r, 0), b2 = Dense::zero(r, 0);
    std::vector<int> c(r), q(r);
    for (int k = N; k >= 0; --k) {
        Dense out = Dense::zero(r, b1.D + Z.D);
        const Quad two = k == 0 ? Quad(1) : Quad(2);
        for (size_t i = 0; i < b1.a.size(); ++i) {
            const QC& x = b1.a[i];
            if (x.re == 0 && x.im == 0) continue;
            decode(i, b1.D, r, c);
            for (size_t t = 0; t < Z.c.size(); ++t) {
                for (int j = 0; j < r; ++j) q[j] = c[j] + Z.m[t][j];
                QC& o = out.a[encode(q, out.D)];
                o.re += two * (Z.c[t].re * x.re - Z.c[t].im * x.im);
                o.im += two * (Z.c[t].re * x.im + Z.c[t].im * x.re);
            }
        }
        for (size_t i = 0; i < b2.a.size(); ++i) {
            decode(i, b2.D, r, c);
            QC& o = out.a[encode(c, out.D)];
            o.re -= b2.a[i].re;
            o.im -= b2.a[i].im;
        }
        std::fill(c.begin(), c.end(), 0);
        out.a[encode(c, out.D)].re += a[k];
        b2 = std::move(b1);
        b1 = std::move(out);
    }
    return b1;
}

InvariantFunction from_dense(const Dense& d, const RootDatumPtr& rd) {
    const int r = rd->rank;
    Eigen::MatrixXd B(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) B(i, j) = to_double(rd->period_basis[i][j]);
    Eigen::MatrixXd Bi = B.inverse();
    InvariantFunction out(rd, Basis::OrbitAverage, false);
    std::vector<int> c(r);
    for (size_t i = 0; i < d.a.size(); ++i) {
        if (d.a[i].re == 0 && d.a[i].im == 0) continue;
        decode(i, d.D, r, c);
        Weight nu(r, Lattice::DualCharacter);
        for (int j = 0; j < r; ++j) {
            double s = 0;
            for (int k = 0; k < r; ++k) s += Bi(j, k) * c[k];
            nu[j] = static_cast<int>(std::lround(s));
        }
        if (!nu.is_dominant()) continue;
        Complex v(static_cast<double>(d.a[i].re), static_cast<double>(d.a[i].im));
        out.add_term(nu, v * static_cast<double>(rd->orbit(nu).size()));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- separator

struct StepCoeffs {
    std::vector<MP> p;  // P = sum_k p_k T_k(1 - 2u) = sum_k p_k cos(k phi)
};

namespace {

// symmetric Fejer kernel in phi, u = sin^2(phi / 2)
double kernel(int m, double phi0, double phi) {
    double s = 1;
    for (int k = 1; k <= m; ++k) s += 2 * (1 - static_cast<double>(k) / (m + 1)) * std::cos(k * phi0) * std::cos(k * phi);
    return s;
}

// int_0^Phi K(phi)^2 sin(phi) / 2 dphi
double kernel_mass(int m, double phi0, double Phi) {
    if (Phi <= 0) return 0;
    int panels = static_cast<int>(std::ceil(Phi * (m + 1) / 2.0)) + 1;
    double h = Phi / panels, s = 0;
    auto f = [&](double x) {
        double k = kernel(m, phi0, x);
        return k * k * std::sin(x) / 2;
    };
    for (int i = 0; i < panels; ++i) s += boost::math::quadrature::gauss<double, 20>::integrate(f, i * h, (i + 1) * h);
    return s;
}

double phi_of(double u) { return 2 * std::asin(std::sqrt(std::clamp(u, 0.0, 1.0))); }

MP clenshaw_mp(const std::vector<MP>& a, const MP& z) {
    MP b1 = 0, b2 = 0;
    for (size_t k = a.size(); k-- > 1;) {
        MP t = a[k] + 2 * z * b1 - b2;
        b2 = b1;
        b1 = t;
    }
    return a[0] + z * b1 - b2;
}

}  // namespace

StepPolynomial StepPolynomial::make(int m, double phi0) {
    StepPolynomial P;
    P.m = m;
    P.phi0 = phi0;
    // K = sum_k kappa_k cos(k phi); K^2 = sum_j gamma_j cos(j phi)
    std::vector<MP> kappa(m + 1), gamma(2 * m + 1, MP(0));
    const MP ph0 = phi0;
    kappa[0] = 1;
    for (int k = 1; k <= m; ++k) kappa[k] = 2 * (1 - MP(k) / (m + 1)) * boost::multiprecision::cos(k * ph0);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= m; ++b) {
            MP v = kappa[a] * kappa[b] / 2;
            gamma[a + b] += v;
            gamma[std::abs(a - b)] += v;
        }
    // sin(psi) cos(j psi) / 2 = (sin((j+1) psi) - sin((j-1) psi)) / 4, and int_0^phi sin(a psi) = (1 - cos(a phi)) / a
    std::vector<MP> I(2 * m + 2, MP(0));
    auto add = [&](int a, const MP& v) {
        I[0] += v / a;
        I[a] -= v / a;
    };
    for (int j = 0; j <= 2 * m; ++j) {
        add(j + 1, gamma[j] / 4);
        if (j == 0) add(1, gamma[j] / 4);
        if (j >= 2) add(j - 1, -gamma[j] / 4);
    }
    MP Z = clenshaw_mp(I, MP(-1));
    for (auto& x : I) x /= Z;
    auto c = std::make_shared<StepCoeffs>();
    c->p = std::move(I);
    P.coeffs = c;
    return P;
}

double StepPolynomial::operator()(double u) const { return static_cast<double>(clenshaw_mp(coeffs->p, 1 - 2 * MP(u))); }

double StepPolynomial::fast(double u) const {
    if (u >= 1) return (*this)(u);
    return kernel_mass(m, phi0, phi_of(u)) / kernel_mass(m, phi0, kPi);
}

namespace {

std::vector<MP> square_chebyshev_mp(const StepPolynomial& P, bool complement) {
    std::vector<MP> a = P.coeffs->p;
    if (complement) {
        for (auto& x : a) x = -x;
        a[0] += 1;
    }
    const size_t n = a.size();
    std::vector<MP> q(2 * n - 1, MP(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            MP v = a[i] * a[j] / 2;
            q[i + j] += v;
            q[i > j ? i - j : j - i] += v;
        }
    return q;
}

}  // namespace

std::vector<double> StepPolynomial::square_chebyshev(bool complement) const {
    auto q = square_chebyshev_mp(*this, complement);
    std::vector<double> out;
    for (auto& x : q) out.push_back(static_cast<double>(x));
    return out;
}

double Separator::value_from_w(double wv) const {
    double P = step(wv / Wc);
    return complement ? (1 - P) * (1 - P) : P * P;
}

Separator sw_separator(const SeparatorInput& in, HermitianCloud* cloud_out) {
    const RootDatumPtr& rd = in.rd;
    const int r = rd->rank;
    if (!(in.eps > 0 && in.eps <= 0.25)) throw Error("usage", "eps must lie in (0, 1/4]");
    if (in.U.empty() || in.U.is_whole) throw Error("empty region", "separator needs a proper nonempty region");
    TorusGeometry g(rd);
    PlancherelMeasure st(rd, 0);

    Separator sep;
    sep.complement = in.complement;
    std::vector<std::vector<double>> centres;
    if (!in.center.empty())
        centres.push_back(in.center);
    else
        for (auto& b : in.U.balls) centres.push_back(b.center);
    // one tuned factor per ball when V and U are concentric ball lists
    bool tuned = in.center.empty() && in.C1.balls.size() == in.U.balls.size();
    for (size_t i = 0; tuned && i < centres.size(); ++i) tuned = in.C1.balls[i].center == centres[i];
    auto factor = [&](size_t i) {
        return tuned ? tuned_localizer(rd, centres[i], in.C1.balls[i].radius, in.U.balls[i].radius) : localizer(rd, centres[i]);
    };
    sep.w = factor(0);
    for (size_t i = 1; i < centres.size(); ++i) sep.w = multiply(sep.w, factor(i));
    InvariantFunction h = proper_function(rd);
    MonoList wl = expand(sep.w, g), hl = expand(h, g);

    int n = in.grid_n > 0 ? in.grid_n : default_compact_grid(r);
    n = std::max(n, default_nodes(r, st.degree(sep.w)));
    auto gw = st.grid_values(sep.w, n);
    auto gh = st.grid_values(h, n);
    double L = 0;
    for (size_t k = 0; k < wl.size(); ++k) L += std::abs(wl.c[k]) * 2 * kPi * wl.dual[k];
    double rho = grid_cover_radius(g, n);
    auto& c = sep.cert;
    c.lipschitz = L;
    c.grid_radius = rho;

    HermitianCloud local;
    HermitianCloud& cloud = cloud_out ? *cloud_out : local;
    cloud = HermitianCloud{};
    cloud.compact_n = n;
    double wmax = -INFINITY, w2 = INFINITY;
    std::vector<double> u(r);
    for (size_t i = 0; i < gw.size(); ++i) {
        node_lattice(i, n, r, u);
        auto th = g.lattice_to_alpha(u);
        double wv = gw[i].real();
        wmax = std::max(wmax, wv);
        double su = in.U.signed_distance(g, th);
        if (su >= 0) w2 = std::min(w2, wv);
        if (su >= 0) {
            cloud.compact_w.push_back(wv);
            cloud.compact_h.push_back(gh[i].real());
        }
    }
    c.compact_samples = static_cast<long>(gw.size());
    // grid values plus Lipschitz slack, refined near the extremes
    double tol = 0.005 * std::max(w2, 1e-12);
    c.Wc = refine_extreme(g, wl, L, n, gw, 1, [](const std::vector<double>&, double) { return true; }, 0.005 * wmax);
    c.w_inner = refine_extreme(
        g, wl, L, n, gw, 1, [&](const std::vector<double>& th, double rr) { return in.C1.signed_distance(g, th) <= rr; }, tol);
    c.w_outer = refine_extreme(
        g, wl, L, n, gw, -1, [&](const std::vector<double>& th, double rr) { return in.U.signed_distance(g, th) >= -rr; }, tol);
    sep.Wc = c.Wc;

    double wout = c.w_outer;
    if (!in.complement && in.level > 0) {
        sample_nontempered(g, wl, hl, in.level, cloud);
        c.w_outer_nt = cloud.nt_w_cert;
        c.nontempered_samples = cloud.nt_nodes;
        wout = std::min(wout, cloud.nt_w_cert);
    } else {
        c.w_outer_nt = INFINITY;
    }
    c.u1 = c.w_inner / c.Wc;
    c.u2 = wout / c.Wc;
    if (!(c.u2 > c.u1) || !(c.u1 >= 0))
        throw Error("infeasible", "localizer does not separate the two sets at the grid resolution (u1 = " +
                                   std::to_string(c.u1) + ", u2 = " + std::to_string(c.u2) + ")");

    // smallest degree certifying both thresholds
    const double se = std::sqrt(in.eps), s1e = std::sqrt(1 - in.eps);
    double lo_thr = in.complement ? 1 - s1e : se;
    double hi_thr = in.complement ? 1 - se : s1e;
    bool found = false;
    const double ph1 = phi_of(c.u1), ph2 = phi_of(std::min(c.u2, 1.0));
    for (int m = 1; 2 * (2 * m + 1) <= in.degree_budget && !found; ++m) {
        double best = -INFINITY, best_phi = 0;
        for (int j = 0; j <= 32; ++j) {
            double ph0 = ph1 + (ph2 - ph1) * j / 32.0;
            double Z = kernel_mass(m, ph0, kPi);
            double p1 = kernel_mass(m, ph0, ph1) / Z, p2 = kernel_mass(m, ph0, ph2) / Z;
            double mg = std::min(lo_thr - p1, p2 - hi_thr);
            if (mg > best) {
                best = mg;
                best_phi = ph0;
            }
        }
        if (best > 1e-9) {
            sep.step = StepPolynomial::make(m, best_phi);
            found = true;
        }
    }
    if (!found) throw Error("budget-exhausted", "no separator within the degree budget certifies (u1 = " + std::to_string(c.u1) +
                                                ", u2 = " + std::to_string(c.u2) + ")");
    c.degree = 2 * sep.step.degree();
    // thresholds from the high-precision coefficients; P is increasing, so the endpoints suffice
    double p1 = sep.step(c.u1), p2 = sep.step(std::min(c.u2, 1.0));
    if (!in.complement) {
        c.f_max_C1 = p1 * p1;
        c.f_min_C2 = p2 * p2;
        c.ok = c.f_max_C1 <= in.eps && c.f_min_C2 >= 1 - in.eps;
    } else {
        c.f_min_C1 = (1 - p1) * (1 - p1);
        c.f_max_C2 = (1 - p2) * (1 - p2);
        c.ok = c.f_min_C1 >= 1 - in.eps && c.f_max_C2 <= in.eps;
    }
    c.f_max_compact = 1;  // P increases from P(0) = 0 to P(1) = 1 and u <= 1 on the compact torus

    auto cheb = square_chebyshev_mp(sep.step, in.complement);
    std::vector<Quad> cq;
    for (auto& x : cheb) {
        cq.push_back(to_quad(x));
        sep.chebyshev.push_back(static_cast<double>(x));
    }
    sep.f = from_dense(clenshaw(cq, sparse_z(sep.w, sep.Wc, st), r), rd);

    // the ring element against the structural formula
    int nf = std::max(n, default_nodes(r, st.degree(sep.f)));
    auto gf = st.grid_values(sep.f, nf);
    auto gw2 = nf == n ? gw : st.grid_values(sep.w, nf);
    double gap = 0;
    for (size_t i = 0; i < gf.size(); ++i)
        gap = std::max(gap, std::abs(gf[i] - sep.value_from_w(gw2[i].real())));
    cloud.ring_gap_compact = gap;
    if (nf == n) {
        for (size_t i = 0; i < gw.size(); ++i) {
            node_lattice(i, n, r, u);
            if (in.U.signed_distance(g, g.lattice_to_alpha(u)) >= 0) cloud.compact_f.push_back(gf[i].real());
        }
    } else {
        // finer grid for the ring values: rebuild the compact cloud on it
        cloud.compact_w.clear();
        cloud.compact_h.clear();
        auto gh2 = st.grid_values(h, nf);
        for (size_t i = 0; i < gf.size(); ++i) {
            node_lattice(i, nf, r, u);
            if (in.U.signed_distance(g, g.lattice_to_alpha(u)) >= 0) {
                cloud.compact_w.push_back(gw2[i].real());
                cloud.compact_h.push_back(gh2[i].real());
                cloud.compact_f.push_back(gf[i].real());
            }
        }
        cloud.compact_n = nf;
    }
    for (double wv : cloud.nt_w) cloud.nt_f.push_back(sep.value_from_w(wv));
    for (double wv : cloud.shell_w) cloud.shell_f.push_back(sep.value_from_w(wv));
    // spot checks off the compact torus
    if (!cloud.nt_w.empty()) {
        MonoList fl = expand(sep.f, g);
        auto comps = hermitian_components(g);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> U01(0, 1);
        double worst = 0;
        for (int k = 0; k < 200; ++k) {
            auto& hc = comps[k % comps.size()];
            auto& t0 = hc.theta0[(k / comps.size()) % hc.theta0.size()];
            std::vector<double> x(r, 0.0), th = t0;
            for (auto& q : hc.minus_basis) {
                double y = (2 * U01(rng) - 1) * cloud.box_radius * 0.5;
                for (int i = 0; i < r; ++i) x[i] += y * q[i];
            }
            for (auto& q : hc.plus_gens) {
                double s = U01(rng);
                for (int i = 0; i < r; ++i) th[i] += s * q[i];
            }
            if (eval(hl, x.data(), th.data()).real() > in.level) continue;
            double wv = eval(wl, x.data(), th.data()).real();
            double fs = sep.value_from_w(wv);
            double fr = eval(fl, x.data(), th.data()).real();
            // the monomial expansion cancels badly off the compact torus; compare against its absolute sum
            worst = std::max(worst, std::fabs(fr - fs) / (1 + eval_abs(fl, x.data())));
        }
        cloud.ring_gap_nt = worst;
    }
    return sep;
}

// ---------------------------------------------------------------- amplifier

std::shared_ptr<const AmplifierDesign> design_amplifier(const RootDatumPtr& rd, const TorusRegion& U,
                                                        const AmplifierConfig& cfg) {
    if (U.empty() || U.is_whole) throw Error("empty region", "amplifier region is empty");
    TorusGeometry g(rd);
    auto panel = cfg.panel.empty() ? default_panel() : cfg.panel;
    panel.push_back(0);
    std::vector<std::unique_ptr<PlancherelMeasure>> measures;
    for (long long p : panel) measures.push_back(std::make_unique<PlancherelMeasure>(rd, static_cast<double>(p)));
    InvariantFunction h = proper_function(rd);
    // the localizer's level sets are not metric balls near walls; shrink V further if needed
    std::string last;
    for (double shrink = cfg.shrink; shrink >= 0.15; shrink *= 0.75) {
        auto d = std::make_shared<AmplifierDesign>();
        d->rd = rd;
        d->U = U;
        d->V = U.shrunk(g, shrink);
        d->shrink = shrink;
        d->center = U.balls.front().center;
        double mn = INFINITY;
        for (size_t i = 0; i < panel.size(); ++i) {
            double mass = measures[i]->open_set_mass(d->V);
            d->panel_masses.emplace_back(panel[i], mass);
            mn = std::min(mn, mass);
        }
        d->delta = cfg.safety * mn;
        if (!(d->delta >= cfg.delta_floor)) throw Error("empty region", "region too thin: delta below the configured floor");
        d->X = 4 / d->delta;
        d->eps = d->delta / 4;
        d->h = h;
        d->h_char = to_character_basis(h);
        d->h_level = d->X + 2;

        SeparatorInput in;
        in.rd = rd;
        in.C1 = d->V;
        in.U = U;
        in.eps = d->eps;
        in.level = d->h_level;
        in.degree_budget = cfg.degree_budget;
        in.grid_n = cfg.grid_n;
        try {
            d->sep = sw_separator(in, &d->cloud);
        } catch (const Error& e) {
            if (e.kind != "infeasible" && e.kind != "budget-exhausted") throw;
            last = e.what();
            continue;
        }
        d->f_char = to_character_basis(d->sep.f);
        return d;
    }
    throw Error("infeasible", last);
}

AmplifierElement build_amplifier(const std::shared_ptr<const AmplifierDesign>& d, long long p) {
    if (p < 2) throw Error("usage", "p must be a prime");
    const RootDatumPtr& rd = d->rd;
    PlancherelMeasure m(rd, static_cast<double>(p));
    AmplifierElement el;
    el.p = p;
    el.design = d;
    auto& c = el.cert;
    c.mu_f = m.integrate(d->sep.f).value.real();
    c.mu_h = m.integrate(d->h).value.real();
    const double X = d->X;
    el.g = add(scale(d->sep.f, Complex(X)), d->h.to_numeric());
    el.g = add(el.g, InvariantFunction::constant_numeric(rd, -(X * c.mu_f + c.mu_h)));
    c.identity_residual = std::abs(m.integrate(el.g).value);
    auto l2 = m.l2_norm(el.g);
    c.l2 = l2.value.real();
    c.l2_residual = l2.residual;
    c.l1 = l1_norm_bound(el.g, p);
    c.A = to_double(c.l1.A);
    c.B = c.l1.B;
    c.support_radius = to_double(support_radius(el.g));

    const auto& cl = d->cloud;
    auto S = [&](double fv, double hv) { return X * (fv - c.mu_f) + hv - c.mu_h; };
    c.min_S_compact = INFINITY;
    for (size_t i = 0; i < cl.compact_f.size(); ++i)
        c.min_S_compact = std::min(c.min_S_compact, S(cl.compact_f[i], cl.compact_h[i]));
    c.min_S_nontempered = INFINITY;
    for (size_t i = 0; i < cl.nt_w.size(); ++i)
        c.min_S_nontempered = std::min(c.min_S_nontempered, S(cl.nt_f[i], cl.nt_h[i]));
    c.min_S_shell = INFINITY;
    for (size_t i = 0; i < cl.shell_w.size(); ++i)
        c.min_S_shell = std::min(c.min_S_shell, S(cl.shell_f[i], cl.shell_h[i]));
    c.min_S = std::min({c.min_S_compact, c.min_S_nontempered, c.min_S_shell});
    c.samples = static_cast<long>(cl.compact_f.size() + cl.nt_w.size() + cl.shell_w.size());
    c.certified_lower = X * (d->sep.cert.f_min_C2 - c.mu_f) - c.mu_h;
    c.tail_lower = d->h_level - X * c.mu_f - c.mu_h;

    const double ring_tol = 1e-6;
    c.item[0] = c.identity_residual <= 1e-7;
    c.item[1] = c.l1.log_value <= std::log(c.B) + c.A * std::log(static_cast<double>(p)) + 1e-9;
    c.item[2] = c.l2 <= X + 1;
    c.item[3] = c.min_S >= 1 - 1e-6 && c.certified_lower >= 1 && c.tail_lower >= 1 && d->sep.cert.ok &&
                cl.ring_gap_compact <= ring_tol && cl.ring_gap_nt <= 1e-10;
    c.item[4] = std::isfinite(c.support_radius);
    c.ok = c.item[0] && c.item[1] && c.item[2] && c.item[3] && c.item[4];
    return el;
}

AmplifierElement build_amplifier(const RootDatumPtr& rd, const TorusRegion& U, long long p, const AmplifierConfig& cfg) {
    return build_amplifier(design_amplifier(rd, U, cfg), p);
}

// ---------------------------------------------------------------- separation

namespace {

struct LeviProjector {
    int r = 0;
    std::vector<double> P;  // r x r, removes the span of the Levi's simple roots (metric-orthogonally)
};

LeviProjector levi_projector(const TorusGeometry& g, const StandardLevi& M) {
    const int r = g.rank();
    LeviProjector lp;
    lp.r = r;
    Eigen::MatrixXd G(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) G(i, j) = g.metric()[i * r + j];
    const int k = static_cast<int>(M.subset.size());
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(r, k);
    for (int j = 0; j < k; ++j) E(M.subset[j], j) = 1;
    Eigen::MatrixXd Pm = Eigen::MatrixXd::Identity(r, r);
    if (k > 0) Pm -= E * (E.transpose() * G * E).inverse() * E.transpose() * G;
    lp.P.resize(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) lp.P[i * r + j] = Pm(i, j);
    return lp;
}

double projected_distance(const TorusGeometry& g, const LeviProjector& lp, const std::vector<double>& a,
                          const std::vector<double>& b) {
    const int r = g.rank();
    std::vector<double> d(r);
    for (int i = 0; i < r; ++i) d[i] = a[i] - b[i];
    auto u = g.alpha_to_lattice(d);
    for (double& x : u) x -= std::round(x);
    double best = INFINITY;
    std::vector<double> v(r), pv(r);
    for (auto& k : g.shifts()) {
        for (int i = 0; i < r; ++i) v[i] = u[i] + k[i];
        auto w = g.lattice_to_alpha(v);
        for (int i = 0; i < r; ++i) {
            double s = 0;
            for (int j = 0; j < r; ++j) s += lp.P[i * r + j] * w[j];
            pv[i] = s;
        }
        best = std::min(best, g.norm(pv));
    }
    return best;
}

double orbit_projected_distance(const TorusGeometry& g, const LeviProjector& lp, const std::vector<std::vector<double>>& A,
                                const std::vector<std::vector<double>>& B) {
    double best = INFINITY;
    for (auto& a : A)
        for (auto& b : B) best = std::min(best, projected_distance(g, lp, a, b));
    return best;
}

// generators of the subtorus exp(2 pi i span{alpha_j : j in M}) in alpha coords
std::vector<std::vector<double>> subtorus_gens(const RootDatum& rd, const StandardLevi& M) {
    std::vector<std::vector<double>> out;
    for (int j : M.subset) {
        std::vector<double> e(rd.rank, 0.0);
        e[j] = 1;
        out.push_back(e);
    }
    return out;
}

// ball samples (orthonormal grid) around each orbit point; returns covering radius
double ball_samples(const TorusGeometry& g, const TorusBall& b, int per_axis, std::vector<std::vector<double>>& out) {
    const int r = g.rank();
    Eigen::MatrixXd M(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) M(i, j) = g.metric()[i * r + j];
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    Eigen::MatrixXd Lt = llt.matrixU();  // M = Lt^T Lt; z = Lt v orthonormal
    Eigen::MatrixXd Linv = Lt.inverse();
    double h = 2 * b.radius / per_axis;
    std::vector<int> k(r, 0);
    for (auto& c : b.orbit) {
        std::fill(k.begin(), k.end(), 0);
        for (;;) {
            Eigen::VectorXd z(r);
            for (int i = 0; i < r; ++i) z(i) = -b.radius + (k[i] + 0.5) * h;
            if (z.norm() <= b.radius + h * std::sqrt(static_cast<double>(r)) / 2) {
                Eigen::VectorXd v = Linv * z;
                std::vector<double> p(r);
                for (int i = 0; i < r; ++i) p[i] = c[i] + v(i);
                out.push_back(p);
            }
            int i = 0;
            while (i < r && ++k[i] >= per_axis) k[i++] = 0;
            if (i == r) break;
        }
    }
    return h * std::sqrt(static_cast<double>(r)) / 2;
}

}  // namespace

double levi_distance(const TorusGeometry& g, const StandardLevi& M, const std::vector<double>& a, const std::vector<double>& b) {
    return projected_distance(g, levi_projector(g, M), a, b);
}

SeparationDatum separation_find(const RootDatumPtr& rd, int levi, int resolution, int max_resolution) {
    if (levi < 0 || levi >= static_cast<int>(rd->levis.size())) throw Error("usage", "no such proper Levi");
    TorusGeometry g(rd);
    const StandardLevi& M = rd->levis[levi];
    LeviProjector lp = levi_projector(g, M);
    const int r = rd->rank;
    for (int res = resolution; res <= max_resolution; res *= 2) {
        // regular candidate centres, one per orbit
        struct Cand {
            std::vector<double> c;
            std::vector<std::vector<double>> orbit;
            double reg;
        };
        std::vector<Cand> cands;
        std::vector<int> k(r, 0);
        for (;;) {
            std::vector<double> u(r);
            for (int i = 0; i < r; ++i) u[i] = static_cast<double>(k[i]) / res;
            auto c = g.lattice_to_alpha(u);
            double reg = regularity_margin(g, c);
            if (reg > 1e-9) {
                bool dup = false;
                for (auto& q : cands)
                    if (g.dist_to_points(c, q.orbit) < 1e-9) {
                        dup = true;
                        break;
                    }
                if (!dup) cands.push_back({c, g.orbit_points(c), reg});
            }
            int i = 0;
            while (i < r && ++k[i] >= res) k[i++] = 0;
            if (i == r) break;
        }
        double best = 0;
        SeparationDatum s;
        for (size_t i = 0; i < cands.size(); ++i)
            for (size_t j = i + 1; j < cands.size(); ++j) {
                double d = orbit_projected_distance(g, lp, cands[i].orbit, cands[j].orbit);
                if (d <= 1e-9) continue;
                double r1 = std::min(d / 4, 0.5 * cands[i].reg), r2 = std::min(d / 4, 0.5 * cands[j].reg);
                double margin = d - r1 - r2;
                double score = std::min({r1, r2, 0.45 * margin});
                if (score > best + 1e-12) {
                    best = score;
                    s.c1 = cands[i].c;
                    s.c2 = cands[j].c;
                    s.rho1 = r1;
                    s.rho2 = r2;
                    s.d = d;
                    s.margin = margin;
                }
            }
        if (best <= 0) continue;
        s.rd = rd;
        s.levi = levi;
        s.U1 = TorusRegion::make(g, {TorusBall{s.c1, s.rho1, {}}});
        s.U2 = TorusRegion::make(g, {TorusBall{s.c2, s.rho2, {}}});
        // sampled distance between U1^cl T^M and U2^cl T^M
        std::vector<std::vector<double>> P1, P2;
        int per_axis = r == 1 ? 16 : 8;
        double cov1 = ball_samples(g, s.U1.balls[0], per_axis, P1);
        double cov2 = ball_samples(g, s.U2.balls[0], per_axis, P2);
        auto gens = subtorus_gens(*rd, M);
        int ns = gens.empty() ? 1 : (gens.size() == 1 ? 64 : 16);
        size_t nsub = ipow(ns, static_cast<int>(gens.size()));
        double hs = 0;
        for (auto& q : gens) hs += g.norm(q) / (2.0 * ns);
        double sampled = INFINITY;
        std::vector<double> pt(r);
        for (size_t q = 0; q < nsub; ++q) {
            size_t qq = q;
            std::vector<double> sh(r, 0.0);
            for (auto& gen : gens) {
                double t = (static_cast<double>(qq % ns) + 0.5) / ns;
                qq /= ns;
                for (int i = 0; i < r; ++i) sh[i] += t * gen[i];
            }
            for (auto& a : P1) {
                for (int i = 0; i < r; ++i) pt[i] = a[i] + sh[i];
                for (auto& b : P2) sampled = std::min(sampled, g.dist(pt, b));
            }
        }
        s.sampled_distance = sampled;
        s.sample_resolution = std::max(cov1, cov2);
        s.lipschitz_slack = cov1 + cov2 + hs;
        s.samples = static_cast<long>(nsub * P1.size() * P2.size());
        double certified = std::min(s.margin, sampled - s.lipschitz_slack);
        if (!(certified > 0)) continue;
        s.delta1 = 0.45 * certified;
        s.delta1_killing = 2 * kPi * s.delta1 / g.killing_scale();
        s.U = TorusRegion::make(g, {TorusBall{std::vector<double>(r, 0.0), s.delta1, {}}});
        s.certified = true;
        return s;
    }
    throw Error("not-found", "no separated orbit pair at the configured resolution");
}

ReplayResult replay_separation(const SeparationDatum& s, long samples, unsigned seed) {
    TorusGeometry g(s.rd);
    const int r = s.rd->rank;
    const StandardLevi& M = s.rd->levis[s.levi];
    auto gens = subtorus_gens(*s.rd, M);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U01(0, 1), N11(-1, 1);
    // random point of a torus ball (radius rad, metric) via rejection in alpha coords
    double smax = 0;
    for (int k = 0; k < r; ++k) {
        std::vector<double> e(r, 0.0);
        e[k] = 1;
        smax = std::max(smax, 1.0 / g.norm(e));
    }
    auto in_ball = [&](double rad) {
        std::vector<double> v(r);
        for (;;) {
            for (int i = 0; i < r; ++i) v[i] = N11(rng) * rad * smax * std::sqrt(static_cast<double>(r));
            if (g.norm(v) < rad) return v;
        }
    };
    ReplayResult out;
    const int per_xi = 50;
    long n_xi = std::max(1L, samples / per_xi);
    for (long q = 0; q < n_xi; ++q) {
        std::vector<double> xi(r);
        if (q % 2 == 0) {
            std::vector<double> u(r);
            for (int i = 0; i < r; ++i) u[i] = U01(rng);
            xi = g.lattice_to_alpha(u);
        } else {
            // aim the tube at U1 so near misses get exercised
            const auto& orb = s.U1.balls[0].orbit;
            const auto& c = orb[static_cast<size_t>(U01(rng) * orb.size()) % orb.size()];
            auto v = in_ball(s.rho1 + s.delta1);
            for (int i = 0; i < r; ++i) xi[i] = c[i] + v[i];
        }
        bool hit1 = false, hit2 = false;
        for (int k = 0; k < per_xi; ++k) {
            auto v = in_ball(s.delta1);
            std::vector<double> pt(r);
            for (int i = 0; i < r; ++i) pt[i] = xi[i] + v[i];
            for (auto& gen : gens) {
                double t = U01(rng);
                for (int i = 0; i < r; ++i) pt[i] += t * gen[i];
            }
            hit1 = hit1 || s.U1.contains(g, pt);
            hit2 = hit2 || s.U2.contains(g, pt);
            ++out.samples;
        }
        if (hit1 && hit2) ++out.violations;
        // the certified index must also avoid its region on these samples
    }
    return out;
}

IndexChoice index_selector(const SeparationDatum& s, const SpectralParameter& mu, long long p) {
    if (!s.certified) throw Error("selection-failure", "separation datum is not certified");
    TorusGeometry g(s.rd);
    const RootDatum& rd = *s.rd;
    auto a = rd.varpi_to_alpha(mu.im);
    std::vector<double> xi(rd.rank);
    for (int i = 0; i < rd.rank; ++i) xi[i] = std::log(static_cast<double>(p)) * a[i] / (2 * kPi);
    LeviProjector lp = levi_projector(g, rd.levis[s.levi]);
    IndexChoice out;
    out.dist1 = orbit_projected_distance(g, lp, {xi}, s.U1.balls[0].orbit);
    out.dist2 = orbit_projected_distance(g, lp, {xi}, s.U2.balls[0].orbit);
    out.certified1 = out.dist1 > s.delta1 + s.rho1;
    out.certified2 = out.dist2 > s.delta1 + s.rho2;
    if (out.certified1)
        out.j = 1;
    else if (out.certified2)
        out.j = 2;
    else
        throw Error("selection-failure", "neither index is certified; rerun separation_find at higher resolution");
    return out;
}

// ---------------------------------------------------------------- theta

std::vector<long long> primes_up_to(long long X) {
    std::vector<long long> out;
    if (X < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(X) + 1, false);
    for (long long i = 2; i <= X; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long long j = i * i; j <= X; j += i) comp[j] = true;
    }
    return out;
}

std::vector<long long> primes_in_progression(double X, long long N) {
    if (N < 1) throw Error("usage", "N must be positive");
    std::vector<long long> out;
    for (long long p : primes_up_to(static_cast<long long>(std::floor(X))))
        if (p % N == 1 % N) out.push_back(p);
    return out;
}

ThetaDesigns theta_designs(const SeparationDatum& s, const AmplifierConfig& cfg) {
    ThetaDesigns d;
    d.d1 = design_amplifier(s.rd, s.U1, cfg);
    d.d2 = design_amplifier(s.rd, s.U2, cfg);
    return d;
}

ThetaOperator assemble_theta(const SeparationDatum& s, const ThetaDesigns& d, const SpectralParameter& mu, double X, long long N) {
    ThetaOperator t;
    t.mu = mu;
    t.levi = s.levi;
    t.X = X;
    t.N = N;
    t.primes = primes_in_progression(X, N);
    t.Y = static_cast<long long>(t.primes.size());
    std::vector<std::future<ThetaComponent>> jobs;
    for (long long p : t.primes)
        jobs.push_back(std::async(std::launch::async, [&, p] {
            ThetaComponent c;
            c.p = p;
            c.j = index_selector(s, mu, p).j;
            c.tau = build_amplifier(c.j == 1 ? d.d1 : d.d2, p);
            c.l1 = c.tau.cert.l1.value;
            c.l2_sq = c.tau.cert.l2 * c.tau.cert.l2;
            c.ms = ms_bound(c.tau.g, static_cast<double>(p));
            return c;
        }));
    for (auto& j : jobs) t.comps.push_back(j.get());
    for (auto& c : t.comps) {
        t.l1_total += c.l1;
        t.l2_sq_total += c.l2_sq;
        t.ms_bound = std::max(t.ms_bound, c.ms);
        t.A = std::max(t.A, c.tau.cert.A);
        t.B = std::max({t.B, c.tau.cert.B, c.tau.design->X + 1});
        t.a_max = std::max(t.a_max, c.tau.cert.support_radius);
    }
    double Xmax = t.primes.empty() ? X : static_cast<double>(t.primes.back());
    t.l1_ok = t.l1_total <= t.B * std::pow(X, t.A) * static_cast<double>(t.Y) * (1 + 1e-12);
    t.l2_ok = t.l2_sq_total <= t.B * t.B * static_cast<double>(t.Y) * (1 + 1e-12);
    t.ms_ok = t.ms_bound <= t.a_max * std::log(Xmax) * (1 + 1e-12) + 1e-12;
    return t;
}

double choose_X(const RootDatum& rd, const SpectralParameter& mu, double A, double C3) {
    if (!(A > 0)) throw Error("usage", "A must be positive");
    if (C3 < 2) throw Error("usage", "C3 must be at least 2");
    return std::max(std::pow(rd.d_factor(mu), 1.0 / (2 * A + 1)), C3);
}

double ms_bound(const InvariantFunction& f, double p) {
    if (f.is_zero()) return 0;
    return to_double(support_radius(f)) * std::log(p);
}

double ms_bound(const ThetaOperator& t) { return t.ms_bound; }

}  // namespace chevalley
