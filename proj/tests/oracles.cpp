#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace oracle {

IMat cartan(char series, int rank) {
    // Bourbaki numbering
    if (series == 'A' && rank == 1) return {{2}};
    if (series == 'A' && rank == 2) return {{2, -1}, {-1, 2}};
    if (series == 'A' && rank == 3) return {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
    if (series == 'B' && rank == 2) return {{2, -1}, {-2, 2}};
    if (series == 'C' && rank == 2) return {{2, -2}, {-1, 2}};
    if (series == 'B' && rank == 3) return {{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}};
    if (series == 'C' && rank == 3) return {{2, -1, 0}, {-1, 2, -2}, {0, -1, 2}};
    if (series == 'G' && rank == 2) return {{2, -3}, {-1, 2}};
    if (series == 'D' && rank == 4) return {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};
    if (series == 'F' && rank == 4) return {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
    if (series == 'E' && rank == 6)
        return {{2, 0, -1, 0, 0, 0}, {0, 2, 0, -1, 0, 0}, {-1, 0, 2, -1, 0, 0},
                {0, -1, -1, 2, -1, 0}, {0, 0, 0, -1, 2, -1}, {0, 0, 0, 0, -1, 2}};
    throw std::invalid_argument("no table");
}

namespace {

long long pair_coroot(const IMat& C, const IVec& beta, int i) {
    long long s = 0;
    for (size_t j = 0; j < beta.size(); ++j) s += C[i][j] * beta[j];
    return s;
}

}  // namespace

std::vector<IVec> positive_roots(const IMat& C) {
    const int r = static_cast<int>(C.size());
    std::set<IVec> all;
    std::deque<IVec> queue;
    for (int i = 0; i < r; ++i) {
        IVec e(r, 0);
        e[i] = 1;
        all.insert(e);
        queue.push_back(e);
    }
    while (!queue.empty()) {
        IVec b = queue.front();
        queue.pop_front();
        for (int i = 0; i < r; ++i) {
            IVec s = b;
            s[i] -= pair_coroot(C, b, i);
            if (all.insert(s).second) queue.push_back(s);
        }
    }
    std::vector<IVec> pos;
    for (auto& b : all)
        if (std::all_of(b.begin(), b.end(), [](long long x) { return x >= 0; })) pos.push_back(b);
    return pos;
}

size_t weyl_order(const IMat& C) {
    const int r = static_cast<int>(C.size());
    // matrices acting on simple-root coordinates: s_i(b) = b - <b, alpha_i^vee> alpha_i
    using M = std::vector<long long>;
    std::vector<M> gens;
    for (int i = 0; i < r; ++i) {
        M m(r * r, 0);
        for (int a = 0; a < r; ++a) m[a * r + a] = 1;
        for (int j = 0; j < r; ++j) m[i * r + j] -= C[i][j];
        gens.push_back(m);
    }
    M id(r * r, 0);
    for (int a = 0; a < r; ++a) id[a * r + a] = 1;
    std::set<M> seen{id};
    std::deque<M> queue{id};
    while (!queue.empty()) {
        M x = queue.front();
        queue.pop_front();
        for (auto& g : gens) {
            M y(r * r, 0);
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b)
                    for (int c = 0; c < r; ++c) y[a * r + b] += g[a * r + c] * x[c * r + b];
            if (seen.insert(y).second) queue.push_back(y);
        }
    }
    return seen.size();
}

chevalley::BigInt weyl_dimension(const IMat& C, const IVec& lambda) {
    // roots of the dual group are the coroots of G; pairing <lambda, alpha> for
    // lambda in fundamental coweights and alpha = sum a_i alpha_i is sum lambda_i a_i
    chevalley::Rational d = 1;
    for (auto& a : positive_roots(C)) {
        long long num = 0, den = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            num += (lambda[i] + 1) * a[i];
            den += a[i];
        }
        d *= chevalley::Rational(num, den);
    }
    return boost::multiprecision::numerator(d);
}

std::vector<IVec> dual_orbit(const IMat& C, const IVec& lambda) {
    // reflections on coweight coordinates: s_i(mu) = mu - mu_i alpha_i^vee, alpha_i^vee = row i
    const int r = static_cast<int>(C.size());
    std::set<IVec> seen{lambda};
    std::deque<IVec> queue{lambda};
    while (!queue.empty()) {
        IVec m = queue.front();
        queue.pop_front();
        for (int i = 0; i < r; ++i) {
            IVec s = m;
            for (int j = 0; j < r; ++j) s[j] -= m[i] * C[i][j];
            if (seen.insert(s).second) queue.push_back(s);
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<std::vector<double>> weight_orbit(const IMat& C, const std::vector<double>& v) {
    // s_i(v) = v - v_i alpha_i, alpha_i = column i in varpi coordinates
    const int r = static_cast<int>(C.size());
    auto key = [](const std::vector<double>& x) {
        IVec k;
        for (double y : x) k.push_back(std::llround(y * 1e9));
        return k;
    };
    std::set<IVec> seen{key(v)};
    std::vector<std::vector<double>> out{v};
    for (size_t q = 0; q < out.size(); ++q)
        for (int i = 0; i < r; ++i) {
            auto s = out[q];
            double vi = s[i];
            for (int j = 0; j < r; ++j) s[j] -= vi * C[j][i];
            if (seen.insert(key(s)).second) out.push_back(s);
        }
    return out;
}

std::complex<double> character_alternant(const IMat& C, const IVec& lambda, const std::vector<double>& theta) {
    // orbit elements of a regular weight correspond to group elements; the sign is
    // recovered from the parity of the number of reflections on a shortest path
    const int r = static_cast<int>(C.size());
    auto alternant = [&](const IVec& mu) {
        std::map<IVec, int> sign{{mu, 1}};
        std::deque<IVec> queue{mu};
        while (!queue.empty()) {
            IVec m = queue.front();
            queue.pop_front();
            for (int i = 0; i < r; ++i) {
                IVec s = m;
                for (int j = 0; j < r; ++j) s[j] -= m[i] * C[i][j];
                if (!sign.count(s)) {
                    sign[s] = -sign[m];
                    queue.push_back(s);
                }
            }
        }
        std::complex<double> z = 0;
        for (auto& [m, sg] : sign) {
            double ph = 0;
            for (int j = 0; j < r; ++j) ph += m[j] * theta[j];
            z += static_cast<double>(sg) * std::polar(1.0, 2 * M_PI * ph);
        }
        return z;
    };
    IVec lr = lambda, rho(r, 1);
    for (auto& x : lr) x += 1;
    return alternant(lr) / alternant(rho);
}

std::vector<std::vector<double>> killing_dual_gram(const IMat& C) {
    const int r = static_cast<int>(C.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(r, r);
    for (auto& a : positive_roots(C)) {
        // alpha(H_i) = <alpha, alpha_i^vee>
        Eigen::VectorXd v(r);
        for (int i = 0; i < r; ++i) v[i] = static_cast<double>(pair_coroot(C, a, i));
        K += 2 * v * v.transpose();
    }
    Eigen::MatrixXd G = K.inverse();
    std::vector<std::vector<double>> out(r, std::vector<double>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out[i][j] = G(i, j);
    return out;
}

double sato_tate_trace_second_moment(int nodes) {
    double s = 0;
    for (int k = 0; k < nodes; ++k) {
        double t = 2 * M_PI * k / nodes;
        s += 4 * std::cos(t) * std::cos(t) * 2 * std::sin(t) * std::sin(t);
    }
    return s / nodes;
}

double pgl2_plancherel(const std::map<int, double>& x_coeffs, double p) {
    int top = 0;
    for (auto& [n, c] : x_coeffs) top = std::max(top, n);
    // X_n in the basis T_{p^k}: X_0 = T_1, X_1 = p^{-1/2} T_p, X_{n+1} = X_1 X_n - X_{n-1}
    // with T_p T_{p^k} = T_{p^{k+1}} + p T_{p^{k-1}} (k >= 2), T_p T_p = T_{p^2} + (p + 1) T_1
    const double q = 1 / std::sqrt(p);
    std::vector<std::vector<double>> X(top + 1, std::vector<double>(top + 2, 0.0));
    X[0][0] = 1;
    if (top >= 1) X[1][1] = q;
    for (int n = 1; n < top; ++n) {
        std::vector<double> y(top + 2, 0.0);
        for (int k = 0; k <= top; ++k) {
            double c = X[n][k];
            if (c == 0) continue;
            y[k + 1] += q * c;
            if (k == 1) y[0] += q * (p + 1) * c;
            if (k >= 2) y[k - 1] += q * p * c;
        }
        for (int k = 0; k <= top; ++k) y[k] -= X[n - 1][k];
        X[n + 1] = y;
    }
    double s = 0;
    for (auto& [n, c] : x_coeffs) s += c * X[n][0];
    return s;
}

long pgl2_hecke_cosets(long p) {
    // K diag(p,1) K / K: upper triangular representatives [[p^a, b],[0, p^{1-a}]],
    // b mod p^{1-a}; count them one by one
    long n = 0;
    for (int a = 0; a <= 1; ++a) {
        long range = a == 0 ? p : 1;
        for (long b = 0; b < range; ++b) ++n;
    }
    return n;
}

std::vector<long long> primes_by_trial_division(long long X) {
    std::vector<long long> out;
    for (long long n = 2; n <= X; ++n) {
        bool prime = true;
        for (long long d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(n);
    }
    return out;
}

double beta_closed_form(const std::vector<double>& lp, const std::vector<double>& rp) {
    // |phi(iy)|^{-2} = (y/2) tanh(pi y / 2) / pi and phi(s) = Gamma_R(s) / Gamma_R(s+1) real on s > 0
    double b = 1;
    for (size_t k = 0; k < lp.size(); ++k) {
        double y = lp[k], s = rp[k];
        double phi_rho = std::sqrt(M_PI) * std::tgamma(s / 2) / std::tgamma((s + 1) / 2);
        b *= (y / 2) * std::tanh(M_PI * y / 2) / M_PI * phi_rho * phi_rho;
    }
    return b;
}

}  // namespace oracle
