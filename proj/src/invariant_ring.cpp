#include "chevalley/invariant_ring.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <set>

namespace chevalley {

std::string GaussQ::str() const {
    if (im == 0) return to_string(re);
    return to_string(re) + (im < 0 ? "-" : "+") + to_string(im < 0 ? Rational(-im) : im) + "i";
}

std::string basis_name(Basis b) { return b == Basis::OrbitAverage ? "orbit_average" : "weyl_character"; }

// ---------------------------------------------------------------- torus points

TorusPoint TorusPoint::compact(std::vector<double> theta) {
    TorusPoint t;
    t.x.assign(theta.size(), 0.0);
    t.theta = std::move(theta);
    return t;
}

TorusPoint TorusPoint::prime_power(const std::vector<double>& chi, double p) {
    TorusPoint t;
    t.theta.assign(chi.size(), 0.0);
    for (double c : chi) t.x.push_back(c * std::log(p));
    return t;
}

bool TorusPoint::on_compact(double tol) const {
    for (double v : x)
        if (std::fabs(v) > tol) return false;
    return true;
}

namespace {
bool near_integer(double v, double tol) { return std::fabs(v - std::round(v)) <= tol; }
}  // namespace

bool congruent_mod_period(const RootDatum& rd, const std::vector<double>& a, const std::vector<double>& b, double tol) {
    const int r = rd.rank;
    for (int i = 0; i < r; ++i) {
        double d = 0;
        if (rd.isogeny == Isogeny::Adjoint) {
            d = a[i] - b[i];
        } else {
            for (int j = 0; j < r; ++j) d += rd.cartan[i][j] * (a[j] - b[j]);
        }
        if (!near_integer(d, tol)) return false;
    }
    return true;
}

std::vector<double> reduce_mod_period(const RootDatum& rd, const std::vector<double>& theta) {
    const int r = rd.rank;
    if (rd.isogeny == Isogeny::Adjoint) {
        std::vector<double> out(r);
        for (int i = 0; i < r; ++i) out[i] = theta[i] - std::floor(theta[i]);
        return out;
    }
    std::vector<double> v = rd.alpha_to_varpi(theta);
    for (double& x : v) x -= std::floor(x);
    return rd.varpi_to_alpha(v);
}

std::optional<size_t> hermitian_witness(const RootDatum& rd, const TorusPoint& t, double tol) {
    const auto& W = rd.weyl();
    std::vector<double> wx(rd.rank), wt(rd.rank);
    for (size_t w = 0; w < W.order(); ++w) {
        W.act_alpha(w, t.x.data(), wx.data());
        bool ok = true;
        for (int i = 0; i < rd.rank && ok; ++i) ok = std::fabs(wx[i] + t.x[i]) <= tol * (1 + std::fabs(t.x[i]));
        if (!ok) continue;
        W.act_alpha(w, t.theta.data(), wt.data());
        if (congruent_mod_period(rd, wt, t.theta, tol)) return w;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- container

InvariantFunction InvariantFunction::constant(RootDatumPtr rd, const GaussQ& c) {
    InvariantFunction f(rd, Basis::OrbitAverage, true);
    f.add_term(Weight(rd->rank, Lattice::DualCharacter), c);
    return f;
}

InvariantFunction InvariantFunction::constant_numeric(RootDatumPtr rd, Complex c) {
    InvariantFunction f(rd, Basis::OrbitAverage, false);
    f.add_term(Weight(rd->rank, Lattice::DualCharacter), c);
    return f;
}

void InvariantFunction::check_weight(const Weight& w) const {
    if (w.lattice != Lattice::DualCharacter || w.rank != rd_->rank)
        throw Error("lattice-mismatch", "coefficient weight is not a dual character of this root datum");
    if (!w.is_dominant()) throw Error("non-dominant", "support must consist of dominant weights: " + w.str());
}

void InvariantFunction::add_term(const Weight& w, const GaussQ& c) {
    if (!exact_) {
        add_term(w, c.to_complex());
        return;
    }
    check_weight(w);
    if (c.is_zero()) return;
    auto [it, fresh] = q_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) q_.erase(it);
    }
}

void InvariantFunction::add_term(const Weight& w, Complex c) {
    if (exact_) throw Error("internal", "numeric term added to exact function");
    check_weight(w);
    if (c == Complex(0)) return;
    auto [it, fresh] = z_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (it->second == Complex(0)) z_.erase(it);
    }
}

std::vector<Weight> InvariantFunction::support() const {
    std::vector<Weight> s;
    if (exact_)
        for (auto& kv : q_) s.push_back(kv.first);
    else
        for (auto& kv : z_) s.push_back(kv.first);
    return s;
}

Complex InvariantFunction::coefficient(const Weight& w) const {
    if (exact_) {
        auto it = q_.find(w);
        return it == q_.end() ? Complex(0) : it->second.to_complex();
    }
    auto it = z_.find(w);
    return it == z_.end() ? Complex(0) : it->second;
}

InvariantFunction InvariantFunction::to_numeric() const {
    if (!exact_) return *this;
    InvariantFunction g(rd_, basis_, false);
    for (auto& [w, c] : q_) g.z_.emplace(w, c.to_complex());
    return g;
}

void InvariantFunction::prune(double rel_tol) {
    if (exact_ || z_.empty()) return;
    double mx = 0;
    for (auto& kv : z_) mx = std::max(mx, std::abs(kv.second));
    for (auto it = z_.begin(); it != z_.end();)
        it = std::abs(it->second) <= rel_tol * mx ? z_.erase(it) : std::next(it);
}

// ---------------------------------------------------------------- Freudenthal

namespace {

struct MultKey {
    std::string group;
    Weight lambda;
    bool operator<(const MultKey& o) const { return std::tie(group, lambda) < std::tie(o.group, o.lambda); }
};

std::mutex g_mult_mu;
std::map<MultKey, std::unique_ptr<std::map<Weight, BigInt>>> g_mult;

// W-invariant integral form on coweight coordinates (scaled inverse-dual Killing form)
std::vector<long long> dual_form(const RootDatum& rd) {
    const int r = rd.rank;
    QMat F = matmul(matmul(rd.cartan_inv, rd.killing), transpose(rd.cartan_inv));
    BigInt L = 1;
    for (auto& row : F)
        for (auto& v : row) L = boost::multiprecision::lcm(L, denominator(v));
    std::vector<long long> out(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out[i * r + j] = static_cast<long long>(numerator(Rational(F[i][j] * L)));
    return out;
}

long long form(const std::vector<long long>& F, int r, const Weight& a, const Weight& b) {
    long long s = 0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) s += a[i] * F[i * r + j] * b[j];
    return s;
}

}  // namespace

BigInt weyl_dimension(const RootDatum& rd, const Weight& lambda) {
    BigInt num = 1, den = 1;
    for (auto& rt : rd.positive_roots) {
        long long k = 0, m = 0;
        for (int i = 0; i < rd.rank; ++i) {
            k += (lambda[i] + 1) * rt.alpha[i];
            m += rt.alpha[i];
        }
        num *= k;
        den *= m;
    }
    return num / den;
}

const std::map<Weight, BigInt>& dominant_multiplicities(const RootDatumPtr& rdp, const Weight& lambda) {
    const RootDatum& rd = *rdp;
    if (lambda.lattice != Lattice::DualCharacter || !lambda.is_dominant())
        throw Error("non-dominant", "highest weight must be a dominant dual character: " + lambda.str());
    if (!rd.in_character_lattice(lambda))
        throw Error("lattice", "weight " + lambda.str() + " is not in the character lattice of the dual torus");
    MultKey key{rd.name(), lambda};
    {
        std::lock_guard<std::mutex> lock(g_mult_mu);
        auto it = g_mult.find(key);
        if (it != g_mult.end()) return *it->second;
    }
    const int r = rd.rank;
    std::vector<Weight> droots;
    for (auto& rt : rd.positive_roots) droots.push_back(rt.coroot);

    std::set<Weight> dom{lambda};
    std::vector<Weight> todo{lambda};
    while (!todo.empty()) {
        Weight cur = todo.back();
        todo.pop_back();
        for (auto& b : droots) {
            Weight nxt = cur - b;
            if (nxt.is_dominant() && dom.insert(nxt).second) todo.push_back(nxt);
        }
    }
    std::vector<Weight> order(dom.begin(), dom.end());
    std::sort(order.begin(), order.end(),
              [&](const Weight& a, const Weight& b) { return rd.pair_rho(a) > rd.pair_rho(b); });

    auto F = dual_form(rd);
    Weight rho = rd.rho_dual;
    const long long top = form(F, r, lambda + rho, lambda + rho);
    auto out = std::make_unique<std::map<Weight, BigInt>>();
    (*out)[lambda] = 1;
    for (const Weight& mu : order) {
        if (mu == lambda) continue;
        BigInt acc = 0;
        for (auto& b : droots) {
            for (int k = 1;; ++k) {
                Weight nu = mu + b * k;
                Weight d = rd.dominant(nu);
                auto it = out->find(d);
                if (it == out->end()) {
                    if (!dom.count(d)) break;
                    throw Error("internal", "Freudenthal order violated");
                }
                acc += it->second * form(F, r, nu, b);
            }
        }
        long long den = top - form(F, r, mu + rho, mu + rho);
        if (den <= 0) throw Error("internal", "Freudenthal denominator not positive");
        acc *= 2;
        if (acc % den != 0) throw Error("internal", "Freudenthal division not exact");
        BigInt m = acc / den;
        if (m != 0) (*out)[mu] = m;
    }
    std::lock_guard<std::mutex> lock(g_mult_mu);
    auto [it, fresh] = g_mult.emplace(key, std::move(out));
    return *it->second;
}

InvariantFunction orbit_average(const RootDatumPtr& rd, const Weight& lambda) {
    if (!lambda.is_dominant()) throw Error("non-dominant", "orbit_average needs a dominant weight: " + lambda.str());
    if (!rd->in_character_lattice(lambda)) throw Error("lattice", lambda.str() + " is not a character of the dual torus");
    InvariantFunction f(rd, Basis::OrbitAverage, true);
    f.add_term(lambda, GaussQ(1));
    return f;
}

InvariantFunction weyl_character(const RootDatumPtr& rd, const Weight& lambda) {
    const auto& m = dominant_multiplicities(rd, lambda);
    InvariantFunction f(rd, Basis::OrbitAverage, true);
    for (auto& [mu, mult] : m) f.add_term(mu, GaussQ(Rational(mult * static_cast<long long>(rd->orbit(mu).size()))));
    return f;
}

// ---------------------------------------------------------------- arithmetic

namespace {

InvariantFunction common_form(const InvariantFunction& f, bool exact) {
    InvariantFunction g = to_orbit_basis(f);
    return exact ? g : g.to_numeric();
}

}  // namespace

InvariantFunction add(const InvariantFunction& f, const InvariantFunction& g) {
    if (f.rd() != g.rd() && f.rd()->name() != g.rd()->name()) throw Error("lattice-mismatch", "different root data");
    bool exact = f.exact() && g.exact();
    InvariantFunction a = f.basis() == g.basis() ? (exact ? f : f.to_numeric()) : common_form(f, exact);
    InvariantFunction b = f.basis() == g.basis() ? (exact ? g : g.to_numeric()) : common_form(g, exact);
    InvariantFunction out(f.rd(), a.basis(), exact);
    if (exact) {
        for (auto& [w, c] : a.exact_coefficients()) out.add_term(w, c);
        for (auto& [w, c] : b.exact_coefficients()) out.add_term(w, c);
    } else {
        for (auto& [w, c] : a.numeric_coefficients()) out.add_term(w, c);
        for (auto& [w, c] : b.numeric_coefficients()) out.add_term(w, c);
    }
    return out;
}

InvariantFunction scale(const InvariantFunction& f, const GaussQ& c) {
    InvariantFunction out(f.rd(), f.basis(), f.exact());
    if (f.exact())
        for (auto& [w, v] : f.exact_coefficients()) out.add_term(w, v * c);
    else
        for (auto& [w, v] : f.numeric_coefficients()) out.add_term(w, v * c.to_complex());
    return out;
}

InvariantFunction scale(const InvariantFunction& f, Complex c) {
    InvariantFunction g = f.to_numeric();
    InvariantFunction out(f.rd(), f.basis(), false);
    for (auto& [w, v] : g.numeric_coefficients()) out.add_term(w, v * c);
    return out;
}

// e_l e_m = |W m|^{-1} sum_{nu in W m} e_{dom(l + nu)}
InvariantFunction multiply(const InvariantFunction& f0, const InvariantFunction& g0) {
    const RootDatumPtr& rd = f0.rd();
    bool exact = f0.exact() && g0.exact();
    InvariantFunction f = common_form(f0, exact), g = common_form(g0, exact);
    auto orbit_total = [&](const InvariantFunction& h) {
        size_t s = 0;
        for (auto& w : h.support()) s += rd->orbit(w).size();
        return s;
    };
    if (orbit_total(f) * g.size() < orbit_total(g) * f.size()) std::swap(f, g);
    InvariantFunction out(rd, Basis::OrbitAverage, exact);
    if (exact) {
        for (auto& [m, cm] : g.exact_coefficients()) {
            const auto& orb = rd->orbit(m);
            GaussQ cmn = cm * GaussQ(Rational(1, static_cast<long long>(orb.size())));
            for (auto& [l, cl] : f.exact_coefficients()) {
                GaussQ c = cl * cmn;
                for (auto& nu : orb) out.add_term(rd->dominant(l + nu), c);
            }
        }
    } else {
        std::map<Weight, Complex> acc;
        for (auto& [m, cm] : g.numeric_coefficients()) {
            const auto& orb = rd->orbit(m);
            Complex cmn = cm / static_cast<double>(orb.size());
            for (auto& [l, cl] : f.numeric_coefficients()) {
                Complex c = cl * cmn;
                for (auto& nu : orb) acc[rd->dominant(l + nu)] += c;
            }
        }
        for (auto& [w, c] : acc) out.add_term(w, c);
    }
    return out;
}

InvariantFunction star(const InvariantFunction& f) {
    const RootDatum& rd = *f.rd();
    InvariantFunction out(f.rd(), f.basis(), f.exact());
    if (f.exact())
        for (auto& [w, c] : f.exact_coefficients()) out.add_term(rd.star(w), c.conj());
    else
        for (auto& [w, c] : f.numeric_coefficients()) out.add_term(rd.star(w), std::conj(c));
    return out;
}

InvariantFunction to_orbit_basis(const InvariantFunction& f) {
    if (f.basis() == Basis::OrbitAverage) return f;
    InvariantFunction out(f.rd(), Basis::OrbitAverage, f.exact());
    for (auto& lam : f.support()) {
        InvariantFunction h = weyl_character(f.rd(), lam);
        if (f.exact()) {
            const GaussQ& c = f.exact_coefficients().at(lam);
            for (auto& [mu, v] : h.exact_coefficients()) out.add_term(mu, v * c);
        } else {
            Complex c = f.numeric_coefficients().at(lam);
            for (auto& [mu, v] : h.exact_coefficients()) out.add_term(mu, v.to_complex() * c);
        }
    }
    return out;
}

// Triangular elimination: the highest remaining weight (by <., rho>) is
// maximal in dominance order, and h_l has e_l-coefficient |W l|.
InvariantFunction to_character_basis(const InvariantFunction& f) {
    if (f.basis() == Basis::WeylCharacter) return f;
    if (!f.exact()) return to_character_basis_alternant(f);
    const RootDatum& rd = *f.rd();
    InvariantFunction rest = f, out(f.rd(), Basis::WeylCharacter, true);
    while (!rest.is_zero()) {
        Weight top = rest.support().front();
        Rational best = rd.pair_rho(top);
        for (auto& w : rest.support()) {
            Rational v = rd.pair_rho(w);
            if (v > best) {
                best = v;
                top = w;
            }
        }
        GaussQ c = rest.exact_coefficients().at(top) *
                   GaussQ(Rational(1, static_cast<long long>(rd.orbit(top).size())));
        out.add_term(top, c);
        InvariantFunction h = weyl_character(f.rd(), top);
        InvariantFunction next(f.rd(), Basis::OrbitAverage, true);
        for (auto& [w, v] : rest.exact_coefficients()) next.add_term(w, v);
        for (auto& [w, v] : h.exact_coefficients()) next.add_term(w, GaussQ() - v * c);
        rest = next;
    }
    return out;
}

// f * A_rho = sum c_l A_{l+rho}; read c_l off the strictly dominant monomials.
InvariantFunction to_character_basis_alternant(const InvariantFunction& f0) {
    if (f0.basis() == Basis::WeylCharacter) return f0;
    const RootDatum& rd = *f0.rd();
    const auto& W = rd.weyl();
    std::vector<Weight> wrho(W.order());
    for (size_t w = 0; w < W.order(); ++w) wrho[w] = W.act(w, rd.rho_dual);
    auto strictly = [&](const Weight& v) {
        for (int i = 0; i < rd.rank; ++i)
            if (v[i] <= 0) return false;
        return true;
    };
    InvariantFunction out(f0.rd(), Basis::WeylCharacter, f0.exact());
    if (f0.exact()) {
        std::map<Weight, GaussQ> acc;
        for (auto& [mu, c] : f0.exact_coefficients()) {
            const auto& orb = rd.orbit(mu);
            GaussQ per = c * GaussQ(Rational(1, static_cast<long long>(orb.size())));
            GaussQ neg = GaussQ() - per;
            for (auto& nu : orb)
                for (size_t w = 0; w < W.order(); ++w) {
                    Weight m = nu + wrho[w];
                    if (strictly(m)) acc[m - rd.rho_dual] += W.sign(w) > 0 ? per : neg;
                }
        }
        for (auto& [w, c] : acc) out.add_term(w, c);
    } else {
        std::map<Weight, Complex> acc;
        for (auto& [mu, c] : f0.numeric_coefficients()) {
            const auto& orb = rd.orbit(mu);
            Complex per = c / static_cast<double>(orb.size());
            for (auto& nu : orb)
                for (size_t w = 0; w < W.order(); ++w) {
                    Weight m = nu + wrho[w];
                    if (strictly(m)) acc[m - rd.rho_dual] += static_cast<double>(W.sign(w)) * per;
                }
        }
        for (auto& [w, c] : acc) out.add_term(w, c);
    }
    return out;
}

// ---------------------------------------------------------------- evaluation

Complex monomial(const Weight& nu, const TorusPoint& t) {
    double re = 0, ph = 0;
    for (int i = 0; i < nu.rank; ++i) {
        re += nu[i] * t.x[i];
        ph += nu[i] * t.theta[i];
    }
    ph -= std::floor(ph);
    return std::exp(re) * Complex(std::cos(2 * std::numbers::pi * ph), std::sin(2 * std::numbers::pi * ph));
}

Complex evaluate(const InvariantFunction& f0, const TorusPoint& t) {
    InvariantFunction f = to_orbit_basis(f0);
    const RootDatum& rd = *f.rd();
    Complex total = 0;
    auto term = [&](const Weight& lam) {
        const auto& orb = rd.orbit(lam);
        Complex s = 0;
        for (auto& nu : orb) s += monomial(nu, t);
        return s / static_cast<double>(orb.size());
    };
    if (f.exact())
        for (auto& [lam, c] : f.exact_coefficients()) total += c.to_complex() * term(lam);
    else
        for (auto& [lam, c] : f.numeric_coefficients()) total += c * term(lam);
    return total;
}

// ---------------------------------------------------------------- norms

Rational exponent_A(const InvariantFunction& f) {
    InvariantFunction h = to_character_basis(f);
    const RootDatum& rd = *f.rd();
    Rational best = 0;
    bool any = false;
    for (auto& lam : h.support()) {
        Rational v = rd.pair_rho(lam);
        if (!any || v > best) best = v;
        any = true;
    }
    return any ? best : Rational(0);
}

double QSqrt::value(double p) const { return to_double(a) + to_double(b) * std::sqrt(p); }

int sign(const QSqrt& q, long long p) {
    int sa = q.a.sign(), sb = q.b.sign();
    if (sb == 0 || sa == sb) return sa != 0 ? sa : sb;
    if (sa == 0) return sb;
    // opposite signs: compare a^2 with b^2 p
    Rational d = q.a * q.a - q.b * q.b * p;
    return d.sign() * sa;
}

namespace {
void root_exponents(const RootDatum& rd, const Weight& lambda, std::vector<long long>& k, std::vector<long long>& m) {
    for (auto& rt : rd.positive_roots) {
        long long kk = 0, mm = 0;
        for (int i = 0; i < rd.rank; ++i) {
            kk += (lambda[i] + 1) * rt.alpha[i];
            mm += rt.alpha[i];
        }
        k.push_back(kk);
        m.push_back(mm);
    }
}
}  // namespace

// q-analogue of the Weyl dimension formula at q = sqrt(p):
// h_l(p^rho) = p^{-<l,rho>} prod (p^k - 1)/(p^m - 1)
QSqrt character_at_rho_p(const RootDatum& rd, const Weight& lambda, long long p) {
    std::vector<long long> k, m;
    root_exponents(rd, lambda, k, m);
    BigInt num = 1, den = 1;
    long long twoA = 0;
    for (size_t i = 0; i < k.size(); ++i) {
        num *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k[i])) - 1;
        den *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(m[i])) - 1;
        twoA += k[i] - m[i];
    }
    if (num % den != 0) throw Error("internal", "principal specialization is not integral");
    BigInt P = num / den;
    QSqrt out;
    if (twoA % 2 == 0)
        out.a = Rational(P, boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(twoA / 2)));
    else
        out.b = Rational(P, boost::multiprecision::pow(BigInt(p), static_cast<unsigned>((twoA + 1) / 2)));
    return out;
}

double log_character_at_rho_p(const RootDatum& rd, const Weight& lambda, double p) {
    std::vector<long long> k, m;
    root_exponents(rd, lambda, k, m);
    const double lp = std::log(p);
    double s = 0;
    for (size_t i = 0; i < k.size(); ++i) {
        s += (k[i] - m[i]) * lp * 0.5;  // q^{k-m} with the p^{-A} shift folded in
        s += std::log1p(-std::pow(p, -static_cast<double>(k[i]))) - std::log1p(-std::pow(p, -static_cast<double>(m[i])));
    }
    return s;
}

L1Bound l1_norm_bound(const InvariantFunction& f, long long p) {
    InvariantFunction h = to_character_basis(f);
    const RootDatum& rd = *f.rd();
    L1Bound out;
    out.A = exponent_A(h);
    bool exact = h.exact();
    if (exact)
        for (auto& [lam, c] : h.exact_coefficients())
            if (c.im != 0) exact = false;
    out.exact = exact;
    if (exact) {
        for (auto& [lam, c] : h.exact_coefficients()) {
            QSqrt v = character_at_rho_p(rd, lam, p);
            Rational ac = abs(c.re);
            out.exact_value.a += ac * v.a;
            out.exact_value.b += ac * v.b;
        }
    }
    // log-sum-exp over the support
    std::vector<double> logs;
    out.B = 0;
    for (auto& lam : h.support()) {
        double ac = std::abs(h.coefficient(lam));
        if (ac == 0) continue;
        logs.push_back(std::log(ac) + log_character_at_rho_p(rd, lam, static_cast<double>(p)));
        out.B += ac * weyl_dimension(rd, lam).convert_to<double>();
    }
    if (logs.empty()) {
        out.log_value = -INFINITY;
        out.value = 0;
        return out;
    }
    double mx = *std::max_element(logs.begin(), logs.end());
    double s = 0;
    for (double l : logs) s += std::exp(l - mx);
    out.log_value = mx + std::log(s);
    out.value = exact ? out.exact_value.value(static_cast<double>(p)) : std::exp(out.log_value);
    return out;
}

// a(f) = max over the e-support of max_{chi in roots of G, or 0} |<chi, lambda>|
Rational support_radius(const InvariantFunction& f) {
    const RootDatum& rd = *f.rd();
    long long best = 0;
    for (auto& lam : f.support())
        for (auto& rt : rd.positive_roots) {
            long long s = 0;
            for (int i = 0; i < rd.rank; ++i) s += rt.alpha[i] * lam[i];
            best = std::max(best, std::llabs(s));
        }
    return Rational(best);
}

}  // namespace chevalley
