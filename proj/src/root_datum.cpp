#include "chevalley/root_datum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace chevalley {

// ---------------------------------------------------------------- Weight

Weight Weight::from(const IVec& v, Lattice l) {
    if (v.size() > static_cast<size_t>(kMaxRank)) throw Error("invalid-type", "rank exceeds supported maximum");
    Weight w(static_cast<int>(v.size()), l);
    for (size_t i = 0; i < v.size(); ++i) w.c[i] = static_cast<int>(v[i]);
    return w;
}

Weight Weight::operator+(const Weight& o) const {
    Weight r = *this;
    for (int i = 0; i < rank; ++i) r.c[i] += o.c[i];
    return r;
}
Weight Weight::operator-(const Weight& o) const {
    Weight r = *this;
    for (int i = 0; i < rank; ++i) r.c[i] -= o.c[i];
    return r;
}
Weight Weight::operator-() const {
    Weight r = *this;
    for (int i = 0; i < rank; ++i) r.c[i] = -r.c[i];
    return r;
}
Weight Weight::operator*(int k) const {
    Weight r = *this;
    for (int i = 0; i < rank; ++i) r.c[i] *= k;
    return r;
}
bool Weight::is_zero() const {
    for (int i = 0; i < rank; ++i)
        if (c[i]) return false;
    return true;
}
bool Weight::is_dominant() const {
    for (int i = 0; i < rank; ++i)
        if (c[i] < 0) return false;
    return true;
}
IVec Weight::vec() const { return IVec(c.begin(), c.begin() + rank); }
std::string Weight::str() const {
    std::string s = "[";
    for (int i = 0; i < rank; ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + "]";
}

size_t WeightHash::operator()(const Weight& w) const noexcept {
    size_t h = static_cast<size_t>(w.lattice) * 0x9e3779b97f4a7c15ULL + w.rank;
    for (int i = 0; i < w.rank; ++i) h = (h ^ static_cast<size_t>(static_cast<unsigned>(w.c[i]))) * 0x100000001b3ULL;
    return h;
}

SpectralParameter SpectralParameter::imaginary(std::vector<double> v) {
    SpectralParameter s;
    s.re.assign(v.size(), 0.0);
    s.im = std::move(v);
    return s;
}

// ---------------------------------------------------------------- tables

IMat RootDatum::cartan_matrix(char series, int n) {
    IMat c(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) c[i][i] = 2;
    auto link = [&](int i, int j) { c[i][j] = c[j][i] = -1; };
    switch (series) {
        case 'A':
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            break;
        case 'B':  // alpha_n short
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            c[n - 1][n - 2] = -2;
            break;
        case 'C':  // alpha_n long
            for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
            c[n - 2][n - 1] = -2;
            break;
        case 'D':
            for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
            link(n - 3, n - 1);
            break;
        case 'E':
            link(0, 2);
            link(1, 3);
            for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
            break;
        case 'F':
            link(0, 1);
            link(2, 3);
            c[1][2] = -1;
            c[2][1] = -2;
            break;
        case 'G':
            c[0][1] = -3;
            c[1][0] = -1;
            break;
        default:
            throw Error("invalid-type", std::string("unknown series ") + series);
    }
    return c;
}

namespace {

bool valid_type(char s, int n) {
    switch (s) {
        case 'A': return n >= 1;
        case 'B':
        case 'C': return n >= 2;
        case 'D': return n >= 4;
        case 'E': return n >= 6 && n <= 8;
        case 'F': return n == 4;
        case 'G': return n == 2;
        default: return false;
    }
}

long long expected_positive_roots(char s, int n) {
    switch (s) {
        case 'A': return 1LL * n * (n + 1) / 2;
        case 'B':
        case 'C': return 1LL * n * n;
        case 'D': return 1LL * n * (n - 1);
        case 'E': return n == 6 ? 36 : n == 7 ? 63 : 120;
        case 'F': return 24;
        case 'G': return 6;
    }
    return 0;
}

std::vector<int> fundamental_degrees(char s, int n) {
    std::vector<int> d;
    switch (s) {
        case 'A':
            for (int i = 2; i <= n + 1; ++i) d.push_back(i);
            break;
        case 'B':
        case 'C':
            for (int i = 1; i <= n; ++i) d.push_back(2 * i);
            break;
        case 'D':
            for (int i = 1; i < n; ++i) d.push_back(2 * i);
            d.push_back(n);
            std::sort(d.begin(), d.end());
            break;
        case 'E':
            if (n == 6) d = {2, 5, 6, 8, 9, 12};
            if (n == 7) d = {2, 6, 8, 10, 12, 14, 18};
            if (n == 8) d = {2, 8, 12, 14, 18, 20, 24, 30};
            break;
        case 'F': d = {2, 6, 8, 12}; break;
        case 'G': d = {2, 6}; break;
    }
    return d;
}

}  // namespace

BigInt RootDatum::expected_weyl_order(char s, int n) {
    BigInt fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    switch (s) {
        case 'A': return fact * (n + 1);
        case 'B':
        case 'C': return (BigInt(1) << n) * fact;
        case 'D': return (BigInt(1) << (n - 1)) * fact;
        case 'E': return n == 6 ? BigInt(51840) : n == 7 ? BigInt(2903040) : BigInt(696729600);
        case 'F': return 1152;
        case 'G': return 12;
    }
    return 0;
}

// ---------------------------------------------------------------- build

std::shared_ptr<const RootDatum> RootDatum::parse(const std::string& spec, size_t cap) {
    static const std::regex re(R"(^\s*([ABCDEFGabcdefg])\s*(\d+)\s*(sc|adj|SC|ADJ)?\s*$)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw Error("invalid-type", "cannot parse group '" + spec + "' (expected e.g. A2adj)");
    char s = static_cast<char>(std::toupper(m[1].str()[0]));
    int n = std::stoi(m[2].str());
    std::string iso = m[3].str();
    if (iso.empty()) {
        // trivial centre: the two isogeny types coincide
        if (s != 'G' && s != 'F' && !(s == 'E' && n == 8))
            throw Error("invalid-type", "group '" + spec + "' needs an isogeny suffix (sc or adj)");
        iso = "adj";
    }
    std::transform(iso.begin(), iso.end(), iso.begin(), ::tolower);
    return build(s, n, iso == "sc" ? Isogeny::SimplyConnected : Isogeny::Adjoint, cap);
}

std::shared_ptr<const RootDatum> RootDatum::build(char series, int rank, Isogeny iso, size_t cap) {
    if (!valid_type(series, rank) || rank > kMaxRank)
        throw Error("invalid-type", std::string("unsupported type ") + series + std::to_string(rank));
    if (expected_weyl_order(series, rank) > cap)
        throw Error("resource", "Weyl group order " + expected_weyl_order(series, rank).str() + " exceeds cap " +
                                    std::to_string(cap));
    auto rd = std::make_shared<RootDatum>();
    rd->series = series;
    rd->rank = rank;
    rd->isogeny = iso;
    rd->cartan = cartan_matrix(series, rank);
    rd->cartan_inv = inverse(to_q(rd->cartan));
    rd->degrees = fundamental_degrees(series, rank);
    rd->build_roots();
    rd->build_weyl(cap);
    rd->build_metric();
    rd->build_levis();
    return rd;
}

std::string RootDatum::name() const {
    std::string base = std::string(1, series) + std::to_string(rank);
    if (series == 'G' || series == 'F' || (series == 'E' && rank == 8)) return base;
    return base + (isogeny == Isogeny::SimplyConnected ? "sc" : "adj");
}

void RootDatum::build_roots() {
    const int r = rank;
    const IMat& C = cartan;
    simple_roots.assign(r, QVec(r));
    simple_coroots.assign(r, QVec(r));
    fundamental_weights.assign(r, QVec(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            simple_roots[i][j] = C[j][i];
            simple_coroots[i][j] = C[i][j];
            fundamental_weights[i][j] = (i == j);
        }

    // orbit of the simple roots, tracking coroots alongside
    std::map<IVec, IVec> seen;
    std::deque<IVec> queue;
    for (int i = 0; i < r; ++i) {
        IVec a(r, 0);
        a[i] = 1;
        seen[a] = a;
        queue.push_back(a);
    }
    while (!queue.empty()) {
        IVec a = queue.front();
        queue.pop_front();
        IVec co = seen[a];
        for (int i = 0; i < r; ++i) {
            long long pa = 0, pc = 0;
            for (int j = 0; j < r; ++j) {
                pa += a[j] * C[i][j];
                pc += co[j] * C[j][i];
            }
            IVec b = a, cb = co;
            b[i] -= pa;
            cb[i] -= pc;
            if (!seen.count(b)) {
                seen[b] = cb;
                queue.push_back(b);
            }
        }
    }
    positive_roots.clear();
    for (auto& [a, co] : seen) {
        if (std::any_of(a.begin(), a.end(), [](long long v) { return v < 0; })) continue;
        Root root;
        root.alpha = a;
        root.coalpha = co;
        root.height = static_cast<int>(std::accumulate(a.begin(), a.end(), 0LL));
        IVec vp(r, 0), cw(r, 0);
        for (int k = 0; k < r; ++k)
            for (int j = 0; j < r; ++j) {
                vp[k] += C[k][j] * a[j];
                cw[k] += co[j] * C[j][k];
            }
        root.varpi = Weight::from(vp, Lattice::GroupWeight);
        root.coroot = Weight::from(cw, Lattice::DualCharacter);
        positive_roots.push_back(root);
    }
    std::stable_sort(positive_roots.begin(), positive_roots.end(),
                     [](const Root& x, const Root& y) { return x.height < y.height; });
    if (static_cast<long long>(positive_roots.size()) != expected_positive_roots(series, rank))
        throw Error("invalid-type", "root enumeration does not match the declared series");
    dim_d = rank + static_cast<int>(positive_roots.size());

    rho = Weight(r, Lattice::GroupWeight);
    rho_dual = Weight(r, Lattice::DualCharacter);
    for (int i = 0; i < r; ++i) rho[i] = rho_dual[i] = 1;
    rho_alpha.assign(r, Rational(0));
    for (auto& rt : positive_roots)
        for (int i = 0; i < r; ++i) rho_alpha[i] += Rational(rt.alpha[i], 2);

    period_basis.assign(r, QVec(r));
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < r; ++j)
            period_basis[k][j] = isogeny == Isogeny::Adjoint ? Rational(j == k) : cartan_inv[j][k];
}

void RootDatum::build_weyl(size_t cap) {
    const int r = rank;
    const IMat& C = cartan;
    WeylGroup& W = weyl_;
    W.rank_ = r;
    W.r2_ = r * r;
    W.rho_ = rho;

    auto refl_varpi = [&](int g, std::vector<int>& m) {  // m <- S_g m (varpi)
        std::vector<int> out = m;
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) out[j * r + k] = m[j * r + k] - C[j][g] * m[g * r + k];
        m.swap(out);
    };
    auto refl_coweight = [&](int g, std::vector<int>& m) {
        std::vector<int> out = m;
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k) out[j * r + k] = m[j * r + k] - C[g][j] * m[g * r + k];
        m.swap(out);
    };
    auto refl_alpha = [&](int g, std::vector<int>& m) {
        std::vector<int> out = m;
        for (int k = 0; k < r; ++k) {
            long long s = 0;
            for (int j = 0; j < r; ++j) s += C[g][j] * m[j * r + k];
            out[g * r + k] = static_cast<int>(m[g * r + k] - s);
        }
        m.swap(out);
    };
    auto push = [&](std::vector<std::int8_t>& dst, const std::vector<int>& m) {
        for (int v : m) {
            if (v < -127 || v > 127) throw Error("resource", "Weyl matrix entry exceeds compact storage");
            dst.push_back(static_cast<std::int8_t>(v));
        }
    };
    auto key_of = [&](const std::vector<int>& mv) {
        Weight k(r, Lattice::GroupWeight);
        for (int i = 0; i < r; ++i) {
            int s = 0;
            for (int j = 0; j < r; ++j) s += mv[i * r + j];
            k[i] = s;
        }
        return k;
    };

    std::vector<int> id(r * r, 0);
    for (int i = 0; i < r; ++i) id[i * r + i] = 1;
    push(W.mv_, id);
    push(W.mc_, id);
    push(W.ma_, id);
    W.length_.push_back(0);
    W.parent_.push_back(0);
    W.parent_gen_.push_back(-1);
    W.index_[key_of(id)] = 0;

    for (size_t head = 0; head < W.length_.size(); ++head) {
        std::vector<int> mv(r * r), mc(r * r), ma(r * r);
        for (int k = 0; k < r * r; ++k) {
            mv[k] = W.mv_[head * r * r + k];
            mc[k] = W.mc_[head * r * r + k];
            ma[k] = W.ma_[head * r * r + k];
        }
        for (int g = 0; g < r; ++g) {
            std::vector<int> nv = mv;
            refl_varpi(g, nv);
            Weight key = key_of(nv);
            if (W.index_.count(key)) continue;
            if (W.length_.size() >= cap) throw Error("resource", "Weyl group exceeds cap");
            std::vector<int> nc = mc, na = ma;
            refl_coweight(g, nc);
            refl_alpha(g, na);
            W.index_[key] = W.length_.size();
            push(W.mv_, nv);
            push(W.mc_, nc);
            push(W.ma_, na);
            W.length_.push_back(W.length_[head] + 1);
            W.parent_.push_back(head);
            W.parent_gen_.push_back(g);
        }
    }
    if (BigInt(W.length_.size()) != expected_weyl_order(series, rank))
        throw Error("invalid-type", "Weyl group order does not match the declared series");

    W.gens_.resize(r);
    for (int g = 0; g < r; ++g) {
        Weight k = rho;
        for (int j = 0; j < r; ++j) k[j] = 1 - C[j][g];
        W.gens_[g] = W.index_.at(k);
    }
    W.longest_ = static_cast<size_t>(std::max_element(W.length_.begin(), W.length_.end()) - W.length_.begin());
    W.inverse_.assign(W.order(), 0);
    for (size_t w = 1; w < W.order(); ++w) {
        size_t par = W.parent_[w];
        W.inverse_[w] = W.compose(W.inverse_[par], W.gens_[W.parent_gen_[w]]);
    }
}

Weight WeylGroup::act(size_t w, const Weight& v) const {
    const std::int8_t* m = (v.lattice == Lattice::GroupWeight ? mv_.data() : mc_.data()) + w * r2_;
    Weight out(rank_, v.lattice);
    for (int i = 0; i < rank_; ++i) {
        int s = 0;
        for (int j = 0; j < rank_; ++j) s += m[i * rank_ + j] * v.c[j];
        out.c[i] = s;
    }
    return out;
}

namespace {
inline void apply_i8(const std::int8_t* m, int r, const double* in, double* out) {
    for (int i = 0; i < r; ++i) {
        double s = 0;
        for (int j = 0; j < r; ++j) s += m[i * r + j] * in[j];
        out[i] = s;
    }
}
}  // namespace

void WeylGroup::act_varpi(size_t w, const double* in, double* out) const { apply_i8(mv_.data() + w * r2_, rank_, in, out); }
void WeylGroup::act_alpha(size_t w, const double* in, double* out) const { apply_i8(ma_.data() + w * r2_, rank_, in, out); }
void WeylGroup::act_coweight(size_t w, const double* in, double* out) const { apply_i8(mc_.data() + w * r2_, rank_, in, out); }

size_t WeylGroup::compose(size_t a, size_t b) const {
    Weight k = act(a, act(b, rho_));
    return index_.at(k);
}

std::vector<int> WeylGroup::word(size_t w) const {
    std::vector<int> out;
    while (w != 0) {
        out.push_back(parent_gen_[w]);
        w = parent_[w];
    }
    return out;
}

void RootDatum::build_metric() {
    const int r = rank;
    QMat K(r, QVec(r));
    for (auto& rt : positive_roots)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) K[i][j] += 2 * rt.varpi[i] * rt.varpi[j];
    killing = K;
    gram = inverse(K);
    QMat C = to_q(cartan);
    gram_alpha = matmul(matmul(transpose(C), gram), C);
    gram_d_.resize(r * r);
    gram_alpha_d_.resize(r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            gram_d_[i * r + j] = to_double(gram[i][j]);
            gram_alpha_d_[i * r + j] = to_double(gram_alpha[i][j]);
        }
    root_norm_.clear();
    for (auto& rt : positive_roots) {
        std::vector<double> v(r);
        for (int i = 0; i < r; ++i) v[i] = rt.varpi[i];
        root_norm_.push_back(norm_varpi(v));
    }
}

void RootDatum::build_levis() {
    const int r = rank;
    levis.clear();
    for (unsigned mask = 0; mask + 1 < (1u << r); ++mask) {
        StandardLevi m;
        for (int i = 0; i < r; ++i)
            if (mask & (1u << i)) m.subset.push_back(i);
        for (size_t k = 0; k < positive_roots.size(); ++k) {
            bool inside = true;
            for (int i = 0; i < r; ++i)
                if (positive_roots[k].alpha[i] != 0 && !(mask & (1u << i))) inside = false;
            if (inside) m.positive_roots.push_back(static_cast<int>(k));
        }
        const int s = static_cast<int>(m.subset.size());
        if (s > 0) {
            if (isogeny == Isogeny::Adjoint) {
                for (int i : m.subset) {
                    QVec v(r);
                    v[i] = 1;
                    m.dual_subtorus_basis.push_back(v);
                }
            } else {
                IMat A(r, IVec(s));
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < s; ++j) A[i][j] = cartan[i][m.subset[j]];
                Smith sn = smith_normal_form(A);
                for (int j = 0; j < s; ++j) {
                    if (sn.D[j][j] == 0) throw Error("internal", "Levi span is degenerate");
                    QVec v(r);
                    for (int k = 0; k < s; ++k) v[m.subset[k]] = Rational(sn.V[k][j], sn.D[j][j]);
                    m.dual_subtorus_basis.push_back(v);
                }
            }
        }
        levis.push_back(std::move(m));
    }
}

// ---------------------------------------------------------------- lattice

bool RootDatum::in_character_lattice(const Weight& nu) const {
    if (nu.lattice != Lattice::DualCharacter || nu.rank != rank) return false;
    if (isogeny == Isogeny::Adjoint) return true;
    for (int i = 0; i < rank; ++i) {
        Rational s = 0;
        for (int j = 0; j < rank; ++j) s += cartan_inv[j][i] * nu[j];
        if (!is_integer(s)) return false;
    }
    return true;
}

QVec RootDatum::coweight_to_coroot_coords(const Weight& nu) const {
    QVec a(rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) a[i] += cartan_inv[j][i] * nu[j];
    return a;
}

Weight RootDatum::coroot_coords_to_coweight(const QVec& a) const {
    Weight nu(rank, Lattice::DualCharacter);
    for (int j = 0; j < rank; ++j) {
        Rational s = 0;
        for (int i = 0; i < rank; ++i) s += a[i] * cartan[i][j];
        if (!is_integer(s)) throw Error("lattice", "not an integral coweight");
        nu[j] = static_cast<int>(numerator(s));
    }
    return nu;
}

Rational RootDatum::pair_rho(const Weight& nu) const {
    Rational s = 0;
    for (int i = 0; i < rank; ++i) s += rho_alpha[i] * nu[i];
    return s;
}

namespace {
inline void reflect(const IMat& C, Weight& v, int i) {
    const int x = v[i];
    if (v.lattice == Lattice::GroupWeight)
        for (int j = 0; j < v.rank; ++j) v[j] -= x * static_cast<int>(C[j][i]);
    else
        for (int j = 0; j < v.rank; ++j) v[j] -= x * static_cast<int>(C[i][j]);
}
}  // namespace

Weight RootDatum::dominant(const Weight& v, size_t* w) const {
    Weight d = v;
    size_t elt = 0;
    for (;;) {
        int i = 0;
        while (i < rank && d[i] >= 0) ++i;
        if (i == rank) break;
        reflect(cartan, d, i);
        if (w) elt = weyl_.compose(weyl_.simple(i), elt);
    }
    if (w) *w = elt;
    return d;
}

const std::vector<Weight>& RootDatum::orbit(const Weight& lam) const {
    std::lock_guard<std::mutex> lock(orbit_mu_);
    auto it = orbits_.find(lam);
    if (it != orbits_.end()) return *it->second;
    if (!lam.is_dominant()) throw Error("non-dominant", "orbit requested for non-dominant weight " + lam.str());
    auto out = std::make_unique<std::vector<Weight>>();
    std::unordered_map<Weight, char, WeightHash> seen;
    out->push_back(lam);
    seen[lam] = 1;
    for (size_t h = 0; h < out->size(); ++h) {
        Weight cur = (*out)[h];
        for (int i = 0; i < rank; ++i) {
            if (cur[i] <= 0) continue;
            Weight nxt = cur;
            reflect(cartan, nxt, i);
            if (seen.emplace(nxt, 1).second) out->push_back(nxt);
        }
    }
    auto& ref = *out;
    orbits_.emplace(lam, std::move(out));
    return ref;
}

size_t RootDatum::stabilizer_order(const Weight& lam) const { return weyl_.order() / orbit(lam).size(); }

bool RootDatum::dominance_leq(const Weight& lambda, const Weight& mu) const {
    if (lambda.lattice != mu.lattice || lambda.rank != mu.rank)
        throw Error("lattice-mismatch", "dominance_leq on weights from different lattices");
    for (int i = 0; i < rank; ++i) {
        Rational n = 0;
        for (int j = 0; j < rank; ++j) {
            // G-weights: n = C^{-1} d; dual characters: n = C^{-T} d
            const Rational& cij = lambda.lattice == Lattice::GroupWeight ? cartan_inv[i][j] : cartan_inv[j][i];
            n += cij * (mu[j] - lambda[j]);
        }
        if (!is_integer(n) || n < 0) return false;
    }
    return true;
}

Weight RootDatum::star(const Weight& v) const { return -weyl_.act(weyl_.longest(), v); }

Weight RootDatum::simple_root_weight(int i, Lattice l) const {
    Weight w(rank, l);
    for (int j = 0; j < rank; ++j) w[j] = static_cast<int>(l == Lattice::GroupWeight ? cartan[j][i] : cartan[i][j]);
    return w;
}

// ---------------------------------------------------------------- metric

double RootDatum::dot_varpi(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) s += a[i] * gram_d_[i * rank + j] * b[j];
    return s;
}

double RootDatum::norm_varpi(const std::vector<double>& v) const { return std::sqrt(std::max(0.0, dot_varpi(v, v))); }

std::vector<double> RootDatum::varpi_to_alpha(const std::vector<double>& v) const {
    std::vector<double> a(rank, 0.0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) a[i] += to_double(cartan_inv[i][j]) * v[j];
    return a;
}

std::vector<double> RootDatum::alpha_to_varpi(const std::vector<double>& a) const {
    std::vector<double> v(rank, 0.0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) v[i] += cartan[i][j] * a[j];
    return v;
}

double RootDatum::rho_norm() const {
    std::vector<double> v(rank, 1.0);
    return norm_varpi(v);
}

std::complex<double> RootDatum::pair_coroot(const SpectralParameter& l, int k) const {
    std::complex<double> s = 0;
    for (int i = 0; i < rank; ++i)
        s += std::complex<double>(l.re.empty() ? 0.0 : l.re[i], l.im.empty() ? 0.0 : l.im[i]) *
             static_cast<double>(positive_roots[k].coalpha[i]);
    return s;
}

double RootDatum::pair_coroot(const std::vector<double>& v, int k) const {
    double s = 0;
    for (int i = 0; i < rank; ++i) s += v[i] * positive_roots[k].coalpha[i];
    return s;
}

double RootDatum::levi_product(const std::vector<double>& v, const StandardLevi& m, bool exceptional) const {
    std::vector<char> inM(positive_roots.size(), 0);
    for (int k : m.positive_roots) inM[k] = 1;
    std::vector<double> f;
    for (size_t k = 0; k < positive_roots.size(); ++k)
        if (!inM[k]) f.push_back(std::sqrt(1.0 + std::fabs(pair_coroot(v, static_cast<int>(k)))));
    if (exceptional && static_cast<int>(f.size()) > 2 * rank) {
        std::sort(f.begin(), f.end(), std::greater<>());
        f.resize(2 * rank);
    }
    double p = 1;
    for (double x : f) p *= x;
    return p;
}

namespace {
bool exceptional_series(char s) { return s == 'E' || s == 'F' || s == 'G'; }
}

double RootDatum::d_factor_standard(const SpectralParameter& l) const {
    const bool ex = exceptional_series(series);
    double best = INFINITY;
    for (auto& m : levis)
        if (static_cast<int>(m.subset.size()) == rank - 1) best = std::min(best, levi_product(l.im, m, ex));
    if (ex) best /= std::log(2.0 + norm_varpi(l.im));
    return best;
}

// Minimum over every proper Levi containing T0: the Levis are the W-conjugates
// of the standard ones, and maximal ones suffice since each factor is >= 1.
double RootDatum::d_factor(const SpectralParameter& l) const {
    const bool ex = exceptional_series(series);
    double best = INFINITY;
    std::vector<double> wv(rank);
    for (size_t w = 0; w < weyl_.order(); ++w) {
        weyl_.act_varpi(w, l.im.data(), wv.data());
        for (auto& m : levis)
            if (static_cast<int>(m.subset.size()) == rank - 1) best = std::min(best, levi_product(wv, m, ex));
    }
    if (ex) best /= std::log(2.0 + norm_varpi(l.im));
    return best;
}

double RootDatum::spectral_gap(const SpectralParameter& mu, double* orbit_value) const {
    double formula = INFINITY;
    for (size_t k = 0; k < positive_roots.size(); ++k)
        formula = std::min(formula, std::fabs(pair_coroot(mu.im, static_cast<int>(k))) * root_norm_[k]);
    if (orbit_value) {
        double best = INFINITY;
        std::vector<double> wv(rank), d(rank);
        for (size_t w = 1; w < weyl_.order(); ++w) {
            weyl_.act_varpi(w, mu.im.data(), wv.data());
            for (int i = 0; i < rank; ++i) d[i] = wv[i] - mu.im[i];
            best = std::min(best, norm_varpi(d));
        }
        *orbit_value = best;
    }
    return formula;
}

Rational RootDatum::dT(const QVec& t) const {
    Rational m = t.at(0);
    for (int i = 1; i < rank; ++i) m = std::min(m, t.at(i));
    return m;
}

}  // namespace chevalley
