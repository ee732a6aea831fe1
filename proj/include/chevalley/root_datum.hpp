#pragma once

// Conventions used everywhere:
//   cartan[i][j] = <alpha_j, alpha_i^vee>.
//   G-weights (a0^*) are stored in the fundamental weight basis varpi_i;
//   alpha_j has varpi-coordinates = column j of the Cartan matrix.
//   Characters of the dual torus (= cocharacters of T0) are stored in the
//   fundamental coweight basis; alpha_i^vee has coordinates = row i.
//   Torus points t = exp(x + 2 pi i theta) carry x, theta in simple-root
//   coordinates of a0^*, so t^nu = exp(sum nu_i x_i + 2 pi i sum nu_i theta_i).

#include "chevalley/rational.hpp"

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace chevalley {

constexpr int kMaxRank = 8;

enum class Lattice : std::uint8_t { GroupWeight, DualCharacter };
enum class Isogeny : std::uint8_t { SimplyConnected, Adjoint };

struct Weight {
    std::array<int, kMaxRank> c{};
    std::uint8_t rank = 0;
    Lattice lattice = Lattice::DualCharacter;

    Weight() = default;
    Weight(int r, Lattice l) : rank(static_cast<std::uint8_t>(r)), lattice(l) {}
    static Weight from(const IVec& v, Lattice l);

    int& operator[](int i) { return c[i]; }
    int operator[](int i) const { return c[i]; }

    Weight operator+(const Weight& o) const;
    Weight operator-(const Weight& o) const;
    Weight operator-() const;
    Weight operator*(int k) const;
    bool operator==(const Weight& o) const = default;
    auto operator<=>(const Weight& o) const = default;

    bool is_zero() const;
    bool is_dominant() const;
    IVec vec() const;
    std::string str() const;  // "[a,b,...]"
};

struct WeightHash {
    size_t operator()(const Weight& w) const noexcept;
};

// Spectral parameter lambda = re + i*im in a0^*_C, varpi coordinates.
struct SpectralParameter {
    std::vector<double> re, im;
    static SpectralParameter imaginary(std::vector<double> v);
    int rank() const { return static_cast<int>(im.size()); }
};

struct Root {
    Weight varpi;     // G-weight, varpi coords
    IVec alpha;       // simple root coords
    Weight coroot;    // coweight coords
    IVec coalpha;     // simple coroot coords
    int height = 0;
};

struct StandardLevi {
    std::vector<int> subset;          // simple root indices
    std::vector<int> positive_roots;  // indices into RootDatum::positive_roots
    QMat dual_subtorus_basis;         // rows, simple-root coords; Z-basis of X^*(T0) cap span(subset)
};

class WeylGroup {
public:
    size_t order() const { return length_.size(); }
    int rank() const { return rank_; }
    int length(size_t w) const { return length_[w]; }
    int sign(size_t w) const { return (length_[w] & 1) ? -1 : 1; }
    size_t inverse(size_t w) const { return inverse_[w]; }
    size_t longest() const { return longest_; }
    size_t identity() const { return 0; }

    // action on G-weights (varpi coords), dual characters (coweight coords),
    // and a0^* in simple-root coords
    Weight act(size_t w, const Weight& v) const;
    void act_varpi(size_t w, const double* in, double* out) const;
    void act_alpha(size_t w, const double* in, double* out) const;
    void act_coweight(size_t w, const double* in, double* out) const;
    int varpi_entry(size_t w, int i, int j) const { return mv_[w * r2_ + i * rank_ + j]; }
    int coweight_entry(size_t w, int i, int j) const { return mc_[w * r2_ + i * rank_ + j]; }
    int alpha_entry(size_t w, int i, int j) const { return ma_[w * r2_ + i * rank_ + j]; }
    size_t compose(size_t a, size_t b) const;  // a*b
    size_t simple(int i) const { return gens_[i]; }
    std::vector<int> word(size_t w) const;     // reduced word, leftmost first

private:
    friend class RootDatum;
    int rank_ = 0, r2_ = 0;
    std::vector<std::int8_t> mv_, mc_, ma_;
    std::vector<int> length_;
    std::vector<size_t> inverse_, parent_;
    std::vector<int> parent_gen_;
    std::vector<size_t> gens_;
    size_t longest_ = 0;
    std::unordered_map<Weight, size_t, WeightHash> index_;  // image of rho -> element
    Weight rho_;
};

class RootDatum {
public:
    static std::shared_ptr<const RootDatum> build(char series, int rank, Isogeny iso,
                                                  size_t weyl_cap = 1000000);
    // "A2adj", "B2sc", ...
    static std::shared_ptr<const RootDatum> parse(const std::string& spec, size_t weyl_cap = 1000000);
    static IMat cartan_matrix(char series, int rank);
    static BigInt expected_weyl_order(char series, int rank);

    char series = 'A';
    int rank = 0;
    Isogeny isogeny = Isogeny::Adjoint;
    IMat cartan;
    QMat cartan_inv;
    QMat simple_roots;         // rows, varpi coords
    QMat simple_coroots;       // rows, coweight coords
    QMat fundamental_weights;  // rows, varpi coords (identity)
    std::vector<Root> positive_roots;
    Weight rho;                // varpi coords (1,...,1)
    QVec rho_alpha;            // rho in simple-root coords
    Weight rho_dual;           // sum of fundamental coweights
    QMat gram;                 // a0^*, varpi basis (inverse Killing)
    QMat gram_alpha;           // a0^*, simple-root basis
    QMat killing;              // a0, simple coroot basis
    int dim_d = 0;
    std::vector<StandardLevi> levis;  // proper standard Levis, T0 first
    QMat period_basis;         // rows, simple-root coords; Z-basis of X^*(T0)
    std::vector<int> degrees;  // fundamental degrees

    std::string name() const;
    const WeylGroup& weyl() const { return weyl_; }

    // dual-character lattice membership
    bool in_character_lattice(const Weight& nu) const;
    // cocharacter of T0 <-> character of the dual torus
    QVec coweight_to_coroot_coords(const Weight& nu) const;
    Weight coroot_coords_to_coweight(const QVec& a) const;

    Rational pair_rho(const Weight& nu) const;       // <nu, rho>
    Weight dominant(const Weight& v, size_t* w = nullptr) const;
    const std::vector<Weight>& orbit(const Weight& dominant_weight) const;
    size_t stabilizer_order(const Weight& dominant_weight) const;
    bool dominance_leq(const Weight& lambda, const Weight& mu) const;
    Weight star(const Weight& v) const;              // -w0 v
    Weight simple_root_weight(int i, Lattice l) const;

    // metric on a0^* in varpi coords and in simple-root coords (doubles)
    double norm_varpi(const std::vector<double>& v) const;
    double dot_varpi(const std::vector<double>& a, const std::vector<double>& b) const;
    const std::vector<double>& gram_d() const { return gram_d_; }
    const std::vector<double>& gram_alpha_d() const { return gram_alpha_d_; }
    std::vector<double> varpi_to_alpha(const std::vector<double>& v) const;
    std::vector<double> alpha_to_varpi(const std::vector<double>& v) const;
    double root_norm(int k) const { return root_norm_[k]; }  // Killing length of positive root k
    double rho_norm() const;

    // <lambda, alpha^vee> for a G-weight in varpi coords
    std::complex<double> pair_coroot(const SpectralParameter& l, int k) const;
    double pair_coroot(const std::vector<double>& v, int k) const;

    // D(lambda), spectral gap, d(T)
    double d_factor(const SpectralParameter& l) const;
    double d_factor_standard(const SpectralParameter& l) const;
    double spectral_gap(const SpectralParameter& mu, double* orbit_value = nullptr) const;
    Rational dT(const QVec& t_coweight) const;

private:
    WeylGroup weyl_;
    std::vector<double> gram_d_, gram_alpha_d_, root_norm_;
    mutable std::mutex orbit_mu_;
    mutable std::unordered_map<Weight, std::unique_ptr<std::vector<Weight>>, WeightHash> orbits_;
    void build_roots();
    void build_weyl(size_t cap);
    void build_metric();
    void build_levis();
    double levi_product(const std::vector<double>& v, const StandardLevi& m, bool exceptional) const;
};

using RootDatumPtr = std::shared_ptr<const RootDatum>;

}  // namespace chevalley
