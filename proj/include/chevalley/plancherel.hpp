#pragma once

#include "chevalley/invariant_ring.hpp"
#include "chevalley/torus_region.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace chevalley {

// Product trapezoid grid on the compact torus in period-lattice coordinates
// u in [0,1)^r; all nodes carry weight n^{-r}.
struct PlancherelQuadrature {
    int n = 0;
    int rank = 0;
    size_t size() const;
};

class PlancherelMeasure {
public:
    // p = 0 selects the Sato-Tate limit
    PlancherelMeasure(RootDatumPtr rd, double p, double tol = 1e-10);

    const RootDatumPtr& rd() const { return rd_; }
    const TorusGeometry& geometry() const { return geo_; }
    bool sato_tate() const { return p_ == 0; }
    double p() const { return p_; }
    double Z() const { return Z_; }
    int base_nodes() const { return n0_; }
    double normalization_residual() const { return z_residual_; }

    // unnormalized Macdonald density at theta (simple-root coords)
    double density(const std::vector<double>& theta) const;
    double density_lattice(const double* u) const;

    struct Value {
        Complex value;
        int nodes = 0;
        double residual = 0;
    };

    // mu(t^nu) from the n-point Fourier table of the density
    Complex monomial_moment(const Weight& nu, int n) const;
    Value integrate(const InvariantFunction& f) const;
    Value l2_norm(const InvariantFunction& f) const;
    // grid values of f at the n^r lattice nodes (row-major, last coordinate fastest)
    std::vector<Complex> grid_values(const InvariantFunction& f, int n) const;
    // normalized density on the n-grid, weights included (sums to ~1)
    const std::vector<double>& weights(int n) const;
    double open_set_mass(const TorusRegion& U, int n = 0) const;
    int degree(const InvariantFunction& f) const;  // max |lattice index| over monomials
    std::vector<int> lattice_index(const Weight& nu) const;

private:
    RootDatumPtr rd_;
    TorusGeometry geo_;
    double p_;
    double tol_;
    double Z_ = 1;
    double z_residual_ = 0;
    int n0_ = 0;
    std::vector<std::vector<int>> coroot_index_;  // lattice-index of each positive coroot
    std::vector<long long> pb_num_;               // period basis over the common denominator pb_den_
    long long pb_den_ = 1;
    mutable std::mutex mu_;
    mutable std::map<int, std::unique_ptr<std::vector<Complex>>> tables_;
    mutable std::map<int, std::unique_ptr<std::vector<double>>> weights_;
    const std::vector<Complex>& table(int n) const;
    double raw_mean(int n) const;
};

int default_nodes(int rank, int degree);

}  // namespace chevalley
