#pragma once

// Geometry of the compact dual torus a0^* / X^*(T0). Distances use the Killing
// metric rescaled so the torus has volume 1 (for rank one this is the plain
// coordinate distance in the period-lattice coordinate).

#include "chevalley/root_datum.hpp"

#include <vector>

namespace chevalley {

class TorusGeometry {
public:
    explicit TorusGeometry(RootDatumPtr rd);

    const RootDatumPtr& rd() const { return rd_; }
    int rank() const { return r_; }
    double killing_scale() const { return scale_; }  // torus distance = scale * Killing distance
    const std::vector<double>& metric() const { return metric_; }  // simple-root coords

    std::vector<double> lattice_to_alpha(const std::vector<double>& u) const;
    std::vector<double> alpha_to_lattice(const std::vector<double>& theta) const;
    double norm(const std::vector<double>& v_alpha) const;
    double dist(const std::vector<double>& a, const std::vector<double>& b) const;
    // distinct W-translates of c modulo periods
    std::vector<std::vector<double>> orbit_points(const std::vector<double>& c) const;
    double dist_to_points(const std::vector<double>& t, const std::vector<std::vector<double>>& pts) const;
    // lattice vectors (lattice coords) scanned when minimising over translates
    const std::vector<std::vector<int>>& shifts() const { return shifts_; }

private:
    RootDatumPtr rd_;
    int r_;
    double scale_;
    std::vector<double> metric_, B_, Binv_;  // B rows = period basis (alpha coords)
    std::vector<std::vector<int>> shifts_;
};

struct TorusBall {
    std::vector<double> center;  // simple-root coords
    double radius = 0;
    std::vector<std::vector<double>> orbit;  // filled by TorusRegion::make
};

struct TorusRegion {
    std::vector<TorusBall> balls;

    static TorusRegion make(const TorusGeometry& g, std::vector<TorusBall> balls);
    static TorusRegion whole();  // marker: no balls, everything
    bool is_whole = false;
    bool empty() const { return !is_whole && balls.empty(); }
    bool contains(const TorusGeometry& g, const std::vector<double>& theta) const;
    // min over balls of (distance to the orbit of the centre) - radius
    double signed_distance(const TorusGeometry& g, const std::vector<double>& theta) const;
    TorusRegion shrunk(const TorusGeometry& g, double factor) const;
};

// "c1:c2,r" style description; centre in simple-root coordinates
TorusBall parse_ball(const std::string& spec);

}  // namespace chevalley
