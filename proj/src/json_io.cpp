#include "chevalley/json_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chevalley {

namespace fs = std::filesystem;

json num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json rational_json(const Rational& q) { return to_string(q); }

json weight_json(const Weight& w) {
    json a = json::array();
    for (int i = 0; i < w.rank; ++i) a.push_back(w[i]);
    return a;
}

namespace {

json qmat(const QMat& m) {
    json a = json::array();
    for (auto& row : m) {
        json r = json::array();
        for (auto& q : row) r.push_back(rational_json(q));
        a.push_back(r);
    }
    return a;
}

json qvec(const QVec& v) {
    json a = json::array();
    for (auto& q : v) a.push_back(rational_json(q));
    return a;
}

json dvec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json region_json(const TorusRegion& U) {
    json a = json::array();
    for (auto& b : U.balls) a.push_back({{"center", dvec(b.center)}, {"radius", num(b.radius)}});
    return a;
}

}  // namespace

json to_json(const RootDatum& rd) {
    json j;
    j["name"] = rd.name();
    j["series"] = std::string(1, rd.series);
    j["rank"] = rd.rank;
    j["isogeny"] = rd.isogeny == Isogeny::Adjoint ? "adjoint" : "simply_connected";
    json cartan = json::array();
    for (auto& row : rd.cartan) cartan.push_back(row);
    j["cartan"] = cartan;
    j["simple_roots"] = qmat(rd.simple_roots);
    j["simple_coroots"] = qmat(rd.simple_coroots);
    j["fundamental_weights"] = qmat(rd.fundamental_weights);
    json roots = json::array();
    for (auto& a : rd.positive_roots)
        roots.push_back({{"varpi", weight_json(a.varpi)}, {"alpha", a.alpha}, {"coroot", weight_json(a.coroot)},
                         {"height", a.height}});
    j["positive_roots"] = roots;
    j["rho"] = weight_json(rd.rho);
    j["gram"] = qmat(rd.gram);
    j["killing"] = qmat(rd.killing);
    j["dim_d"] = rd.dim_d;
    j["weyl_order"] = rd.weyl().order();
    j["degrees"] = rd.degrees;
    j["period_basis"] = qmat(rd.period_basis);
    json levis = json::array();
    for (auto& m : rd.levis)
        levis.push_back({{"subset", m.subset}, {"positive_roots", m.positive_roots},
                         {"dual_subtorus_basis", qmat(m.dual_subtorus_basis)}});
    j["levis"] = levis;
    return j;
}

json to_json(const InvariantFunction& f) {
    json j;
    j["group"] = f.rd()->name();
    j["basis"] = basis_name(f.basis());
    j["exact"] = f.exact();
    json terms = json::array();
    if (f.exact()) {
        for (auto& [w, c] : f.exact_coefficients())
            terms.push_back({{"lambda", weight_json(w)}, {"re", rational_json(c.re)}, {"im", rational_json(c.im)}});
    } else {
        for (auto& [w, c] : f.numeric_coefficients())
            terms.push_back({{"lambda", weight_json(w)}, {"re", num(c.real())}, {"im", num(c.imag())}});
    }
    j["terms"] = terms;
    return j;
}

json to_json(const L1Bound& b) {
    json j;
    j["exact"] = b.exact;
    if (b.exact) j["exact_value"] = {{"a", rational_json(b.exact_value.a)}, {"b_sqrt_p", rational_json(b.exact_value.b)}};
    j["value"] = num(b.value);
    j["log_value"] = num(b.log_value);
    j["A"] = rational_json(b.A);
    j["B"] = num(b.B);
    return j;
}

json to_json(const AmplifierDesign& d) {
    json j;
    j["group"] = d.rd->name();
    j["U"] = region_json(d.U);
    j["V"] = region_json(d.V);
    j["shrink"] = num(d.shrink);
    j["delta"] = num(d.delta);
    j["X"] = num(d.X);
    j["eps"] = num(d.eps);
    j["h_level"] = num(d.h_level);
    json pm = json::array();
    for (auto& [p, m] : d.panel_masses) pm.push_back({{"p", p}, {"mass", num(m)}});
    j["panel_masses"] = pm;
    const auto& c = d.sep.cert;
    j["separator"] = {{"degree", c.degree},
                      {"complement", d.sep.complement},
                      {"step_m", d.sep.step.m},
                      {"step_phi0", num(d.sep.step.phi0)},
                      {"Wc", num(c.Wc)},
                      {"w_inner", num(c.w_inner)},
                      {"w_outer", num(c.w_outer)},
                      {"w_outer_nontempered", num(c.w_outer_nt)},
                      {"lipschitz", num(c.lipschitz)},
                      {"grid_radius", num(c.grid_radius)},
                      {"f_max_C1", num(c.f_max_C1)},
                      {"f_min_C2", num(c.f_min_C2)},
                      {"compact_samples", c.compact_samples},
                      {"nontempered_samples", c.nontempered_samples},
                      {"ok", c.ok}};
    j["cloud"] = {{"box_radius", num(d.cloud.box_radius)},
                  {"nontempered_nodes", d.cloud.nt_nodes},
                  {"ring_gap_compact", num(d.cloud.ring_gap_compact)},
                  {"ring_gap_compact_tolerance", 1e-6},
                  {"ring_gap_nontempered", num(d.cloud.ring_gap_nt)},
                  {"ring_gap_nontempered_tolerance", 1e-10}};
    return j;
}

json to_json(const AmplifierElement& e) {
    const auto& k = e.cert;
    json j;
    j["group"] = e.design->rd->name();
    j["p"] = e.p;
    j["design"] = to_json(*e.design);
    j["terms"] = e.g.size();
    j["identity_residual"] = {{"value", num(k.identity_residual)}, {"tolerance", 1e-7}, {"ok", k.item[0]}};
    j["l1"] = to_json(k.l1);
    j["exponent"] = {{"A", num(k.A)}, {"B", num(k.B)}, {"ok", k.item[1]}};
    j["l2"] = {{"value", num(k.l2)}, {"residual", num(k.l2_residual)}, {"bound", num(e.design->X + 1)}, {"ok", k.item[2]}};
    j["positivity"] = {{"min_S", num(k.min_S)},
                       {"min_S_compact", num(k.min_S_compact)},
                       {"min_S_nontempered", num(k.min_S_nontempered)},
                       {"min_S_shell", num(k.min_S_shell)},
                       {"certified_lower", num(k.certified_lower)},
                       {"tail_lower", num(k.tail_lower)},
                       {"mu_f", num(k.mu_f)},
                       {"mu_h", num(k.mu_h)},
                       {"samples", k.samples},
                       {"tolerance", 1e-6},
                       {"ok", k.item[3]}};
    j["support_radius"] = {{"value", num(k.support_radius)}, {"ok", k.item[4]}};
    j["ok"] = k.ok;
    return j;
}

json to_json(const SeparationDatum& s) {
    json j;
    j["group"] = s.rd->name();
    j["levi"] = s.levi;
    j["levi_subset"] = s.rd->levis[s.levi].subset;
    j["c1"] = dvec(s.c1);
    j["c2"] = dvec(s.c2);
    j["rho1"] = num(s.rho1);
    j["rho2"] = num(s.rho2);
    j["orbit_distance"] = num(s.d);
    j["margin"] = num(s.margin);
    j["delta1"] = num(s.delta1);
    j["delta1_killing"] = num(s.delta1_killing);
    j["sampled_distance"] = num(s.sampled_distance);
    j["sample_resolution"] = num(s.sample_resolution);
    j["lipschitz_slack"] = num(s.lipschitz_slack);
    j["samples"] = s.samples;
    j["certified"] = s.certified;
    return j;
}

json to_json(const ThetaOperator& t) {
    json j;
    j["mu"] = dvec(t.mu.im);
    j["levi"] = t.levi;
    j["X"] = num(t.X);
    j["N"] = t.N;
    j["primes"] = t.primes;
    j["Y"] = t.Y;
    json comps = json::array();
    double log_l1 = -INFINITY;
    for (auto& c : t.comps) {
        double lv = c.tau.cert.l1.log_value;
        log_l1 = std::max(log_l1, lv) + std::log1p(std::exp(-std::abs(log_l1 - lv)));
        comps.push_back({{"p", c.p},
                         {"j", c.j},
                         {"l1", num(c.l1)},
                         {"log_l1", num(lv)},
                         {"l2_sq", num(c.l2_sq)},
                         {"ms", num(c.ms)},
                         {"A", num(c.tau.cert.A)},
                         {"B", num(c.tau.cert.B)},
                         {"support_radius", num(c.tau.cert.support_radius)},
                         {"ok", c.tau.cert.ok}});
    }
    j["components"] = comps;
    j["l1_total"] = num(t.l1_total);
    j["log_l1_total"] = num(t.comps.empty() ? 0.0 : log_l1);
    j["l2_sq_total"] = num(t.l2_sq_total);
    j["ms_bound"] = num(t.ms_bound);
    j["A"] = num(t.A);
    j["B"] = num(t.B);
    j["a_max"] = num(t.a_max);
    j["l1_ok"] = t.l1_ok;
    j["l2_ok"] = t.l2_ok;
    j["ms_ok"] = t.ms_ok;
    return j;
}

json to_json(const EnvelopeReport& e) {
    json j;
    j["main_term"] = num(e.main_term);
    j["main_residual"] = num(e.main_residual);
    j["boundary_term"] = num(e.boundary_term);
    j["saving_term"] = num(e.saving_term);
    j["log_boundary_term"] = num(e.log_boundary_term);
    j["log_saving_term"] = num(e.log_saving_term);
    j["vol_boundary"] = num(e.vol_boundary);
    j["vol_boundary_exact"] = e.vol_boundary_exact;
    j["norm_D"] = num(e.norm_D);
    j["delta"] = num(e.delta);
    j["delta_max"] = num(e.delta_max);
    j["d"] = e.d;
    j["r"] = e.r;
    j["constants"] = {{"A", num(e.constants.A)}, {"C_boundary", num(e.constants.C_boundary)},
                      {"C_saving", num(e.constants.C_saving)}};
    j["hecke"] = e.hecke;
    if (e.hecke) {
        j["tau_l1"] = num(e.tau_l1);
        j["log_tau_l1"] = num(e.log_tau_l1);
        j["tau_ms"] = num(e.tau_ms);
        j["ms_factor"] = num(e.ms_factor);
    }
    return j;
}

namespace {

double read_num(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        if (s == "nan") return NAN;
        return to_double(parse_rational(s));
    }
    throw Error("usage", "expected a number in the theta certificate");
}

}  // namespace

ThetaSummary theta_summary(const json& j0) {
    const json& j = j0.contains("theta") ? j0.at("theta") : j0;
    for (const char* k : {"l1_total", "ms_bound", "A"})
        if (!j.contains(k)) throw Error("usage", std::string("theta certificate lacks ") + k);
    ThetaSummary s;
    s.l1_total = read_num(j.at("l1_total"));
    s.log_l1_total = j.contains("log_l1_total") ? read_num(j.at("log_l1_total")) : std::log(s.l1_total);
    s.ms_bound = read_num(j.at("ms_bound"));
    s.A = read_num(j.at("A"));
    return s;
}

std::string record(json j) {
    j["schema_version"] = kSchemaVersion;
    return j.dump();
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string root_datum_hash(const RootDatum& rd) { return sha256_hex(to_json(rd).dump()); }

Cache::Cache(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) {
        const char* env = std::getenv("CHEVALLEY_CACHE_DIR");
        dir_ = env && *env ? env : "./cache";
    }
}

std::string Cache::path(const RootDatum& rd, const std::string& key) const {
    return (fs::path(dir_) / (rd.name() + "-" + root_datum_hash(rd).substr(0, 16)) / (key + ".json")).string();
}

std::optional<json> Cache::get(const RootDatum& rd, const std::string& key) const {
    std::ifstream in(path(rd, key));
    if (!in) return std::nullopt;
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        return std::nullopt;  // unreadable entries are recomputed
    }
}

void Cache::put(const RootDatum& rd, const std::string& key, const json& value) const {
    fs::path p = path(rd, key);
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) return;
    // write then rename so concurrent readers never see a partial file
    fs::path tmp = p;
    tmp += ".tmp" + std::to_string(std::hash<std::string>{}(value.dump()));
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << value.dump(1) << "\n";
    }
    fs::rename(tmp, p, ec);
    if (ec) fs::remove(tmp, ec);
}

json character_table(const RootDatumPtr& rd, const Weight& lambda, const Cache* cache, bool* hit) {
    std::string key = "char_";
    for (int i = 0; i < lambda.rank; ++i) key += (i ? "_" : "") + std::to_string(lambda[i]);
    if (hit) *hit = false;
    if (cache) {
        if (auto j = cache->get(*rd, key)) {
            if (hit) *hit = true;
            return *j;
        }
    }
    json j;
    j["group"] = rd->name();
    j["lambda"] = weight_json(lambda);
    j["dimension"] = weyl_dimension(*rd, lambda).str();
    json m = json::array();
    for (auto& [mu, k] : dominant_multiplicities(rd, lambda)) m.push_back({{"mu", weight_json(mu)}, {"multiplicity", k.str()}});
    j["dominant_multiplicities"] = m;
    if (cache) cache->put(*rd, key, j);
    return j;
}

}  // namespace chevalley
