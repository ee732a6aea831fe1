#pragma once

#include "chevalley/amplifier.hpp"
#include "chevalley/arch.hpp"
#include "chevalley/envelope.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace chevalley {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

// non-finite doubles become the strings "inf", "-inf", "nan"
json num(double x);
json rational_json(const Rational& q);  // "p/q"
json weight_json(const Weight& w);

json to_json(const RootDatum& rd);
json to_json(const InvariantFunction& f);
json to_json(const L1Bound& b);
json to_json(const AmplifierElement& e);
json to_json(const AmplifierDesign& d);
json to_json(const SeparationDatum& s);
json to_json(const ThetaOperator& t);
json to_json(const EnvelopeReport& e);

// fields of a theta certificate consumed by the envelope
struct ThetaSummary {
    double l1_total = 1, log_l1_total = 0, ms_bound = 0, A = 0;
};
ThetaSummary theta_summary(const json& j);

// record with schema_version, serialized on one line
std::string record(json j);

std::string sha256_hex(const std::string& data);
std::string root_datum_hash(const RootDatum& rd);

// JSON files under CHEVALLEY_CACHE_DIR (default ./cache), one directory per root datum hash
class Cache {
public:
    explicit Cache(std::string dir = "");
    const std::string& dir() const { return dir_; }
    std::optional<json> get(const RootDatum& rd, const std::string& key) const;
    void put(const RootDatum& rd, const std::string& key, const json& value) const;

private:
    std::string dir_;
    std::string path(const RootDatum& rd, const std::string& key) const;
};

// dominant weight multiplicities of V_lambda, read through the cache
json character_table(const RootDatumPtr& rd, const Weight& lambda, const Cache* cache, bool* hit = nullptr);

}  // namespace chevalley
