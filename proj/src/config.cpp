#include "chevalley/config.hpp"

#include "chevalley/rational.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace chevalley {

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<long long> out;
    for (auto& p : parts) {
        if (p.empty()) continue;
        try {
            out.push_back(boost::lexical_cast<long long>(p));
        } catch (const boost::bad_lexical_cast&) {
            throw Error("usage", "not an integer list: " + s);
        }
    }
    return out;
}

RunConfig RunConfig::load(const std::string& path) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(path, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error("usage", std::string("config: ") + e.what());
    }
    RunConfig c;
    for (auto& [sec, node] : pt) {
        if (node.empty()) {
            c.set(sec, node.data());
            continue;
        }
        for (auto& [k, v] : node) c.set(sec + "." + k, v.data());
    }
    return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    values[key] = value;
    try {
        if (key == "group" || key == "run.group")
            group = value;
        else if (key == "tolerances.quadrature")
            quad_tol = boost::lexical_cast<double>(value);
        else if (key == "tolerances.certificate_slack")
            cert_slack = boost::lexical_cast<double>(value);
        else if (key == "amplifier.panel")
            panel = parse_int_list(value);
        else if (key == "run.cache_dir")
            cache_dir = value;
        else if (key == "run.format")
            format = value;
        else if (key == "run.seed")
            seed = boost::lexical_cast<unsigned>(value);
        else if (key == "run.workers")
            workers = boost::lexical_cast<int>(value);
    } catch (const boost::bad_lexical_cast&) {
        throw Error("usage", "config: bad value for " + key);
    }
}

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return boost::lexical_cast<double>(it->second);
    } catch (const boost::bad_lexical_cast&) {
        throw Error("usage", "config: bad value for " + key);
    }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return boost::lexical_cast<int>(it->second);
    } catch (const boost::bad_lexical_cast&) {
        throw Error("usage", "config: bad value for " + key);
    }
}

void RunConfig::validate() const {
    if (!(quad_tol > 0) || !(cert_slack > 0)) throw Error("usage", "tolerances must be positive");
    if (format != "json" && format != "csv") throw Error("usage", "format must be json or csv");
    if (workers < 1) throw Error("usage", "workers must be positive");
    for (long long p : panel)
        if (p < 2) throw Error("usage", "panel entries must be primes");
}

}  // namespace chevalley
