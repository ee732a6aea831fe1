#pragma once

#include <map>
#include <string>
#include <vector>

namespace chevalley {

// Flat key-value file with [section] headers; keys are addressed as "section.key".
// Command-line flags override file values.
struct RunConfig {
    std::string group = "A1sc";
    double quad_tol = 1e-10;
    double cert_slack = 0.10;  // relative slack of the special-function gradient bound
    std::vector<long long> panel;  // empty = primes <= 97
    std::string cache_dir;         // empty = CHEVALLEY_CACHE_DIR or ./cache
    std::string format = "json";   // json | csv
    unsigned seed = 1;
    int workers = 1;
    std::map<std::string, std::string> values;  // every key read from the file

    static RunConfig load(const std::string& path);
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    void validate() const;
};

std::vector<long long> parse_int_list(const std::string& s);  // "2,3,5"

}  // namespace chevalley
