#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " CHEVALLEY_CLI_PATH " " + args + " 2>/dev/null";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("chevalley_cli_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

using nlohmann::json;

TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("--group Q7 rootdata").code == 2);
    CHECK(run("--group A1adj char --lambda [-1]").code == 2);
    CHECK(run("--group A1adj envelope --D ball:10 --delta 0.5").code == 2);
    CHECK(run("--group A1adj --format csv rootdata").code == 2);

    auto e = run("--group A1adj amplify build --p 2");
    CHECK(e.code == 1);
    auto j = json::parse(e.out);
    CHECK(j["error"] == "empty region");
    CHECK(j["schema_version"] == 1);
}

TEST_CASE("rootdata and determinism") {
    auto dir = scratch("det");
    std::string env = "CHEVALLEY_CACHE_DIR=" + dir.string();
    auto a = run("--group G2 rootdata", env);
    auto b = run("--group G2 rootdata", env);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto j = json::parse(a.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["weyl_order"] == 12);
    CHECK(j["positive_roots"].size() == 6);
    // the cache directory is populated
    CHECK(std::filesystem::begin(std::filesystem::recursive_directory_iterator(dir)) !=
          std::filesystem::end(std::filesystem::recursive_directory_iterator(dir)));
}

TEST_CASE("character evaluation") {
    auto r = run("--group A1adj char --lambda w1 --p 5");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["value"]["re"].get<double>() == doctest::Approx(std::sqrt(5.0) + 1 / std::sqrt(5.0)));
    auto s = run("--group A1adj char --lambda [2] --basis orbit --theta 0.25");
    REQUIRE(s.code == 0);
    CHECK(json::parse(s.out)["value"]["re"].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("plancherel subcommands") {
    auto r = run("--group A1adj plancherel padic --p inf --moment h:w1^2");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["value"]["re"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    auto c = run("--group A1adj --format csv plancherel moments --p 5 --max 3");
    REQUIRE(c.code == 0);
    CHECK(c.out.rfind("lambda", 0) == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') >= 4);
}

TEST_CASE("config file and overrides") {
    auto dir = scratch("cfg");
    auto ini = dir / "run.ini";
    std::ofstream(ini) << "[run]\ngroup = A2adj\nseed = 3\n";
    auto r = run("--config " + ini.string() + " rootdata", "CHEVALLEY_CACHE_DIR=" + dir.string());
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["name"] == "A2adj");
    auto o = run("--config " + ini.string() + " --group B2sc rootdata", "CHEVALLEY_CACHE_DIR=" + dir.string());
    REQUIRE(o.code == 0);
    CHECK(json::parse(o.out)["name"] == "B2sc");
}

TEST_CASE("envelope and quick verify") {
    auto r = run("--group A2adj envelope --D ball:20 --vK 2 --delta 0.1");
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["main_term"].get<double>() > 0);
    CHECK(j["constants"]["A"] == 1.0);
    CHECK(run("--group A1adj verify --quick").code == 0);
}
