#include "doctest.h"
#include "app.hpp"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gt;
using namespace gt::app;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(GTHETA_BIN) + " " + args + " > /dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("gtheta_test_" + name);
    fs::remove_all(d);
    return d;
}

RunConfig with(std::function<void(RunConfig&)> f) {
    RunConfig c;
    f(c);
    return c;
}

}  // namespace

TEST_CASE("validation rejects violated hypotheses before computing") {
    auto rejects = [](RunConfig c) { CHECK_THROWS_AS(validate(c), ConfigError); };
    rejects(with([](RunConfig& c) { c.n_minus = 15; }));            // even number of primes
    rejects(with([](RunConfig& c) { c.n_minus = 9; }));             // not squarefree
    rejects(with([](RunConfig& c) { c.p = 2; }));                   // p odd
    rejects(with([](RunConfig& c) { c.p = 3, c.k = 6; }));          // p > k - 2
    rejects(with([](RunConfig& c) { c.p = 2, c.k = 4; }));          // p > k - 2
    rejects(with([](RunConfig& c) { c.k = 3; }));                   // odd weight
    rejects(with([](RunConfig& c) { c.p = 11; }));                  // p | N
    rejects(with([](RunConfig& c) { c.d_k = 8, c.p = 5; }));        // class number / field checks
    rejects(with([](RunConfig& c) { c.n_plus = 3; }));              // 3 inert in Q(i)
    RunConfig ok;
    CHECK_NOTHROW(validate(ok));
    RunConfig autof = with([](RunConfig& c) { c.d_k = 0; });
    validate(autof);
    CHECK(autof.d_k > 0);
}

TEST_CASE("eigenvalue pins parse") {
    auto v = parse_eigenvalues("2:-2,3:-1");
    REQUIRE(v.size() == 2);
    CHECK(v[0].first == 2);
    CHECK(v[0].second == -2);
    CHECK(v[1].second == -1);
    CHECK_THROWS_AS(parse_eigenvalues("2=-2"), ConfigError);
}

TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit codes of the command-line tool") {
    CHECK(run("--nminus 15 verify") == 2);
    CHECK(run("--p 2 verify") == 2);
    CHECK(run("--p 2 --k 4 verify") == 2);
    CHECK(run("--k 4 --p 3 verify") == 2);   // no rational eigenform of weight 4 for N- = 11
    CHECK(run("--bogus verify") == 2);
    CHECK(run("verify --suite mass --suite tower --suite fe") == 0);
    CHECK(run("--k 4 --p 5 --nminus 7 --aux 3 verify --suite congruence --suite mu") == 0);
}

TEST_CASE("verification suites on the default instance") {
    Instance I(RunConfig{});
    for (auto& s : suite_names()) {
        auto r = run_suite(I, s);
        INFO(s, ": ", r.counterexample);
        CHECK(r.ok);
    }
    auto interp = run_suite(I, "interp");
    CHECK(interp.detail["constant_times_2_uK_squared"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(interp.detail["absolute_match"].get<bool>());
}

TEST_CASE("pipeline is deterministic, extends in depth, and detects corruption") {
    fs::path a = scratch("a"), b = scratch("b");
    RunConfig c;
    c.n_max = 2;
    c.out = a.string();
    auto r1 = run_pipeline(c, false);
    CHECK(r1.ok);
    c.out = b.string();
    run_pipeline(c, false);
    for (auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        fs::path rel = fs::relative(e.path(), a);
        INFO(rel.string());
        CHECK(slurp(e.path()) == slurp(b / rel));
    }
    // a rerun reuses everything
    c.out = a.string();
    auto r2 = run_pipeline(c, false);
    for (auto& [stage, status] : r2.stages.items()) CHECK(status == "reused");
    // deeper tower: earlier theta files are reused, only the new level is computed
    c.n_max = 3;
    auto r3 = run_pipeline(c, false);
    CHECK(r3.stages["theta_n1.json"] == "reused");
    CHECK(r3.stages["theta_n2.json"] == "reused");
    CHECK(r3.stages["theta_n3.json"] == "computed");
    // tampering is detected
    std::string text = slurp(a / "theta_n1.json");
    auto pos = text.find("\"D_K\": 4");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 8, "\"D_K\": 5");
    std::ofstream(a / "theta_n1.json") << text;
    CHECK_THROWS_AS(run_pipeline(c, false), CacheError);
    CHECK(run("--out " + a.string() + " --nmax 3 pipeline") == 2);
    CHECK(run_pipeline(c, true).ok);
    fs::remove_all(a);
    fs::remove_all(b);
}
