#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "steerqkd/cli.hpp"
#include "steerqkd/errors.hpp"
#include "steerqkd/families.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/steering.hpp"

using namespace steerqkd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / "steerqkd_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string write_file(const std::string &name, const std::string &text) {
    const fs::path p = scratch(name);
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "steerqkd");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const char *kIdentityMatrix = R"({"matrix": [
  [[0.25,0],[0,0],[0,0],[0,0]],
  [[0,0],[0.25,0],[0,0],[0,0]],
  [[0,0],[0,0],[0.25,0],[0,0]],
  [[0,0],[0,0],[0,0],[0.25,0]]
]})";

} // namespace

TEST_CASE("state parsing") {
    SUBCASE("families") {
        CHECK(approx_equal(cli::parse_state(R"({"family":"werner","params":{"omega":0.8}})")
                               .matrix(),
                           make_werner({0.8}).matrix()));
        CHECK(approx_equal(
            cli::parse_state(R"({"family":"gamma","params":{"q":0.9,"alpha":0.25}})")
                .matrix(),
            make_gamma({0.9, 0.25}).matrix()));
        CHECK(approx_equal(
            cli::parse_state(
                R"({"family":"bell_diagonal","params":{"w1":0.4,"w2":0.3,"w3":0.2,"w4":0.1}})")
                .matrix(),
            make_bell_diagonal({0.4, 0.3, 0.2, 0.1}).matrix()));
    }
    SUBCASE("matrix") {
        CHECK(approx_equal(cli::parse_state(kIdentityMatrix).matrix(),
                           DensityMatrix::maximally_mixed().matrix()));
    }
    SUBCASE("syntax errors carry a line number") {
        try {
            cli::parse_state("{\n  \"family\": \"werner\",\n  \"params\": {omega: 1}\n}", "s.json");
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(std::string(e.what()).find("s.json: line 3") != std::string::npos);
        }
    }
    SUBCASE("field errors name the field") {
        try {
            cli::parse_state(R"({"matrix": [[[1,0],[0,0],[0,0],[0,0]],[],[],[]]})");
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(std::string(e.what()).find("matrix[1]") != std::string::npos);
        }
        CHECK_THROWS_AS(cli::parse_state(R"({"family":"werner","params":{"w":1}})"),
                        ParseError);
        CHECK_THROWS_AS(cli::parse_state(R"({"family":"werner","params":{"omega":"x"}})"),
                        ParseError);
        CHECK_THROWS_AS(cli::parse_state(R"({"family":"mems"})"), ParseError);
        CHECK_THROWS_AS(cli::parse_state(R"({})"), ParseError);
        CHECK_THROWS_AS(cli::parse_state(R"([1,2])"), ParseError);
    }
    SUBCASE("illegal states") {
        CHECK_THROWS_AS(cli::parse_state(R"({"family":"werner","params":{"omega":2}})"),
                        BadParam);
        std::string doubled = kIdentityMatrix;
        doubled.replace(doubled.find("0.25"), 4, "1.25");
        try {
            cli::parse_state(doubled, "m.json");
            FAIL("expected InvalidState");
        } catch (const InvalidState &e) {
            CHECK(std::string(e.what()).find("field 'matrix'") != std::string::npos);
        }
    }
}

TEST_CASE("analyze reports library values verbatim") {
    using Json = nlohmann::json;
    const DensityMatrix w = make_werner({0.8});
    const Json a = Json::parse(cli::cmd_analyze(w));
    const TensorSpectrum s = tensor_spectrum(w);
    CHECK(a["f3_bound"].get<double>() == f3_bound(s));
    CHECK(a["f3_bound"].get<double>() == doctest::Approx(1.3856).epsilon(1e-4));
    CHECK(a["q_min"].get<double>() == qber_min(s));
    CHECK(a["q_min"].get<double>() == doctest::Approx(0.1));
    CHECK(a["useful"].get<bool>());
    CHECK(a["key_rate_at_q_min"].get<double>() == min_secure_key_rate(qber_min(s)));
    CHECK(a["q_min_two_settings"].get<double>() == qber_min_two_settings(s));

    const Json g = Json::parse(cli::cmd_analyze(make_gamma({0.9, 0.25})));
    CHECK(g["q_min"].get<double>() == doctest::Approx(0.22284).epsilon(1e-5));
    CHECK(!g["useful"].get<bool>());

    const Json m = Json::parse(cli::cmd_analyze(DensityMatrix::maximally_mixed()));
    CHECK(m["f3_bound"].get<double>() == doctest::Approx(0.0));
    CHECK(m["chsh_bound"].get<double>() == doctest::Approx(0.0));
    CHECK(!m["useful"].get<bool>());
}

TEST_CASE("command line exit codes") {
    const std::string werner =
        write_file("werner.json", R"({"family":"werner","params":{"omega":0.8}})");
    const std::string broken = write_file("broken.json", "{\"family\": ");
    const std::string bad = write_file("bad.json", R"({"family":"werner","params":{"omega":3}})");
    const std::string csv = scratch("scan.csv").string();

    CHECK(run_cli({"analyze", werner}).code == 0);
    CHECK(run_cli({"analyze", broken}).code == 2);
    CHECK(run_cli({"analyze", bad}).code == 2);
    CHECK(run_cli({"analyze", scratch("missing.json").string()}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"scan", "--family", "werner", "--range", "omega=0:1:0.5", "--out", csv})
              .code == 0);
    CHECK(run_cli({"scan", "--family", "werner", "--range", "omega=1:0:0.5", "--out", csv})
              .code == 2);
    CHECK(run_cli({"simulate", werner, "--rounds", "1000", "--seed", "1",
                   "--test-fraction", "0.5"})
              .code == 0);
    CHECK(run_cli({"simulate", werner, "--rounds", "1000", "--seed", "1",
                   "--test-fraction", "1.5"})
              .code == 2);
    const std::string zero =
        write_file("zero.json", R"({"family":"gamma","params":{"q":0,"alpha":0.3}})");
    CHECK(run_cli({"simulate", zero, "--rounds", "100", "--seed", "1", "--filter",
                   "0,0"})
              .code == 3);
    CHECK(run_cli({"simulate", werner, "--rounds", "100", "--seed", "1", "--filter",
                   "0.5"})
              .code == 2);
    CHECK(run_cli({"table1", "--eps1", "0.15", "--eps2", "0.02563", "--alphas", "0.2,x",
                   "--qstep", "0.1"})
              .code == 2);
    CHECK(run_cli({"table1", "--eps1", "0.15", "--eps2", "0.02563", "--alphas", "0.2",
                   "--qstep", "0.1"})
              .code == 0);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("scan and simulate outputs are byte-identical across runs") {
    const std::string a = scratch("a.csv").string();
    const std::string b = scratch("b.csv").string();
    const std::vector<std::string> ranges{"q=0:1:0.05", "alpha=0:0.78:0.06"};
    cli::cmd_scan("gamma", ranges, a);
    cli::cmd_scan("gamma", ranges, b);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("q,alpha,steerable,useful", 0) == 0);
    CHECK(slurp(a).find('\r') == std::string::npos);

    const std::string gamma =
        write_file("gamma.json", R"({"family":"gamma","params":{"q":0.9,"alpha":0.25}})");
    const std::vector<std::string> args{"simulate", gamma,      "--rounds", "20000",
                                        "--seed",   "42",       "--filter", "0.3,0.4",
                                        "--emit-keys"};
    const Run x = run_cli(args);
    const Run y = run_cli(args);
    CHECK(x.code == 0);
    CHECK(x.out == y.out);
    const auto j = nlohmann::json::parse(x.out);
    CHECK(j["config"]["seed"].get<int>() == 42);
    CHECK(j["config"]["filter"][0].get<double>() == 0.3);
    CHECK(j["report"]["raw_key_alice"].get<std::string>().size() ==
          j["report"]["raw_key_length"].get<std::size_t>());
}

TEST_CASE("singlet simulation has zero error") {
    const std::string s = write_file(
        "singlet.json", R"({"family":"bell_diagonal","params":{"w1":1,"w2":0,"w3":0,"w4":0}})");
    const Run r = run_cli({"simulate", s, "--rounds", "10000", "--seed", "3"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["report"]["empirical_qber"].get<double>() == 0.0);
}

TEST_CASE("number lists") {
    CHECK(cli::parse_number_list("0.24,0.7,0.2") == std::vector<double>{0.24, 0.7, 0.2});
    CHECK_THROWS_AS(cli::parse_number_list(""), ParseError);
    CHECK_THROWS_AS(cli::parse_number_list("1,"), ParseError);
    CHECK_THROWS_AS(cli::parse_number_list("1,,2"), ParseError);
}
