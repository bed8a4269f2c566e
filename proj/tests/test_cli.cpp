#include "gtd_cli.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = gtd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("gtd_cli_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("systems listing", "[cli]") {
    const Run r = run({"systems"});
    CHECK(r.code == 0);
    CHECK(r.out.find("vdw (S, V; a, b, k)") != std::string::npos);
    CHECK(r.out.find("kerr_newman (S, J, Q)") != std::string::npos);
    CHECK(r.out.find("ideal_gas") < r.out.find("kerr"));
    CHECK(r.out.find("kerr (") < r.out.find("kerr_newman"));
    CHECK(r.out.find("reissner_nordstrom") < r.out.find("vdw ("));
}

TEST_CASE("eval", "[cli]") {
    const Run rn = run({"eval", "--system", "reissner_nordstrom", "--point", "S=6.2831853,Q=1", "--quantity", "curvature"});
    CHECK(rn.code == 0);
    const auto pos = rn.out.find("curvature: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(rn.out.substr(pos + 11)) == Catch::Approx(160.0 / 27).epsilon(1e-6));

    const Run ideal = run({"eval", "--system", "ideal_gas", "--point", "S=0,V=1", "--quantity", "metric", "--format", "json"});
    CHECK(ideal.code == 0);
    const auto j = nlohmann::json::parse(ideal.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["command"] == "eval");
    CHECK(j["values"]["metric"][0][0].get<double>() == Catch::Approx(4.0 / 9));
    CHECK(j["values"]["metric"][0][1].get<double>() == Catch::Approx(-4.0 / 9));
    CHECK(j["values"]["metric"][1][1].get<double>() == Catch::Approx(10.0 / 9));

    CHECK(run({"eval", "--system", "vdw", "--point", "S=0,V=0.05", "--params", "b=0.1"}).code == 2);
    CHECK(run({"eval", "--system", "reissner_nordstrom", "--point", "S=pi,Q=1", "--quantity", "curvature"}).code == 3);
    CHECK(run({"eval", "--system", "vdw", "--point", "S=0"}).code == 2);
    CHECK(run({"eval", "--system", "vdw", "--point", "S=0,V=1", "--params", "c=1"}).code == 2);
    CHECK(run({"eval", "--system", "nosuch", "--point", "S=0,V=1"}).code == 2);
    CHECK(run({"eval", "--system", "vdw", "--point", "S=0,V=1", "--quantity", "torsion"}).code == 2);

    const Run file = run({"eval", "--system", GTD_TEST_DATA_DIR "/sphere.gtd", "--point", "theta=1,phi=0", "--quantity", "curvature"});
    CHECK(file.code == 0);
    CHECK(file.out.find("curvature: 2") != std::string::npos);
}

TEST_CASE("scan", "[cli]") {
    const std::string csv = temp_path("rn.csv");
    const Run rn = run({"scan", "--system", "rn_closed", "--range", "S=0.5:10:500", "--pin", "Q=1", "--quantity", "detg",
                        "--output", csv});
    CHECK(rn.code == 0);
    CHECK(rn.out.find("singular points: 1") != std::string::npos);
    const std::string body = slurp(csv);
    CHECK(body.rfind("S,Q,det_g,status\n", 0) == 0);
    CHECK(std::count(body.begin(), body.end(), '\n') == 501);
    std::remove(csv.c_str());

    const Run kerr = run({"scan", "--system", "kerr", "--range", "S=3:30:100,J=0.1:2:50", "--quantity", "curvature", "--no-roots"});
    CHECK(kerr.code == 0);
    const auto pos = kerr.out.find("max |value|: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(kerr.out.substr(pos + 13)) <= 1e-8);

    const Run empty = run({"scan", "--system", "vdw", "--range", "S=0:1:3,V=0.01:0.05:3", "--output", "-"});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("domain_error") != std::string::npos);
    CHECK(empty.err.find("domain_error=9") != std::string::npos);

    const std::string json = temp_path("scan.json");
    const Run fit = run({"scan", "--system", "reissner_nordstrom", "--range", "S=0.5:10:20", "--pin", "Q=1", "--fit-center",
                         "S=pi,Q=1", "--fit-direction", "S=1", "--fit-offsets", "pi:4:16", "--output", json});
    CHECK(fit.code == 0);
    const auto j = nlohmann::json::parse(slurp(json));
    CHECK(j["fits"][0]["exponent"].get<double>() == Catch::Approx(2.0).margin(0.05));
    CHECK(j["grid"]["axes"].size() == 2);
    std::remove(json.c_str());

    CHECK(run({"scan", "--system", "vdw", "--range", "S=0:1", "--pin", "V=1"}).code == 2);
    CHECK(run({"scan", "--system", "vdw", "--range", "S=1:0:3", "--pin", "V=1"}).code == 2);
    CHECK(run({"scan", "--system", "vdw", "--range", "S=0:1:x", "--pin", "V=1"}).code == 2);
    CHECK(run({"scan", "--system", "vdw", "--range", "S=0:1:3", "--pin", "V=1", "--output", "/nonexistent/dir/out.csv"}).code == 4);
}

TEST_CASE("scan output is the same for any worker count", "[cli]") {
    const Run one = run({"scan", "--system", "vdw", "--range", "S=0:2:7,V=0.2:3:9", "--workers", "1", "--output", "-"});
    const Run four = run({"scan", "--system", "vdw", "--range", "S=0:2:7,V=0.2:3:9", "--workers", "4", "--output", "-"});
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
}

TEST_CASE("check", "[cli]") {
    CHECK(run({"check", "legendre", "--n", "2", "--transform", "total", "--trials", "100"}).code == 0);
    CHECK(run({"check", "legendre", "--n", "3", "--transform", "identity"}).code == 0);
    const Run partial = run({"check", "legendre", "--n", "2", "--transform", "subset=1"});
    CHECK(partial.code == 1);
    CHECK(partial.out.find("FAIL") != std::string::npos);
    CHECK(run({"check", "euler", "--system", "kerr_newman", "--beta", "0.5", "--weights", "1,1,0.5", "--trials", "20"}).code == 0);
    CHECK(run({"check", "gibbs-duhem", "--system", "kerr_newman"}).code == 0);
    CHECK(run({"check", "euler", "--system", GTD_TEST_DATA_DIR "/product.gtd"}).code == 0);
    CHECK(run({"check", "euler", "--system", "vdw"}).code == 1);
    CHECK(run({"check", "first-law", "--system", "vdw"}).code == 0);
    for (const char* n : {"1", "2", "3"}) CHECK(run({"check", "contact", "--n", n}).code == 0);

    CHECK(run({"check", "bogus"}).code == 2);
    CHECK(run({"check", "euler"}).code == 2);
    CHECK(run({"check", "legendre", "--transform", "subset=9"}).code == 2);
    CHECK(run({"check", "euler", "--system", "kerr_newman", "--weights", "1,1"}).code == 2);
    CHECK(run({"check", "contact", "--n", "7"}).code == 2);
    CHECK(run({"check", "euler", "--system", "kerr_newman", "--box", "S=1:2,Q=0.1:0.5"}).code == 0);
    CHECK(run({"check", "euler", "--system", "kerr_newman", "--box", "S=2:1"}).code == 2);
    CHECK(run({"check", "euler", "--system", "kerr_newman", "--box", "X=1:2"}).code == 2);

    const std::string path = temp_path("check.json");
    CHECK(run({"check", "contact", "--n", "2", "--output", path}).code == 0);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["residuals"]["pass"] == true);
    CHECK(j["residuals"]["values"].size() == 10);
    std::remove(path.c_str());
}

TEST_CASE("usage errors and help", "[cli]") {
    const Run help = run({"--help"});
    CHECK(help.code == 0);
    const Run check_help = run({"check", "--help"});
    CHECK(check_help.code == 0);
    CHECK(check_help.out.find("1e-9") != std::string::npos);
    CHECK(check_help.out.find("1e-10") != std::string::npos);
    CHECK(check_help.out.find("1e-12") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"eval", "--point", "S=1"}).code == 2);
}
