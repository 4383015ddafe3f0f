#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = WSTAR_CLI_PATH;
const std::string kData = WSTAR_TEST_DATA_DIR;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args, int tag) {
    const std::string out_path =
        "/tmp/wstar_cli_" + std::to_string(::getpid()) + "_" + std::to_string(tag) + ".out";
    const std::string cmd = kCli + " " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(out_path.c_str());
    return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("structure output is deterministic and matches the golden file") {
    const std::string args = "structure " + kData + "/doc_m2_plus_m3.json";
    RunResult first = run(args, 1);
    RunResult second = run(args, 2);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output == slurp(kData + "/golden_structure.json"));
}

TEST_CASE("reduce output matches the golden file") {
    const std::string args = "reduce " + kData + "/doc_m2_plus_m3.json";
    RunResult first = run(args, 3);
    RunResult second = run(args, 4);
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output == slurp(kData + "/golden_reduce.json"));
}

TEST_CASE("standard report on the counterexample matches the golden file") {
    const std::string args = "standard " + kData + "/doc_counterexample.json";
    RunResult first = run(args, 5);
    CHECK(first.exit_code == 0);
    CHECK(first.output == slurp(kData + "/golden_standard.json"));
    nlohmann::json j = nlohmann::json::parse(first.output);
    CHECK(j["standard"] == false);
    CHECK(j["obstruction"][0] == 2);
    CHECK(j["obstruction"][1] == 1);
}

TEST_CASE("gallery runs the three documented cases") {
    RunResult r = run("standard --gallery", 6);
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    REQUIRE(j["gallery"].size() == 3);
    CHECK(j["gallery"][0]["name"] == "remark1-full");
    CHECK(j["gallery"][0]["standard"] == false);
    CHECK(j["gallery"][0]["jmj_residual"].get<double>() <= 1e-9);
    CHECK(j["gallery"][1]["standard"] == false);
    CHECK(j["gallery"][2]["standard"] == true);
}

TEST_CASE("certification is refused with exit 5 on non-standard input") {
    RunResult r = run("standard --certify " + kData + "/doc_counterexample.json", 7);
    CHECK(r.exit_code == 5);
    // the report is still printed
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["standard"] == false);
}

TEST_CASE("emitted certificates re-verify through cmd_verify") {
    RunResult r = run("standard --certify " + kData + "/doc_standard_m2.json", 8);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    REQUIRE(j.contains("certificate"));
    const std::string cert_path = "/tmp/wstar_cert_" + std::to_string(::getpid()) + ".json";
    {
        std::ofstream out(cert_path);
        out << j["certificate"].dump(2) << "\n";
    }
    RunResult v = run("verify " + cert_path, 9);
    std::remove(cert_path.c_str());
    CHECK(v.exit_code == 0);
    nlohmann::json vj = nlohmann::json::parse(v.output);
    CHECK(vj["pass"] == true);
    CHECK(vj["standard"] == true);
}

TEST_CASE("verify runs instance suites") {
    RunResult r = run("verify --suite isotr " + kData + "/doc_standard_m2.json", 10);
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["pass"] == true);
}

TEST_CASE("error paths use the documented exit codes") {
    RunResult unknown = run("verify --suite nope " + kData + "/doc_standard_m2.json", 11);
    CHECK(unknown.exit_code == 2);

    const std::string bad_path = "/tmp/wstar_bad_" + std::to_string(::getpid()) + ".json";
    {
        std::ofstream out(bad_path);
        out << "this is not json";
    }
    RunResult parse = run("structure " + bad_path, 12);
    std::remove(bad_path.c_str());
    CHECK(parse.exit_code == 2);

    RunResult inclusion = run("reduce " + kData + "/doc_bad_central.json", 13);
    CHECK(inclusion.exit_code == 4);
}

TEST_CASE("seed overrides keep runs reproducible") {
    const std::string args =
        "verify --suite module --random 2 --seed 99 --serial " + kData + "/doc_standard_m2.json";
    RunResult a = run(args, 14);
    RunResult b = run(args, 15);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}
