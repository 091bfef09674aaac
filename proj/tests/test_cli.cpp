// End-to-end checks of the command-line interface: exit codes, output
// formats and the renormalization window.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "telsim/analytics.hpp"
#include "telsim/report_io.hpp"

using namespace telsim;
namespace fs = std::filesystem;

namespace {

const std::string kCli = TELSIM_CLI_PATH;

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
};

CommandResult run_command(const std::string& args) {
    static int counter = 0;
    const fs::path out_path =
        fs::temp_directory_path() / ("telsim_cli_test_" + std::to_string(counter++) + ".out");
    const std::string command = kCli + " " + args + " > " + out_path.string() + " 2>/dev/null";
    const int status = std::system(command.c_str());

    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream file(out_path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    result.stdout_text = buffer.str();
    fs::remove(out_path);
    return result;
}

}  // namespace

TEST_CASE("run: uniform channel reports p_total 0.5") {
    const CommandResult r = run_command(
        "run --schmidt 0.5,0.5,0.5,0.5 --state 1,0,0,0,0,0 --trials 20000 --seed 7");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["analytic"]["p_total"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["meta"]["seed"].get<int>() == 7);
    CHECK(j.contains("empirical"));
    CHECK(j.contains("trace_sample"));
}

TEST_CASE("run: ordering violation exits with code 2") {
    const CommandResult r =
        run_command("run --schmidt 0.5,0.4,0.3,0.2 --state 1,0,0,0,0,0 --trials 100 --seed 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("run: malformed number exits with code 2") {
    const CommandResult r =
        run_command("run --schmidt 0.5,abc,0.5,0.5 --state 1,0,0,0,0,0 --trials 100 --seed 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("run: grossly non-normalized state exits with code 2") {
    const CommandResult r =
        run_command("run --schmidt 0.5,0.5,0.5,0.5 --state 5,0,0,0,0,0 --trials 100 --seed 1");
    CHECK(r.exit_code == 2);
}

TEST_CASE("run: rank-2 channel is accepted after renormalization and never succeeds") {
    // eight-digit 1/sqrt(2): off unit norm by ~3e-9, inside the window
    const CommandResult r = run_command(
        "run --schmidt 0,0,0.70710678,0.70710678 --state 0,0,0.6,0,0.8,0 --trials 20000 --seed 3");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["analytic"]["p_total"].get<double>() == 0.0);
    CHECK(j["empirical"]["success_count"].get<int>() == 0);
    CHECK(j["meta"]["schmidt_renormalized"].get<bool>());
}

TEST_CASE("run: csv output round-trips against the json output") {
    const std::string config =
        "--schmidt 0.1,0.2,0.4,0.88881944173155887 --state 0.6,0,0,0.8,0,0 --trials 5000 "
        "--seed 11";
    const CommandResult json_run = run_command("run " + config + " --format json");
    const CommandResult csv_run = run_command("run " + config + " --format csv");
    REQUIRE(json_run.exit_code == 0);
    REQUIRE(csv_run.exit_code == 0);

    const RunReport from_json =
        run_report_from_json(nlohmann::json::parse(json_run.stdout_text));
    RunReport from_csv = run_report_from_csv(csv_run.stdout_text);
    // timestamps differ between the two invocations; everything else must not
    from_csv.meta.timestamp = from_json.meta.timestamp;
    CHECK(reports_equal(from_json, from_csv));
}

TEST_CASE("sweep: csv header and regime consistency") {
    const CommandResult r = run_command("sweep --resolution 4 --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.stdout_text.rfind("a0,a1,a2,a3,regime,p_total\n", 0) == 0);

    std::istringstream lines(r.stdout_text);
    std::string line;
    std::getline(lines, line);  // header
    bool saw_uniform = false;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string a0, a1, a2, a3, regime, p_total;
        std::getline(fields, a0, ',');
        std::getline(fields, a1, ',');
        std::getline(fields, a2, ',');
        std::getline(fields, a3, ',');
        std::getline(fields, regime, ',');
        std::getline(fields, p_total, ',');

        const SchmidtVector a = SchmidtVector::create(parse_double(a0), parse_double(a1),
                                                      parse_double(a2), parse_double(a3));
        CHECK(to_string(classify_regime(a)) == regime);
        const double p = parse_double(p_total);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        if (parse_double(a0) == 0.5) {
            saw_uniform = true;
            CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    CHECK(saw_uniform);
}

TEST_CASE("verify: single suite passes quickly") {
    const CommandResult r = run_command("verify --suite basis");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("[PASS] basis/gram-matrix-identity") != std::string::npos);
}

TEST_CASE("verify: printed matrices make the unitarity suite fail by name") {
    const CommandResult r = run_command("verify --suite unitarity --printed-matrices");
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("[FAIL] unitarity/correction-matrices") != std::string::npos);
    CHECK(r.stdout_text.find("as printed") != std::string::npos);
}

TEST_CASE("verify: unknown suite exits with code 2") {
    const CommandResult r = run_command("verify --suite nonsense");
    CHECK(r.exit_code == 2);
}
