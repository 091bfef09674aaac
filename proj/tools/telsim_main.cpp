// Command-line front end: run single protocol configurations, sweep the
// channel simplex, or execute the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 input validation error.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "telsim/analytics.hpp"
#include "telsim/errors.hpp"
#include "telsim/montecarlo.hpp"
#include "telsim/report_io.hpp"
#include "telsim/verify.hpp"
#include "telsim/version.hpp"

namespace {

using namespace telsim;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitValidation = 2;

// Inputs within this window of unit norm are renormalized with a notice;
// anything further off is rejected.
constexpr double kNormWindow = 1e-8;

std::vector<double> parse_number_list(const std::string& text, std::size_t count,
                                      const std::string& flag) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) values.push_back(parse_double(token));
    if (values.size() != count)
        throw ValidationError(flag + ": expected " + std::to_string(count) +
                              " comma-separated numbers, got " + std::to_string(values.size()));
    return values;
}

void write_output(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file '" + out_path + "'");
    file << payload;
}

struct RunArgs {
    std::string schmidt;
    std::string state = "1,0,0,0,0,0";
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string format = "json";
    std::string out_path;
};

int cmd_run(const RunArgs& args) {
    const std::vector<double> raw_schmidt = parse_number_list(args.schmidt, 4, "--schmidt");
    for (double v : raw_schmidt)
        if (v < 0.0) throw ValidationError("--schmidt: coefficients must be non-negative");
    for (int i = 0; i < 3; ++i)
        if (raw_schmidt[static_cast<std::size_t>(i)] > raw_schmidt[static_cast<std::size_t>(i) + 1])
            throw ValidationError("--schmidt: ordering violated (need a0 <= a1 <= a2 <= a3)");
    double schmidt_norm = 0.0;
    for (double v : raw_schmidt) schmidt_norm += v * v;
    schmidt_norm = std::sqrt(schmidt_norm);
    if (std::abs(schmidt_norm - 1.0) > kNormWindow)
        throw ValidationError("--schmidt: coefficients are not normalized");
    const bool schmidt_renormalized = std::abs(schmidt_norm - 1.0) > 1e-12;
    std::array<double, 4> sc{};
    for (int i = 0; i < 4; ++i)
        sc[static_cast<std::size_t>(i)] = raw_schmidt[static_cast<std::size_t>(i)] / schmidt_norm;
    const SchmidtVector a = SchmidtVector::create(sc);

    const std::vector<double> raw_state = parse_number_list(args.state, 6, "--state");
    std::array<cplx, 3> amps{};
    double state_norm = 0.0;
    for (int i = 0; i < 3; ++i) {
        amps[static_cast<std::size_t>(i)] = cplx{raw_state[static_cast<std::size_t>(2 * i)],
                                                 raw_state[static_cast<std::size_t>(2 * i + 1)]};
        state_norm += std::norm(amps[static_cast<std::size_t>(i)]);
    }
    state_norm = std::sqrt(state_norm);
    if (state_norm <= 0.0 || std::abs(state_norm - 1.0) > kNormWindow)
        throw ValidationError("--state: amplitudes are not normalized");
    const bool state_renormalized = std::abs(state_norm - 1.0) > 1e-12;
    for (cplx& amp : amps) amp /= state_norm;
    const QutritState psi = QutritState::create(amps[0], amps[1], amps[2]);

    if (schmidt_renormalized) std::cerr << "note: schmidt coefficients renormalized\n";
    if (state_renormalized) std::cerr << "note: state amplitudes renormalized\n";
    if (args.trials < 1) throw ValidationError("--trials: at least one trial required");

    RunReport report;
    report.meta.version = kVersion;
    report.meta.timestamp = current_timestamp_utc();
    report.meta.seed = args.seed;
    report.meta.trials = args.trials;
    report.meta.threads = args.threads;
    report.meta.schmidt = a.coeffs();
    report.meta.state = psi.amps();
    report.meta.schmidt_renormalized = schmidt_renormalized;
    report.meta.state_renormalized = state_renormalized;

    report.analytic = decompose_total(psi, a);
    report.empirical = run_many(psi, a, args.trials, args.seed, args.threads);

    const ProtocolRunner runner(psi, a);
    const std::uint64_t sample_count = std::min<std::uint64_t>(5, args.trials);
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        RandomStream stream = RandomStream::substream(args.seed, i);
        report.trace_sample.push_back(runner.run(stream));
    }

    if (args.format == "json") {
        write_output(to_json(report).dump(2) + "\n", args.out_path);
    } else if (args.format == "csv") {
        write_output(to_csv(report), args.out_path);
    } else {
        throw ValidationError("--format must be json or csv");
    }
    return kExitOk;
}

struct SweepArgs {
    int resolution = 10;
    std::string format = "csv";
    std::string out_path;
};

int cmd_sweep(const SweepArgs& args) {
    const std::vector<SweepRow> rows = sweep(args.resolution);
    if (args.format == "csv") {
        write_output(sweep_to_csv(rows), args.out_path);
    } else if (args.format == "json") {
        write_output(sweep_to_json(rows, args.resolution).dump(2) + "\n", args.out_path);
    } else {
        throw ValidationError("--format must be json or csv");
    }

    const SweepRow* best = nullptr;
    for (const SweepRow& row : rows)
        if (!best || row.p_total > best->p_total) best = &row;
    if (best) {
        std::cerr << "max p_total " << format_double(best->p_total) << " at a=("
                  << format_double(best->schmidt.a0()) << "," << format_double(best->schmidt.a1())
                  << "," << format_double(best->schmidt.a2()) << ","
                  << format_double(best->schmidt.a3()) << ") regime " << to_string(best->regime)
                  << "\n";
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    std::uint64_t seed = 20260809;
    std::uint64_t trials = 100000;
    int threads = 0;
    bool printed_matrices = false;
};

int cmd_verify(const VerifyArgs& args) {
    verify::Options options;
    options.seed = args.seed;
    options.mc_trials = args.trials;
    options.qubit_trials = std::max<std::uint64_t>(args.trials / 10, 1000);
    options.threads = args.threads;
    options.printed_matrices = args.printed_matrices;

    std::vector<verify::SuiteResult> results;
    if (args.suite.empty()) {
        results = verify::run_all(options);
    } else {
        results.push_back(verify::run_suite(args.suite, options));
    }

    double total_seconds = 0.0;
    for (const verify::SuiteResult& suite : results) {
        for (const verify::CheckResult& check : suite.checks) {
            std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << suite.suite << "/"
                      << check.name;
            if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
            std::cout << "\n";
        }
        std::cout << "suite " << suite.suite << ": " << (suite.passed ? "PASS" : "FAIL") << " ("
                  << format_double(suite.seconds) << " s)\n";
        total_seconds += suite.seconds;
    }
    const bool ok = verify::all_passed(results);
    std::cout << "verify: " << (ok ? "ALL SUITES PASSED" : "FAILURES DETECTED") << " ("
              << format_double(total_seconds) << " s)\n";
    return ok ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic qutrit teleportation simulator (two-ququart channel)"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run one configuration: analytics + sampling");
    run->add_option("--schmidt", run_args.schmidt,
                    "Channel coefficients a0,a1,a2,a3 (ordered, normalized)")
        ->required();
    run->add_option("--state", run_args.state,
                    "Input qutrit as re0,im0,re1,im1,re2,im2 (default 1,0,0,0,0,0)");
    run->add_option("--trials", run_args.trials, "Monte-Carlo trials (default 10000)");
    run->add_option("--seed", run_args.seed, "Master seed (default 0)");
    run->add_option("--threads", run_args.threads, "Worker threads, 0 = auto");
    run->add_option("--format", run_args.format, "json or csv (default json)");
    run->add_option("--out", run_args.out_path, "Output path (default stdout)");

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Tabulate p_total over the channel grid");
    sweep_cmd->add_option("--resolution", sweep_args.resolution, "Grid resolution K >= 2")
        ->required();
    sweep_cmd->add_option("--format", sweep_args.format, "csv or json (default csv)");
    sweep_cmd->add_option("--out", sweep_args.out_path, "Output path (default stdout)");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
    verify_cmd->add_option("--suite", verify_args.suite, "Run a single named suite");
    verify_cmd->add_option("--seed", verify_args.seed, "Suite seed");
    verify_cmd->add_option("--trials", verify_args.trials, "Monte-Carlo trials per channel");
    verify_cmd->add_option("--threads", verify_args.threads, "Worker threads, 0 = auto");
    verify_cmd->add_flag("--printed-matrices", verify_args.printed_matrices,
                         "Debug: check the as-printed correction matrices (expected to fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitVerifyFailure;
    }
    return kExitOk;
}
