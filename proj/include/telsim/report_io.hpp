#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "telsim/analytics.hpp"
#include "telsim/montecarlo.hpp"

namespace telsim {

struct RunReportMeta {
    std::string version;
    std::string timestamp;  // ISO 8601 UTC
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int threads = 0;
    std::array<double, 4> schmidt{};
    std::array<cplx, 3> state{};
    bool schmidt_renormalized = false;
    bool state_renormalized = false;

    bool operator==(const RunReportMeta& other) const = default;
};

// The full `run` output: analytic probability table, empirical aggregate and
// a handful of replayable traces.
struct RunReport {
    RunReportMeta meta;
    AnalyticReport analytic;
    EmpiricalReport empirical;
    std::vector<ProtocolTrace> trace_sample;
};

bool reports_equal(const RunReport& a, const RunReport& b);

std::string current_timestamp_utc();

// Locale-independent, 17 significant digits: parses back to the same bits.
std::string format_double(double value);
double parse_double(const std::string& text);

nlohmann::json to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);

// Flat `key,value` lines carrying exactly the JSON content.
std::string to_csv(const RunReport& report);
RunReport run_report_from_csv(const std::string& text);

// Sweep table. CSV header is exactly `a0,a1,a2,a3,regime,p_total` with LF
// line endings.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, int resolution);

}  // namespace telsim
