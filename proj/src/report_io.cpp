#include "telsim/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <map>
#include <sstream>
#include <stdexcept>

#include "telsim/errors.hpp"
#include "telsim/version.hpp"

namespace telsim {

using nlohmann::json;

bool reports_equal(const RunReport& a, const RunReport& b) {
    if (!(a.meta == b.meta)) return false;
    if (!(a.analytic.regime == b.analytic.regime)) return false;
    if (a.analytic.p_outcome.p != b.analytic.p_outcome.p) return false;
    if (a.analytic.p_success_given_outcome != b.analytic.p_success_given_outcome) return false;
    if (a.analytic.per_outcome_contribution != b.analytic.per_outcome_contribution) return false;
    if (a.analytic.p_total != b.analytic.p_total) return false;
    if (!(a.empirical == b.empirical)) return false;
    if (a.trace_sample.size() != b.trace_sample.size()) return false;
    for (std::size_t i = 0; i < a.trace_sample.size(); ++i)
        if (!(a.trace_sample[i] == b.trace_sample[i])) return false;
    return true;
}

std::string current_timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                      std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ValidationError("parse_double: malformed number '" + text + "'");
    return value;
}

namespace {

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) { return cplx{j.at(0).get<double>(), j.at(1).get<double>()}; }

json trace_to_json(const ProtocolTrace& trace) {
    json j;
    j["seed"] = trace.seed;
    j["outcome"] = trace.outcome;
    j["regime"] = to_string(trace.regime);
    j["aux_result"] = trace.aux_result ? json(*trace.aux_result) : json(nullptr);
    j["success"] = trace.success;
    j["fidelity_on_success"] =
        trace.fidelity_on_success ? json(*trace.fidelity_on_success) : json(nullptr);
    if (trace.final_state) {
        json amps = json::array();
        for (const cplx& amp : trace.final_state->amps()) amps.push_back(complex_to_json(amp));
        j["final_state"] = amps;
    } else {
        j["final_state"] = nullptr;
    }
    return j;
}

ProtocolTrace trace_from_json(const json& j) {
    ProtocolTrace trace;
    trace.seed = j.at("seed").get<std::uint64_t>();
    trace.outcome = j.at("outcome").get<int>();
    trace.regime = parse_regime(j.at("regime").get<std::string>());
    if (!j.at("aux_result").is_null()) trace.aux_result = j.at("aux_result").get<int>();
    trace.success = j.at("success").get<bool>();
    if (!j.at("fidelity_on_success").is_null())
        trace.fidelity_on_success = j.at("fidelity_on_success").get<double>();
    if (!j.at("final_state").is_null()) {
        const json& amps = j.at("final_state");
        trace.final_state = QutritState::create(complex_from_json(amps.at(0)),
                                                complex_from_json(amps.at(1)),
                                                complex_from_json(amps.at(2)));
    }
    return trace;
}

}  // namespace

json to_json(const RunReport& report) {
    json meta;
    meta["version"] = report.meta.version;
    meta["timestamp"] = report.meta.timestamp;
    meta["seed"] = report.meta.seed;
    meta["trials"] = report.meta.trials;
    meta["threads"] = report.meta.threads;
    meta["schmidt"] = report.meta.schmidt;
    json state = json::array();
    for (const cplx& amp : report.meta.state) state.push_back(complex_to_json(amp));
    meta["state"] = state;
    meta["schmidt_renormalized"] = report.meta.schmidt_renormalized;
    meta["state_renormalized"] = report.meta.state_renormalized;

    json analytic;
    analytic["regime"] = to_string(report.analytic.regime);
    analytic["p_outcome"] = report.analytic.p_outcome.p;
    analytic["p_success_given_outcome"] = report.analytic.p_success_given_outcome;
    analytic["per_outcome_contribution"] = report.analytic.per_outcome_contribution;
    analytic["p_total"] = report.analytic.p_total;

    json empirical;
    empirical["trials"] = report.empirical.trials;
    empirical["seed"] = report.empirical.seed;
    empirical["outcome_counts"] = report.empirical.outcome_counts;
    empirical["success_count"] = report.empirical.success_count;
    empirical["success_rate"] = report.empirical.success_rate;
    empirical["mean_fidelity_on_success"] = report.empirical.mean_fidelity_on_success;
    empirical["min_fidelity_on_success"] = report.empirical.min_fidelity_on_success;
    empirical["z_success_rate"] = report.empirical.z.success_rate;
    empirical["z_outcome"] = report.empirical.z.outcome;

    json traces = json::array();
    for (const ProtocolTrace& trace : report.trace_sample) traces.push_back(trace_to_json(trace));

    return json{{"meta", meta},
                {"analytic", analytic},
                {"empirical", empirical},
                {"trace_sample", traces}};
}

RunReport run_report_from_json(const json& j) {
    RunReport report;
    const json& meta = j.at("meta");
    report.meta.version = meta.at("version").get<std::string>();
    report.meta.timestamp = meta.at("timestamp").get<std::string>();
    report.meta.seed = meta.at("seed").get<std::uint64_t>();
    report.meta.trials = meta.at("trials").get<std::uint64_t>();
    report.meta.threads = meta.at("threads").get<int>();
    report.meta.schmidt = meta.at("schmidt").get<std::array<double, 4>>();
    for (int i = 0; i < 3; ++i)
        report.meta.state[static_cast<std::size_t>(i)] =
            complex_from_json(meta.at("state").at(static_cast<std::size_t>(i)));
    report.meta.schmidt_renormalized = meta.at("schmidt_renormalized").get<bool>();
    report.meta.state_renormalized = meta.at("state_renormalized").get<bool>();

    const json& analytic = j.at("analytic");
    report.analytic.regime = parse_regime(analytic.at("regime").get<std::string>());
    report.analytic.p_outcome.p = analytic.at("p_outcome").get<std::array<double, 12>>();
    report.analytic.p_success_given_outcome =
        analytic.at("p_success_given_outcome").get<std::array<double, 8>>();
    report.analytic.per_outcome_contribution =
        analytic.at("per_outcome_contribution").get<std::array<double, 8>>();
    report.analytic.p_total = analytic.at("p_total").get<double>();

    const json& empirical = j.at("empirical");
    report.empirical.trials = empirical.at("trials").get<std::uint64_t>();
    report.empirical.seed = empirical.at("seed").get<std::uint64_t>();
    report.empirical.outcome_counts =
        empirical.at("outcome_counts").get<std::array<std::uint64_t, 12>>();
    report.empirical.success_count = empirical.at("success_count").get<std::uint64_t>();
    report.empirical.success_rate = empirical.at("success_rate").get<double>();
    report.empirical.mean_fidelity_on_success =
        empirical.at("mean_fidelity_on_success").get<double>();
    report.empirical.min_fidelity_on_success =
        empirical.at("min_fidelity_on_success").get<double>();
    report.empirical.z.success_rate = empirical.at("z_success_rate").get<double>();
    report.empirical.z.outcome = empirical.at("z_outcome").get<std::array<double, 12>>();

    for (const json& trace : j.at("trace_sample")) report.trace_sample.push_back(trace_from_json(trace));
    return report;
}

namespace {

class CsvWriter {
public:
    void put(const std::string& key, const std::string& value) {
        out_ += key;
        out_ += ',';
        out_ += value;
        out_ += '\n';
    }
    void put(const std::string& key, double value) { put(key, format_double(value)); }
    void put(const std::string& key, std::uint64_t value) { put(key, std::to_string(value)); }
    void put(const std::string& key, int value) { put(key, std::to_string(value)); }
    void put(const std::string& key, bool value) { put(key, std::string(value ? "1" : "0")); }

    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class CsvReader {
public:
    explicit CsvReader(const std::string& text) {
        std::istringstream stream(text);
        std::string line;
        while (std::getline(stream, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw ValidationError("report CSV: malformed line '" + line + "'");
            fields_[line.substr(0, comma)] = line.substr(comma + 1);
        }
    }

    bool has(const std::string& key) const { return fields_.count(key) > 0; }
    const std::string& get(const std::string& key) const {
        auto it = fields_.find(key);
        if (it == fields_.end()) throw ValidationError("report CSV: missing key '" + key + "'");
        return it->second;
    }
    double get_double(const std::string& key) const { return parse_double(get(key)); }
    std::uint64_t get_u64(const std::string& key) const { return std::stoull(get(key)); }
    int get_int(const std::string& key) const { return std::stoi(get(key)); }
    bool get_bool(const std::string& key) const { return get(key) == "1"; }

private:
    std::map<std::string, std::string> fields_;
};

}  // namespace

std::string to_csv(const RunReport& report) {
    CsvWriter w;
    w.put("meta.version", report.meta.version);
    w.put("meta.timestamp", report.meta.timestamp);
    w.put("meta.seed", report.meta.seed);
    w.put("meta.trials", report.meta.trials);
    w.put("meta.threads", report.meta.threads);
    for (int i = 0; i < 4; ++i)
        w.put("meta.schmidt." + std::to_string(i), report.meta.schmidt[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 3; ++i) {
        const cplx& amp = report.meta.state[static_cast<std::size_t>(i)];
        w.put("meta.state." + std::to_string(i) + ".re", amp.real());
        w.put("meta.state." + std::to_string(i) + ".im", amp.imag());
    }
    w.put("meta.schmidt_renormalized", report.meta.schmidt_renormalized);
    w.put("meta.state_renormalized", report.meta.state_renormalized);

    w.put("analytic.regime", to_string(report.analytic.regime));
    for (int i = 0; i < 12; ++i)
        w.put("analytic.p_outcome." + std::to_string(i),
              report.analytic.p_outcome.p[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 8; ++i)
        w.put("analytic.p_success_given_outcome." + std::to_string(i),
              report.analytic.p_success_given_outcome[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 8; ++i)
        w.put("analytic.per_outcome_contribution." + std::to_string(i),
              report.analytic.per_outcome_contribution[static_cast<std::size_t>(i)]);
    w.put("analytic.p_total", report.analytic.p_total);

    w.put("empirical.trials", report.empirical.trials);
    w.put("empirical.seed", report.empirical.seed);
    for (int i = 0; i < 12; ++i)
        w.put("empirical.outcome_counts." + std::to_string(i),
              report.empirical.outcome_counts[static_cast<std::size_t>(i)]);
    w.put("empirical.success_count", report.empirical.success_count);
    w.put("empirical.success_rate", report.empirical.success_rate);
    w.put("empirical.mean_fidelity_on_success", report.empirical.mean_fidelity_on_success);
    w.put("empirical.min_fidelity_on_success", report.empirical.min_fidelity_on_success);
    w.put("empirical.z_success_rate", report.empirical.z.success_rate);
    for (int i = 0; i < 12; ++i)
        w.put("empirical.z_outcome." + std::to_string(i),
              report.empirical.z.outcome[static_cast<std::size_t>(i)]);

    w.put("trace_sample.count", static_cast<std::uint64_t>(report.trace_sample.size()));
    for (std::size_t t = 0; t < report.trace_sample.size(); ++t) {
        const ProtocolTrace& trace = report.trace_sample[t];
        const std::string prefix = "trace_sample." + std::to_string(t) + ".";
        w.put(prefix + "seed", trace.seed);
        w.put(prefix + "outcome", trace.outcome);
        w.put(prefix + "regime", to_string(trace.regime));
        w.put(prefix + "aux_result",
              trace.aux_result ? std::to_string(*trace.aux_result) : std::string("none"));
        w.put(prefix + "success", trace.success);
        w.put(prefix + "fidelity_on_success",
              trace.fidelity_on_success ? format_double(*trace.fidelity_on_success)
                                        : std::string("none"));
        if (trace.final_state) {
            const auto& amps = trace.final_state->amps();
            for (int i = 0; i < 3; ++i) {
                w.put(prefix + "final_state." + std::to_string(i) + ".re",
                      amps[static_cast<std::size_t>(i)].real());
                w.put(prefix + "final_state." + std::to_string(i) + ".im",
                      amps[static_cast<std::size_t>(i)].imag());
            }
        } else {
            w.put(prefix + "final_state", std::string("none"));
        }
    }
    return w.take();
}

RunReport run_report_from_csv(const std::string& text) {
    const CsvReader r(text);
    RunReport report;
    report.meta.version = r.get("meta.version");
    report.meta.timestamp = r.get("meta.timestamp");
    report.meta.seed = r.get_u64("meta.seed");
    report.meta.trials = r.get_u64("meta.trials");
    report.meta.threads = r.get_int("meta.threads");
    for (int i = 0; i < 4; ++i)
        report.meta.schmidt[static_cast<std::size_t>(i)] =
            r.get_double("meta.schmidt." + std::to_string(i));
    for (int i = 0; i < 3; ++i)
        report.meta.state[static_cast<std::size_t>(i)] =
            cplx{r.get_double("meta.state." + std::to_string(i) + ".re"),
                 r.get_double("meta.state." + std::to_string(i) + ".im")};
    report.meta.schmidt_renormalized = r.get_bool("meta.schmidt_renormalized");
    report.meta.state_renormalized = r.get_bool("meta.state_renormalized");

    report.analytic.regime = parse_regime(r.get("analytic.regime"));
    for (int i = 0; i < 12; ++i)
        report.analytic.p_outcome.p[static_cast<std::size_t>(i)] =
            r.get_double("analytic.p_outcome." + std::to_string(i));
    for (int i = 0; i < 8; ++i)
        report.analytic.p_success_given_outcome[static_cast<std::size_t>(i)] =
            r.get_double("analytic.p_success_given_outcome." + std::to_string(i));
    for (int i = 0; i < 8; ++i)
        report.analytic.per_outcome_contribution[static_cast<std::size_t>(i)] =
            r.get_double("analytic.per_outcome_contribution." + std::to_string(i));
    report.analytic.p_total = r.get_double("analytic.p_total");

    report.empirical.trials = r.get_u64("empirical.trials");
    report.empirical.seed = r.get_u64("empirical.seed");
    for (int i = 0; i < 12; ++i)
        report.empirical.outcome_counts[static_cast<std::size_t>(i)] =
            r.get_u64("empirical.outcome_counts." + std::to_string(i));
    report.empirical.success_count = r.get_u64("empirical.success_count");
    report.empirical.success_rate = r.get_double("empirical.success_rate");
    report.empirical.mean_fidelity_on_success = r.get_double("empirical.mean_fidelity_on_success");
    report.empirical.min_fidelity_on_success = r.get_double("empirical.min_fidelity_on_success");
    report.empirical.z.success_rate = r.get_double("empirical.z_success_rate");
    for (int i = 0; i < 12; ++i)
        report.empirical.z.outcome[static_cast<std::size_t>(i)] =
            r.get_double("empirical.z_outcome." + std::to_string(i));

    const std::uint64_t count = r.get_u64("trace_sample.count");
    for (std::uint64_t t = 0; t < count; ++t) {
        const std::string prefix = "trace_sample." + std::to_string(t) + ".";
        ProtocolTrace trace;
        trace.seed = r.get_u64(prefix + "seed");
        trace.outcome = r.get_int(prefix + "outcome");
        trace.regime = parse_regime(r.get(prefix + "regime"));
        if (r.get(prefix + "aux_result") != "none")
            trace.aux_result = r.get_int(prefix + "aux_result");
        trace.success = r.get_bool(prefix + "success");
        if (r.get(prefix + "fidelity_on_success") != "none")
            trace.fidelity_on_success = r.get_double(prefix + "fidelity_on_success");
        if (!r.has(prefix + "final_state")) {
            trace.final_state = QutritState::create(
                cplx{r.get_double(prefix + "final_state.0.re"),
                     r.get_double(prefix + "final_state.0.im")},
                cplx{r.get_double(prefix + "final_state.1.re"),
                     r.get_double(prefix + "final_state.1.im")},
                cplx{r.get_double(prefix + "final_state.2.re"),
                     r.get_double(prefix + "final_state.2.im")});
        }
        report.trace_sample.push_back(std::move(trace));
    }
    return report;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "a0,a1,a2,a3,regime,p_total\n";
    for (const SweepRow& row : rows) {
        for (int i = 0; i < 4; ++i) {
            out += format_double(row.schmidt.coeff(i));
            out += ',';
        }
        out += to_string(row.regime);
        out += ',';
        out += format_double(row.p_total);
        out += '\n';
    }
    return out;
}

json sweep_to_json(const std::vector<SweepRow>& rows, int resolution) {
    json out;
    out["meta"] = {{"version", kVersion}, {"resolution", resolution}};
    json rows_json = json::array();
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& row = rows[i];
        rows_json.push_back({{"a0", row.schmidt.a0()},
                             {"a1", row.schmidt.a1()},
                             {"a2", row.schmidt.a2()},
                             {"a3", row.schmidt.a3()},
                             {"regime", to_string(row.regime)},
                             {"p_total", row.p_total}});
        if (row.p_total > rows[best].p_total) best = i;
    }
    out["rows"] = rows_json;
    if (!rows.empty()) out["max_row"] = rows_json.at(best);
    return out;
}

}  // namespace telsim
