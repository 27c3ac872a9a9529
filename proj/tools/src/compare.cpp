#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include "kinlab/runner/runner.hpp"

namespace kinlab::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double three_way_tolerance = 0.02;
constexpr double ratio_tolerance = 0.02;
constexpr double default_rate_tolerance = 0.05;

const char* const run_kinds[] = {"mc", "quantum_kramers", "smoluchowski", "gaussian", "high_friction"};

struct Artifacts {
    json summary;
    json manifest;
};

json read_json(const fs::path& path, const std::string& field) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError(field + ": missing artifact " + path.string());
    std::ostringstream text;
    text << is.rdbuf();
    return parse_json_text(text.str(), path.string());
}

Artifacts load_run(const json& runs, const std::string& kind) {
    const std::string field = "runs." + kind;
    if (!runs[kind].is_string()) throw ConfigError(field + ": expected a run directory");
    const fs::path dir = runs[kind].get<std::string>();
    Artifacts a{read_json(dir / "summary.json", field), read_json(dir / "manifest.json", field)};
    if (!a.manifest.contains("config") || !a.manifest["config"].contains("physics"))
        throw ConfigError(field + ": manifest.json has no physics block");
    return a;
}

double number_in(const json& j, const std::string& key, const std::string& field) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(field + ": summary.json lacks '" + key + "'");
    return j[key].get<double>();
}

/// 1 + (eta beta hbar)^2 / 16 from the physics echoed in a manifest.
double expected_ratio(const Artifacts& a, const std::string& field) {
    const auto& ph = a.manifest["config"]["physics"];
    const double eta = number_in(a.summary, "eta", field);
    const double x = eta * ph.at("beta").get<double>() * ph.at("hbar").get<double>();
    return 1.0 + x * x / 16.0;
}

struct Row {
    std::string item;
    double value = 0.0;
    std::optional<double> reference;
    bool pass = false;
    std::optional<double> rel_diff() const {
        if (!reference) return std::nullopt;
        return std::abs(value - *reference) / std::abs(*reference);
    }
};

std::string format(std::optional<double> v, int digits = 10) {
    if (!v) return "";
    std::ostringstream os;
    os << std::setprecision(digits) << *v;
    return os.str();
}

}  // namespace

RunOutcome compare_runs(const json& spec, const RunOptions& options) {
    RunOutcome out;
    std::vector<Row> rows;
    try {
        if (!spec.is_object()) throw ConfigError("report spec: expected an object");
        for (const auto& [key, value] : spec.items())
            if (key != "runs" && key != "output") throw ConfigError(key + ": unknown key");
        if (!spec.contains("runs") || !spec["runs"].is_object()) throw ConfigError("runs: required field is missing");
        const auto& runs = spec["runs"];
        for (const auto& [key, value] : runs.items()) {
            bool known = false;
            for (const char* k : run_kinds) known = known || key == k;
            if (!known) throw ConfigError("runs." + key + ": unknown key");
        }
        if (runs.empty()) throw ConfigError("runs: no run directories given");
        if (options.out)
            out.out_dir = *options.out;
        else if (spec.contains("output") && spec["output"].is_string())
            out.out_dir = spec["output"].get<std::string>();
        else
            throw ConfigError("output: required field is missing (or pass --out)");

        std::optional<Artifacts> mc, qk, smol, gauss, sweep;
        if (runs.contains("mc")) mc = load_run(runs, "mc");
        if (runs.contains("quantum_kramers")) qk = load_run(runs, "quantum_kramers");
        if (runs.contains("smoluchowski")) smol = load_run(runs, "smoluchowski");
        if (runs.contains("gaussian")) gauss = load_run(runs, "gaussian");
        if (runs.contains("high_friction")) sweep = load_run(runs, "high_friction");

        if (mc) {
            const auto& s = mc->summary;
            const double tol = s.contains("rate_tolerance") ? s["rate_tolerance"].get<double>() : default_rate_tolerance;
            Row r{"mc_relaxation_rate_vs_eta", number_in(s, "fitted_rate", "runs.mc"), number_in(s, "eta", "runs.mc")};
            r.pass = r.rel_diff() < tol;
            rows.push_back(r);
        }

        std::vector<Row> slopes;
        if (smol) {
            slopes.push_back(
                {"msd_slope_smoluchowski", number_in(smol->summary, "variance_slope", "runs.smoluchowski")});
        }
        if (qk)
            slopes.push_back({"msd_slope_quantum_kramers", number_in(qk->summary, "late_msd_slope", "runs.quantum_kramers")});
        if (gauss)
            slopes.push_back({"msd_slope_gaussian", number_in(gauss->summary, "long_time_msd_slope", "runs.gaussian")});
        if (slopes.size() >= 2) {
            const double ref = slopes.front().value;
            double lo = slopes.front().value, hi = lo;
            for (auto& r : slopes) {
                r.reference = ref;
                r.pass = r.rel_diff() < three_way_tolerance;
                lo = std::min(lo, r.value);
                hi = std::max(hi, r.value);
                rows.push_back(r);
            }
            Row spread{"msd_slope_spread", (hi - lo) / std::abs(lo)};
            spread.pass = spread.value < three_way_tolerance;
            rows.push_back(spread);
        }

        if (smol) {
            Row r{"coefficient_ratio_smoluchowski", number_in(smol->summary, "coefficient_ratio", "runs.smoluchowski"),
                  expected_ratio(*smol, "runs.smoluchowski")};
            r.pass = r.rel_diff() < 1e-12;
            rows.push_back(r);
        }
        if (qk && qk->summary.contains("measured_ratio")) {
            Row r{"coefficient_ratio_quantum_kramers", number_in(qk->summary, "measured_ratio", "runs.quantum_kramers"),
                  expected_ratio(*qk, "runs.quantum_kramers")};
            r.pass = r.rel_diff() < ratio_tolerance;
            rows.push_back(r);
        }

        if (sweep) {
            const auto& s = sweep->summary;
            if (!s.contains("points") || !s["points"].is_array())
                throw ConfigError("runs.high_friction: summary.json lacks 'points'");
            for (const auto& p : s["points"]) {
                rows.push_back({"high_friction_deviation_eta_" + format(p.at("eta").get<double>()),
                                p.at("deviation").get<double>(), std::nullopt, true});
            }
            Row mono{"high_friction_monotone", s.value("monotone_decreasing", false) ? 1.0 : 0.0};
            mono.pass = mono.value == 1.0;
            rows.push_back(mono);
            Row slope{"high_friction_loglog_slope", number_in(s, "loglog_slope", "runs.high_friction")};
            slope.pass = slope.value >= -2.0 && slope.value <= -0.7;
            rows.push_back(slope);
        }
    } catch (const ConfigError& e) {
        out.exit_code = exit_config_error;
        out.message = std::string("config error: ") + e.what();
        return out;
    } catch (const json::exception& e) {
        out.exit_code = exit_config_error;
        out.message = std::string("config error: malformed artifact: ") + e.what();
        return out;
    }

    std::ostringstream csv, md;
    csv << "item,value,reference,rel_diff,pass\n";
    md << "# Comparison report\n\n| item | value | reference | rel. diff | pass |\n|---|---|---|---|---|\n";
    bool all = true;
    json summary = json::object();
    for (const auto& r : rows) {
        csv << r.item << ',' << format(r.value, 17) << ',' << format(r.reference, 17) << ',' << format(r.rel_diff(), 17)
            << ',' << (r.pass ? 1 : 0) << '\n';
        md << "| " << r.item << " | " << format(r.value) << " | " << format(r.reference) << " | "
           << format(r.rel_diff()) << " | " << (r.pass ? "yes" : "no") << " |\n";
        summary[r.item] = {{"value", r.value},
                           {"reference", r.reference ? json(*r.reference) : json(nullptr)},
                           {"pass", r.pass}};
        all = all && r.pass;
    }
    try {
        fs::create_directories(out.out_dir);
        std::ofstream(out.out_dir / "report.csv", std::ios::binary) << csv.str();
        std::ofstream(out.out_dir / "report.md", std::ios::binary) << md.str();
    } catch (const std::exception& e) {
        out.exit_code = exit_config_error;
        out.message = std::string("output: ") + e.what();
        return out;
    }
    out.summary = std::move(summary);
    out.exit_code = all ? exit_ok : exit_numerical_failure;
    out.message = all ? "all comparisons passed" : "some comparisons failed";
    return out;
}

RunOutcome compare_spec_file(const fs::path& path, const RunOptions& options) {
    try {
        return compare_runs(read_json(path, path.string()), options);
    } catch (const ConfigError& e) {
        RunOutcome out;
        out.exit_code = exit_config_error;
        out.message = std::string("config error: ") + e.what();
        return out;
    }
}

}  // namespace kinlab::runner
