#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "femtherm/csv.hpp"
#include "femtherm/fempipe.hpp"
#include "femtherm/fitting.hpp"
#include "femtherm/metrics.hpp"
#include "femtherm/models.hpp"
#include "femtherm/rcnet.hpp"
#include "femtherm/synth.hpp"

namespace femtherm {

using json = nlohmann::json;

/// Stable 64-bit FNV-1a over the canonical (sorted-key) JSON dump; embedded
/// in every machine-readable report so reruns are attributable to a config.
std::string config_hash(const json& config);

// Layer stacks and run configs share the JSON config family.
LayerStack stack_from_json(const json& j);
json stack_to_json(const LayerStack& stack);
LayerStack load_stack(const std::filesystem::path& path);

/// Everything cmd_fit / cmd_run need, resolved from a config file plus
/// command-line and FEMTHERM_* environment overrides.
struct RunConfig {
    std::filesystem::path dataset_path;
    CsvSchema schema;
    std::int64_t dt_seconds = 60;
    std::string site_id;
    std::vector<ModelKind> models = all_models();
    FitDefaults defaults;
    std::optional<double> tau_override_s;
    double gamma_pct_per_k = -0.35;
    std::optional<double> h_y_kwh_per_m2;
    bool night_bias_alternative = false;
    bool emit_plot_data = false;
    std::filesystem::path output_dir = "out";

    json to_json() const;  // canonical echo used for hashing and manifests
};

RunConfig config_from_json(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);

json to_json(const ModelCoefficients& c);
ModelCoefficients coefficients_from_json(const json& j);
json to_json(const RegressionResult& r);
json to_json(const TauEstimate& t);
json to_json(const EmpiricalRc& rc);
json to_json(const KpiReport& k);
json to_json(const EnergyErrorReport& e);
json to_json(const SynthSpec& s);

/// Full-precision machine table ('%.17g'-formatted doubles, tab-separated).
void write_tsv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string fmt_full(double v);           // shortest round-trip decimal
std::string fmt_fixed(double v, int dp);  // human-rounded

/// Human-rounded text table plus full-precision machine TSV.
void write_rc_reports(const std::filesystem::path& out_dir, const RcSummary& with_air,
                      const RcSummary& without_air);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace femtherm
