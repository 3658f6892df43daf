#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ciarisk/fair.hpp"
#include "ciarisk/registry.hpp"

namespace ciarisk::engine {

// Denominator for empirical frequency estimates: a fixed count per threat,
// or one opportunity per hour of the estimation window.
struct OpportunitiesPolicy {
    enum class Mode { fixed, per_window_hour };
    Mode mode = Mode::fixed;
    std::int64_t fixed_count = 100;

    std::int64_t resolve(double window_seconds) const;
};

struct AssessmentConfig {
    double window_seconds = 3600.0;
    OpportunitiesPolicy opportunities;
    double smoothing_alpha = 0.0;
    fair::FrequencyScale frequency_scale = fair::default_frequency_scale();
    fair::LossScale loss_scale = fair::default_loss_scale();
    fair::RiskMatrix risk_matrix = fair::default_risk_matrix();
    std::optional<double> gate_threshold;
    double poll_interval_seconds = 60.0;

    void validate() const;
};

// Parses the shared config file: `scales` and `matrix` sections (see fair)
// plus an optional `engine` section (window / opportunities / alpha /
// interval / gate lines).
AssessmentConfig load_config(std::istream& in);
AssessmentConfig load_config(const std::filesystem::path& path);

// One full assessment pass over a snapshot: empirical occurrences are
// refreshed from the monitor-event window, event probabilities composed per
// dimension, losses totaled, risk computed. Deterministic for fixed inputs.
fair::RiskReport assess(const RegistrySnapshot& snapshot, const AssessmentConfig& config);

struct ResidualReport {
    fair::RiskReport before;
    fair::RiskReport after;
    std::vector<std::string> applied_control_ids;

    bool operator==(const ResidualReport&) const = default;
};

// Re-assesses with every applied control's effect multiplied into its target
// occurrence probabilities. The snapshot itself is untouched.
ResidualReport apply_controls(const RegistrySnapshot& snapshot, const fair::RiskReport& before,
                              const AssessmentConfig& config);

struct WatchOutcome {
    fair::RiskReport report;                  // effective report (after controls when present)
    std::optional<ResidualReport> residual;   // set when any applied control exists
    bool changed = false;                     // registry content differs from the previous tick
};

// Serialized re-assessment pump: one tick = ingest-then-assess exactly once.
// Reports come out in snapshot-version order by construction.
class WatchSession {
public:
    WatchSession(Registry& registry, AssessmentConfig config);

    // Appends one batch through the registry's single-writer path.
    SnapshotPtr ingest(std::span<const MonitorEvent> batch);

    // Assesses the current snapshot and reports whether content changed
    // since the previous tick.
    WatchOutcome tick();

    const AssessmentConfig& config() const { return config_; }

private:
    Registry& registry_;
    AssessmentConfig config_;
    std::optional<std::string> last_digest_;
};

}  // namespace ciarisk::engine
