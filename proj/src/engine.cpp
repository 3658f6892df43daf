#include "ciarisk/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "ciarisk/error.hpp"
#include "ciarisk/probability.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::engine {

namespace {

// Julian year; used to express window counts as events per year.
constexpr double kSecondsPerYear = 31557600.0;
constexpr double kSecondsPerHour = 3600.0;

// Occurrence multipliers keyed by (threat id, hypothesis id); an empty
// hypothesis id applies to every hypothesis of the threat event.
using Multipliers = std::map<std::pair<std::string, std::string>, double>;

double multiplier_for(const Multipliers& m, const std::string& threat_id, const std::string& hyp_id) {
    double factor = 1.0;
    if (auto it = m.find({threat_id, std::string()}); it != m.end()) factor *= it->second;
    if (auto it = m.find({threat_id, hyp_id}); it != m.end()) factor *= it->second;
    return factor;
}

fair::RiskReport assess_impl(const RegistrySnapshot& snapshot, const AssessmentConfig& config,
                             const Multipliers* multipliers) {
    const double as_of = snapshot.latest_event_time();
    const std::int64_t opportunities = config.opportunities.resolve(config.window_seconds);

    std::map<Dimension, std::vector<probability::EventProbability>> events_by_dim;
    std::map<Dimension, double> loss_by_dim;
    std::map<Dimension, std::int64_t> observations_by_dim;
    for (Dimension d : kAllDimensions) {
        events_by_dim[d] = {};
        loss_by_dim[d] = 0.0;
        observations_by_dim[d] = 0;
    }

    const double window_start = as_of - config.window_seconds;
    for (const auto& e : snapshot.monitor_events) {
        if (e.timestamp > window_start && e.timestamp <= as_of) ++observations_by_dim[e.dimension];
    }

    for (const auto& threat : snapshot.threat_events) {
        // Scope the empirical estimator to this threat's asset and dimension
        // so same-named hypotheses on other assets never bleed in.
        std::vector<MonitorEvent> scoped;
        bool scoped_built = false;

        // Empirical estimates are computed per hypothesis but the hypotheses
        // of one event partition at most probability mass 1; estimates are
        // capped at the mass the stored expert occurrences leave free. The
        // cap uses stored values, not control-adjusted ones, so applying a
        // control can never raise another hypothesis's occurrence.
        std::vector<Hypothesis> hypotheses = threat.hypotheses;
        double available_mass = 1.0;
        for (const auto& h : hypotheses) {
            if (h.source == HypothesisSource::expert) available_mass -= h.occurrence;
        }
        available_mass = std::max(0.0, available_mass);

        for (auto& h : hypotheses) {
            if (h.source == HypothesisSource::empirical) {
                if (!scoped_built) {
                    for (const auto& e : snapshot.monitor_events) {
                        if (e.asset_id == threat.asset_id && e.dimension == threat.dimension)
                            scoped.push_back(e);
                    }
                    scoped_built = true;
                }
                double estimate = probability::estimate_occurrence(scoped, h.id, config.window_seconds,
                                                                   opportunities, as_of,
                                                                   config.smoothing_alpha);
                h.occurrence = std::min(estimate, available_mass);
                available_mass -= h.occurrence;
            }
            if (multipliers != nullptr)
                h.occurrence *= multiplier_for(*multipliers, threat.id, h.id);
        }

        events_by_dim[threat.dimension].push_back(probability::event_probability(hypotheses, threat.id));
        loss_by_dim[threat.dimension] += threat.effective_loss();
    }

    std::vector<std::pair<Dimension, double>> probabilities;
    std::vector<std::pair<Dimension, double>> losses;
    std::map<Dimension, probability::DimensionProbability> composed;
    for (Dimension d : kAllDimensions) {
        composed[d] = probability::dimension_probability(d, std::move(events_by_dim[d]));
        probabilities.emplace_back(d, composed[d].value);
        losses.emplace_back(d, loss_by_dim[d]);
    }

    fair::RiskReport report = fair::quantitative_risk(probabilities, losses);
    report.timestamp = as_of;
    report.snapshot_version = snapshot.version;

    // Qualitative overlay: observed event rate in the window vs. the loss
    // magnitude, read off the risk matrix.
    const double window_years = config.window_seconds / kSecondsPerYear;
    for (auto& entry : report.dimensions) {
        const double rate_per_year =
            static_cast<double>(observations_by_dim[entry.dimension]) / window_years;
        const fair::Level frequency = config.frequency_scale.classify(rate_per_year);
        const fair::Level magnitude = config.loss_scale.classify(entry.loss);
        entry.qualitative = config.risk_matrix.lookup(frequency, magnitude);
    }
    return report;
}

}  // namespace

std::int64_t OpportunitiesPolicy::resolve(double window_seconds) const {
    if (mode == Mode::fixed) return fixed_count;
    return std::max<std::int64_t>(1, std::llround(window_seconds / kSecondsPerHour));
}

void AssessmentConfig::validate() const {
    if (!(window_seconds > 0.0)) raise(Errc::invariant_violation, "window must be positive");
    if (!(poll_interval_seconds > 0.0)) raise(Errc::invariant_violation, "poll interval must be positive");
    if (!(smoothing_alpha >= 0.0)) raise(Errc::invariant_violation, "alpha must be >= 0");
    if (opportunities.mode == OpportunitiesPolicy::Mode::fixed && opportunities.fixed_count < 1)
        raise(Errc::zero_opportunities, "fixed opportunities must be >= 1");
    if (gate_threshold && !(*gate_threshold >= 0.0))
        raise(Errc::invariant_violation, "gate threshold must be >= 0");
}

AssessmentConfig load_config(std::istream& in) {
    std::stringstream buffer;
    buffer << in.rdbuf();

    std::stringstream scales_pass(buffer.str());
    fair::ScalesAndMatrix parts = fair::load_scales_and_matrix(scales_pass);

    AssessmentConfig config;
    config.frequency_scale = parts.frequency;
    config.loss_scale = parts.loss;
    config.risk_matrix = parts.matrix;

    std::stringstream engine_pass(buffer.str());
    for (const auto& section : text::read_sections(engine_pass)) {
        if (section.name != "engine") continue;
        for (const auto& line : section.lines) {
            auto tokens = text::split_ws(line);
            if (tokens.size() < 2) raise(Errc::parse_error, "engine line needs a key and value: '" + line + "'");
            const std::string& key = tokens[0];
            if (key == "window" && tokens.size() == 2) {
                config.window_seconds = text::parse_double(tokens[1], "window");
            } else if (key == "opportunities" && tokens.size() == 3 && tokens[1] == "fixed") {
                config.opportunities = {OpportunitiesPolicy::Mode::fixed,
                                        text::parse_i64(tokens[2], "opportunities")};
            } else if (key == "opportunities" && tokens.size() == 2 && tokens[1] == "hourly") {
                config.opportunities = {OpportunitiesPolicy::Mode::per_window_hour, 0};
            } else if (key == "alpha" && tokens.size() == 2) {
                config.smoothing_alpha = text::parse_double(tokens[1], "alpha");
            } else if (key == "interval" && tokens.size() == 2) {
                config.poll_interval_seconds = text::parse_double(tokens[1], "interval");
            } else if (key == "gate" && tokens.size() == 2) {
                config.gate_threshold = text::parse_double(tokens[1], "gate");
            } else {
                raise(Errc::parse_error, "unknown engine setting: '" + line + "'");
            }
        }
    }

    config.validate();
    return config;
}

AssessmentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
    return load_config(in);
}

fair::RiskReport assess(const RegistrySnapshot& snapshot, const AssessmentConfig& config) {
    config.validate();
    validate_snapshot(snapshot);
    return assess_impl(snapshot, config, nullptr);
}

ResidualReport apply_controls(const RegistrySnapshot& snapshot, const fair::RiskReport& before,
                              const AssessmentConfig& config) {
    Multipliers multipliers;
    std::vector<std::string> applied_ids;
    for (const auto& control : snapshot.controls) {
        if (!control.applied) continue;
        const ThreatEvent* target = snapshot.find_threat(control.threat_id);
        if (target == nullptr)
            raise(Errc::dangling_control_target, "control '" + control.id + "' targets unknown threat '" +
                                                     control.threat_id + "'");
        if (control.hypothesis_id && target->find_hypothesis(*control.hypothesis_id) == nullptr)
            raise(Errc::dangling_control_target, "control '" + control.id + "' targets unknown hypothesis '" +
                                                     *control.hypothesis_id + "'");
        auto key = std::make_pair(control.threat_id,
                                  control.hypothesis_id ? *control.hypothesis_id : std::string());
        auto [it, inserted] = multipliers.emplace(key, control.effect);
        if (!inserted) it->second *= control.effect;
        applied_ids.push_back(control.id);
    }

    ResidualReport result;
    result.before = before;
    result.after = applied_ids.empty() ? before : assess_impl(snapshot, config, &multipliers);
    result.applied_control_ids = std::move(applied_ids);
    return result;
}

WatchSession::WatchSession(Registry& registry, AssessmentConfig config)
    : registry_(registry), config_(config) {
    config_.validate();
}

SnapshotPtr WatchSession::ingest(std::span<const MonitorEvent> batch) {
    return registry_.ingest_events(batch);
}

WatchOutcome WatchSession::tick() {
    const SnapshotPtr snapshot = registry_.snapshot();

    WatchOutcome outcome;
    outcome.changed = !last_digest_ || *last_digest_ != snapshot->content_digest;
    last_digest_ = snapshot->content_digest;

    fair::RiskReport before = assess(*snapshot, config_);
    bool any_applied = std::any_of(snapshot->controls.begin(), snapshot->controls.end(),
                                   [](const Control& c) { return c.applied; });
    if (any_applied) {
        ResidualReport residual = apply_controls(*snapshot, before, config_);
        outcome.report = residual.after;
        outcome.residual = std::move(residual);
    } else {
        outcome.report = std::move(before);
    }
    return outcome;
}

}  // namespace ciarisk::engine
