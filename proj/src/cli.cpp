#include "ciarisk/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "ciarisk/ahp.hpp"
#include "ciarisk/engine.hpp"
#include "ciarisk/error.hpp"
#include "ciarisk/monitor_sim.hpp"
#include "ciarisk/probability.hpp"
#include "ciarisk/registry.hpp"
#include "ciarisk/render.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::cli {

namespace {

namespace fs = std::filesystem;

volatile std::sig_atomic_t g_stop_requested = 0;

void handle_stop_signal(int) {
    g_stop_requested = 1;
}

std::vector<std::string> split_colon(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = spec.find(':', start);
        if (pos == std::string::npos) {
            parts.push_back(spec.substr(start));
            break;
        }
        parts.push_back(spec.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

Hypothesis parse_hypothesis_spec(const std::string& spec) {
    auto parts = split_colon(spec);
    if (parts.size() != 3 && parts.size() != 4)
        raise(Errc::parse_error, "--hyp expects id:occurrence:conditional[:source], got '" + spec + "'");
    Hypothesis h;
    h.id = parts[0];
    h.occurrence = text::parse_double(parts[1], "hypothesis occurrence");
    h.conditional_breach = text::parse_double(parts[2], "hypothesis conditional breach");
    if (parts.size() == 4) h.source = source_from_string(parts[3]);
    return h;
}

LossItem parse_loss_spec(const std::string& spec) {
    auto pos = spec.rfind(':');
    if (pos == std::string::npos)
        raise(Errc::parse_error, "--loss expects type:amount, got '" + spec + "'");
    LossItem item;
    item.type = spec.substr(0, pos);
    item.amount = text::parse_double(spec.substr(pos + 1), "loss amount");
    return item;
}

Registry open_registry(const fs::path& path, bool allow_missing) {
    if (allow_missing && !fs::exists(path)) return Registry();
    return Registry(load_registry(path));
}

engine::AssessmentConfig config_or_default(const std::optional<fs::path>& path) {
    if (path) return engine::load_config(*path);
    return engine::AssessmentConfig{};
}

nlohmann::json snapshot_to_json(const RegistrySnapshot& s) {
    nlohmann::json assets = nlohmann::json::array();
    for (const auto& a : s.assets)
        assets.push_back({{"id", a.id}, {"name", a.name}, {"kind", to_string(a.kind)},
                          {"description", a.description}});
    nlohmann::json threats = nlohmann::json::array();
    for (const auto& t : s.threat_events) {
        nlohmann::json hyps = nlohmann::json::array();
        for (const auto& h : t.hypotheses)
            hyps.push_back({{"id", h.id}, {"occurrence", h.occurrence},
                            {"conditional_breach", h.conditional_breach}, {"source", to_string(h.source)}});
        nlohmann::json losses = nlohmann::json::array();
        for (const auto& l : t.loss_breakdown) losses.push_back({{"type", l.type}, {"amount", l.amount}});
        threats.push_back({{"id", t.id}, {"asset_id", t.asset_id}, {"dimension", to_string(t.dimension)},
                           {"label", t.label}, {"base_loss", t.base_loss}, {"hypotheses", std::move(hyps)},
                           {"loss_breakdown", std::move(losses)}});
    }
    nlohmann::json controls = nlohmann::json::array();
    for (const auto& c : s.controls) {
        nlohmann::json entry = {{"id", c.id}, {"threat_id", c.threat_id}, {"effect", c.effect},
                                {"applied", c.applied}, {"description", c.description}};
        if (c.hypothesis_id) entry["hypothesis_id"] = *c.hypothesis_id;
        controls.push_back(std::move(entry));
    }
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : s.monitor_events) {
        nlohmann::json entry = {{"timestamp", e.timestamp}, {"dimension", to_string(e.dimension)},
                                {"asset_id", e.asset_id}, {"severity", to_string(e.severity)},
                                {"payload", e.payload}};
        if (e.hypothesis_id) entry["hypothesis_id"] = *e.hypothesis_id;
        events.push_back(std::move(entry));
    }
    return {{"version", s.version}, {"content_digest", s.content_digest}, {"assets", std::move(assets)},
            {"threat_events", std::move(threats)}, {"controls", std::move(controls)},
            {"monitor_events", std::move(events)}};
}

void show_snapshot_table(const RegistrySnapshot& s, std::ostream& out) {
    out << "Registry v" << s.version << "  digest " << s.content_digest << "\n";
    out << "Assets (" << s.assets.size() << "):\n";
    for (const auto& a : s.assets)
        out << "  " << a.id << "  [" << to_string(a.kind) << "]  " << a.name << "\n";
    out << "Threat events (" << s.threat_events.size() << "):\n";
    for (const auto& t : s.threat_events) {
        out << "  " << t.id << "  asset=" << t.asset_id << "  " << to_string(t.dimension)
            << "  loss=" << text::format_money(t.effective_loss()) << "  " << t.label << "\n";
        for (const auto& h : t.hypotheses)
            out << "    hyp " << h.id << "  occurrence=" << text::format_double(h.occurrence)
                << "  conditional=" << text::format_double(h.conditional_breach) << "  ["
                << to_string(h.source) << "]\n";
    }
    out << "Controls (" << s.controls.size() << "):\n";
    for (const auto& c : s.controls)
        out << "  " << c.id << "  threat=" << c.threat_id
            << (c.hypothesis_id ? "  hypothesis=" + *c.hypothesis_id : std::string())
            << "  effect=" << text::format_double(c.effect) << (c.applied ? "  applied" : "") << "\n";
    out << "Monitor events: " << s.monitor_events.size() << "\n";
}

// Reads complete EVENT lines appended since `offset`; leaves partial tails
// for the next poll.
std::vector<MonitorEvent> read_new_events(const fs::path& path, std::streamoff& offset,
                                          std::ostream& err) {
    std::vector<MonitorEvent> batch;
    std::ifstream in(path, std::ios::binary);
    if (!in) return batch;
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    if (size < offset) offset = 0;  // file was rotated or truncated
    if (size <= offset) return batch;
    in.seekg(offset);
    std::string chunk(static_cast<std::size_t>(size - offset), '\0');
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));

    std::size_t consumed = 0;
    std::size_t start = 0;
    while (true) {
        std::size_t nl = chunk.find('\n', start);
        if (nl == std::string::npos) break;
        std::string_view line = text::trim(std::string_view(chunk).substr(start, nl - start));
        if (!line.empty()) {
            try {
                batch.push_back(parse_monitor_event_line(line));
            } catch (const Error& e) {
                err << "warning: skipping bad event line: " << e.what() << "\n";
            }
        }
        start = nl + 1;
        consumed = start;
    }
    offset += static_cast<std::streamoff>(consumed);
    return batch;
}

struct EffectiveAssessment {
    fair::RiskReport report;  // the operative (residual when controls apply) report
    std::optional<engine::ResidualReport> residual;
};

EffectiveAssessment run_assessment(const RegistrySnapshot& snapshot,
                                   const engine::AssessmentConfig& config) {
    EffectiveAssessment result;
    fair::RiskReport before = engine::assess(snapshot, config);
    bool any_applied = false;
    for (const auto& c : snapshot.controls) any_applied = any_applied || c.applied;
    if (any_applied) {
        engine::ResidualReport residual = engine::apply_controls(snapshot, before, config);
        result.report = residual.after;
        result.residual = std::move(residual);
    } else {
        result.report = std::move(before);
    }
    return result;
}

void write_assessment(const EffectiveAssessment& assessment, const std::string& format,
                      std::ostream& out) {
    if (format == "json") {
        nlohmann::json j = assessment.residual ? render::residual_to_json(*assessment.residual)
                                               : render::report_to_json(assessment.report);
        out << j.dump() << "\n";
    } else if (format == "csv") {
        out << render::report_csv(assessment.report);
    } else {
        if (assessment.residual) out << render::residual_table(*assessment.residual);
        else out << render::report_table(assessment.report);
    }
}

void append_report_line(const std::optional<fs::path>& path, const EffectiveAssessment& assessment) {
    if (!path) return;
    std::ofstream out(*path, std::ios::app);
    if (!out) raise(Errc::io_failure, "cannot open '" + path->string() + "' for appending");
    nlohmann::json j = assessment.residual ? render::residual_to_json(*assessment.residual)
                                           : render::report_to_json(assessment.report);
    out << j.dump() << "\n";
}

// Gate verdict: breached when total risk exceeds the threshold.
bool gate_breached(const fair::RiskReport& report, const std::optional<double>& gate) {
    return gate && report.total_risk > *gate;
}

int command_simulate(const fs::path& scenario_path, const std::optional<fs::path>& out_path,
                     const std::optional<std::uint64_t>& seed_override, std::ostream& out) {
    monitor_sim::Scenario scenario = monitor_sim::load_scenario(scenario_path);
    if (seed_override) scenario.seed = *seed_override;
    auto events = monitor_sim::generate(scenario);
    if (out_path) {
        std::ofstream file(*out_path);
        if (!file) raise(Errc::io_failure, "cannot open '" + out_path->string() + "' for writing");
        for (const auto& e : events) file << format_monitor_event_line(e) << "\n";
        if (!file) raise(Errc::io_failure, "failed writing '" + out_path->string() + "'");
        out << events.size() << " events -> " << out_path->string() << "\n";
    } else {
        for (const auto& e : events) out << format_monitor_event_line(e) << "\n";
    }
    return kExitOk;
}

int command_rank(const fs::path& path, bool strict, const std::string& format, std::ostream& out,
                 std::ostream& err) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
    ahp::DecisionModel model = ahp::load_decision_model(in);

    for (const auto& warning : ahp::validate(model.criteria, strict))
        err << "warning: criteria: " << warning << "\n";
    double cr = ahp::consistency_ratio(model.criteria);
    if (cr > ahp::kConsistencyWarningThreshold)
        err << "warning: criteria judgments have consistency ratio " << text::format_double(cr)
            << " (> 0.1)\n";
    for (std::size_t i = 0; i < model.alternatives.size(); ++i) {
        for (const auto& warning : ahp::validate(model.alternatives[i], strict))
            err << "warning: " << model.criteria.labels[i] << ": " << warning << "\n";
        double alt_cr = ahp::consistency_ratio(model.alternatives[i]);
        if (alt_cr > ahp::kConsistencyWarningThreshold)
            err << "warning: " << model.criteria.labels[i] << " judgments have consistency ratio "
                << text::format_double(alt_cr) << " (> 0.1)\n";
    }

    ahp::PriorityVector ranking = ahp::rank_alternatives(model, strict);
    if (format == "json") out << render::ranking_to_json(ranking).dump() << "\n";
    else if (format == "csv") out << render::ranking_csv(ranking);
    else out << render::ranking_table(ranking);
    return kExitOk;
}

int command_report(const fs::path& path, const std::string& format, bool all, std::ostream& out) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!text::trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) raise(Errc::parse_error, "no reports in '" + path.string() + "'");
    if (!all) lines.erase(lines.begin(), lines.end() - 1);

    for (const auto& stored : lines) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(stored);
        } catch (const nlohmann::json::exception& e) {
            raise(Errc::parse_error, std::string("bad report line: ") + e.what());
        }
        EffectiveAssessment assessment;
        if (j.contains("before")) {
            engine::ResidualReport residual;
            residual.before = render::report_from_json(j.at("before"));
            residual.after = render::report_from_json(j.at("after"));
            residual.applied_control_ids = j.at("applied_controls").get<std::vector<std::string>>();
            assessment.report = residual.after;
            assessment.residual = std::move(residual);
        } else {
            assessment.report = render::report_from_json(j);
        }
        write_assessment(assessment, format, out);
    }
    return kExitOk;
}

int command_watch(const fs::path& registry_path, const std::optional<fs::path>& config_path,
                  const std::optional<fs::path>& events_path, const std::optional<fs::path>& out_path,
                  std::optional<double> interval_override, std::optional<double> gate_flag,
                  std::uint64_t max_ticks, const std::string& format, std::ostream& out,
                  std::ostream& err) {
    Registry registry(load_registry(registry_path));
    engine::AssessmentConfig config = config_or_default(config_path);
    if (interval_override) config.poll_interval_seconds = *interval_override;
    std::optional<double> gate = gate_flag ? gate_flag : config.gate_threshold;
    config.validate();

    engine::WatchSession session(registry, config);
    std::streamoff events_offset = 0;
    bool breached = false;

    g_stop_requested = 0;
    std::signal(SIGINT, handle_stop_signal);
    std::signal(SIGTERM, handle_stop_signal);

    for (std::uint64_t tick = 0; max_ticks == 0 || tick < max_ticks; ++tick) {
        if (tick > 0) {
            // Sleep in short slices so a stop signal interrupts promptly.
            double remaining = config.poll_interval_seconds;
            while (remaining > 0.0 && g_stop_requested == 0) {
                double slice = std::min(remaining, 0.05);
                std::this_thread::sleep_for(std::chrono::duration<double>(slice));
                remaining -= slice;
            }
        }
        if (g_stop_requested != 0) break;

        if (events_path) {
            auto batch = read_new_events(*events_path, events_offset, err);
            if (!batch.empty()) {
                try {
                    session.ingest(batch);
                } catch (const Error& e) {
                    // Keep the loop alive: drop the offending batch one event
                    // at a time so valid events still land.
                    err << "warning: batch rejected (" << e.what() << "); retrying per event\n";
                    for (const auto& event : batch) {
                        try {
                            session.ingest({&event, 1});
                        } catch (const Error& single) {
                            err << "warning: dropped event: " << single.what() << "\n";
                        }
                    }
                }
            }
        }

        engine::WatchOutcome outcome = session.tick();
        EffectiveAssessment assessment{outcome.report, outcome.residual};
        if (format != "quiet") {
            out << "--- tick " << tick << "  v" << outcome.report.snapshot_version
                << (outcome.changed ? "  (changed)" : "  (steady)") << "\n";
            write_assessment(assessment, format, out);
        }
        append_report_line(out_path, assessment);
        if (gate_breached(assessment.report, gate)) {
            err << "warning: total risk " << text::format_money(assessment.report.total_risk)
                << " exceeds gate " << text::format_money(*gate) << "\n";
            breached = true;
        }
    }

    std::signal(SIGINT, SIG_DFL);
    std::signal(SIGTERM, SIG_DFL);
    return breached ? kExitGate : kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuous quantitative security-risk assessment"};
    app.require_subcommand(1);
    int result = kExitOk;

    // --- registry ------------------------------------------------------
    auto* registry_cmd = app.add_subcommand("registry", "Manage the record registry file");
    registry_cmd->require_subcommand(1);

    struct {
        std::string path;
        std::string id, name, description, label;
        std::string kind = "component";
        std::string dimension = "confidentiality";
        std::string asset;
        std::string hypothesis;
        std::string severity = "info";
        std::string payload;
        std::vector<std::string> hyp_specs;
        std::vector<std::string> loss_specs;
        std::optional<double> base_loss;
        double effect = 1.0;
        double timestamp = 0.0;
        bool applied = false;
    } reg;

    auto* add_cmd = registry_cmd->add_subcommand("add", "Add a record");
    add_cmd->require_subcommand(1);

    auto add_registry_option = [&](CLI::App* cmd) {
        cmd->add_option("--registry", reg.path, "Registry file (created when missing)")->required();
    };

    auto* add_asset = add_cmd->add_subcommand("asset", "Add an asset");
    add_registry_option(add_asset);
    add_asset->add_option("--id", reg.id)->required();
    add_asset->add_option("--name", reg.name);
    add_asset->add_option("--kind", reg.kind, "component|software|process")->capture_default_str();
    add_asset->add_option("--description", reg.description);
    add_asset->callback([&] {
        Registry registry = open_registry(reg.path, true);
        registry.add_asset({reg.id, reg.name, asset_kind_from_string(reg.kind), reg.description});
        persist(*registry.snapshot(), fs::path(reg.path));
    });

    auto* add_threat = add_cmd->add_subcommand("threat", "Add a threat event");
    add_registry_option(add_threat);
    add_threat->add_option("--id", reg.id)->required();
    add_threat->add_option("--asset", reg.asset)->required();
    add_threat->add_option("--dimension", reg.dimension, "confidentiality|integrity|availability")
        ->required();
    add_threat->add_option("--label", reg.label);
    add_threat->add_option("--base-loss", reg.base_loss, "Loss amount; defaults to the --loss total");
    add_threat->add_option("--hyp", reg.hyp_specs, "id:occurrence:conditional[:source], repeatable")
        ->required();
    add_threat->add_option("--loss", reg.loss_specs, "type:amount, repeatable");
    add_threat->callback([&] {
        ThreatEvent threat;
        threat.id = reg.id;
        threat.asset_id = reg.asset;
        threat.dimension = dimension_from_string(reg.dimension);
        threat.label = reg.label;
        for (const auto& spec : reg.hyp_specs) threat.hypotheses.push_back(parse_hypothesis_spec(spec));
        for (const auto& spec : reg.loss_specs) threat.loss_breakdown.push_back(parse_loss_spec(spec));
        if (reg.base_loss) threat.base_loss = *reg.base_loss;
        else threat.base_loss = fair::worst_case_loss(threat.loss_breakdown);
        Registry registry = open_registry(reg.path, true);
        registry.add_threat_event(std::move(threat));
        persist(*registry.snapshot(), fs::path(reg.path));
    });

    auto* add_control = add_cmd->add_subcommand("control", "Add a control");
    add_registry_option(add_control);
    add_control->add_option("--id", reg.id)->required();
    add_control->add_option("--threat", reg.asset, "Target threat event id")->required();
    add_control->add_option("--hypothesis", reg.hypothesis, "Target hypothesis id (optional)");
    add_control->add_option("--effect", reg.effect, "Occurrence multiplier in [0,1]")->required();
    add_control->add_flag("--applied", reg.applied, "Mark the control as applied");
    add_control->add_option("--description", reg.description);
    add_control->callback([&] {
        Control control;
        control.id = reg.id;
        control.threat_id = reg.asset;
        if (!reg.hypothesis.empty()) control.hypothesis_id = reg.hypothesis;
        control.effect = reg.effect;
        control.applied = reg.applied;
        control.description = reg.description;
        Registry registry = open_registry(reg.path, true);
        registry.add_control(std::move(control));
        persist(*registry.snapshot(), fs::path(reg.path));
    });

    auto* add_event = add_cmd->add_subcommand("event", "Append a monitor event");
    add_registry_option(add_event);
    add_event->add_option("--timestamp", reg.timestamp)->required();
    add_event->add_option("--dimension", reg.dimension)->required();
    add_event->add_option("--asset", reg.asset)->required();
    add_event->add_option("--hypothesis", reg.hypothesis);
    add_event->add_option("--severity", reg.severity, "info|medium|high")->capture_default_str();
    add_event->add_option("--payload", reg.payload);
    add_event->callback([&] {
        MonitorEvent event;
        event.timestamp = reg.timestamp;
        event.dimension = dimension_from_string(reg.dimension);
        event.asset_id = reg.asset;
        if (!reg.hypothesis.empty()) event.hypothesis_id = reg.hypothesis;
        event.severity = severity_from_string(reg.severity);
        event.payload = reg.payload;
        Registry registry = open_registry(reg.path, true);
        registry.ingest_events({&event, 1});
        persist(*registry.snapshot(), fs::path(reg.path));
    });

    auto* rm_cmd = registry_cmd->add_subcommand("rm", "Remove a record");
    rm_cmd->require_subcommand(1);
    struct {
        std::string path;
        std::string id;
        double before = 0.0;
    } rm;
    for (const char* kind : {"asset", "threat", "control"}) {
        auto* sub = rm_cmd->add_subcommand(kind, std::string("Remove a ") + kind + " by id");
        sub->add_option("--registry", rm.path)->required();
        sub->add_option("id", rm.id)->required();
        std::string kind_name = kind;
        sub->callback([&, kind_name] {
            Registry registry = open_registry(rm.path, false);
            if (kind_name == "asset") registry.remove_asset(rm.id);
            else if (kind_name == "threat") registry.remove_threat_event(rm.id);
            else registry.remove_control(rm.id);
            persist(*registry.snapshot(), fs::path(rm.path));
        });
    }
    auto* rm_events = rm_cmd->add_subcommand("events", "Drop monitor events older than a timestamp");
    rm_events->add_option("--registry", rm.path)->required();
    rm_events->add_option("--before", rm.before, "Cutoff timestamp (seconds)")->required();
    rm_events->callback([&] {
        Registry registry = open_registry(rm.path, false);
        registry.remove_events_before(rm.before);
        persist(*registry.snapshot(), fs::path(rm.path));
    });

    struct {
        std::string path;
        std::string format = "table";
    } show;
    auto* show_cmd = registry_cmd->add_subcommand("show", "Print the registry contents");
    show_cmd->add_option("--registry", show.path)->required();
    show_cmd->add_option("--format", show.format, "table|json")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    show_cmd->callback([&] {
        SnapshotPtr snapshot = load_registry(fs::path(show.path));
        if (show.format == "json") out << snapshot_to_json(*snapshot).dump(2) << "\n";
        else show_snapshot_table(*snapshot, out);
    });

    // --- assess ----------------------------------------------------------
    struct {
        std::string registry;
        std::optional<fs::path> config;
        std::optional<fs::path> out_path;
        std::string format = "table";
        std::optional<double> gate;
    } assess_opts;
    auto* assess_cmd = app.add_subcommand("assess", "Run one assessment over a registry");
    assess_cmd->add_option("--registry", assess_opts.registry)->required();
    assess_cmd->add_option("--config", assess_opts.config, "Scales/matrix/engine config file");
    assess_cmd->add_option("--format", assess_opts.format, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    assess_cmd->add_option("--gate", assess_opts.gate, "Max acceptable total risk");
    assess_cmd->add_option("--out", assess_opts.out_path, "Append the report as a JSON line");
    assess_cmd->callback([&] {
        SnapshotPtr snapshot = load_registry(fs::path(assess_opts.registry));
        engine::AssessmentConfig config = config_or_default(assess_opts.config);
        std::optional<double> gate = assess_opts.gate ? assess_opts.gate : config.gate_threshold;
        EffectiveAssessment assessment = run_assessment(*snapshot, config);
        write_assessment(assessment, assess_opts.format, out);
        append_report_line(assess_opts.out_path, assessment);
        if (gate_breached(assessment.report, gate)) {
            err << "risk gate breached: total " << text::format_money(assessment.report.total_risk)
                << " > " << text::format_money(*gate) << "\n";
            result = kExitGate;
        }
    });

    // --- watch -----------------------------------------------------------
    struct {
        std::string registry;
        std::optional<fs::path> config;
        std::optional<fs::path> events;
        std::optional<fs::path> out_path;
        std::optional<double> interval;
        std::optional<double> gate;
        std::uint64_t ticks = 0;
        std::string format = "table";
    } watch_opts;
    auto* watch_cmd = app.add_subcommand("watch", "Continuously re-assess on change or poll ticks");
    watch_cmd->add_option("--registry", watch_opts.registry)->required();
    watch_cmd->add_option("--config", watch_opts.config);
    watch_cmd->add_option("--events", watch_opts.events, "Event stream file to tail (EVENT lines)");
    watch_cmd->add_option("--interval", watch_opts.interval, "Poll interval seconds (overrides config)");
    watch_cmd->add_option("--ticks", watch_opts.ticks, "Stop after N ticks (0 = run until signal)");
    watch_cmd->add_option("--out", watch_opts.out_path, "Append each report as a JSON line");
    watch_cmd->add_option("--gate", watch_opts.gate, "Max acceptable total risk");
    watch_cmd->add_option("--format", watch_opts.format, "table|json|csv|quiet")
        ->check(CLI::IsMember({"table", "json", "csv", "quiet"}))
        ->capture_default_str();
    watch_cmd->callback([&] {
        result = command_watch(fs::path(watch_opts.registry), watch_opts.config, watch_opts.events,
                               watch_opts.out_path, watch_opts.interval, watch_opts.gate,
                               watch_opts.ticks, watch_opts.format, out, err);
    });

    // --- ahp ---------------------------------------------------------------
    struct {
        std::string file;
        bool strict = false;
        std::string format = "table";
    } ahp_opts;
    auto* ahp_cmd = app.add_subcommand("ahp", "Multi-criteria decision analysis");
    ahp_cmd->require_subcommand(1);
    auto* rank_cmd = ahp_cmd->add_subcommand("rank", "Rank alternatives from a judgment file");
    rank_cmd->add_option("file", ahp_opts.file, "Judgment matrices file")->required();
    rank_cmd->add_flag("--strict", ahp_opts.strict, "Reject judgments off the 1..9 scale");
    rank_cmd->add_option("--format", ahp_opts.format, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    rank_cmd->callback(
        [&] { result = command_rank(fs::path(ahp_opts.file), ahp_opts.strict, ahp_opts.format, out, err); });

    // --- simulate ----------------------------------------------------------
    struct {
        std::string scenario;
        std::optional<fs::path> out_path;
        std::optional<std::uint64_t> seed;
    } sim_opts;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a seeded monitor-event stream");
    sim_cmd->add_option("scenario", sim_opts.scenario, "Scenario file")->required();
    sim_cmd->add_option("--out", sim_opts.out_path, "Write EVENT lines here instead of stdout");
    sim_cmd->add_option("--seed", sim_opts.seed, "Override the scenario seed");
    sim_cmd->callback(
        [&] { result = command_simulate(fs::path(sim_opts.scenario), sim_opts.out_path, sim_opts.seed, out); });

    // --- report ------------------------------------------------------------
    struct {
        std::string file;
        std::string format = "table";
        bool all = false;
    } report_opts;
    auto* report_cmd = app.add_subcommand("report", "Render stored report lines");
    report_cmd->add_option("file", report_opts.file, "JSON-lines report file")->required();
    report_cmd->add_option("--format", report_opts.format, "table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    report_cmd->add_flag("--all", report_opts.all, "Render every stored report, not just the last");
    report_cmd->callback(
        [&] { result = command_report(fs::path(report_opts.file), report_opts.format, report_opts.all, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return result;
}

}  // namespace ciarisk::cli
