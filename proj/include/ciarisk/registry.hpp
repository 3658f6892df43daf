#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ciarisk/types.hpp"

namespace ciarisk {

struct Asset {
    std::string id;
    std::string name;
    AssetKind kind = AssetKind::component;
    std::string description;

    bool operator==(const Asset&) const = default;
};

// A factor under which a threat event may fire: occurrence probability and
// conditional breach probability.
struct Hypothesis {
    std::string id;
    double occurrence = 0.0;
    double conditional_breach = 0.0;
    HypothesisSource source = HypothesisSource::expert;

    bool operator==(const Hypothesis&) const = default;
};

struct LossItem {
    std::string type;
    double amount = 0.0;

    bool operator==(const LossItem&) const = default;
};

struct ThreatEvent {
    std::string id;
    std::string asset_id;
    Dimension dimension = Dimension::confidentiality;
    std::string label;
    std::vector<Hypothesis> hypotheses;
    double base_loss = 0.0;
    std::vector<LossItem> loss_breakdown;

    // Breakdown total when a breakdown is recorded, base_loss otherwise.
    double effective_loss() const;
    const Hypothesis* find_hypothesis(std::string_view hyp_id) const;

    bool operator==(const ThreatEvent&) const = default;
};

// A declared mitigation; when applied it scales the target occurrence
// probability by `effect` (whole threat event when hypothesis_id is empty).
struct Control {
    std::string id;
    std::string threat_id;
    std::optional<std::string> hypothesis_id;
    double effect = 1.0;
    bool applied = false;
    std::string description;

    bool operator==(const Control&) const = default;
};

struct MonitorEvent {
    double timestamp = 0.0;  // seconds since epoch (simulated or wall clock)
    Dimension dimension = Dimension::confidentiality;
    std::string asset_id;
    std::optional<std::string> hypothesis_id;
    Severity severity = Severity::info;
    std::string payload;

    bool operator==(const MonitorEvent&) const = default;
};

// Immutable view of all records; one assessment runs over one snapshot.
struct RegistrySnapshot {
    std::vector<Asset> assets;
    std::vector<ThreatEvent> threat_events;
    std::vector<Control> controls;
    std::vector<MonitorEvent> monitor_events;
    std::uint64_t version = 0;
    std::string content_digest;  // hex FNV-1a over the serialized records

    const Asset* find_asset(std::string_view id) const;
    const ThreatEvent* find_threat(std::string_view id) const;
    const Control* find_control(std::string_view id) const;
    double latest_event_time() const;  // 0 when the event log is empty
    bool empty() const;
};

using SnapshotPtr = std::shared_ptr<const RegistrySnapshot>;

// Digest over records only; version is deliberately excluded so identical
// contents always hash identically.
std::string compute_digest(const RegistrySnapshot& snapshot);

// Throws on any broken invariant or unresolved reference.
void validate_snapshot(const RegistrySnapshot& snapshot);

// True iff the two snapshots differ in content.
bool detect_change(const RegistrySnapshot& prev, const RegistrySnapshot& next);

// Single-writer handle over immutable snapshots. Mutations validate the
// resulting state, bump the version and publish a fresh snapshot; previously
// returned snapshots are never touched.
class Registry {
public:
    Registry();
    explicit Registry(const SnapshotPtr& initial);

    SnapshotPtr snapshot() const;

    SnapshotPtr add_asset(Asset asset);
    SnapshotPtr update_asset(Asset asset);
    SnapshotPtr remove_asset(std::string_view id);

    SnapshotPtr add_threat_event(ThreatEvent threat);
    SnapshotPtr update_threat_event(ThreatEvent threat);
    SnapshotPtr remove_threat_event(std::string_view id);

    SnapshotPtr add_control(Control control);
    SnapshotPtr update_control(Control control);
    SnapshotPtr remove_control(std::string_view id);

    // One version bump per batch; the batch must be internally
    // timestamp-ordered (one ingestion stream).
    SnapshotPtr ingest_events(std::span<const MonitorEvent> batch);
    // Retention: drops events strictly older than `timestamp`.
    SnapshotPtr remove_events_before(double timestamp);

private:
    template <typename Fn>
    SnapshotPtr mutate(Fn&& fn);

    mutable std::mutex mutex_;
    SnapshotPtr current_;
};

// Registry file: one record per line as KIND<TAB>fields, final line
// DIGEST<TAB><hex>. Corruption (truncated records, digest mismatch) is
// rejected on load.
void persist(const RegistrySnapshot& snapshot, std::ostream& out);
void persist(const RegistrySnapshot& snapshot, const std::filesystem::path& path);
SnapshotPtr load_registry(std::istream& in);
SnapshotPtr load_registry(const std::filesystem::path& path);

// EVENT line codec shared with the simulator output and watch ingestion.
std::string format_monitor_event_line(const MonitorEvent& event);
MonitorEvent parse_monitor_event_line(std::string_view line);

}  // namespace ciarisk
