#include "ciarisk/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk {

namespace {

constexpr double kOccurrenceMassEpsilon = 1e-9;
constexpr double kLossConsistencyEpsilon = 1e-9;

std::uint64_t fnv1a(std::uint64_t hash, std::string_view bytes) {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string join_fields(std::initializer_list<std::string> fields) {
    std::string line;
    bool first = true;
    for (const auto& f : fields) {
        if (!first) line += '\t';
        line += f;
        first = false;
    }
    return line;
}

std::string asset_line(const Asset& a) {
    return join_fields({"ASSET", text::escape_field(a.id), text::escape_field(a.name),
                        to_string(a.kind), text::escape_field(a.description)});
}

std::string threat_line(const ThreatEvent& t) {
    return join_fields({"THREAT", text::escape_field(t.id), text::escape_field(t.asset_id),
                        to_string(t.dimension), text::escape_field(t.label),
                        text::format_double(t.base_loss)});
}

std::string hypothesis_line(const ThreatEvent& t, const Hypothesis& h) {
    return join_fields({"HYP", text::escape_field(t.id), text::escape_field(h.id),
                        text::format_double(h.occurrence), text::format_double(h.conditional_breach),
                        to_string(h.source)});
}

std::string loss_line(const ThreatEvent& t, const LossItem& item) {
    return join_fields({"LOSS", text::escape_field(t.id), text::escape_field(item.type),
                        text::format_double(item.amount)});
}

std::string control_line(const Control& c) {
    return join_fields({"CONTROL", text::escape_field(c.id), text::escape_field(c.threat_id),
                        c.hypothesis_id ? text::escape_field(*c.hypothesis_id) : std::string(),
                        text::format_double(c.effect), c.applied ? "1" : "0",
                        text::escape_field(c.description)});
}

// Canonical record serialization: the digest, the file format and change
// detection all run over these lines.
std::vector<std::string> serialize_records(const RegistrySnapshot& s) {
    std::vector<std::string> lines;
    for (const auto& a : s.assets) lines.push_back(asset_line(a));
    for (const auto& t : s.threat_events) {
        lines.push_back(threat_line(t));
        for (const auto& h : t.hypotheses) lines.push_back(hypothesis_line(t, h));
        for (const auto& l : t.loss_breakdown) lines.push_back(loss_line(t, l));
    }
    for (const auto& c : s.controls) lines.push_back(control_line(c));
    for (const auto& e : s.monitor_events) lines.push_back(format_monitor_event_line(e));
    return lines;
}

void check_probability(double value, const std::string& what) {
    if (!(value >= 0.0 && value <= 1.0))
        raise(Errc::invariant_violation, what + " must be in [0,1], got " + text::format_double(value));
}

}  // namespace

double ThreatEvent::effective_loss() const {
    if (loss_breakdown.empty()) return base_loss;
    double total = 0.0;
    for (const auto& item : loss_breakdown) total += item.amount;
    return total;
}

const Hypothesis* ThreatEvent::find_hypothesis(std::string_view hyp_id) const {
    for (const auto& h : hypotheses)
        if (h.id == hyp_id) return &h;
    return nullptr;
}

const Asset* RegistrySnapshot::find_asset(std::string_view id) const {
    for (const auto& a : assets)
        if (a.id == id) return &a;
    return nullptr;
}

const ThreatEvent* RegistrySnapshot::find_threat(std::string_view id) const {
    for (const auto& t : threat_events)
        if (t.id == id) return &t;
    return nullptr;
}

const Control* RegistrySnapshot::find_control(std::string_view id) const {
    for (const auto& c : controls)
        if (c.id == id) return &c;
    return nullptr;
}

double RegistrySnapshot::latest_event_time() const {
    double latest = 0.0;
    for (const auto& e : monitor_events) latest = std::max(latest, e.timestamp);
    return latest;
}

bool RegistrySnapshot::empty() const {
    return assets.empty() && threat_events.empty() && controls.empty() && monitor_events.empty();
}

std::string compute_digest(const RegistrySnapshot& snapshot) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const auto& line : serialize_records(snapshot)) {
        hash = fnv1a(hash, line);
        hash = fnv1a(hash, "\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

void validate_snapshot(const RegistrySnapshot& s) {
    std::unordered_set<std::string> asset_ids;
    for (const auto& a : s.assets) {
        if (a.id.empty()) raise(Errc::invariant_violation, "asset id must be non-empty");
        if (!asset_ids.insert(a.id).second) raise(Errc::duplicate_id, "asset '" + a.id + "'");
    }

    std::unordered_set<std::string> threat_ids;
    for (const auto& t : s.threat_events) {
        if (t.id.empty()) raise(Errc::invariant_violation, "threat event id must be non-empty");
        if (!threat_ids.insert(t.id).second) raise(Errc::duplicate_id, "threat event '" + t.id + "'");
        if (!asset_ids.contains(t.asset_id))
            raise(Errc::dangling_reference, "threat event '" + t.id + "' references unknown asset '" + t.asset_id + "'");
        if (t.hypotheses.empty())
            raise(Errc::invariant_violation, "threat event '" + t.id + "' has no hypotheses");
        std::unordered_set<std::string> hyp_ids;
        double occurrence_mass = 0.0;
        for (const auto& h : t.hypotheses) {
            if (h.id.empty()) raise(Errc::invariant_violation, "hypothesis id must be non-empty");
            if (!hyp_ids.insert(h.id).second)
                raise(Errc::duplicate_id, "hypothesis '" + h.id + "' in threat event '" + t.id + "'");
            check_probability(h.occurrence, "hypothesis '" + h.id + "' occurrence");
            check_probability(h.conditional_breach, "hypothesis '" + h.id + "' conditional breach");
            occurrence_mass += h.occurrence;
        }
        if (occurrence_mass > 1.0 + kOccurrenceMassEpsilon)
            raise(Errc::invariant_violation, "threat event '" + t.id + "' occurrence probabilities sum to " +
                                                 text::format_double(occurrence_mass) + " > 1");
        if (!(t.base_loss >= 0.0))
            raise(Errc::invariant_violation, "threat event '" + t.id + "' base loss must be >= 0");
        double breakdown_total = 0.0;
        for (const auto& item : t.loss_breakdown) {
            if (!(item.amount >= 0.0))
                raise(Errc::invariant_violation, "loss amount for '" + item.type + "' must be >= 0");
            breakdown_total += item.amount;
        }
        if (!t.loss_breakdown.empty() && std::abs(breakdown_total - t.base_loss) > kLossConsistencyEpsilon)
            raise(Errc::invariant_violation, "threat event '" + t.id + "' base loss " +
                                                 text::format_double(t.base_loss) +
                                                 " does not equal its breakdown total " +
                                                 text::format_double(breakdown_total));
    }

    std::unordered_set<std::string> control_ids;
    for (const auto& c : s.controls) {
        if (c.id.empty()) raise(Errc::invariant_violation, "control id must be non-empty");
        if (!control_ids.insert(c.id).second) raise(Errc::duplicate_id, "control '" + c.id + "'");
        const ThreatEvent* target = s.find_threat(c.threat_id);
        if (target == nullptr)
            raise(Errc::dangling_reference, "control '" + c.id + "' references unknown threat event '" + c.threat_id + "'");
        if (c.hypothesis_id && target->find_hypothesis(*c.hypothesis_id) == nullptr)
            raise(Errc::dangling_reference, "control '" + c.id + "' references unknown hypothesis '" +
                                                *c.hypothesis_id + "' of threat event '" + c.threat_id + "'");
        if (!(c.effect >= 0.0 && c.effect <= 1.0))
            raise(Errc::invariant_violation, "control '" + c.id + "' effect must be in [0,1]");
    }

    for (const auto& e : s.monitor_events) {
        if (!asset_ids.contains(e.asset_id))
            raise(Errc::dangling_reference, "monitor event references unknown asset '" + e.asset_id + "'");
        if (e.hypothesis_id) {
            bool resolved = false;
            for (const auto& t : s.threat_events) {
                if (t.asset_id == e.asset_id && t.dimension == e.dimension &&
                    t.find_hypothesis(*e.hypothesis_id) != nullptr) {
                    resolved = true;
                    break;
                }
            }
            if (!resolved)
                raise(Errc::dangling_reference, "monitor event references unknown hypothesis '" +
                                                    *e.hypothesis_id + "' for asset '" + e.asset_id + "'");
        }
    }
}

bool detect_change(const RegistrySnapshot& prev, const RegistrySnapshot& next) {
    return prev.content_digest != next.content_digest;
}

Registry::Registry() {
    auto snapshot = std::make_shared<RegistrySnapshot>();
    snapshot->content_digest = compute_digest(*snapshot);
    current_ = std::move(snapshot);
}

Registry::Registry(const SnapshotPtr& initial) {
    if (!initial) raise(Errc::invariant_violation, "registry requires a snapshot");
    validate_snapshot(*initial);
    auto snapshot = std::make_shared<RegistrySnapshot>(*initial);
    snapshot->content_digest = compute_digest(*snapshot);
    current_ = std::move(snapshot);
}

SnapshotPtr Registry::snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
}

template <typename Fn>
SnapshotPtr Registry::mutate(Fn&& fn) {
    std::lock_guard lock(mutex_);
    auto next = std::make_shared<RegistrySnapshot>(*current_);
    fn(*next);
    validate_snapshot(*next);
    next->version = current_->version + 1;
    next->content_digest = compute_digest(*next);
    current_ = std::move(next);
    return current_;
}

SnapshotPtr Registry::add_asset(Asset asset) {
    return mutate([&](RegistrySnapshot& s) {
        if (s.find_asset(asset.id) != nullptr) raise(Errc::duplicate_id, "asset '" + asset.id + "'");
        s.assets.push_back(std::move(asset));
    });
}

SnapshotPtr Registry::update_asset(Asset asset) {
    return mutate([&](RegistrySnapshot& s) {
        for (auto& existing : s.assets) {
            if (existing.id == asset.id) {
                existing = std::move(asset);
                return;
            }
        }
        raise(Errc::dangling_reference, "no asset '" + asset.id + "' to update");
    });
}

SnapshotPtr Registry::remove_asset(std::string_view id) {
    return mutate([&](RegistrySnapshot& s) {
        auto it = std::find_if(s.assets.begin(), s.assets.end(), [&](const Asset& a) { return a.id == id; });
        if (it == s.assets.end()) raise(Errc::dangling_reference, "no asset '" + std::string(id) + "' to remove");
        s.assets.erase(it);
    });
}

SnapshotPtr Registry::add_threat_event(ThreatEvent threat) {
    return mutate([&](RegistrySnapshot& s) {
        if (s.find_threat(threat.id) != nullptr) raise(Errc::duplicate_id, "threat event '" + threat.id + "'");
        s.threat_events.push_back(std::move(threat));
    });
}

SnapshotPtr Registry::update_threat_event(ThreatEvent threat) {
    return mutate([&](RegistrySnapshot& s) {
        for (auto& existing : s.threat_events) {
            if (existing.id == threat.id) {
                existing = std::move(threat);
                return;
            }
        }
        raise(Errc::dangling_reference, "no threat event '" + threat.id + "' to update");
    });
}

SnapshotPtr Registry::remove_threat_event(std::string_view id) {
    return mutate([&](RegistrySnapshot& s) {
        auto it = std::find_if(s.threat_events.begin(), s.threat_events.end(),
                               [&](const ThreatEvent& t) { return t.id == id; });
        if (it == s.threat_events.end())
            raise(Errc::dangling_reference, "no threat event '" + std::string(id) + "' to remove");
        s.threat_events.erase(it);
    });
}

SnapshotPtr Registry::add_control(Control control) {
    return mutate([&](RegistrySnapshot& s) {
        if (s.find_control(control.id) != nullptr) raise(Errc::duplicate_id, "control '" + control.id + "'");
        s.controls.push_back(std::move(control));
    });
}

SnapshotPtr Registry::update_control(Control control) {
    return mutate([&](RegistrySnapshot& s) {
        for (auto& existing : s.controls) {
            if (existing.id == control.id) {
                existing = std::move(control);
                return;
            }
        }
        raise(Errc::dangling_reference, "no control '" + control.id + "' to update");
    });
}

SnapshotPtr Registry::remove_control(std::string_view id) {
    return mutate([&](RegistrySnapshot& s) {
        auto it = std::find_if(s.controls.begin(), s.controls.end(),
                               [&](const Control& c) { return c.id == id; });
        if (it == s.controls.end())
            raise(Errc::dangling_reference, "no control '" + std::string(id) + "' to remove");
        s.controls.erase(it);
    });
}

SnapshotPtr Registry::ingest_events(std::span<const MonitorEvent> batch) {
    return mutate([&](RegistrySnapshot& s) {
        for (std::size_t i = 1; i < batch.size(); ++i) {
            if (batch[i].timestamp < batch[i - 1].timestamp)
                raise(Errc::invariant_violation, "monitor event batch timestamps must be non-decreasing");
        }
        s.monitor_events.insert(s.monitor_events.end(), batch.begin(), batch.end());
    });
}

SnapshotPtr Registry::remove_events_before(double timestamp) {
    return mutate([&](RegistrySnapshot& s) {
        std::erase_if(s.monitor_events, [&](const MonitorEvent& e) { return e.timestamp < timestamp; });
    });
}

std::string format_monitor_event_line(const MonitorEvent& e) {
    return join_fields({"EVENT", text::format_double(e.timestamp), to_string(e.dimension),
                        text::escape_field(e.asset_id),
                        e.hypothesis_id ? text::escape_field(*e.hypothesis_id) : std::string(),
                        to_string(e.severity), text::escape_field(e.payload)});
}

namespace {

void expect_fields(const std::vector<std::string>& fields, std::size_t n, const char* kind) {
    if (fields.size() != n)
        raise(Errc::corrupt_file, std::string(kind) + " record has " + std::to_string(fields.size() - 1) +
                                      " fields, expected " + std::to_string(n - 1));
}

// Registry-file parsing reports every malformation as CorruptFile.
template <typename Fn>
auto as_corrupt(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == Errc::parse_error) raise(Errc::corrupt_file, e.what());
        throw;
    }
}

}  // namespace

MonitorEvent parse_monitor_event_line(std::string_view line) {
    return as_corrupt([&] {
        auto fields = text::split_tabs(line);
        expect_fields(fields, 7, "EVENT");
        if (fields[0] != "EVENT") raise(Errc::corrupt_file, "not an EVENT record: '" + std::string(line) + "'");
        MonitorEvent e;
        e.timestamp = text::parse_double(fields[1], "event timestamp");
        e.dimension = dimension_from_string(fields[2]);
        e.asset_id = text::unescape_field(fields[3]);
        if (!fields[4].empty()) e.hypothesis_id = text::unescape_field(fields[4]);
        e.severity = severity_from_string(fields[5]);
        e.payload = text::unescape_field(fields[6]);
        return e;
    });
}

void persist(const RegistrySnapshot& snapshot, std::ostream& out) {
    out << "VERSION\t" << snapshot.version << '\n';
    for (const auto& line : serialize_records(snapshot)) out << line << '\n';
    out << "DIGEST\t" << compute_digest(snapshot) << '\n';
    if (!out) raise(Errc::io_failure, "failed writing registry stream");
}

void persist(const RegistrySnapshot& snapshot, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
    persist(snapshot, out);
    out.flush();
    if (!out) raise(Errc::io_failure, "failed writing '" + path.string() + "'");
}

SnapshotPtr load_registry(std::istream& in) {
    auto snapshot = std::make_shared<RegistrySnapshot>();
    bool have_version = false;
    bool have_digest = false;
    std::string stored_digest;
    std::string line;

    auto find_mutable_threat = [&](const std::string& id) -> ThreatEvent& {
        for (auto& t : snapshot->threat_events)
            if (t.id == id) return t;
        raise(Errc::corrupt_file, "record references threat event '" + id + "' before its THREAT line");
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (have_digest) raise(Errc::corrupt_file, "content after DIGEST line");
        as_corrupt([&] {
            auto fields = text::split_tabs(line);
            const std::string& kind = fields[0];
            if (kind == "VERSION") {
                expect_fields(fields, 2, "VERSION");
                if (have_version) raise(Errc::corrupt_file, "duplicate VERSION line");
                snapshot->version = text::parse_u64(fields[1], "version");
                have_version = true;
            } else if (kind == "ASSET") {
                expect_fields(fields, 5, "ASSET");
                Asset a;
                a.id = text::unescape_field(fields[1]);
                a.name = text::unescape_field(fields[2]);
                a.kind = asset_kind_from_string(fields[3]);
                a.description = text::unescape_field(fields[4]);
                snapshot->assets.push_back(std::move(a));
            } else if (kind == "THREAT") {
                expect_fields(fields, 6, "THREAT");
                ThreatEvent t;
                t.id = text::unescape_field(fields[1]);
                t.asset_id = text::unescape_field(fields[2]);
                t.dimension = dimension_from_string(fields[3]);
                t.label = text::unescape_field(fields[4]);
                t.base_loss = text::parse_double(fields[5], "base loss");
                snapshot->threat_events.push_back(std::move(t));
            } else if (kind == "HYP") {
                expect_fields(fields, 6, "HYP");
                ThreatEvent& t = find_mutable_threat(text::unescape_field(fields[1]));
                Hypothesis h;
                h.id = text::unescape_field(fields[2]);
                h.occurrence = text::parse_double(fields[3], "occurrence");
                h.conditional_breach = text::parse_double(fields[4], "conditional breach");
                h.source = source_from_string(fields[5]);
                t.hypotheses.push_back(std::move(h));
            } else if (kind == "LOSS") {
                expect_fields(fields, 4, "LOSS");
                ThreatEvent& t = find_mutable_threat(text::unescape_field(fields[1]));
                LossItem item;
                item.type = text::unescape_field(fields[2]);
                item.amount = text::parse_double(fields[3], "loss amount");
                t.loss_breakdown.push_back(std::move(item));
            } else if (kind == "CONTROL") {
                expect_fields(fields, 7, "CONTROL");
                Control c;
                c.id = text::unescape_field(fields[1]);
                c.threat_id = text::unescape_field(fields[2]);
                if (!fields[3].empty()) c.hypothesis_id = text::unescape_field(fields[3]);
                c.effect = text::parse_double(fields[4], "control effect");
                if (fields[5] != "0" && fields[5] != "1")
                    raise(Errc::corrupt_file, "control applied flag must be 0 or 1");
                c.applied = fields[5] == "1";
                c.description = text::unescape_field(fields[6]);
                snapshot->controls.push_back(std::move(c));
            } else if (kind == "EVENT") {
                snapshot->monitor_events.push_back(parse_monitor_event_line(line));
            } else if (kind == "DIGEST") {
                expect_fields(fields, 2, "DIGEST");
                stored_digest = fields[1];
                have_digest = true;
            } else {
                raise(Errc::corrupt_file, "unknown record kind '" + kind + "'");
            }
        });
    }
    if (!have_digest) raise(Errc::corrupt_file, "missing DIGEST line");
    snapshot->content_digest = compute_digest(*snapshot);
    if (snapshot->content_digest != stored_digest)
        raise(Errc::corrupt_file, "digest mismatch: stored " + stored_digest + ", computed " +
                                      snapshot->content_digest);
    validate_snapshot(*snapshot);
    return snapshot;
}

SnapshotPtr load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
    return load_registry(in);
}

}  // namespace ciarisk
