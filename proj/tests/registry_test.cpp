#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ciarisk/error.hpp"
#include "ciarisk/registry.hpp"
#include "support/oracles.hpp"

using namespace ciarisk;

namespace {

Asset make_asset(const std::string& id) {
    return Asset{id, "Asset " + id, AssetKind::software, ""};
}

ThreatEvent make_threat(const std::string& id, const std::string& asset_id, Dimension dim) {
    ThreatEvent t;
    t.id = id;
    t.asset_id = asset_id;
    t.dimension = dim;
    t.label = "test threat";
    t.hypotheses.push_back({"h1", 0.5, 0.6, HypothesisSource::expert});
    t.base_loss = 100.0;
    return t;
}

std::string persist_to_string(const RegistrySnapshot& s) {
    std::ostringstream out;
    persist(s, out);
    return out.str();
}

SnapshotPtr load_from_string(const std::string& content) {
    std::istringstream in(content);
    return load_registry(in);
}

}  // namespace

TEST_CASE("first insertion into an empty registry") {
    Registry registry;
    auto snapshot = registry.add_asset(make_asset("web-app"));
    CHECK(snapshot->version == 1);
    CHECK(snapshot->assets.size() == 1);
    CHECK(snapshot->assets[0].id == "web-app");
}

TEST_CASE("threat referencing an unknown asset is rejected") {
    Registry registry;
    try {
        registry.add_threat_event(make_threat("t1", "ghost", Dimension::integrity));
        FAIL_CHECK("expected DanglingReference");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dangling_reference);
    }
    // The failed mutation must not have advanced the registry.
    CHECK(registry.snapshot()->version == 0);
    CHECK(registry.snapshot()->threat_events.empty());
}

TEST_CASE("reference fixture covers one threat event per dimension") {
    auto snapshot = load_registry(std::filesystem::path(CIARISK_DATA_DIR) / "reference_registry.txt");
    REQUIRE(snapshot->threat_events.size() == 3);
    bool seen[3] = {false, false, false};
    for (const auto& t : snapshot->threat_events) seen[static_cast<int>(t.dimension)] = true;
    CHECK(seen[0]);
    CHECK(seen[1]);
    CHECK(seen[2]);
}

TEST_CASE("duplicate ids are rejected per record kind") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    CHECK_THROWS_AS(registry.add_asset(make_asset("a")), Error);
    registry.add_threat_event(make_threat("t", "a", Dimension::availability));
    CHECK_THROWS_AS(registry.add_threat_event(make_threat("t", "a", Dimension::integrity)), Error);
}

TEST_CASE("invariant violations are rejected") {
    Registry registry;
    registry.add_asset(make_asset("a"));

    SUBCASE("probability out of range") {
        ThreatEvent t = make_threat("t", "a", Dimension::integrity);
        t.hypotheses[0].occurrence = 1.5;
        CHECK_THROWS_AS(registry.add_threat_event(t), Error);
    }
    SUBCASE("occurrence mass above one") {
        ThreatEvent t = make_threat("t", "a", Dimension::integrity);
        t.hypotheses.push_back({"h2", 0.7, 0.5, HypothesisSource::expert});
        CHECK_THROWS_AS(registry.add_threat_event(t), Error);
    }
    SUBCASE("no hypotheses") {
        ThreatEvent t = make_threat("t", "a", Dimension::integrity);
        t.hypotheses.clear();
        CHECK_THROWS_AS(registry.add_threat_event(t), Error);
    }
    SUBCASE("base loss must match a non-empty breakdown") {
        ThreatEvent t = make_threat("t", "a", Dimension::integrity);
        t.loss_breakdown = {{"productivity", 1000.0}, {"fines", 4000.0}};
        t.base_loss = 100.0;
        CHECK_THROWS_AS(registry.add_threat_event(t), Error);
        t.base_loss = 5000.0;
        auto snapshot = registry.add_threat_event(t);
        CHECK(snapshot->find_threat("t")->effective_loss() == 5000.0);
    }
    SUBCASE("control effect outside [0,1]") {
        registry.add_threat_event(make_threat("t", "a", Dimension::integrity));
        Control c{"c", "t", std::nullopt, 1.5, false, ""};
        CHECK_THROWS_AS(registry.add_control(c), Error);
    }
}

TEST_CASE("control and event references must resolve") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    registry.add_threat_event(make_threat("t", "a", Dimension::availability));

    Control bad_threat{"c1", "nope", std::nullopt, 0.5, true, ""};
    CHECK_THROWS_AS(registry.add_control(bad_threat), Error);
    Control bad_hyp{"c1", "t", "h9", 0.5, true, ""};
    CHECK_THROWS_AS(registry.add_control(bad_hyp), Error);
    registry.add_control({"c1", "t", "h1", 0.5, true, ""});

    MonitorEvent bad_event{1.0, Dimension::availability, "ghost", std::nullopt, Severity::info, ""};
    CHECK_THROWS_AS(registry.ingest_events({&bad_event, 1}), Error);
    // Hypothesis must live on a matching (asset, dimension) threat.
    MonitorEvent wrong_dim{1.0, Dimension::integrity, "a", "h1", Severity::info, ""};
    CHECK_THROWS_AS(registry.ingest_events({&wrong_dim, 1}), Error);
    MonitorEvent good{1.0, Dimension::availability, "a", "h1", Severity::high, "alert"};
    auto snapshot = registry.ingest_events({&good, 1});
    CHECK(snapshot->monitor_events.size() == 1);
}

TEST_CASE("removals keep referential integrity") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    registry.add_threat_event(make_threat("t", "a", Dimension::availability));
    registry.add_control({"c", "t", std::nullopt, 0.5, false, ""});

    CHECK_THROWS_AS(registry.remove_asset("a"), Error);         // threat still references it
    CHECK_THROWS_AS(registry.remove_threat_event("t"), Error);  // control still references it
    registry.remove_control("c");
    registry.remove_threat_event("t");
    registry.remove_asset("a");
    CHECK(registry.snapshot()->empty());
}

TEST_CASE("event batches must be internally timestamp-ordered") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    MonitorEvent events[2] = {
        {5.0, Dimension::availability, "a", std::nullopt, Severity::info, ""},
        {3.0, Dimension::availability, "a", std::nullopt, Severity::info, ""},
    };
    CHECK_THROWS_AS(registry.ingest_events(events), Error);
    // Two separate batches (streams) may interleave arbitrarily.
    registry.ingest_events({&events[0], 1});
    auto snapshot = registry.ingest_events({&events[1], 1});
    CHECK(snapshot->monitor_events.size() == 2);
}

TEST_CASE("detect_change tracks content, not version") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    registry.add_threat_event(make_threat("t", "a", Dimension::availability));
    auto base = registry.add_control({"c", "t", std::nullopt, 0.5, true, ""});

    CHECK_FALSE(detect_change(*base, *base));

    MonitorEvent event{1.0, Dimension::availability, "a", std::nullopt, Severity::info, ""};
    auto with_event = registry.ingest_events({&event, 1});
    CHECK(detect_change(*base, *with_event));

    auto tweaked = registry.update_control({"c", "t", std::nullopt, 0.4, true, ""});
    CHECK(detect_change(*with_event, *tweaked));
}

TEST_CASE("persistence round-trips") {
    SUBCASE("empty registry") {
        Registry registry;
        auto s = registry.snapshot();
        auto reloaded = load_from_string(persist_to_string(*s));
        CHECK(reloaded->content_digest == s->content_digest);
        CHECK(reloaded->version == s->version);
    }
    SUBCASE("reference fixture is bit-exact") {
        auto s = load_registry(std::filesystem::path(CIARISK_DATA_DIR) / "reference_registry.txt");
        auto reloaded = load_from_string(persist_to_string(*s));
        CHECK(reloaded->content_digest == s->content_digest);
        CHECK(reloaded->assets == s->assets);
        CHECK(reloaded->threat_events == s->threat_events);
        CHECK(reloaded->controls == s->controls);
        CHECK(reloaded->monitor_events == s->monitor_events);
        CHECK(reloaded->version == s->version);
    }
    SUBCASE("fields with tabs and newlines survive") {
        Registry registry;
        Asset a = make_asset("a");
        a.name = "line one\nline\ttwo\\three";
        registry.add_asset(a);
        auto s = registry.snapshot();
        auto reloaded = load_from_string(persist_to_string(*s));
        CHECK(reloaded->assets[0].name == a.name);
        CHECK(reloaded->content_digest == s->content_digest);
    }
}

TEST_CASE("corrupt registry files are rejected") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    std::string good = persist_to_string(*registry.snapshot());

    auto expect_corrupt = [](const std::string& content) {
        try {
            load_from_string(content);
            FAIL_CHECK("expected CorruptFile");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::corrupt_file);
        }
    };

    SUBCASE("truncated record") {
        expect_corrupt("ASSET\ta\tname\n" + good.substr(good.find("DIGEST")));
    }
    SUBCASE("digest mismatch") {
        std::string tampered = good;
        tampered.replace(tampered.find("Asset a"), 7, "Asset b");
        expect_corrupt(tampered);
    }
    SUBCASE("missing digest line") {
        expect_corrupt(good.substr(0, good.find("DIGEST")));
    }
    SUBCASE("unknown record kind") {
        expect_corrupt("WIDGET\tx\n" + good);
    }
    SUBCASE("content after digest") {
        expect_corrupt(good + "ASSET\tb\tn\tsoftware\t\n");
    }
    SUBCASE("missing file is an io failure") {
        try {
            load_registry(std::filesystem::path("/nonexistent/registry.txt"));
            FAIL_CHECK("expected IoFailure");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::io_failure);
        }
    }
}

TEST_CASE("fuzzed mutation sequences preserve the registry invariants") {
    test_support::Rng rng(1234);
    for (int round = 0; round < 25; ++round) {
        Registry registry;
        std::vector<SnapshotPtr> history;
        std::vector<std::string> digests;
        history.push_back(registry.snapshot());
        digests.push_back(history.back()->content_digest);

        test_support::populate_random_registry(rng, registry, rng.uniform_int(1, 5), true);
        test_support::add_random_controls(rng, registry, rng.uniform_int(0, 3));
        history.push_back(registry.snapshot());
        digests.push_back(history.back()->content_digest);

        // Failed mutations must leave the published snapshot untouched.
        std::uint64_t version_before = registry.snapshot()->version;
        CHECK_THROWS_AS(registry.add_asset(make_asset("asset-0")), Error);
        CHECK(registry.snapshot()->version == version_before);

        registry.add_asset(make_asset("late-asset"));
        history.push_back(registry.snapshot());
        digests.push_back(history.back()->content_digest);

        for (std::size_t i = 1; i < history.size(); ++i)
            CHECK(history[i]->version > history[i - 1]->version);

        // Old snapshots unchanged, every reachable snapshot referentially
        // intact, and the file format round-trip faithful.
        for (std::size_t i = 0; i < history.size(); ++i) {
            CHECK(compute_digest(*history[i]) == digests[i]);
            CHECK_NOTHROW(validate_snapshot(*history[i]));
            auto reloaded = load_from_string(persist_to_string(*history[i]));
            CHECK(reloaded->content_digest == digests[i]);
            CHECK(reloaded->monitor_events == history[i]->monitor_events);
        }
    }
}

TEST_CASE("snapshots are safe to share across concurrent readers") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    registry.add_threat_event(make_threat("t", "a", Dimension::availability));

    std::atomic<bool> stop{false};
    std::vector<std::thread> readers;
    for (int i = 0; i < 4; ++i) {
        readers.emplace_back([&] {
            while (!stop.load()) {
                auto s = registry.snapshot();
                validate_snapshot(*s);
                CHECK(compute_digest(*s) == s->content_digest);
            }
        });
    }
    for (int i = 0; i < 200; ++i) {
        MonitorEvent e{static_cast<double>(i), Dimension::availability, "a", std::nullopt,
                       Severity::info, "tick"};
        registry.ingest_events({&e, 1});
    }
    stop = true;
    for (auto& r : readers) r.join();
    CHECK(registry.snapshot()->version == 202);
    CHECK(registry.snapshot()->monitor_events.size() == 200);
}

TEST_CASE("event retention drops old events only") {
    Registry registry;
    registry.add_asset(make_asset("a"));
    MonitorEvent events[3] = {
        {10.0, Dimension::availability, "a", std::nullopt, Severity::info, "one"},
        {20.0, Dimension::availability, "a", std::nullopt, Severity::info, "two"},
        {30.0, Dimension::availability, "a", std::nullopt, Severity::info, "three"},
    };
    registry.ingest_events(events);
    auto snapshot = registry.remove_events_before(20.0);
    REQUIRE(snapshot->monitor_events.size() == 2);
    CHECK(snapshot->monitor_events[0].payload == "two");
}
