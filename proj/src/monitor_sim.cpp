#include "ciarisk/monitor_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::monitor_sim {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kMixSumEpsilon = 1e-9;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Uniform in [0,1) from the top 53 bits; sampling is hand-rolled so streams
// do not depend on the standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential_gap(std::mt19937_64& rng, double rate_per_second) {
    double u = uniform01(rng);
    return -std::log1p(-u) / rate_per_second;
}

Severity sample_severity(std::mt19937_64& rng, const std::array<double, 3>& mix) {
    double u = uniform01(rng);
    if (u < mix[0]) return Severity::info;
    if (u < mix[0] + mix[1]) return Severity::medium;
    return Severity::high;
}

}  // namespace

void validate_scenario(const Scenario& scenario) {
    if (scenario.name.empty()) raise(Errc::invalid_scenario, "scenario name must be non-empty");
    if (!(scenario.duration_seconds >= 0.0) || !std::isfinite(scenario.duration_seconds))
        raise(Errc::invalid_scenario, "duration must be a non-negative number of seconds");
    for (const auto& g : scenario.generators) {
        if (g.asset_id.empty()) raise(Errc::invalid_scenario, "generator asset id must be non-empty");
        if (!(g.rate_per_hour >= 0.0) || !std::isfinite(g.rate_per_hour))
            raise(Errc::invalid_scenario, "generator rate must be >= 0");
        double mix_sum = 0.0;
        for (double w : g.severity_mix) {
            if (!(w >= 0.0)) raise(Errc::invalid_scenario, "severity weights must be non-negative");
            mix_sum += w;
        }
        if (std::abs(mix_sum - 1.0) > kMixSumEpsilon)
            raise(Errc::invalid_scenario, "severity weights must sum to 1, got " +
                                              text::format_double(mix_sum));
    }
}

std::vector<MonitorEvent> generate(const Scenario& scenario) {
    validate_scenario(scenario);

    struct Tagged {
        MonitorEvent event;
        std::size_t generator;
        std::size_t sequence;
    };
    std::vector<Tagged> tagged;

    for (std::size_t g = 0; g < scenario.generators.size(); ++g) {
        const GeneratorSpec& spec = scenario.generators[g];
        if (spec.rate_per_hour <= 0.0) continue;

        // Independent substream per generator.
        std::uint64_t state = scenario.seed;
        for (std::size_t skip = 0; skip <= g; ++skip) splitmix64(state);
        std::mt19937_64 rng(splitmix64(state));

        const double rate_per_second = spec.rate_per_hour / kSecondsPerHour;
        double t = 0.0;
        std::size_t sequence = 0;
        while (true) {
            t += exponential_gap(rng, rate_per_second);
            if (t > scenario.duration_seconds) break;
            MonitorEvent event;
            event.timestamp = t;
            event.dimension = spec.dimension;
            event.asset_id = spec.asset_id;
            event.hypothesis_id = spec.hypothesis_id;
            event.severity = sample_severity(rng, spec.severity_mix);
            event.payload = scenario.name + ":g" + std::to_string(g) + "#" + std::to_string(sequence);
            tagged.push_back({std::move(event), g, sequence});
            ++sequence;
        }
    }

    std::sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
        if (a.event.timestamp != b.event.timestamp) return a.event.timestamp < b.event.timestamp;
        if (a.generator != b.generator) return a.generator < b.generator;
        return a.sequence < b.sequence;
    });

    std::vector<MonitorEvent> events;
    events.reserve(tagged.size());
    for (auto& t : tagged) events.push_back(std::move(t.event));
    return events;
}

namespace {

GeneratorSpec parse_generator(std::string_view body) {
    GeneratorSpec spec;
    bool have_dimension = false;
    bool have_rate = false;
    for (const auto& token : text::split_ws(body)) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            raise(Errc::invalid_scenario, "generator token '" + token + "' is not key=value");
        std::string key = token.substr(0, eq);
        std::string value = token.substr(eq + 1);
        if (key == "dimension") {
            spec.dimension = dimension_from_string(value);
            have_dimension = true;
        } else if (key == "asset") {
            spec.asset_id = value;
        } else if (key == "hypothesis") {
            spec.hypothesis_id = value;
        } else if (key == "rate") {
            spec.rate_per_hour = text::parse_double(value, "generator rate");
            have_rate = true;
        } else if (key == "mix") {
            std::array<double, 3> mix{};
            std::size_t start = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                std::size_t comma = value.find(',', start);
                bool last = i == 2;
                if (last != (comma == std::string::npos))
                    raise(Errc::invalid_scenario, "mix needs exactly 3 comma-separated weights");
                mix[i] = text::parse_double(
                    value.substr(start, last ? std::string::npos : comma - start), "severity weight");
                start = comma + 1;
            }
            spec.severity_mix = mix;
        } else {
            raise(Errc::invalid_scenario, "unknown generator key '" + key + "'");
        }
    }
    if (!have_dimension) raise(Errc::invalid_scenario, "generator needs dimension=");
    if (spec.asset_id.empty()) raise(Errc::invalid_scenario, "generator needs asset=");
    if (!have_rate) raise(Errc::invalid_scenario, "generator needs rate=");
    return spec;
}

}  // namespace

Scenario load_scenario(std::istream& in) {
    Scenario scenario;
    bool have_duration = false;
    std::string line;
    try {
        while (std::getline(in, line)) {
            std::string_view sv = text::trim(line);
            if (sv.empty() || sv.front() == '#') continue;
            if (sv.starts_with("name:")) {
                scenario.name = std::string(text::trim(sv.substr(5)));
            } else if (sv.starts_with("seed:")) {
                scenario.seed = text::parse_u64(text::trim(sv.substr(5)), "seed");
            } else if (sv.starts_with("duration:")) {
                scenario.duration_seconds = text::parse_double(text::trim(sv.substr(9)), "duration");
                have_duration = true;
            } else if (sv.starts_with("generator:")) {
                scenario.generators.push_back(parse_generator(sv.substr(10)));
            } else {
                raise(Errc::invalid_scenario, "unexpected scenario line: '" + std::string(sv) + "'");
            }
        }
    } catch (const Error& e) {
        if (e.code() == Errc::parse_error) raise(Errc::invalid_scenario, e.what());
        throw;
    }
    if (!have_duration) raise(Errc::invalid_scenario, "scenario needs a duration: line");
    validate_scenario(scenario);
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_failure, "cannot open '" + path.string() + "' for reading");
    return load_scenario(in);
}

void generate_into(const Scenario& scenario, BoundedQueue<MonitorEvent>& queue) {
    for (auto& event : generate(scenario)) queue.push(std::move(event));
    queue.close();
}

}  // namespace ciarisk::monitor_sim
