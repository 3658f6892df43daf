#include "ciarisk/probability.hpp"

#include <algorithm>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::probability {

namespace {
constexpr double kOccurrenceMassEpsilon = 1e-9;
}

EventProbability event_probability(std::span<const Hypothesis> hypotheses,
                                   std::string_view threat_event_id) {
    if (hypotheses.empty())
        raise(Errc::empty_hypotheses, "event '" + std::string(threat_event_id) + "' has no hypotheses");

    double occurrence_mass = 0.0;
    double raw = 0.0;
    for (const auto& h : hypotheses) {
        if (!(h.occurrence >= 0.0 && h.occurrence <= 1.0))
            raise(Errc::invariant_violation, "occurrence probability out of [0,1]");
        if (!(h.conditional_breach >= 0.0 && h.conditional_breach <= 1.0))
            raise(Errc::invariant_violation, "conditional breach probability out of [0,1]");
        occurrence_mass += h.occurrence;
        raw += h.occurrence * h.conditional_breach;
    }
    if (occurrence_mass > 1.0 + kOccurrenceMassEpsilon)
        raise(Errc::occurrence_mass_exceeded, "occurrence probabilities sum to " +
                                                  text::format_double(occurrence_mass) + " > 1");

    EventProbability result;
    result.threat_event_id = std::string(threat_event_id);
    result.clamped = raw > 1.0;
    result.value = result.clamped ? 1.0 : raw;
    return result;
}

DimensionProbability dimension_probability(Dimension dimension,
                                           std::vector<EventProbability> events) {
    double none_occurs = 1.0;
    for (const auto& e : events) {
        if (!(e.value >= 0.0 && e.value <= 1.0))
            raise(Errc::invariant_violation, "event probability out of [0,1]");
        none_occurs *= 1.0 - e.value;
    }
    DimensionProbability result;
    result.dimension = dimension;
    result.value = 1.0 - none_occurs;
    result.contributing_events = std::move(events);
    return result;
}

double estimate_occurrence(std::span<const MonitorEvent> events, std::string_view hypothesis_id,
                           double window_seconds, std::int64_t opportunities, double as_of,
                           double alpha) {
    if (!(window_seconds > 0.0))
        raise(Errc::invariant_violation, "window must be positive");
    if (opportunities < 1)
        raise(Errc::zero_opportunities, "opportunities must be >= 1");
    if (!(alpha >= 0.0))
        raise(Errc::invariant_violation, "smoothing constant must be >= 0");

    std::int64_t matches = 0;
    const double window_start = as_of - window_seconds;
    for (const auto& e : events) {
        if (!e.hypothesis_id || *e.hypothesis_id != hypothesis_id) continue;
        if (e.timestamp > window_start && e.timestamp <= as_of) ++matches;
    }
    matches = std::min(matches, opportunities);
    return (static_cast<double>(matches) + alpha) /
           (static_cast<double>(opportunities) + 2.0 * alpha);
}

}  // namespace ciarisk::probability
