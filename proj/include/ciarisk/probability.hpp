#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ciarisk/registry.hpp"
#include "ciarisk/types.hpp"

namespace ciarisk::probability {

struct EventProbability {
    std::string threat_event_id;
    double value = 0.0;
    bool clamped = false;  // raw hypothesis sum exceeded 1 and was clipped

    bool operator==(const EventProbability&) const = default;
};

struct DimensionProbability {
    Dimension dimension = Dimension::confidentiality;
    double value = 0.0;
    std::vector<EventProbability> contributing_events;

    bool operator==(const DimensionProbability&) const = default;
};

// Total-probability sum over one event's hypotheses:
// min(1, Σ_j occurrence_j · conditional_breach_j).
EventProbability event_probability(std::span<const Hypothesis> hypotheses,
                                   std::string_view threat_event_id = {});

// Breach probability of one CIA dimension across independent events:
// 1 − Π_i (1 − P(A_i)). Empty input yields 0.
DimensionProbability dimension_probability(Dimension dimension,
                                           std::vector<EventProbability> events);

// Relative-frequency estimate (k + alpha) / (opportunities + 2·alpha) where k
// counts events matching hypothesis_id with timestamp in (as_of − window,
// as_of], capped at opportunities. alpha = 0 gives the raw ratio, alpha = 1
// Laplace smoothing.
double estimate_occurrence(std::span<const MonitorEvent> events, std::string_view hypothesis_id,
                           double window_seconds, std::int64_t opportunities, double as_of,
                           double alpha = 0.0);

}  // namespace ciarisk::probability
