#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ciarisk/registry.hpp"
#include "ciarisk/types.hpp"

namespace ciarisk::fair {

// Qualitative five-step scale shared by frequency and loss magnitude.
enum class Level { very_low, low, medium, high, very_high };

enum class RiskLevel { low, medium, high, critical };

const char* to_string(Level level);
const char* to_string(RiskLevel level);
Level level_from_string(std::string_view name);
RiskLevel risk_level_from_string(std::string_view name);

// Four strictly increasing thresholds splitting [0, inf) into five levels.
// A value equal to a threshold classifies into the higher level.
class FrequencyScale {
public:
    explicit FrequencyScale(std::array<double, 4> thresholds_per_year);
    Level classify(double rate_per_year) const;  // NegativeRate on rate < 0
    const std::array<double, 4>& thresholds() const { return thresholds_; }

private:
    std::array<double, 4> thresholds_;
};

class LossScale {
public:
    explicit LossScale(std::array<double, 4> thresholds);
    Level classify(double amount) const;  // NegativeAmount on amount < 0
    const std::array<double, 4>& thresholds() const { return thresholds_; }

private:
    std::array<double, 4> thresholds_;
};

// 5x5 lookup indexed by (frequency level, loss level). Construction rejects
// grids that are not non-decreasing along every row and column.
class RiskMatrix {
public:
    using Grid = std::array<std::array<RiskLevel, 5>, 5>;
    explicit RiskMatrix(Grid cells);
    RiskLevel lookup(Level frequency, Level loss) const;
    const Grid& cells() const { return cells_; }

private:
    Grid cells_;
};

FrequencyScale default_frequency_scale();
LossScale default_loss_scale();
RiskMatrix default_risk_matrix();

// Sum of all loss-type amounts (worst-case total).
double worst_case_loss(std::span<const LossItem> breakdown);

struct DimensionRisk {
    Dimension dimension = Dimension::confidentiality;
    double probability = 0.0;
    double loss = 0.0;
    double risk = 0.0;  // probability * loss, full precision
    std::optional<RiskLevel> qualitative;

    bool operator==(const DimensionRisk&) const = default;
};

struct RiskReport {
    std::vector<DimensionRisk> dimensions;  // canonical CIA order
    double total_risk = 0.0;
    double timestamp = 0.0;           // as-of time the assessment used
    std::uint64_t snapshot_version = 0;

    const DimensionRisk* find(Dimension d) const;

    bool operator==(const RiskReport&) const = default;
};

// R = Σ P_i · E_i over matching dimension sets.
RiskReport quantitative_risk(std::span<const std::pair<Dimension, double>> probabilities,
                             std::span<const std::pair<Dimension, double>> losses);

struct ScalesAndMatrix {
    FrequencyScale frequency;
    LossScale loss;
    RiskMatrix matrix;
};

// Parses the `scales` section (two 4-threshold rows) and the `matrix`
// section (5 rows of 5 level names) of an assessment config file.
ScalesAndMatrix load_scales_and_matrix(std::istream& in);

}  // namespace ciarisk::fair
