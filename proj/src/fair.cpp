#include "ciarisk/fair.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::fair {

const char* to_string(Level level) {
    switch (level) {
    case Level::very_low: return "very_low";
    case Level::low: return "low";
    case Level::medium: return "medium";
    case Level::high: return "high";
    case Level::very_high: return "very_high";
    }
    return "?";
}

const char* to_string(RiskLevel level) {
    switch (level) {
    case RiskLevel::low: return "low";
    case RiskLevel::medium: return "medium";
    case RiskLevel::high: return "high";
    case RiskLevel::critical: return "critical";
    }
    return "?";
}

Level level_from_string(std::string_view name) {
    if (name == "very_low") return Level::very_low;
    if (name == "low") return Level::low;
    if (name == "medium") return Level::medium;
    if (name == "high") return Level::high;
    if (name == "very_high") return Level::very_high;
    raise(Errc::parse_error, "unknown level '" + std::string(name) + "'");
}

RiskLevel risk_level_from_string(std::string_view name) {
    if (name == "low") return RiskLevel::low;
    if (name == "medium") return RiskLevel::medium;
    if (name == "high") return RiskLevel::high;
    if (name == "critical") return RiskLevel::critical;
    raise(Errc::parse_error, "unknown risk level '" + std::string(name) + "'");
}

namespace {

void check_thresholds(const std::array<double, 4>& thresholds, const char* what) {
    if (!(thresholds[0] >= 0.0))
        raise(Errc::invariant_violation, std::string(what) + " thresholds must be non-negative");
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > thresholds[i - 1]))
            raise(Errc::invariant_violation, std::string(what) + " thresholds must be strictly increasing");
    }
}

// Threshold values classify upward: the level index is the number of
// thresholds at or below the value.
Level classify_by(const std::array<double, 4>& thresholds, double value) {
    std::size_t index = 0;
    while (index < thresholds.size() && value >= thresholds[index]) ++index;
    return static_cast<Level>(index);
}

}  // namespace

FrequencyScale::FrequencyScale(std::array<double, 4> thresholds_per_year)
    : thresholds_(thresholds_per_year) {
    check_thresholds(thresholds_, "frequency");
}

Level FrequencyScale::classify(double rate_per_year) const {
    if (rate_per_year < 0.0) raise(Errc::negative_rate, "event rate must be >= 0");
    return classify_by(thresholds_, rate_per_year);
}

LossScale::LossScale(std::array<double, 4> thresholds) : thresholds_(thresholds) {
    check_thresholds(thresholds_, "loss");
}

Level LossScale::classify(double amount) const {
    if (amount < 0.0) raise(Errc::negative_amount, "loss amount must be >= 0");
    return classify_by(thresholds_, amount);
}

RiskMatrix::RiskMatrix(Grid cells) : cells_(cells) {
    for (std::size_t row = 0; row < 5; ++row) {
        for (std::size_t col = 1; col < 5; ++col) {
            if (cells_[row][col] < cells_[row][col - 1])
                raise(Errc::non_monotone_matrix, "risk matrix decreases along a row");
        }
    }
    for (std::size_t col = 0; col < 5; ++col) {
        for (std::size_t row = 1; row < 5; ++row) {
            if (cells_[row][col] < cells_[row - 1][col])
                raise(Errc::non_monotone_matrix, "risk matrix decreases along a column");
        }
    }
}

RiskLevel RiskMatrix::lookup(Level frequency, Level loss) const {
    return cells_[static_cast<std::size_t>(frequency)][static_cast<std::size_t>(loss)];
}

FrequencyScale default_frequency_scale() {
    return FrequencyScale({1.0, 10.0, 50.0, 100.0});
}

LossScale default_loss_scale() {
    return LossScale({1000.0, 5000.0, 10000.0, 50000.0});
}

RiskMatrix default_risk_matrix() {
    using L = RiskLevel;
    return RiskMatrix({{
        {{L::low, L::low, L::low, L::medium, L::medium}},
        {{L::low, L::low, L::medium, L::medium, L::high}},
        {{L::low, L::medium, L::medium, L::high, L::high}},
        {{L::medium, L::medium, L::high, L::high, L::critical}},
        {{L::medium, L::high, L::high, L::critical, L::critical}},
    }});
}

double worst_case_loss(std::span<const LossItem> breakdown) {
    double total = 0.0;
    for (const auto& item : breakdown) {
        if (!(item.amount >= 0.0))
            raise(Errc::negative_amount, "loss amount for '" + item.type + "' must be >= 0");
        total += item.amount;
    }
    return total;
}

const DimensionRisk* RiskReport::find(Dimension d) const {
    for (const auto& entry : dimensions)
        if (entry.dimension == d) return &entry;
    return nullptr;
}

RiskReport quantitative_risk(std::span<const std::pair<Dimension, double>> probabilities,
                             std::span<const std::pair<Dimension, double>> losses) {
    std::map<Dimension, double> p_by_dim;
    std::map<Dimension, double> e_by_dim;
    for (const auto& [dim, p] : probabilities) {
        if (!(p >= 0.0 && p <= 1.0))
            raise(Errc::invariant_violation, "probability out of [0,1]");
        if (!p_by_dim.emplace(dim, p).second)
            raise(Errc::dimension_mismatch, std::string("duplicate probability for ") + to_string(dim));
    }
    for (const auto& [dim, e] : losses) {
        if (!(e >= 0.0)) raise(Errc::negative_amount, "loss must be >= 0");
        if (!e_by_dim.emplace(dim, e).second)
            raise(Errc::dimension_mismatch, std::string("duplicate loss for ") + to_string(dim));
    }
    if (p_by_dim.size() != e_by_dim.size())
        raise(Errc::dimension_mismatch, "probability and loss dimension sets differ");
    for (const auto& [dim, p] : p_by_dim) {
        if (!e_by_dim.contains(dim))
            raise(Errc::dimension_mismatch, std::string("no loss for ") + to_string(dim));
    }

    RiskReport report;
    for (Dimension dim : kAllDimensions) {
        auto it = p_by_dim.find(dim);
        if (it == p_by_dim.end()) continue;
        DimensionRisk entry;
        entry.dimension = dim;
        entry.probability = it->second;
        entry.loss = e_by_dim.at(dim);
        entry.risk = entry.probability * entry.loss;
        report.total_risk += entry.risk;
        report.dimensions.push_back(entry);
    }
    return report;
}

ScalesAndMatrix load_scales_and_matrix(std::istream& in) {
    auto sections = text::read_sections(in);
    const text::Section* scales = nullptr;
    const text::Section* matrix = nullptr;
    for (const auto& s : sections) {
        if (s.name == "scales") scales = &s;
        else if (s.name == "matrix") matrix = &s;
    }
    if (scales == nullptr) raise(Errc::parse_error, "config is missing a 'scales' section");
    if (matrix == nullptr) raise(Errc::parse_error, "config is missing a 'matrix' section");

    std::optional<std::array<double, 4>> frequency;
    std::optional<std::array<double, 4>> loss;
    for (const auto& line : scales->lines) {
        auto tokens = text::split_ws(line);
        if (tokens.size() != 5)
            raise(Errc::parse_error, "scale line needs a name and 4 thresholds: '" + line + "'");
        std::array<double, 4> values{};
        for (std::size_t i = 0; i < 4; ++i) values[i] = text::parse_double(tokens[i + 1], "threshold");
        if (tokens[0] == "frequency") frequency = values;
        else if (tokens[0] == "loss") loss = values;
        else raise(Errc::parse_error, "unknown scale '" + tokens[0] + "'");
    }
    if (!frequency) raise(Errc::parse_error, "scales section is missing the 'frequency' row");
    if (!loss) raise(Errc::parse_error, "scales section is missing the 'loss' row");

    if (matrix->lines.size() != 5)
        raise(Errc::parse_error, "matrix section needs 5 rows, got " + std::to_string(matrix->lines.size()));
    RiskMatrix::Grid grid{};
    for (std::size_t row = 0; row < 5; ++row) {
        auto tokens = text::split_ws(matrix->lines[row]);
        if (tokens.size() != 5)
            raise(Errc::parse_error, "matrix row needs 5 level names: '" + matrix->lines[row] + "'");
        for (std::size_t col = 0; col < 5; ++col)
            grid[row][col] = risk_level_from_string(tokens[col]);
    }

    return ScalesAndMatrix{FrequencyScale(*frequency), LossScale(*loss), RiskMatrix(grid)};
}

}  // namespace ciarisk::fair
