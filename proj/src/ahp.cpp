#include "ciarisk/ahp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::ahp {

namespace {

constexpr double kReciprocityEpsilon = 1e-9;
constexpr double kDiagonalEpsilon = 1e-9;
constexpr double kScaleEpsilon = 1e-6;
// The paper's own normalized tables carry three-decimal rounding, so column
// and weight sums are accepted within 5e-3.
constexpr double kRoundedSumTolerance = 5e-3;

// Random consistency indices for n = 1..10 (Saaty).
constexpr double kRandomIndex[11] = {0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};

bool on_judgment_scale(double value) {
    for (int k = 1; k <= 9; ++k) {
        if (std::abs(value - k) <= kScaleEpsilon) return true;
        if (std::abs(value - 1.0 / k) <= kScaleEpsilon) return true;
    }
    return false;
}

void check_square(const JudgmentMatrix& m) {
    const std::size_t n = m.labels.size();
    if (n == 0) raise(Errc::not_square, "matrix has no rows");
    if (m.values.size() != n)
        raise(Errc::not_square, "matrix has " + std::to_string(m.values.size()) + " rows for " +
                                    std::to_string(n) + " labels");
    for (const auto& row : m.values) {
        if (row.size() != n)
            raise(Errc::not_square, "matrix row has " + std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(n));
    }
}

}  // namespace

std::vector<std::string> validate(const JudgmentMatrix& m, bool strict_scale) {
    check_square(m);
    const std::size_t n = m.size();

    std::set<std::string> seen;
    for (const auto& label : m.labels) {
        if (!seen.insert(label).second)
            raise(Errc::label_mismatch, "duplicate label '" + label + "'");
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = m.values[i][j];
            if (!(v > 0.0) || !std::isfinite(v))
                raise(Errc::non_positive_entry, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                    ") is not a positive finite number");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m.values[i][i] - 1.0) > kDiagonalEpsilon)
            raise(Errc::bad_diagonal, "diagonal entry (" + std::to_string(i) + "," + std::to_string(i) +
                                          ") must be 1, got " + text::format_double(m.values[i][i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double product = m.values[i][j] * m.values[j][i];
            if (std::abs(product - 1.0) > kReciprocityEpsilon)
                raise(Errc::not_reciprocal, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                                ") and transpose multiply to " + text::format_double(product));
        }
    }

    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (on_judgment_scale(m.values[i][j])) continue;
            std::string note = "entry (" + m.labels[i] + "," + m.labels[j] + ") = " +
                               text::format_double(m.values[i][j]) + " is off the 1..9 judgment scale";
            if (strict_scale) raise(Errc::scale_violation, note);
            warnings.push_back(std::move(note));
        }
    }
    return warnings;
}

std::vector<double> column_sums(const JudgmentMatrix& m) {
    check_square(m);
    const std::size_t n = m.size();
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sums[j] += m.values[i][j];
    return sums;
}

std::vector<std::vector<double>> normalize(const JudgmentMatrix& m) {
    const auto sums = column_sums(m);
    for (double s : sums) {
        if (!(s > 0.0)) raise(Errc::zero_column, "column sum is not positive");
    }
    const std::size_t n = m.size();
    std::vector<std::vector<double>> grid(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) grid[i][j] = m.values[i][j] / sums[j];
    return grid;
}

PriorityVector priority_vector_from_normalized(std::vector<std::string> labels,
                                               const std::vector<std::vector<double>>& grid) {
    const std::size_t n = labels.size();
    if (grid.size() != n) raise(Errc::not_square, "normalized grid row count does not match labels");
    for (const auto& row : grid) {
        if (row.size() != n) raise(Errc::not_square, "normalized grid is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += grid[i][j];
        if (std::abs(sum - 1.0) > kRoundedSumTolerance)
            raise(Errc::invariant_violation, "normalized column " + std::to_string(j) + " sums to " +
                                                 text::format_double(sum) + ", expected 1");
    }

    PriorityVector result;
    result.labels = std::move(labels);
    result.weights.resize(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += grid[i][j];
        result.weights[i] = row_sum / static_cast<double>(n);
    }
    return result;
}

PriorityVector priority_vector(const JudgmentMatrix& m) {
    validate(m);
    return priority_vector_from_normalized(m.labels, normalize(m));
}

PriorityVector rank_alternatives(const DecisionModel& model, bool strict_scale) {
    validate(model.criteria, strict_scale);
    if (model.alternatives.size() != model.criteria.size())
        raise(Errc::label_mismatch, "expected one alternative matrix per criterion (" +
                                        std::to_string(model.criteria.size()) + "), got " +
                                        std::to_string(model.alternatives.size()));

    const PriorityVector criteria_weights = priority_vector(model.criteria);

    const auto& reference_labels = model.alternatives.front().labels;
    const std::set<std::string> reference_set(reference_labels.begin(), reference_labels.end());

    PriorityVector result;
    result.labels = reference_labels;
    result.weights.assign(reference_labels.size(), 0.0);

    for (std::size_t c = 0; c < model.alternatives.size(); ++c) {
        const JudgmentMatrix& alt = model.alternatives[c];
        std::set<std::string> labels(alt.labels.begin(), alt.labels.end());
        if (labels != reference_set)
            raise(Errc::label_mismatch, "alternative labels differ for criterion '" +
                                            model.criteria.labels[c] + "'");
        validate(alt, strict_scale);
        const PriorityVector local = priority_vector(alt);
        for (std::size_t a = 0; a < local.labels.size(); ++a) {
            auto it = std::find(result.labels.begin(), result.labels.end(), local.labels[a]);
            result.weights[static_cast<std::size_t>(it - result.labels.begin())] +=
                criteria_weights.weights[c] * local.weights[a];
        }
    }
    return result;
}

double consistency_ratio(const JudgmentMatrix& m) {
    validate(m);
    const std::size_t n = m.size();
    if (n > 10) raise(Errc::unsupported_size, "consistency index table covers up to n = 10");
    if (n <= 2) return 0.0;

    // Power iteration for the principal eigenvalue; entries are positive so
    // convergence to lambda_max is guaranteed.
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    double lambda = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[i] += m.values[i][j] * v[j];
        double total = 0.0;
        for (double x : next) total += x;
        for (double& x : next) x /= total;
        if (std::abs(total - lambda) < 1e-13) {
            lambda = total;
            break;
        }
        lambda = total;
        v = std::move(next);
    }

    const double ci = (lambda - static_cast<double>(n)) / (static_cast<double>(n) - 1.0);
    return std::max(0.0, ci) / kRandomIndex[n];
}

namespace {

std::optional<double> parse_entry(const std::string& token) {
    if (token == "-") return std::nullopt;
    auto slash = token.find('/');
    if (slash != std::string::npos) {
        double numerator = text::parse_double(token.substr(0, slash), "judgment numerator");
        double denominator = text::parse_double(token.substr(slash + 1), "judgment denominator");
        if (denominator == 0.0) raise(Errc::parse_error, "judgment denominator is zero");
        return numerator / denominator;
    }
    return text::parse_double(token, "judgment entry");
}

// Fills '-' placeholders: 1 on the diagonal, the reciprocal of the mirrored
// entry elsewhere.
JudgmentMatrix build_matrix(std::vector<std::string> labels,
                            const std::vector<std::vector<std::optional<double>>>& raw) {
    const std::size_t n = labels.size();
    JudgmentMatrix m;
    m.labels = std::move(labels);
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (raw[i][j]) {
                m.values[i][j] = *raw[i][j];
            } else if (i == j) {
                m.values[i][j] = 1.0;
            } else if (raw[j][i]) {
                m.values[i][j] = 1.0 / *raw[j][i];
            } else {
                raise(Errc::parse_error, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                             ") is '-' on both sides of the diagonal");
            }
        }
    }
    return m;
}

}  // namespace

DecisionModel load_decision_model(std::istream& in) {
    std::vector<std::string> criteria_labels;
    std::vector<std::string> alternative_labels;
    std::vector<std::vector<std::optional<double>>> criteria_raw;
    std::map<std::string, std::vector<std::vector<std::optional<double>>>> alternative_raw;

    std::vector<std::vector<std::optional<double>>>* open_block = nullptr;
    std::size_t open_width = 0;

    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = text::trim(line);
        if (sv.empty() || sv.front() == '#') continue;

        if (sv.starts_with("criteria:")) {
            criteria_labels = text::split_ws(sv.substr(9));
            open_block = nullptr;
            continue;
        }
        if (sv.starts_with("alternatives:")) {
            alternative_labels = text::split_ws(sv.substr(13));
            open_block = nullptr;
            continue;
        }
        if (sv == "criteria-matrix:") {
            if (criteria_labels.empty())
                raise(Errc::parse_error, "criteria-matrix before the criteria: line");
            open_block = &criteria_raw;
            open_width = criteria_labels.size();
            continue;
        }
        if (sv.starts_with("matrix ") && sv.ends_with(":")) {
            std::string criterion(text::trim(sv.substr(7, sv.size() - 8)));
            if (std::find(criteria_labels.begin(), criteria_labels.end(), criterion) == criteria_labels.end())
                raise(Errc::parse_error, "matrix block for unknown criterion '" + criterion + "'");
            if (alternative_labels.empty())
                raise(Errc::parse_error, "matrix block before the alternatives: line");
            if (alternative_raw.contains(criterion))
                raise(Errc::parse_error, "duplicate matrix block for criterion '" + criterion + "'");
            open_block = &alternative_raw[criterion];
            open_width = alternative_labels.size();
            continue;
        }

        if (open_block == nullptr)
            raise(Errc::parse_error, "unexpected line: '" + std::string(sv) + "'");
        auto tokens = text::split_ws(sv);
        if (tokens.size() != open_width)
            raise(Errc::parse_error, "matrix row has " + std::to_string(tokens.size()) +
                                         " entries, expected " + std::to_string(open_width));
        std::vector<std::optional<double>> row;
        row.reserve(tokens.size());
        for (const auto& token : tokens) row.push_back(parse_entry(token));
        open_block->push_back(std::move(row));
    }

    if (criteria_labels.empty()) raise(Errc::parse_error, "missing criteria: line");
    if (alternative_labels.empty()) raise(Errc::parse_error, "missing alternatives: line");
    if (criteria_raw.size() != criteria_labels.size())
        raise(Errc::parse_error, "criteria-matrix needs " + std::to_string(criteria_labels.size()) + " rows");

    DecisionModel model;
    model.criteria = build_matrix(criteria_labels, criteria_raw);
    for (const auto& label : criteria_labels) {
        auto it = alternative_raw.find(label);
        if (it == alternative_raw.end())
            raise(Errc::parse_error, "missing matrix block for criterion '" + label + "'");
        if (it->second.size() != alternative_labels.size())
            raise(Errc::parse_error, "matrix for '" + label + "' needs " +
                                         std::to_string(alternative_labels.size()) + " rows");
        model.alternatives.push_back(build_matrix(alternative_labels, it->second));
    }
    return model;
}

}  // namespace ciarisk::ahp
