#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ciarisk::ahp {

// Positive reciprocal pairwise-comparison matrix with row/column labels.
struct JudgmentMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // row-major, square

    std::size_t size() const { return labels.size(); }
};

struct PriorityVector {
    std::vector<std::string> labels;
    std::vector<double> weights;
};

// One criteria matrix plus one alternative matrix per criterion, aligned with
// criteria.labels order.
struct DecisionModel {
    JudgmentMatrix criteria;
    std::vector<JudgmentMatrix> alternatives;
};

// Throws on structural violations (NotSquare, NonPositiveEntry, BadDiagonal,
// NotReciprocal). Entries off the 1..9 judgment scale come back as warning
// strings, or throw ScaleViolation in strict mode.
std::vector<std::string> validate(const JudgmentMatrix& matrix, bool strict_scale = false);

// S_j = Σ_i a_ij per column.
std::vector<double> column_sums(const JudgmentMatrix& matrix);

// A_ij = a_ij / S_j; every output column sums to 1.
std::vector<std::vector<double>> normalize(const JudgmentMatrix& matrix);

// Row means of an already-normalized grid (columns must sum to 1 within the
// tolerance that rounded three-decimal inputs allow).
PriorityVector priority_vector_from_normalized(std::vector<std::string> labels,
                                               const std::vector<std::vector<double>>& grid);

// validate -> normalize -> row means.
PriorityVector priority_vector(const JudgmentMatrix& matrix);

// Global weight of each alternative: Σ_c criterion_weight_c · local_weight.
// Output keeps the input alternative label order.
PriorityVector rank_alternatives(const DecisionModel& model, bool strict_scale = false);

// CR = (lambda_max − n) / (n − 1) / RI_n; 0 for n <= 2. Values above 0.1
// conventionally flag an inconsistent judgment set.
double consistency_ratio(const JudgmentMatrix& matrix);

inline constexpr double kConsistencyWarningThreshold = 0.1;

// Text format: `criteria:` and `alternatives:` label lines, a
// `criteria-matrix:` block and one `matrix <criterion>:` block per criterion.
// An upper triangle suffices; '-' entries derive from reciprocity.
DecisionModel load_decision_model(std::istream& in);

}  // namespace ciarisk::ahp
