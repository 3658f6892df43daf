#include "ciarisk/error.hpp"

namespace ciarisk {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::dangling_reference: return "DanglingReference";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::io_failure: return "IoFailure";
    case Errc::corrupt_file: return "CorruptFile";
    case Errc::empty_hypotheses: return "EmptyHypotheses";
    case Errc::occurrence_mass_exceeded: return "OccurrenceMassExceeded";
    case Errc::zero_opportunities: return "ZeroOpportunities";
    case Errc::negative_rate: return "NegativeRate";
    case Errc::negative_amount: return "NegativeAmount";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_monotone_matrix: return "NonMonotoneMatrix";
    case Errc::not_reciprocal: return "NotReciprocal";
    case Errc::bad_diagonal: return "BadDiagonal";
    case Errc::non_positive_entry: return "NonPositiveEntry";
    case Errc::not_square: return "NotSquare";
    case Errc::zero_column: return "ZeroColumn";
    case Errc::label_mismatch: return "LabelMismatch";
    case Errc::unsupported_size: return "UnsupportedSize";
    case Errc::scale_violation: return "ScaleViolation";
    case Errc::invalid_scenario: return "InvalidScenario";
    case Errc::dangling_control_target: return "DanglingControlTarget";
    case Errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace ciarisk
