#pragma once

#include <stdexcept>
#include <string>

namespace ciarisk {

// Every failure the engine can report, one code per distinguishable cause.
enum class Errc {
    // registry
    dangling_reference,
    duplicate_id,
    invariant_violation,
    io_failure,
    corrupt_file,
    // probability
    empty_hypotheses,
    occurrence_mass_exceeded,
    zero_opportunities,
    // fair
    negative_rate,
    negative_amount,
    dimension_mismatch,
    non_monotone_matrix,
    // ahp
    not_reciprocal,
    bad_diagonal,
    non_positive_entry,
    not_square,
    zero_column,
    label_mismatch,
    unsupported_size,
    scale_violation,
    // monitor_sim
    invalid_scenario,
    // engine
    dangling_control_target,
    // structured text inputs
    parse_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace ciarisk
