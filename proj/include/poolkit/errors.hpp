#ifndef POOLKIT_ERRORS_HPP
#define POOLKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace poolkit {

// Machine-checkable reason codes for rejected inputs. Every precondition
// violation maps to exactly one code so callers (and tests) can tell them
// apart without string matching.
enum class errc {
    invalid_probability,
    invalid_pool_size,
    invalid_population,
    empty_pool,
    pool_too_large,
    index_out_of_range,
    grid_side_too_small,
    grid_exceeds_population,
    prevalence_above_grid_limit,
    enumeration_too_large,
    malformed_input,
    duplicate_patient_id,
    non_monotone_cdf,
};

class validation_error : public std::runtime_error {
public:
    validation_error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

// Input-file rejection carrying the 1-based line number of the offending row.
class parse_error : public validation_error {
public:
    parse_error(errc code, int line, const std::string& what)
        : validation_error(code, "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace poolkit

#endif
