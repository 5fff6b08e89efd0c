#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pclab {

// Configuration / input problems: bad descriptors, malformed scenarios,
// mismatched operands. CLI maps these to exit code 3.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct descriptor_mismatch : config_error {
    using config_error::config_error;
};

// A computation could not be certified at the available precision.
// Runner maps these to an INDETERMINATE verdict, never to FAIL.
struct insufficient_precision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct division_by_indistinguishable_zero : insufficient_precision {
    using insufficient_precision::insufficient_precision;
};

// The prefix is too short to stabilize an asymptotic statement.
struct prefix_too_short : insufficient_precision {
    using insufficient_precision::insufficient_precision;
};

// Mathematical check failures: the input genuinely violates a law.
struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation would leave the valuation ring (negative value).
struct negative_value : check_failure {
    using check_failure::check_failure;
};

struct not_pseudo_convergent : check_failure {
    std::size_t i, j, k;   // witness triple
    not_pseudo_convergent(std::string msg, std::size_t i_, std::size_t j_, std::size_t k_)
        : check_failure(std::move(msg)), i(i_), j(j_), k(k_) {}
};

// classify() said the evaluation values are eventually constant where the
// increasing law was expected.
struct lemma_violation_candidate : check_failure {
    using check_failure::check_failure;
};

// A Taylor term other than the constant one is dominant: the tested
// polynomial violates the minimal-degree hypothesis.
struct dominance_failure : check_failure {
    std::size_t term;
    dominance_failure(std::string msg, std::size_t term_)
        : check_failure(std::move(msg)), term(term_) {}
};

// A value certificate required by a construction did not hold.
struct value_certificate_failure : check_failure {
    using check_failure::check_failure;
};

// Hensel lifting asked to refine a root where the derivative vanishes.
struct not_simple_root : check_failure {
    using check_failure::check_failure;
};

// Content of a polynomial cannot be certified from the available values.
struct content_uncertain : insufficient_precision {
    using insufficient_precision::insufficient_precision;
};

// A combined presentation fails the staircase shape (relation k may only
// involve the first k+1 variables).
struct non_triangular : check_failure {
    using check_failure::check_failure;
};

// An inner relation was not lifted over the combined variable list.
struct lift_missing : check_failure {
    using check_failure::check_failure;
};

// Operation precondition violated by the caller.
struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace pclab
