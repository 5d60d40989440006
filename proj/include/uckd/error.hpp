#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uckd {

/// Failure conditions raised by the library. The CLI maps each one onto an
/// exit code through `category()`.
enum class Errc {
    missing_file,
    io_failure,
    missing_target_column,
    unparsable_cell,
    missing_value,
    empty_dataset,
    too_few_samples,
    empty_feature_set,
    index_out_of_range,
    invalid_config,
    length_mismatch,
    not_normalized,
    model_untrained,
    kind_mismatch,
    too_few_points,
    too_few_patterns,
    impure_pattern,
    no_relevant_features,
    empty_ensemble,
    invalid_threshold,
    dataset_mismatch,
    bad_document,
};

enum class ErrorCategory { validation, io, no_relevant_features };

std::string_view to_string(Errc code) noexcept;
ErrorCategory category(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace uckd
