#pragma once

#include <stdexcept>
#include <string>

namespace sigver {

enum class Errc {
    file_not_found,
    unsupported_format,
    corrupt_image,
    blank_image,
    input_too_short,
    dimension_mismatch,
    degenerate_cloud,
    too_few_samples,
    non_finite_loss,
    parse_error,
    unknown_kind,
    duplicate_path,
    io_error,
    schema_violation,
    version_mismatch,
    empty_category,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace sigver
