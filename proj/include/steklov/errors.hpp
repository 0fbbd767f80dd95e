#pragma once
// Typed errors with stable machine-readable codes.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace steklov {

enum class errc {
    invalid_parameter,
    interpolation_range,
    divergent_weight,
    degenerate_weight,
    conditioning,
    untrusted_range,
    too_few_eigenvalues,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_parameter:   return "INVALID_PARAMETER";
        case errc::interpolation_range: return "INTERPOLATION_RANGE";
        case errc::divergent_weight:    return "DIVERGENT_WEIGHT";
        case errc::degenerate_weight:   return "DEGENERATE_WEIGHT";
        case errc::conditioning:        return "CONDITIONING";
        case errc::untrusted_range:     return "UNTRUSTED_RANGE";
        case errc::too_few_eigenvalues: return "TOO_FEW_EIGENVALUES";
        case errc::io_error:            return "IO_ERROR";
    }
    return "UNKNOWN";
}

class error : public std::runtime_error {
  public:
    error(errc code, std::string message, std::optional<double> angle = std::nullopt)
        : std::runtime_error(std::move(message)), code_(code), angle_(angle) {}

    errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }
    // Offending boundary angle, when the error is localized (e.g. a
    // non-integrable singularity or an out-of-hull evaluation).
    std::optional<double> angle() const noexcept { return angle_; }

  private:
    errc code_;
    std::optional<double> angle_;
};

}  // namespace steklov
