#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathmub {

enum class Errc {
    InvalidArgument,
    NonPositiveSample,
    GridMismatch,
    NonPositiveTime,
    CausticSingularity,
    DimensionTooLarge,
    DimensionMismatch,
    NotUnbiased,
    NonUnitaryKernel,
    UnsupportedPotential,
    PhaseUnwrapFailure,
    BlowUp,
    ModeCaustic,
};

std::string_view errc_name(Errc code) noexcept;

// Numeric domain errors (caustics, blow-ups, ...) as opposed to bad input.
bool is_numeric_domain(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by the field module when a single mode sits on a caustic.
class ModeCausticError : public Error {
public:
    ModeCausticError(std::size_t mode_index, double omega, const std::string& what)
        : Error(Errc::ModeCaustic, what), mode_index_(mode_index), omega_(omega) {}

    std::size_t mode_index() const noexcept { return mode_index_; }
    double omega() const noexcept { return omega_; }

private:
    std::size_t mode_index_;
    double omega_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace pathmub
