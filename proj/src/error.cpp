#include "pathmub/error.hpp"

namespace pathmub {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::NonPositiveSample: return "NonPositiveSample";
        case Errc::GridMismatch: return "GridMismatch";
        case Errc::NonPositiveTime: return "NonPositiveTime";
        case Errc::CausticSingularity: return "CausticSingularity";
        case Errc::DimensionTooLarge: return "DimensionTooLarge";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NotUnbiased: return "NotUnbiased";
        case Errc::NonUnitaryKernel: return "NonUnitaryKernel";
        case Errc::UnsupportedPotential: return "UnsupportedPotential";
        case Errc::PhaseUnwrapFailure: return "PhaseUnwrapFailure";
        case Errc::BlowUp: return "BlowUp";
        case Errc::ModeCaustic: return "ModeCaustic";
    }
    return "Unknown";
}

bool is_numeric_domain(Errc code) noexcept {
    switch (code) {
        case Errc::CausticSingularity:
        case Errc::NotUnbiased:
        case Errc::NonUnitaryKernel:
        case Errc::PhaseUnwrapFailure:
        case Errc::BlowUp:
        case Errc::ModeCaustic:
            return true;
        default:
            return false;
    }
}

}  // namespace pathmub
