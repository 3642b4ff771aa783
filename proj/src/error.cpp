#include "divisikit/error.hpp"

namespace divisikit {

const char* errc_name(Errc c)
{
    switch (c) {
    case Errc::AllZero: return "AllZero";
    case Errc::NegativeMass: return "NegativeMass";
    case Errc::NegativeCoefficient: return "NegativeCoefficient";
    case Errc::DegreeExceedsBound: return "DegreeExceedsBound";
    case Errc::DegreeNotDivisible: return "DegreeNotDivisible";
    case Errc::InvalidEpsilon: return "InvalidEpsilon";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::InvalidSupportBound: return "InvalidSupportBound";
    case Errc::OddDegree: return "OddDegree";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::ShiftOnPlainVariant: return "ShiftOnPlainVariant";
    case Errc::DegenerateCardinality: return "DegenerateCardinality";
    case Errc::DegenerateGadget: return "DegenerateGadget";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::NotStochasticInput: return "NotStochasticInput";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoPositiveEntry: return "NoPositiveEntry";
    case Errc::NotDiagonalizable: return "NotDiagonalizable";
    case Errc::NotSquareDimension: return "NotSquareDimension";
    case Errc::ParamsTooSmall: return "ParamsTooSmall";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

void fail(Errc c, const std::string& what)
{
    throw Error(c, what);
}

} // namespace divisikit
