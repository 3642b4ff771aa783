#pragma once

#include <stdexcept>
#include <string>

namespace divisikit {

enum class Errc {
    AllZero,
    NegativeMass,
    NegativeCoefficient,
    DegreeExceedsBound,
    DegreeNotDivisible,
    InvalidEpsilon,
    PrecisionExhausted,
    InvalidSupportBound,
    OddDegree,
    InstanceTooLarge,
    ShiftOnPlainVariant,
    DegenerateCardinality,
    DegenerateGadget,
    DegenerateSpectrum,
    NotStochasticInput,
    DimensionMismatch,
    NoPositiveEntry,
    NotDiagonalizable,
    NotSquareDimension,
    ParamsTooSmall,
    DimensionTooSmall,
    ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& what)
        : std::runtime_error(what), code_(c) {}
    Errc code() const { return code_; }
private:
    Errc code_;
};

[[noreturn]] void fail(Errc c, const std::string& what);

} // namespace divisikit
