#pragma once

#include <stdexcept>
#include <string>

namespace finqm {

enum class ErrorKind {
    InvalidArgument,
    NotCommutative,
    BadMatrix,
    NotIncluded,
    NotGenerating,
    ModuleMismatch,
    NotInAlgebra,
    BadBranch,
    OddOrder,
    NotDividing,
    NoCommonSubalgebra,
    DivisibilityViolation,
    NotPythagorean,
    OutOfRange,
};

const char* error_kind_name(ErrorKind k);

// Every library failure is reported through this one type; kind() says which precondition broke.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::BadMatrix: return "BadMatrix";
    case ErrorKind::NotIncluded: return "NotIncluded";
    case ErrorKind::NotGenerating: return "NotGenerating";
    case ErrorKind::ModuleMismatch: return "ModuleMismatch";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::BadBranch: return "BadBranch";
    case ErrorKind::OddOrder: return "OddOrder";
    case ErrorKind::NotDividing: return "NotDividing";
    case ErrorKind::NoCommonSubalgebra: return "NoCommonSubalgebra";
    case ErrorKind::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorKind::NotPythagorean: return "NotPythagorean";
    case ErrorKind::OutOfRange: return "OutOfRange";
    }
    return "Error";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace finqm
