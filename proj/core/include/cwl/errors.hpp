#pragma once

#include <stdexcept>
#include <string>

namespace cwl {

// Failure family; the CLI maps it to the process exit code
// (Validation -> 2, Numerical -> 3, Io -> 1).
enum class ErrorCategory { Validation, Numerical, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

#define CWL_DEFINE_ERROR(NAME, CATEGORY)                                     \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what)                               \
            : Error(ErrorCategory::CATEGORY, std::string(#NAME) + ": " + what) {} \
    }

// Precondition / input-shape failures.
CWL_DEFINE_ERROR(DimensionMismatch, Validation);
CWL_DEFINE_ERROR(NotSymmetric, Validation);
CWL_DEFINE_ERROR(NotPositiveDefinite, Validation);
CWL_DEFINE_ERROR(InvalidParams, Validation);
CWL_DEFINE_ERROR(StepMismatch, Validation);
CWL_DEFINE_ERROR(DegenerateWindow, Validation);
CWL_DEFINE_ERROR(BelowInghamTime, Validation);
CWL_DEFINE_ERROR(FrequencyMismatch, Validation);

// Numerical breakdowns.
CWL_DEFINE_ERROR(SingularPencil, Numerical);
CWL_DEFINE_ERROR(SqrtFailure, Numerical);
CWL_DEFINE_ERROR(NearSingularResolvent, Numerical);
CWL_DEFINE_ERROR(BlowUp, Numerical);
CWL_DEFINE_ERROR(CoincidentRoots, Numerical);
CWL_DEFINE_ERROR(OverflowGuard, Numerical);
CWL_DEFINE_ERROR(SingularMatching, Numerical);

// I/O and parsing.
CWL_DEFINE_ERROR(IoError, Io);
CWL_DEFINE_ERROR(ParseError, Io);

#undef CWL_DEFINE_ERROR

}  // namespace cwl
