#pragma once

#include <stdexcept>
#include <string>

namespace zetasum {

/// Base class for every error raised by the library. The message is
/// prefixed with "<module>.<operation>: " so the CLI can report where a
/// run failed without extra bookkeeping.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string operation, const std::string& message)
        : std::runtime_error(module + "." + operation + ": " + message),
          module_(std::move(module)),
          operation_(std::move(operation)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string module_;
    std::string operation_;
};

#define ZETASUM_DEFINE_ERROR(Name)          \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

ZETASUM_DEFINE_ERROR(DomainError);
ZETASUM_DEFINE_ERROR(ParseError);
ZETASUM_DEFINE_ERROR(FormatError);
ZETASUM_DEFINE_ERROR(CompletenessError);
ZETASUM_DEFINE_ERROR(IncompleteTableError);
ZETASUM_DEFINE_ERROR(RangeError);
ZETASUM_DEFINE_ERROR(AmbiguityError);
ZETASUM_DEFINE_ERROR(AdmissibilityError);
ZETASUM_DEFINE_ERROR(ConvergenceError);
ZETASUM_DEFINE_ERROR(DivergenceError);

#undef ZETASUM_DEFINE_ERROR

}  // namespace zetasum
