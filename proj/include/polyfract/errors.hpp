#pragma once

#include <stdexcept>
#include <string>

namespace polyfract {

/// Base class for all library errors. `code()` is a stable machine-readable
/// identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define POLYFRACT_DEFINE_ERROR(Name)                          \
    class Name : public Error {                               \
    public:                                                   \
        explicit Name(const std::string& message)             \
            : Error(#Name, message) {}                        \
    }

POLYFRACT_DEFINE_ERROR(DivisionByZero);
POLYFRACT_DEFINE_ERROR(NotReal);
POLYFRACT_DEFINE_ERROR(PrecisionExhausted);
POLYFRACT_DEFINE_ERROR(SyntaxError);
POLYFRACT_DEFINE_ERROR(UnknownSymbol);
POLYFRACT_DEFINE_ERROR(OutOfRange);
POLYFRACT_DEFINE_ERROR(JTooSmall);
POLYFRACT_DEFINE_ERROR(NotInDJ);
POLYFRACT_DEFINE_ERROR(NotInDJStar);
POLYFRACT_DEFINE_ERROR(BadGroup);
POLYFRACT_DEFINE_ERROR(UnknownGroupKind);
POLYFRACT_DEFINE_ERROR(DuplicateCellId);
POLYFRACT_DEFINE_ERROR(EmptyCells);
POLYFRACT_DEFINE_ERROR(NotValidated);
POLYFRACT_DEFINE_ERROR(NotInG);
POLYFRACT_DEFINE_ERROR(InternalInconsistency);
POLYFRACT_DEFINE_ERROR(TooLarge);
POLYFRACT_DEFINE_ERROR(UnknownWord);
POLYFRACT_DEFINE_ERROR(MembershipUnknown);
POLYFRACT_DEFINE_ERROR(NotTrivialGroup);
POLYFRACT_DEFINE_ERROR(PreconditionFailed);
POLYFRACT_DEFINE_ERROR(BadLevel);
POLYFRACT_DEFINE_ERROR(NotJoinable);
POLYFRACT_DEFINE_ERROR(ProjectionNotEll);
POLYFRACT_DEFINE_ERROR(BadIndices);
POLYFRACT_DEFINE_ERROR(NoneFound);
POLYFRACT_DEFINE_ERROR(BadExponent);
POLYFRACT_DEFINE_ERROR(NonConvergence);
POLYFRACT_DEFINE_ERROR(DegenerateEdge);
POLYFRACT_DEFINE_ERROR(BadBracket);
POLYFRACT_DEFINE_ERROR(UsageError);

#undef POLYFRACT_DEFINE_ERROR

}  // namespace polyfract
