#pragma once

#include <stdexcept>
#include <string>

namespace mbk {

// Domain error kinds surfaced to callers (the CLI maps these to exit code 1).
enum class Errc {
    ModelInvalid,
    NegativeCell,
    IdenticalTables,
    MarginalMismatch,
    NotChordal,
    NotDecomposable,
    NotDegreeTwo,
    Inconsistent,
    TooLarge,
    NotABasis,
    EmptyBasis,
    DegreeMismatch,
};

const char* errc_name(Errc c);

class DomainError : public std::runtime_error {
public:
    DomainError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
    throw DomainError(code, msg);
}

} // namespace mbk
