// ids.hpp - small id types and error hierarchy shared across the library
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace relparse {

using StateId = int32_t;
using TransId = int32_t;
using TokenId = int32_t;

constexpr StateId kNoState = -1;

// Base for all errors this library raises on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GrammarError : Error {
    int line = 0, column = 0;
    GrammarError(const std::string& msg, int l, int c)
        : Error(msg + " (line " + std::to_string(l) + ", column " + std::to_string(c) + ")"),
          line(l), column(c) {}
};

// Start state cannot derive any terminal word.
struct EmptyLanguageError : Error {
    using Error::Error;
};

// Grammar classified NonregularInfinite; carries a printable cycle witness.
struct UnsupportedGrammarError : Error {
    std::string witness;
    UnsupportedGrammarError(const std::string& msg, std::string w)
        : Error(msg), witness(std::move(w)) {}
};

// Grammar needs a star operation the chosen semiring does not provide.
struct StarRequiredError : Error {
    using Error::Error;
};

struct UnknownTokenError : Error {
    size_t position;
    std::string name;
    UnknownTokenError(size_t pos, std::string n)
        : Error("unknown token '" + n + "' at position " + std::to_string(pos)),
          position(pos), name(std::move(n)) {}
};

// prepend_delta was handed a zero value; callers are expected to skip instead.
struct ZeroPrependError : Error {
    using Error::Error;
};

} // namespace relparse
