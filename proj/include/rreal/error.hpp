#pragma once

#include <stdexcept>
#include <string>

namespace rreal {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line = 0, std::size_t col = 0)
        : Error(msg), line(line), col(col) {}
    std::size_t line;
    std::size_t col;
};

struct OrdinalOverflow : Error {
    using Error::Error;
};
struct IllFormedCode : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct UnboundVariable : Error {
    using Error::Error;
};
struct FuelExhaustedError : Error {
    using Error::Error;
};
struct MalformedOperand : Error {
    using Error::Error;
};
struct MalformedSerialization : Error {
    using Error::Error;
};
struct NotDelta0 : Error {
    using Error::Error;
};
struct NotTrue : Error {
    using Error::Error;
};
struct EmptyChain : Error {
    using Error::Error;
};
struct MalformedInstance : Error {
    using Error::Error;
};
struct AntecedentNotRealized : Error {
    using Error::Error;
};
struct PremiseNotRealized : Error {
    using Error::Error;
};
struct RecognitionFailed : Error {
    using Error::Error;
};
struct EmptyMember : Error {
    using Error::Error;
};

}  // namespace rreal
