#pragma once

#include <stdexcept>
#include <string>

namespace hexwalk {

/// Violated precondition (invalid coordinates, malformed walk, wrong domain kind).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A configured cap or walk budget was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed external input (walk files, vertex lists, config files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hexwalk
