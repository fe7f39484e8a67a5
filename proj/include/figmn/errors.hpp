#pragma once

#include <stdexcept>

namespace figmn {

// Contract and data errors derive from std::invalid_argument; numerical
// failures derive from std::runtime_error. The CLI maps the former to
// exit code 2 and the latter to exit code 3.

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyDataset : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MalformedFile : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedVersion : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UndefinedAUC : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rank-one subtraction would destroy positive-definiteness.
class DegenerateUpdate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace figmn
