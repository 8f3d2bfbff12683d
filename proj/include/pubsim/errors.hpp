#pragma once

#include <stdexcept>
#include <string>

namespace pubsim {

// Degree distribution with no edges at all (sum_j j*p_j = 0).
struct ZeroMeanDegreeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Degree sequence that no simple graph can realize (odd stub count, or a
// node demanding more neighbours than exist).
struct InfeasibleSequenceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidPublisherError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exact enumeration asked for more gossip links than the 2^24 budget.
struct OracleTooLargeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line_number)
        : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    int line;
};

// Bad experiment configuration (CLI flags or JSON config file).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pubsim
