#pragma once

#include <stdexcept>
#include <string>

namespace vanetauth {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Group elements from different backends mixed in one operation.
class BackendMismatchError : public Error {
public:
    using Error::Error;
};

// Requested backend is not linked into this build.
class BackendUnavailableError : public Error {
public:
    using Error::Error;
};

// Wire bytes rejected: wrong length, out-of-range residue, bad framing.
class DeserializeError : public Error {
public:
    using Error::Error;
};

class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Scenario / CLI configuration problems; carries a line number when the
// source was a config file.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// Oracle table misuse (reprogramming an existing entry, missing trapdoor).
class OracleError : public Error {
public:
    using Error::Error;
};

// Protocol-level misuse detected before any crypto runs (credential/plaintext
// mismatch, empty aggregate, common-string reuse).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// A reduction simulator hit its abort condition (hash collision at a
// back-patched point, query at the embedded target).
class SimulationAbort : public Error {
public:
    using Error::Error;
};

}  // namespace vanetauth
