#pragma once

#include <stdexcept>
#include <string>

namespace hashgraph {

enum class InsertError {
    duplicate_id,
    missing_parent,
    bad_hash,
    creator_mismatch,
    invalid_parents,
};

const char* to_string(InsertError e);

class InsertException : public std::runtime_error {
public:
    InsertException(InsertError code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    InsertError code() const { return code_; }

private:
    InsertError code_;
};

struct UnknownEvent : std::runtime_error {
    explicit UnknownEvent(const std::string& what) : std::runtime_error(what) {}
};

struct NotAWitness : std::runtime_error {
    explicit NotAWitness(const std::string& what) : std::runtime_error(what) {}
};

struct RoundOrderViolation : std::runtime_error {
    explicit RoundOrderViolation(const std::string& what) : std::runtime_error(what) {}
};

struct NotAnAncestor : std::runtime_error {
    explicit NotAnAncestor(const std::string& what) : std::runtime_error(what) {}
};

struct SelfSync : std::runtime_error {
    explicit SelfSync(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct LogParseError : std::runtime_error {
    explicit LogParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hashgraph
