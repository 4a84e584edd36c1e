#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace polyimage {

// Every failure the library can report carries a stable kind string and an
// optional JSON payload (for instance the offending recursion node), so the
// CLI can emit machine-readable errors without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message, nlohmann::json payload = {})
        : std::runtime_error(message), kind_(std::move(kind)), payload_(std::move(payload)) {}

    const std::string& kind() const { return kind_; }
    const nlohmann::json& payload() const { return payload_; }

    nlohmann::json to_json() const {
        nlohmann::json j{{"error", kind_}, {"message", what()}};
        if (!payload_.is_null()) j["detail"] = payload_;
        return j;
    }

private:
    std::string kind_;
    nlohmann::json payload_;
};

// Malformed input: bad JSON, bad rational literal, dimension mismatch.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, nlohmann::json payload = {})
        : Error("ValidationError", message, std::move(payload)) {}
};

// A hypothesis of a construction does not hold for the given input.
class SynthesisError : public Error {
public:
    using Error::Error;
};

// A statistical check could not run as configured.
class VerificationError : public Error {
public:
    using Error::Error;
};

}  // namespace polyimage
