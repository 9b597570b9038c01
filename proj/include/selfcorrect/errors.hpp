#pragma once

#include <stdexcept>
#include <string>

namespace selfcorrect {

// Precondition/argument violations (dimension mismatches, bad parameters).
class ContractError : public std::invalid_argument {
  public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Structural violations in stabilizer codes (anticommuting generator pairs, ...).
class InvalidCodeError : public std::runtime_error {
  public:
    explicit InvalidCodeError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed external inputs (files, JSON payloads).
class InputError : public std::runtime_error {
  public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace selfcorrect
