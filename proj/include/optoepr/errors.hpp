#pragma once

#include <stdexcept>
#include <string>

namespace optoepr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration problems (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};
struct ParseError : ConfigError {
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};
struct UnitError : ConfigError {
  using ConfigError::ConfigError;
};
struct UnknownKey : ConfigError {
  using ConfigError::ConfigError;
};

// Physics-domain failures (CLI exit code 3).
struct PhysicsError : Error {
  using Error::Error;
};
struct ConstraintViolated : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct NoSteadyState : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct SignConventionViolated : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct DegenerateResponse : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct DomainError : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct SingularDrift : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct NotSymmetricState : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct NonConvergent : PhysicsError {
  using PhysicsError::PhysicsError;
};
struct BracketError : PhysicsError {
  using PhysicsError::PhysicsError;
};

// File output failures (CLI exit code 4).
struct IoError : Error {
  using Error::Error;
};

}  // namespace optoepr
