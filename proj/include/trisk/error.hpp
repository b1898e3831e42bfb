#pragma once

#include <stdexcept>
#include <string>

namespace trisk {

/// Machine-readable failure category carried by every thrown Error.
enum class ErrorKind {
  InvalidMeshSize,
  ParseError,
  LoadError,
  WrongDegree,
  UnsupportedScaling,
  PairingTypeError,
  TypeMismatch,
  UnsupportedHodge,
  SingularHodge,
  ConstructionFailure,
  UnsupportedVariant,
  MissingGeometry,
  PvSingularity,
  InvalidParameter,
  IntegratorDivergence,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace trisk
