#pragma once

#include <stdexcept>
#include <string>

namespace sfhf {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity appeared in a vector or scalar the library produced.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// CG met direction curvature p.Ap <= 0 on an operator that must be PSD.
class IndefiniteError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues too close to zero for an inverse.
class SingularError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace sfhf
