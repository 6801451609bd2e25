#pragma once

#include <stdexcept>
#include <string>

namespace wardwalk {

// Base class for all failures raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File or stream problems (missing input, failed write, broken sink).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Seed plan fails one of the validity properties, so a run cannot start.
class SeedError : public Error {
 public:
  explicit SeedError(const std::string& what) : Error(what) {}
};

}  // namespace wardwalk
