#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lamharm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pivot fell below the singularity threshold. When raised from a mode
/// computation the interface index and mode are attached.
class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string& what,
                          std::optional<int> interface = std::nullopt,
                          std::optional<int> mode = std::nullopt)
      : Error(what), interface_(interface), mode_(mode) {}

  std::optional<int> interface_index() const { return interface_; }
  std::optional<int> mode() const { return mode_; }

 private:
  std::optional<int> interface_;
  std::optional<int> mode_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace lamharm
