#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fpd {

enum class ErrorKind {
  Parse,
  Schema,
  Reference,
  NotFound,
  PolarRegion,
  CoincidentPoints,
  DegenerateLeg,
  InvalidArgument,
  InvalidState,
  IndexOutOfRange,
  InvalidStep,
  EmptyProcedure,
  Undefined,
  Backend,
  Timeout,
  HttpStatus,
  MalformedReply,
  ScriptExhausted,
  Cancelled,
};

const char* to_string(ErrorKind kind);

// Base of every error the engine throws. Callers that only need the category
// switch on kind(); the derived types carry the extra context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::optional<int> line = std::nullopt)
      : Error(ErrorKind::Parse, what), line_(line) {}
  std::optional<int> line() const noexcept { return line_; }

 private:
  std::optional<int> line_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(ErrorKind::Schema, path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Raised for a name that should resolve inside the database but does not.
class ReferenceError : public Error {
 public:
  ReferenceError(std::string key, const std::string& what)
      : Error(ErrorKind::Reference, what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class NotFound : public Error {
 public:
  explicit NotFound(std::string key)
      : Error(ErrorKind::NotFound, "not found: " + key), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(ErrorKind::Backend, what) {}

 protected:
  BackendError(ErrorKind kind, const std::string& what) : Error(kind, what) {}
};

class TimeoutError : public BackendError {
 public:
  explicit TimeoutError(const std::string& what) : BackendError(ErrorKind::Timeout, what) {}
};

class HttpStatusError : public BackendError {
 public:
  HttpStatusError(int status, std::string body)
      : BackendError(ErrorKind::HttpStatus, "HTTP status " + std::to_string(status)),
        status_(status),
        body_(std::move(body)) {}
  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

class MalformedReply : public BackendError {
 public:
  explicit MalformedReply(const std::string& what)
      : BackendError(ErrorKind::MalformedReply, what) {}
};

class ScriptExhausted : public BackendError {
 public:
  ScriptExhausted() : BackendError(ErrorKind::ScriptExhausted, "replay script exhausted") {}
};

}  // namespace fpd
