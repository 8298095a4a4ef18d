#pragma once

#include <stdexcept>
#include <string>

namespace air {

// Base class for all errors raised by this library. The CLI maps these to
// exit code 2 (bad input / usage); anything else is treated as internal.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileError : public Error {
 public:
  explicit FileError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class EmptyFile : public Error {
 public:
  explicit EmptyFile(const std::string& path) : Error(path + ": file is empty") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus contains no sentences") {}
};

class EmptyQuery : public Error {
 public:
  EmptyQuery() : Error("query has no content terms") {}
};

class EmptyPool : public Error {
 public:
  EmptyPool() : Error("candidate pool is empty") {}
};

class PoolTooSmall : public Error {
 public:
  PoolTooSmall(int chains, std::size_t pool)
      : Error("pool of " + std::to_string(pool) + " sentences cannot seed " +
              std::to_string(chains) + " parallel chains") {}
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class InconsistentDim : public Error {
 public:
  InconsistentDim(std::size_t line_no, int expected, int found)
      : Error("line " + std::to_string(line_no) + ": vector has " +
              std::to_string(found) + " components, expected " +
              std::to_string(expected)) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& location, const std::string& what)
      : Error(location + ": " + what) {}
};

class MissingField : public Error {
 public:
  explicit MissingField(const std::string& name)
      : Error("missing required field '" + name + "'") {}
};

class WrongChoiceCount : public Error {
 public:
  WrongChoiceCount(const std::string& question_id, std::size_t found)
      : Error("question " + question_id + " has " + std::to_string(found) +
              " answer choices, expected 8") {}
};

class IdMismatch : public Error {
 public:
  explicit IdMismatch(const std::string& what) : Error(what) {}
};

class GoldArityError : public Error {
 public:
  GoldArityError(const std::string& question_id, std::size_t found)
      : Error("question " + question_id + " has " + std::to_string(found) +
              " gold sentences, recall@10 requires exactly 2") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace air
