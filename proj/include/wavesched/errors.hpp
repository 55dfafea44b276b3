// Copyright 2026 The wavesched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavesched {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (bad coordinate, zero threads, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input state violates an invariant the caller promised (e.g. a progress set that is not
/// dependency-closed).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid configuration. `key` names the offending setting, `line` is the
/// 1-based line in the source file or 0 when the value came from elsewhere.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& what)
      : Error(format(key, line, what)), key_(std::move(key)), line_(line), detail_(what) {}

  const std::string& key() const { return key_; }
  int line() const { return line_; }
  /// The message without the line/key prefix.
  const std::string& detail() const { return detail_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "'" + key + "': ";
    return out + what;
  }

  std::string key_;
  int line_;
  std::string detail_;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Trace file could not be parsed.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The simulation could not make progress. `blocked` lists the unfinished tasks.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::vector<std::string> blocked = {})
      : Error(what), blocked_(std::move(blocked)) {}
  const std::vector<std::string>& blocked() const { return blocked_; }

 private:
  std::vector<std::string> blocked_;
};

}  // namespace wavesched
