#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gripsim {

/// Argument outside an operation's mathematical domain (e.g. a bending angle
/// beyond the joint range, a negative pressure change).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation invalid for the current object state (double lock, reading a
/// locked-air pressure from a vented ring).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Query outside a sampled span; lookup tables never extrapolate.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Pressure change above what the calibration curve can explain.
class SaturationError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Invalid configuration value. `key()` names the offending dotted key path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what),
        key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Malformed calibration file. Line and column are 1-based; column 0 means
/// the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) +
                           (column > 0 ? ", column " + std::to_string(column) : std::string()) +
                           ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Planner could not find any location that is safe to grasp.
class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gripsim
