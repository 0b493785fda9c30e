#pragma once

#include <stdexcept>
#include <string>

namespace weightlab {

/// Base of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument values (empty sweeps, non-positive lengths, ...).
class argument_error : public error {
 public:
  using error::error;
};

/// Query reaches outside the weight's working domain.
class domain_error : public error {
 public:
  using error::error;
};

/// A tested interval carries zero (or non-finite) mass.
class degenerate_weight_error : public error {
 public:
  using error::error;
};

/// Non-finite samples while evaluating a function.
class evaluation_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

/// Configuration problems. `key` and `line` locate the offending entry
/// (line 0 when not tied to a line, e.g. CLI flags).
class config_error : public error {
 public:
  enum class kind {
    unknown_key,
    unknown_family,
    malformed_number,
    inconsistent_bounds,
    not_integrable,
    unknown_analysis,
    missing_key,
    bad_value,
  };

  config_error(kind k, std::string key, int line, const std::string& what)
      : error(format(key, line, what)), kind_(k), key_(std::move(key)), line_(line) {}

  kind which() const noexcept { return kind_; }
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string s;
    if (line > 0) s += "line " + std::to_string(line) + ": ";
    if (!key.empty()) s += "key '" + key + "': ";
    return s + what;
  }

  kind kind_;
  std::string key_;
  int line_;
};

}  // namespace weightlab
