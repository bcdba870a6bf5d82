#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavemle {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (oscillation condition violated,
// nonpositive horizon, index out of range, ...).
class domain_error : public error {
 public:
  using error::error;
};

// Normal equations too close to collinear to solve.
class singular_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

// Configuration rejection; carries every violation, not just the first.
class config_error : public error {
 public:
  config_error(const std::string& summary, std::vector<std::string> violations)
      : error(summary), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace wavemle
