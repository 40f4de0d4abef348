#pragma once

#include <stdexcept>
#include <string>

namespace seqcoint {

/// Invalid specification or configuration (bad DGP fields, flag domains, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Estimation failed (singular Gram matrix, degenerate long-run variance).
class estimation_error : public std::runtime_error {
 public:
  explicit estimation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Misuse of a stateful session (stepping a stopped monitor, trend state not ready).
class state_error : public std::runtime_error {
 public:
  explicit state_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File input/output failure; message carries the path and, for parses, the line.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace seqcoint
