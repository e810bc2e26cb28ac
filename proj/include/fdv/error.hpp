#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fdv {

// Error categories map one-to-one onto CLI exit codes (see exit_code()).
enum class ErrorCategory {
  validation,  // bad configuration or precondition violation
  io,          // missing, corrupt or unwritable files
  numeric,     // degenerate data, non-convergence
};

enum class ErrorKind {
  config,
  bounds,
  kind_mismatch,
  dimension_mismatch,
  empty_input,
  load,
  io,
  degenerate_geometry,
  domain,
  degenerate,
  normalization,
  convergence,
  insufficient_sequence,
  insufficient_boundary,
  scenario,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept;

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

// 2 validation, 3 I/O, 4 numeric/convergence.
int exit_code(ErrorCategory category);

// Non-fatal conditions (skipped regions, empty boundaries, fallbacks) are
// collected here instead of being printed from library code.
struct Warnings {
  std::vector<std::string> items;

  void add(std::string message) { items.push_back(std::move(message)); }
  bool empty() const { return items.empty(); }
  void append(const Warnings& other) {
    items.insert(items.end(), other.items.begin(), other.items.end());
  }
};

}  // namespace fdv
