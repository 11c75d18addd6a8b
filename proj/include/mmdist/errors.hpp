// errors.hpp — exception hierarchy shared by the whole library.
//
// Three failure categories map onto the CLI exit codes:
//   * InvalidInput   — malformed data (bad matrices, mismatched sizes, bad JSON)  -> exit 2
//   * CheckFailure   — a verification or property check did not hold              -> exit 1
//   * ResourceError  — an input exceeds a documented size/memory budget           -> exit 2
#pragma once

#include <stdexcept>
#include <string>

namespace mmd {

// Malformed or inconsistent input data (non-square matrix, weight vector of
// wrong length, unreadable file, ...).
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation exceeds a documented size budget (too many vertices,
// distance matrix would not fit in memory, ...).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A verification step failed (oracle mismatch, violated invariant).  Thrown by
// code whose purpose is checking; plain computations report values instead.
class CheckFailure : public std::runtime_error {
 public:
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mmd
