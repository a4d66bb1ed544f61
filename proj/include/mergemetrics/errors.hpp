#pragma once

#include <stdexcept>
#include <string>

namespace mm {

// Stable error identifiers; the CLI prints these verbatim on the error stream.
enum class errc {
  empty_tree,
  invalid_parent,
  cycle_detected,
  multiple_roots,
  non_increasing_height,
  non_finite_height,
  invalid_point,
  order_mismatch,
  negative_epsilon,
  three_point_violation,
  diagonal_dominance_violation,
  too_many_leaves,
  invalid_leaf_count,
  invalid_matching,
  too_large,
  leaf_count_mismatch,
  duplicate_leaf_heights,
  not_same_chamber,
  invalid_argument,
  syntax_error,
  file_not_found,
  check_failed,
};

inline const char* errc_id(errc c) {
  switch (c) {
    case errc::empty_tree: return "EmptyTree";
    case errc::invalid_parent: return "InvalidParent";
    case errc::cycle_detected: return "CycleDetected";
    case errc::multiple_roots: return "MultipleRoots";
    case errc::non_increasing_height: return "NonIncreasingHeight";
    case errc::non_finite_height: return "NonFiniteHeight";
    case errc::invalid_point: return "InvalidPoint";
    case errc::order_mismatch: return "OrderMismatch";
    case errc::negative_epsilon: return "NegativeEpsilon";
    case errc::three_point_violation: return "ThreePointViolation";
    case errc::diagonal_dominance_violation: return "DiagonalDominanceViolation";
    case errc::too_many_leaves: return "TooManyLeaves";
    case errc::invalid_leaf_count: return "InvalidLeafCount";
    case errc::invalid_matching: return "InvalidMatching";
    case errc::too_large: return "TooLarge";
    case errc::leaf_count_mismatch: return "LeafCountMismatch";
    case errc::duplicate_leaf_heights: return "DuplicateLeafHeights";
    case errc::not_same_chamber: return "NotSameChamber";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::syntax_error: return "SyntaxError";
    case errc::file_not_found: return "FileNotFound";
    case errc::check_failed: return "CheckFailed";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_id(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }
  const char* id() const { return errc_id(code_); }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace mm
