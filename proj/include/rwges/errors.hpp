#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwges {

enum class Errc {
  cycle_detected,
  dimension_mismatch,
  limit_exceeded,
  invalid_node,
  not_positive_definite,
  infeasible_degree,
  unsupported_kind,
  cap_exceeded,
  rank_deficient_design,
  empty_residual,
  no_member_in_space,
  unreachable_pair,
  init_out_of_space,
  class_cap_exceeded,
  model_space_violation,
  no_valid_move,
  not_ergodic,
  iteration_cap_exceeded,
  singular_system,
  condition_violated,
  parse_error,
};

inline std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::cycle_detected: return "cycle-detected";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::limit_exceeded: return "limit-exceeded";
    case Errc::invalid_node: return "invalid-node";
    case Errc::not_positive_definite: return "not-positive-definite";
    case Errc::infeasible_degree: return "infeasible-degree";
    case Errc::unsupported_kind: return "unsupported-kind";
    case Errc::cap_exceeded: return "cap-exceeded";
    case Errc::rank_deficient_design: return "rank-deficient-design";
    case Errc::empty_residual: return "empty-residual";
    case Errc::no_member_in_space: return "no-member-in-space";
    case Errc::unreachable_pair: return "unreachable-pair";
    case Errc::init_out_of_space: return "init-out-of-space";
    case Errc::class_cap_exceeded: return "class-cap-exceeded";
    case Errc::model_space_violation: return "model-space-violation";
    case Errc::no_valid_move: return "no-valid-move";
    case Errc::not_ergodic: return "not-ergodic";
    case Errc::iteration_cap_exceeded: return "iteration-cap-exceeded";
    case Errc::singular_system: return "singular-system";
    case Errc::condition_violated: return "condition-violated";
    case Errc::parse_error: return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), detail_(what) {}
  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

// Usage errors map to exit code 1, everything numerical or structural to 2.
inline bool is_usage_error(Errc e) {
  return e == Errc::parse_error || e == Errc::unsupported_kind || e == Errc::invalid_node ||
         e == Errc::dimension_mismatch;
}

}  // namespace rwges
