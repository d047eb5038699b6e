#pragma once

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubetriple/matrix.hpp"

namespace cubetriple {

/// Outcome of one exact identity check.
struct IdentityCheck {
  std::string identity;
  bool passed = false;
  std::optional<std::pair<std::size_t, std::size_t>> first_discrepancy;
};

inline IdentityCheck check_equal(std::string name, const ExactMatrix& lhs, const ExactMatrix& rhs) {
  auto diff = first_difference(lhs, rhs);
  return IdentityCheck{std::move(name), !diff.has_value(), diff};
}

inline IdentityCheck check_true(std::string name, bool ok) { return IdentityCheck{std::move(name), ok, std::nullopt}; }

inline bool all_passed(const std::vector<IdentityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

inline nlohmann::json to_json(const IdentityCheck& c) {
  nlohmann::json j{{"identity", c.identity}, {"passed", c.passed}};
  if (c.first_discrepancy)
    j["first_discrepancy"] = {c.first_discrepancy->first, c.first_discrepancy->second};
  else
    j["first_discrepancy"] = nullptr;
  return j;
}

/// Accumulates many sub-checks under one identity name, keeping the first failure.
class CheckAccumulator {
 public:
  explicit CheckAccumulator(std::string name) : result_{std::move(name), true, std::nullopt} {}

  void require(const ExactMatrix& lhs, const ExactMatrix& rhs) {
    if (!result_.passed) return;
    auto diff = first_difference(lhs, rhs);
    if (diff) {
      result_.passed = false;
      result_.first_discrepancy = diff;
    }
  }

  void require(bool ok) {
    if (!ok) result_.passed = false;
  }

  bool ok() const noexcept { return result_.passed; }
  IdentityCheck result() const { return result_; }

 private:
  IdentityCheck result_;
};

}  // namespace cubetriple
