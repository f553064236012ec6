#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vfix {

struct JacobianCheck {
  std::string name;
  int samples{0};
  double max_relative_error{0.0};
  bool passed{false};
};

/// Finite-difference audit of the kinematic and distance Jacobians.
struct JacobianAudit {
  double tolerance{1e-6};
  std::uint64_t seed{0};
  std::vector<JacobianCheck> checks;

  bool passed() const;
  std::string to_text() const;
  std::string to_json() const;
};

/// Compares analytic Jacobians with central differences at `samples` random configuration
/// pairs of two reference arms. The error measure is ‖J − J_fd‖_F / max(‖J_fd‖_F, 1e-9).
JacobianAudit audit_jacobians(int samples, std::uint64_t seed, double tolerance = 1e-6);

}  // namespace vfix
