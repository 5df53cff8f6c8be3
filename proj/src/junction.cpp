#include "junction_hj/junction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "junction_hj/errors.hpp"
#include "roots.hpp"

namespace junction_hj {

Junction::Junction(std::vector<Lagrangian> lagrangians)
    : branches_(std::move(lagrangians)) {
  if (branches_.empty()) {
    throw ValidationError("junction needs at least one branch");
  }
  for (std::size_t l = 0; l < branches_.size(); ++l) {
    try {
      check_convexity(branches_[l]);
    } catch (const ValidationError& e) {
      throw ValidationError("branch " + std::to_string(l + 1) + ": " +
                            e.what());
    }
  }

  idle_cost_ = std::numeric_limits<double>::infinity();
  max_idle_cost_ = -std::numeric_limits<double>::infinity();
  gamma_ = std::numeric_limits<double>::infinity();
  gamma0_ = 0.0;
  for (const auto& L : branches_) {
    const double at0 = L(0.0);
    idle_cost_ = std::min(idle_cost_, at0);
    max_idle_cost_ = std::max(max_idle_cost_, at0);
    gamma_ = std::min(gamma_, L.gamma());
    gamma0_ = std::max(gamma0_, std::abs(L.slope(0.0)));
  }
  c0_ = std::max(0.0, -idle_cost_ + gamma0_ * gamma0_ / gamma_);

  const int n = size();
  k_zero_.assign(n, 0.0);
  xi_minus_.assign(n, 0.0);
  xi_plus_.assign(n, 0.0);
  for (int l = 1; l <= n; ++l) {
    const double kz = branches_[l - 1](0.0) - idle_cost_;
    if (kz <= kIdleTolerance) continue;
    k_zero_[l - 1] = kz;
    xi_minus_[l - 1] = k_inverse(l, 0.0, Side::Minus);
    xi_plus_[l - 1] = k_inverse(l, 0.0, Side::Plus);
  }
}

void Junction::check_branch(int l) const {
  if (l < 1 || l > size()) {
    throw DomainError("branch id " + std::to_string(l) + " out of range 1.." +
                      std::to_string(size()));
  }
}

const Lagrangian& Junction::branch(int l) const {
  check_branch(l);
  return branches_[l - 1];
}

bool Junction::in_i0(int l) const {
  check_branch(l);
  return k_zero_[l - 1] == 0.0;
}

std::vector<int> Junction::i0() const {
  std::vector<int> out;
  for (int l = 1; l <= size(); ++l) {
    if (in_i0(l)) out.push_back(l);
  }
  return out;
}

double Junction::xi_minus(int l) const {
  check_branch(l);
  return xi_minus_[l - 1];
}

double Junction::xi_plus(int l) const {
  check_branch(l);
  return xi_plus_[l - 1];
}

double Junction::k(int l, double xi) const {
  const Lagrangian& L = branch(l);
  if (const auto& c = L.coefficients()) {
    // a (xi-b)^2 + c - 2a xi (xi-b) = L(0) - a xi^2
    return -c->a * xi * xi + k_zero_[l - 1];
  }
  return L(xi) - xi * L.slope(xi) - idle_cost_;
}

double Junction::k_at_zero(int l) const {
  check_branch(l);
  return k_zero_[l - 1];
}

double Junction::k_inverse(int l, double v, Side side) const {
  const Lagrangian& L = branch(l);
  const double k0 = k_zero_[l - 1];
  if (!std::isfinite(v)) {
    throw DomainError("k_inverse: value must be finite");
  }
  const double sign = side == Side::Plus ? 1.0 : -1.0;
  if (v >= k0) {
    if (v <= k0 + 1e-12 * std::max(1.0, std::abs(k0))) return 0.0;
    throw DomainError("k_inverse: value " + std::to_string(v) +
                      " exceeds K_" + std::to_string(l) + "(0) = " +
                      std::to_string(k0));
  }
  if (const auto& c = L.coefficients()) {
    return sign * std::sqrt((k0 - v) / c->a);
  }
  return detail::root_from_origin([&](double xi) { return k(l, xi) - v; },
                                  sign, "k_inverse");
}

double hamiltonian_at(const Junction& J, const Point& x,
                      std::span<const double> grad) {
  if (!x.is_junction()) {
    if (grad.size() != 1) {
      throw DomainError("interior point needs exactly one gradient component");
    }
    return hamiltonian(J.branch(x.branch()), grad[0]);
  }
  if (static_cast<int>(grad.size()) != J.size()) {
    throw DomainError("junction point needs one gradient component per branch");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int l = 1; l <= J.size(); ++l) {
    best = std::max(best, h_minus(J.branch(l), grad[l - 1]));
  }
  return best;
}

}  // namespace junction_hj
