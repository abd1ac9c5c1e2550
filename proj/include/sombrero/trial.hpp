#pragma once

#include <concepts>
#include <optional>
#include <variant>

#include "sombrero/trial_one.hpp"
#include "sombrero/trial_two.hpp"

namespace sombrero {

/// A trial state phi solving the modified equation with potential V - h and
/// energy base_energy(). log_phi/dlog_phi/h accept any r >= 0 (h(0) is the
/// finite limit); kink() names a radius where h may jump.
template <class T>
concept TrialFunction = requires(const T& t, double r) {
  { t.params() } -> std::convertible_to<ProblemParams>;
  { t.log_phi(r) } -> std::convertible_to<double>;
  { t.dlog_phi(r) } -> std::convertible_to<double>;
  { t.h(r) } -> std::convertible_to<double>;
  { t.base_energy() } -> std::convertible_to<double>;
  { t.kink() } -> std::convertible_to<std::optional<double>>;
};

enum class TrialKind { one, two };

struct TrialOptions {
  RootChoice root_choice = RootChoice::larger;
  double revised_a = kDefaultRevisedA;
};

using AnyTrial = std::variant<TrialOne, TrialTwo>;

inline AnyTrial make_trial(const ProblemParams& p, TrialKind kind, const TrialOptions& opts = {}) {
  if (kind == TrialKind::one) return TrialOne(p);
  return TrialTwo(p, opts.root_choice, opts.revised_a);
}

/// Adds a constant to log phi; every iteration result must be invariant under it.
template <TrialFunction T>
class RescaledTrial {
 public:
  RescaledTrial(T inner, double log_scale) : inner_(std::move(inner)), log_scale_(log_scale) {}
  ProblemParams params() const { return inner_.params(); }
  double log_phi(double r) const { return inner_.log_phi(r) + log_scale_; }
  double dlog_phi(double r) const { return inner_.dlog_phi(r); }
  double h(double r) const { return inner_.h(r); }
  double base_energy() const { return inner_.base_energy(); }
  std::optional<double> kink() const { return inner_.kink(); }

 private:
  T inner_;
  double log_scale_;
};

static_assert(TrialFunction<TrialOne>);
static_assert(TrialFunction<TrialTwo>);

}  // namespace sombrero
