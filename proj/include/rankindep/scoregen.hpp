#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rankindep {

enum class PhiKind { mww, rtb, power };

/// Score-generating function: a nondecreasing weight on normalized ranks
/// u in [0, 1], together with its integral over [0, 1] and sup-norms.
class ScoreGenFn {
 public:
  PhiKind kind() const noexcept { return kind_; }
  /// u0 for RTB, the exponent for the power family, 1 for MWW.
  double parameter() const noexcept { return param_; }
  const std::string& label() const noexcept { return label_; }

  double eval(double u) const;
  double operator()(double u) const { return eval(u); }

  double integral_0_1() const noexcept { return integral_; }
  double sup_phi() const noexcept { return 1.0; }
  /// Undefined (nullopt) for RTB, which jumps at u0.
  std::optional<double> sup_phi_prime() const noexcept;

  /// Nondecreasing and C^2 on [0, 1].
  bool is_smooth() const noexcept { return kind_ != PhiKind::rtb; }

  /// phi(r/(n+1)) * (n+1) is an integer for every rank r, so the null law
  /// lives on a lattice and can be tabulated by counting rank sums.
  bool is_rank_lattice() const noexcept { return kind_ != PhiKind::power; }

  friend ScoreGenFn phi_mww();
  friend ScoreGenFn phi_rtb(double u0);
  friend ScoreGenFn phi_power(double q);

 private:
  ScoreGenFn(PhiKind kind, double param, double integral, std::string label)
      : kind_(kind), param_(param), integral_(integral), label_(std::move(label)) {}

  PhiKind kind_;
  double param_;
  double integral_;
  std::string label_;
};

/// phi(u) = u; the Mann-Whitney-Wilcoxon weight.
ScoreGenFn phi_mww();

/// phi(u) = u * 1{u >= u0}: only the top 1-u0 fraction of ranks counts.
ScoreGenFn phi_rtb(double u0);

/// phi(u) = u^q, q > 1.
ScoreGenFn phi_power(double q);

/// Parses "mww", "rtb:<u0>" or "pow:<q>".
ScoreGenFn parse_phi(std::string_view text);

}  // namespace rankindep
