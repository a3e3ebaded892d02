#include "rankindep/scoregen.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "rankindep/core.hpp"

namespace rankindep {

namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw InvalidArgument("parse_phi: bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

}  // namespace

double ScoreGenFn::eval(double u) const {
  switch (kind_) {
    case PhiKind::mww:
      return u;
    case PhiKind::rtb:
      return u >= param_ ? u : 0.0;
    case PhiKind::power:
      return std::pow(u, param_);
  }
  return 0.0;
}

std::optional<double> ScoreGenFn::sup_phi_prime() const noexcept {
  switch (kind_) {
    case PhiKind::mww:
      return 1.0;
    case PhiKind::rtb:
      return std::nullopt;
    case PhiKind::power:
      return param_;
  }
  return std::nullopt;
}

ScoreGenFn phi_mww() { return ScoreGenFn(PhiKind::mww, 1.0, 0.5, "mww"); }

ScoreGenFn phi_rtb(double u0) {
  if (!(u0 > 0.0 && u0 < 1.0)) throw InvalidArgument("phi_rtb: u0 must lie in (0, 1)");
  return ScoreGenFn(PhiKind::rtb, u0, (1.0 - u0 * u0) / 2.0, "rtb:" + format_param(u0));
}

ScoreGenFn phi_power(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("phi_power: exponent must be > 1");
  return ScoreGenFn(PhiKind::power, q, 1.0 / (q + 1.0), "pow:" + format_param(q));
}

ScoreGenFn parse_phi(std::string_view text) {
  if (text == "mww") return phi_mww();
  if (text.starts_with("rtb:")) return phi_rtb(parse_number(text.substr(4), "u0"));
  if (text.starts_with("pow:")) return phi_power(parse_number(text.substr(4), "exponent"));
  throw InvalidArgument("parse_phi: expected mww, rtb:<u0> or pow:<q>, got '" + std::string(text) + "'");
}

}  // namespace rankindep
