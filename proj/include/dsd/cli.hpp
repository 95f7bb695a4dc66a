#pragma once

// Command implementations behind the dsdlab executable. Argument parsing
// lives in tools/dsdlab.cpp; everything here writes to a caller-supplied
// stream so it can be driven from tests.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsd/channels.hpp"
#include "dsd/criteria.hpp"
#include "dsd/family.hpp"
#include "dsd/qstate.hpp"
#include "dsd/state_io.hpp"

namespace dsd::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kValidation = 3 };

/// Bad flags, malformed ranges, unreadable input files.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.12g
inline std::string fmt_g(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rounded to 12 significant digits so that JSON output is stable.
inline double round12(double x) { return std::isfinite(x) ? std::strtod(fmt_g(x).c_str(), nullptr) : x; }

enum class ChannelKind { Eq1, General };

inline ChannelKind parse_channel(const std::string& s) {
  if (s == "eq1") return ChannelKind::Eq1;
  if (s == "general") return ChannelKind::General;
  throw UsageError("unknown channel '" + s + "' (expected eq1 or general)");
}

/// Where the initial state comes from: "rho", "rho-prime" or a JSON file path.
struct StateSource {
  std::string initial = "rho";
  double alpha = 4.5;
  ChannelKind channel = ChannelKind::Eq1;

  bool is_rho() const { return initial == "rho"; }
  bool is_rho_prime() const { return initial == "rho-prime"; }
  bool is_family() const { return is_rho() || is_rho_prime(); }
};

inline DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open state file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_state(text);
}

inline DensityMatrix initial_state(const StateSource& src) {
  if (src.is_rho()) return family::rho0(src.alpha);
  if (src.is_rho_prime()) return family::rho_prime0(src.alpha);
  return load_state_file(src.initial);
}

/// Closed form for ρ under the qutrit channel; the Kraus or general
/// dephasing path for everything else.
inline DensityMatrix evolve(const StateSource& src, const DensityMatrix& initial, const NoiseParams& p) {
  if (src.channel == ChannelKind::General) return general_dephase(initial, p);
  if (src.is_rho()) return family::evolved_closed_form(family::FamilyParams(src.alpha, p));
  return apply_channel(initial, kraus_eq1(p));
}

inline void cmd_evolve(const StateSource& src, const NoiseParams& p, std::ostream& out) {
  const auto rho = evolve(src, initial_state(src), p);
  out << state_to_json(rho).dump() << '\n';
}

inline nlohmann::json classification_json(const Classification& c) {
  nlohmann::json j{{"verdict", std::string(to_string(c.verdict))},
                   {"min_pt_eigenvalue", round12(c.min_pt_eigenvalue)},
                   {"realignment_excess", round12(c.realignment_excess)}};
  if (c.certificate) {
    j["certificate"] = {{"passed", c.certificate->passed}, {"margin", round12(c.certificate->margin)}};
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

/// `paper3x3` is the only certificate layout; it matches the coherence
/// pattern of ρ(t).
inline void cmd_classify(const StateSource& src, const NoiseParams& p, const std::string& certificate,
                         std::ostream& out) {
  std::optional<std::vector<BlockSpec>> blocks;
  if (certificate == "paper3x3") {
    blocks = family::equal_split_blocks();
  } else if (!certificate.empty() && certificate != "none") {
    throw UsageError("unknown certificate '" + certificate + "'");
  }
  const auto rho = evolve(src, initial_state(src), p);
  const auto c = classify(rho, blocks);
  out << to_string(c.verdict) << '\n' << classification_json(c).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Sweeps

struct Range {
  double start = 0;
  double end = 0;
  std::size_t steps = 1;

  std::vector<double> values() const {
    if (steps == 1) return {start};
    std::vector<double> v(steps);
    for (std::size_t k = 0; k < steps; ++k) {
      v[k] = start + (end - start) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    return v;
  }
};

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
  return v;
}

/// "start,end,steps" with steps >= 2 and start < end. When allow_scalar is
/// set, a bare number is accepted as a one-point range.
inline Range parse_range(const std::string& text, bool allow_scalar) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() == 1 && allow_scalar) return Range{parse_number(parts[0]), parse_number(parts[0]), 1};
  if (parts.size() != 3) throw UsageError("range must be start,end,steps: '" + text + "'");
  Range r{parse_number(parts[0]), parse_number(parts[1]), 0};
  const double steps = parse_number(parts[2]);
  if (steps < 2 || steps != std::floor(steps) || steps > 1e6) throw UsageError("range steps must be an integer >= 2");
  r.steps = static_cast<std::size_t>(steps);
  if (!(r.start < r.end)) throw UsageError("range start must be below end: '" + text + "'");
  return r;
}

enum class Quantity { PtMinEig, Realignment, Fidelity, Verdict };

inline Quantity parse_quantity(const std::string& s) {
  if (s == "pt-min-eig") return Quantity::PtMinEig;
  if (s == "realignment") return Quantity::Realignment;
  if (s == "fidelity") return Quantity::Fidelity;
  if (s == "verdict") return Quantity::Verdict;
  throw UsageError("unknown quantity '" + s + "'");
}

struct SweepRequest {
  Quantity quantity = Quantity::PtMinEig;
  StateSource source;
  Range gamma{0.1, 2.0, 20};
  Range t{0.0, 3.0, 301};
};

/// CSV, t outer and gamma inner, 12 significant digits, LF endings.
inline void cmd_sweep(const SweepRequest& req, std::ostream& out) {
  const auto ts = req.t.values();
  const auto gs = req.gamma.values();
  switch (req.quantity) {
    case Quantity::Fidelity: out << "t,gamma,f_rho,f_rho_prime\n"; break;
    case Quantity::Verdict: out << "t,gamma,verdict\n"; break;
    default: out << "t,gamma,value\n"; break;
  }
  const bool fidelity = req.quantity == Quantity::Fidelity;
  const std::optional<DensityMatrix> initial =
      fidelity ? std::nullopt : std::optional<DensityMatrix>(initial_state(req.source));
  std::optional<DensityMatrix> rho_start, prime_start;
  if (fidelity) {
    rho_start = family::rho0(req.source.alpha);
    prime_start = family::rho_prime0(req.source.alpha);
  }
  std::optional<std::vector<BlockSpec>> blocks;
  if (req.source.is_rho() && req.source.channel == ChannelKind::Eq1) blocks = family::equal_split_blocks();

  for (double t : ts) {
    for (double g : gs) {
      const NoiseParams p(g, g, t);
      out << fmt_g(t) << ',' << fmt_g(g) << ',';
      switch (req.quantity) {
        case Quantity::PtMinEig: out << fmt_g(min_pt_eigenvalue(evolve(req.source, *initial, p))); break;
        case Quantity::Realignment: out << fmt_g(realignment_excess(evolve(req.source, *initial, p))); break;
        case Quantity::Verdict: out << to_string(classify(evolve(req.source, *initial, p), blocks).verdict); break;
        case Quantity::Fidelity: {
          StateSource rho_src = req.source, prime_src = req.source;
          rho_src.initial = "rho";
          prime_src.initial = "rho-prime";
          const double f_rho = bures_fidelity(*rho_start, evolve(rho_src, *rho_start, p));
          const double f_prime = bures_fidelity(*prime_start, evolve(prime_src, *prime_start, p));
          out << fmt_g(f_rho) << ',' << fmt_g(f_prime);
          break;
        }
      }
      out << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Thresholds

/// Absent values are nullopt; thresholds not reached within the scan horizon
/// are +inf.
struct ThresholdReport {
  double alpha = 0;
  double gamma = 0;
  std::optional<double> t_d_analytic;
  std::optional<double> t_d_numeric;
  std::optional<double> realignment_zero;
  std::optional<double> certificate_onset;
};

inline constexpr double kScanHorizon = 60.0;  // in units of 1/Γ
inline constexpr std::size_t kScanSteps = 6000;

inline ThresholdReport compute_thresholds(double alpha, double gamma) {
  family::check_alpha(alpha);
  if (!(gamma > 0) || !std::isfinite(gamma)) throw Error(Errc::InvalidParameter, "gamma must be > 0");
  ThresholdReport r{alpha, gamma, {}, {}, {}, {}};
  const double horizon = kScanHorizon / gamma;
  auto state_at = [&](double t) { return family::evolved_closed_form(family::FamilyParams(alpha, NoiseParams(gamma, gamma, t))); };
  auto or_inf = [](std::optional<double> v) { return v ? *v : family::kInfinity; };

  if (alpha > 4.0) {
    r.t_d_analytic = family::t_d(alpha, gamma);
    r.t_d_numeric = or_inf(first_sign_change([&](double t) { return min_pt_eigenvalue(state_at(t)); }, 0.0, horizon,
                                             kScanSteps));
  }
  r.realignment_zero =
      or_inf(first_sign_change([&](double t) { return realignment_excess(state_at(t)); }, 0.0, horizon, kScanSteps));
  const auto blocks = family::equal_split_blocks();
  r.certificate_onset = or_inf(first_sign_change(
      [&](double t) { return separability_certificate(state_at(t), blocks).margin; }, 0.0, horizon, kScanSteps));
  return r;
}

inline nlohmann::json time_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return round12(*v);
}

inline nlohmann::json threshold_json(const ThresholdReport& r) {
  return {{"alpha", r.alpha},
          {"gamma", r.gamma},
          {"t_d_analytic", time_json(r.t_d_analytic)},
          {"t_d_numeric", time_json(r.t_d_numeric)},
          {"realignment_zero", time_json(r.realignment_zero)},
          {"certificate_onset", time_json(r.certificate_onset)}};
}

inline void cmd_thresholds(double alpha, double gamma, std::ostream& out) {
  out << threshold_json(compute_thresholds(alpha, gamma)).dump(2) << '\n';
}

}  // namespace dsd::cli
