#pragma once

// Batch verification of the DSD-free constructions on the family states and
// on seeded random states. Each check prints one PASS/FAIL line.

#include <cstdint>
#include <ostream>
#include <string>

#include "dsd/channels.hpp"
#include "dsd/cli.hpp"
#include "dsd/criteria.hpp"
#include "dsd/family.hpp"
#include "dsd/lemmas.hpp"
#include "dsd/random.hpp"

namespace dsd::verify {

struct Options {
  std::uint64_t seed = 42;
  std::size_t samples = 200;
  bool inject_fault = false;  // flips one expectation; exercises the failure path
  double alpha = 4.5;
};

class Reporter {
 public:
  explicit Reporter(std::ostream& out) : out_(out) {}

  void check(bool ok, const std::string& name, const std::string& detail = {}) {
    out_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out_ << "  " << detail;
    out_ << '\n';
    ok ? ++passed_ : ++failed_;
  }

  std::size_t passed() const { return passed_; }
  std::size_t failed() const { return failed_; }

 private:
  std::ostream& out_;
  std::size_t passed_ = 0;
  std::size_t failed_ = 0;
};

inline const double kSampleTimes[] = {0.1, 0.5, 1.0, 2.0, 5.0};

/// Returns the number of failed checks.
inline std::size_t run(const Options& opt, std::ostream& out) {
  using namespace family;
  using cli::fmt_g;
  Reporter rep(out);
  const auto rho = rho0(opt.alpha);
  const auto prime = rho_prime0(opt.alpha);
  const std::string a = "alpha=" + fmt_g(opt.alpha);

  // Partial Kraus sums (qutrit dephasing channel).
  for (double t : kSampleTimes) {
    const NoiseParams p(1, 1, t);
    for (auto br : {Branch::D2, Branch::E2}) {
      const auto s = lemma1_substate(prime, br, p);
      const bool parent_npt = min_pt_eigenvalue(apply_channel(prime, kraus_eq1(p))) < -tol::verdict;
      rep.check(s.entangled && parent_npt,
                std::string("lemma1.rho_prime.") + (br == Branch::D2 ? "D2" : "E2") + " t=" + fmt_g(t),
                "substate min PT eig " + fmt_g(s.min_pt_eigenvalue));
    }
  }
  {
    const auto s = lemma2_substate(prime);
    rep.check(s.entangled != opt.inject_fault, "lemma2.rho_prime certified", a + " min PT eig " + fmt_g(s.min_pt_eigenvalue));
    const auto r = lemma2_substate(rho);
    rep.check(!r.entangled, "lemma2.rho not certified", "min PT eig " + fmt_g(r.min_pt_eigenvalue));
  }
  {
    bool ok = true;
    for (std::size_t k = 0; k <= 100; ++k) {
      const double t = 0.1 * static_cast<double>(k);
      ok = ok && qubit_block_witness(evolved_prime(FamilyParams(opt.alpha, NoiseParams(1, 1, t))), {1, 2}, {1, 2}) <
                     -tol::verdict;
    }
    rep.check(ok, "dsd_free.rho_prime witness negative on t in [0,10]");
  }

  // MC states under general dephasing (model-dependent: uniform damping).
  auto mc_sweep = [&](const McSpec& spec, const std::string& name, bool expect_entangled) {
    bool ok = true;
    for (double t : kSampleTimes) {
      const auto r = mc_checks(spec, NoiseParams(1, 1, t));
      ok = ok && r.consistent() && r.entangled == expect_entangled;
    }
    rep.check(ok, "lemma3_5." + name + " (general dephasing model)");
  };
  for (std::size_t d : {3u, 4u}) {
    ComplexMatrix plus(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) plus(i, j) = 1.0 / static_cast<double>(d);
    mc_sweep(McSpec(plus), "maximally_entangled d=" + std::to_string(d), true);
    std::vector<double> diag(d, 1.0 / static_cast<double>(d));
    mc_sweep(McSpec(ComplexMatrix::diagonal(diag)), "diagonal d=" + std::to_string(d), false);
  }

  // Projection onto MC form.
  {
    const Dims d(3, 3);
    std::vector<cplx> psi(9);
    for (std::size_t i = 0; i < 3; ++i) psi[d.index(i, i)] = 1.0 / std::sqrt(3.0);
    const auto p_plus = make_state(d, ComplexMatrix::outer(psi, psi));
    const auto spec = lemma4_project(p_plus, 0, 1, 0, 1);
    bool ok = spec.has_value();
    if (spec) {
      for (double t : kSampleTimes) ok = ok && mc_checks(*spec, NoiseParams(1, 1, t)).distillable;
    }
    rep.check(ok, "lemma4.P_plus (0,1)x(0,1) certified");
    rep.check(!lemma4_project(rho, 1, 2, 1, 2).has_value(), "lemma4.rho (1,2)x(1,2) not certified");
    rep.check(!lemma4_project(prime, 1, 2, 1, 2).has_value(), "lemma4.rho_prime (1,2)x(1,2) not MC-form");
  }

  // Infinite-time limit.
  rep.check(lemma6_classify(rho).verdict == LimitVerdict::SeparableLimit, "lemma6.rho -> SeparableLimit");
  rep.check(lemma6_classify(prime).verdict == LimitVerdict::DistillableLimit, "lemma6.rho_prime -> DistillableLimit");

  // Random sections.
  StateSampler sampler(opt.seed);
  std::size_t bad_limit = 0, bad_lemma1 = 0, bad_lemma2 = 0, bad_mc = 0;
  for (std::size_t k = 0; k < opt.samples; ++k) {
    const auto s0 = sampler.state(Dims(3, 3));
    const double t = sampler.uniform(0.05, 5.0);
    const NoiseParams p(1, 1, t);
    const auto st = apply_channel(s0, kraus_eq1(p));
    const bool st_npt = min_pt_eigenvalue(st) < -tol::verdict;

    const auto lim = lemma6_classify(s0);
    if (lim.verdict == LimitVerdict::SeparableLimit && realignment_excess(lim.limit) > tol::verdict) ++bad_limit;

    for (auto br : {Branch::D2, Branch::E2}) {
      if (lemma1_substate(s0, br, p).entangled && !st_npt) ++bad_lemma1;
    }
    if (lemma2_substate(s0).entangled && !(lemma1_substate(s0, Branch::D2, p).entangled && st_npt)) ++bad_lemma2;

    const auto coeffs = sampler.density(3);
    const auto r = mc_checks(McSpec(coeffs), p);
    if (!r.consistent() || !r.entangled) ++bad_mc;
  }
  const std::string n = "samples=" + std::to_string(opt.samples) + " seed=" + std::to_string(opt.seed);
  rep.check(bad_limit == 0, "lemma6.random no PPT-entangled limit", n + " violations=" + std::to_string(bad_limit));
  rep.check(bad_lemma1 == 0, "lemma1.random substate NPT implies sigma(t) NPT", n + " violations=" + std::to_string(bad_lemma1));
  rep.check(bad_lemma2 == 0, "lemma2.random certified implies lemma1 D2 branch", n + " violations=" + std::to_string(bad_lemma2));
  rep.check(bad_mc == 0, "lemma3.random MC states stay MC, entangled, distillable", n + " violations=" + std::to_string(bad_mc));

  out << "summary: " << rep.passed() << " passed, " << rep.failed() << " failed\n";
  return rep.failed();
}

}  // namespace dsd::verify
