// Walks ρ(t) (α = 4.5, Γ = 1) through its phases and prints where the
// verdict changes, next to the closed-form thresholds.

#include <cstdio>
#include <string>

#include "dsd/criteria.hpp"
#include "dsd/family.hpp"

int main() {
  using namespace dsd;
  const double alpha = 4.5, gamma = 1.0;
  const auto blocks = family::equal_split_blocks();

  std::string last;
  for (int k = 0; k <= 300; ++k) {
    const double t = 0.01 * k;
    const auto rho = family::evolved_closed_form(family::FamilyParams(alpha, NoiseParams(gamma, gamma, t)));
    const auto c = classify(rho, blocks);
    const std::string v(to_string(c.verdict));
    if (v != last) {
      std::printf("t=%5.2f  %-20s  min PT eig % .3e  CCNR excess % .3e\n", t, v.c_str(), c.min_pt_eigenvalue,
                  c.realignment_excess);
      last = v;
    }
  }
  std::printf("\nclosed forms: t_d = %.6f, realignment zero = %.6f, certificate onset = %.6f\n",
              family::t_d(alpha, gamma), family::realignment_zero_closed_form(alpha, gamma),
              family::certificate_onset_closed_form(alpha, gamma));
}
