// Evaluate a few measures on two small distributions, then certify
// m * Phi_1(P||Q) <= Omega_2(Q||P) <= M * Phi_1(P||Q) for that pair.

#include <iostream>

#include "divbound/divbound.hpp"

int main() {
  using namespace divbound;
  const auto p = Distribution::validate(std::vector<double>{0.5, 0.3, 0.2});
  const auto q = Distribution::validate(std::vector<double>{0.2, 0.3, 0.5});

  std::cout << "K(P||Q)   " << format_real(kullback_leibler(p, q)) << '\n'
            << "chi2      " << format_real(chi_square(p, q)) << '\n'
            << "Phi_1/2   " << format_real(phi_s(0.5, p, q)) << '\n'
            << "zeta_3    " << format_real(zeta_s(3, p, q)) << '\n';

  const auto rep = sandwich_check(InequalityFamily::II_OmegaAdjPhi, 2, 1, p, q);
  const auto& c = rep.certificate;
  std::cout << "family II, s = 2, t = 1 on [" << format_real(c.r) << ", " << format_real(c.R) << "]\n"
            << "  m = " << format_real(c.m) << ", M = " << format_real(c.M) << " ("
            << to_string(c.source) << ")\n"
            << "  " << format_real(rep.lhs) << " <= " << format_real(rep.mid) << " <= "
            << format_real(rep.rhs) << (rep.pass ? "  holds\n" : "  VIOLATED\n");
  return rep.pass ? 0 : 1;
}
