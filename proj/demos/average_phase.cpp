// Walks through the N = 2, d = 4 case: singular QFIM in the original phases,
// the reduced chart, and the Heisenberg bound on the average phase.

#include <cmath>
#include <iostream>

#include "ghzfisher/ghzfisher.hpp"

int main() {
  using namespace ghzfisher;
  const int n = 2, d = 4;
  const PhaseVector phases = PhaseVector::Zero(d);

  const auto f0 = qfim_pure(n, d, phases, PhaseChart::original(d));
  const auto rank = rank_and_nullspace(f0);
  std::cout << "QFIM in phi_1..phi_4:\n" << f0.entries() << "\nrank " << rank.rank << ", null vector "
            << rank.null_basis.front().transpose() << "\n\n";

  try {
    exact_crb(f0, WeightVector::Constant(d, 0.25));
  } catch (const SingularMatrixError& e) {
    std::cout << "exact bound in the original chart: " << e.what() << "\n\n";
  }

  const auto fq = pushforward_fisher(f0, build_orthogonal_d4());
  std::cout << "QFIM in (phi_a, phi_b, phi_c):\n" << fq.entries() << "\n";
  WeightVector avg = WeightVector::Zero(3);
  avg(0) = 0.5;
  std::cout << "std(average phase) >= " << std::sqrt(exact_crb(fq, avg)) << "\n\n";

  for (int photons : {2, 4, 6, 8}) {
    const auto f = pushforward_fisher(qfim_pure(photons, 8, PhaseVector::Zero(8), PhaseChart::original(8)),
                                      build_mc(8));
    WeightVector e1 = WeightVector::Zero(7);
    e1(0) = 1.0;
    std::cout << "N=" << photons << " d=8: std(theta1) >= " << std::sqrt(exact_crb(f, e1)) << "\n";
  }
}
