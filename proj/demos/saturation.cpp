// Simulated projective measurements approaching the Cramer-Rao bound for theta_1.

#include <iostream>
#include <thread>

#include "ghzfisher/ghzfisher.hpp"

int main() {
  using namespace ghzfisher;
  for (int photons : {2, 4}) {
    SaturationConfig cfg;
    cfg.photons = photons;
    cfg.nodes = 4;
    cfg.phases = PhaseVector::Constant(4, 0.1);
    cfg.shots = 100000;
    cfg.replicates = 200;
    cfg.seed = 7;
    cfg.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto report = crb_saturation_experiment(cfg);
    std::cout << "N=" << photons << ": Var(theta1) = " << report.variance_theta1 << ", bound = " << report.bound
              << ", ratio = " << report.ratio << "\n";
  }
}
