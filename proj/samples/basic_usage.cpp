// Entropies of a few Gaussian states built in code.

#include <complex>
#include <iostream>

#include "gaussent/entropy.hpp"
#include "gaussent/gaussian_state.hpp"

int main() {
  using namespace gaussent;

  const GaussianState hot = thermal_state(InverseTemperature(1.0));
  const GaussianState cold = thermal_state(InverseTemperature(2.0));
  std::cout << "S(thermal s=1)            = " << von_neumann_entropy(hot) << " nats\n";

  const DivergenceResult d = relative_entropy(hot, cold);
  std::cout << "S(thermal 1 || thermal 2) = " << d.value << "  (classical " << d.classical_part << ", quantum "
            << d.quantum_part << ")\n";

  // Squeeze and displace the cold state; the divergence from a vacuum reference.
  const double r = 0.4;
  Matrix S(2, 2);
  S << std::exp(r), 0.0, 0.0, std::exp(-r);
  CVector beta(1);
  beta << std::complex<double>(0.5, -0.2);
  const GaussianState moved = displace(conjugate_symplectic(cold, S), beta);
  std::cout << "S(moved || vacuum)        = " << relative_entropy(moved, GaussianState::vacuum(1)).value << "\n";
  std::cout << "S(vacuum || moved)        = " << relative_entropy(GaussianState::vacuum(1), moved).value << "\n";

  for (double alpha : {0.5, 0.9, 0.99}) {
    const PetzRenyiResult p = petz_renyi(hot, cold, alpha);
    std::cout << "S_" << alpha << "(thermal 1 || thermal 2) = " << p.value << "\n";
  }
  return 0;
}
