#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "gaussent/entropy.hpp"
#include "test_support.hpp"

using namespace gaussent;

namespace {

// Reference values computed with mpmath at 30 digits.
constexpr double kH01 = 0.325082973391448239;              // H(0.1)
constexpr double kHRel = 0.169860288197846292;             // H(e^-1 : e^-2)
constexpr double kKlThermal12 = 0.268715019351103590;      // S(thermal(1) || thermal(2))
constexpr double kSThermalHalf = 1.70349917083558771;      // S(thermal(0.5))
constexpr double kSThermal1 = 1.04065185225640832;
constexpr double kSThermal2 = 0.458448743368190361;
constexpr double kOverlap03 = 0.963037363899058209;        // Tr rho^a sigma^(1-a), thermal(1), thermal(2)
constexpr double kOverlap05 = 0.951646303937354276;
constexpr double kOverlap09 = 0.977675950600002509;
constexpr double kPetz03 = 0.0538043835098294569;
constexpr double kPetz05 = 0.0991236854050329559;
constexpr double kPetz09 = 0.225770027069696363;

GaussianState thermal(double s) { return thermal_state(InverseTemperature(s)); }

GaussianState coherent(std::complex<double> b) {
  CVector v(1);
  v << b;
  return GaussianState::coherent(v);
}

}  // namespace

TEST(shannon, values_and_edges) {
  EXPECT_NEAR(shannon_entropy(0.1), kH01, 1e-15);
  EXPECT_EQ(shannon_entropy(0.0), 0.0);
  EXPECT_EQ(shannon_entropy(1.0), 0.0);
  EXPECT_NEAR(shannon_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_THROW(shannon_entropy(1.5), InvalidArgument);
}

TEST(shannon_relative_entropy, values_and_infinities) {
  EXPECT_NEAR(shannon_relative_entropy(std::exp(-1.0), std::exp(-2.0)).value(), kHRel, 1e-15);
  EXPECT_EQ(shannon_relative_entropy(0.3, 0.3).value(), 0.0);
  EXPECT_TRUE(shannon_relative_entropy(0.3, 0.0).is_infinite());
  EXPECT_TRUE(shannon_relative_entropy(0.3, 1.0).is_infinite());
  EXPECT_EQ(shannon_relative_entropy(0.0, 0.0).value(), 0.0);
}

TEST(thermal_entropy, values) {
  EXPECT_NEAR(thermal_entropy(InverseTemperature(std::log(2.0))), 2.0 * std::log(2.0), 1e-14);
  EXPECT_NEAR(thermal_entropy(InverseTemperature(0.5)), kSThermalHalf, 1e-14);
  EXPECT_NEAR(thermal_entropy(InverseTemperature(1.0)), kSThermal1, 1e-14);
  EXPECT_NEAR(thermal_entropy(InverseTemperature(2.0)), kSThermal2, 1e-14);
  EXPECT_EQ(thermal_entropy(InverseTemperature::infinity()), 0.0);
}

TEST(von_neumann_entropy, examples_and_invariance) {
  EXPECT_EQ(von_neumann_entropy(GaussianState::vacuum(2)), 0.0);
  EXPECT_NEAR(von_neumann_entropy(thermal(std::log(2.0))), 1.386294361119890619, 1e-12);
  fixtures::Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const GaussianState rho = fixtures::random_state(2, rng);
    const double s = von_neumann_entropy(rho);
    EXPECT_NEAR(von_neumann_entropy(displace(rho, fixtures::random_mean(2, rng))), s, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(conjugate_symplectic(rho, fixtures::random_symplectic(2, rng))), s, 1e-8);
  }
}

TEST(cross_term_1mode, thermal_self_term_is_minus_entropy) {
  // Tr rho(1) ln rho(1) = -S(rho(1)).
  const ModeMarginal mm = mode_marginal(thermal(1.0), 0);
  EXPECT_NEAR(cross_term_1mode(mm, InverseTemperature(1.0)), -kSThermal1, 1e-14);
  EXPECT_THROW(cross_term_1mode(mm, InverseTemperature::infinity()), InvalidArgument);
}

TEST(relative_entropy, thermal_pair_is_purely_classical) {
  const DivergenceResult d = relative_entropy(thermal(1.0), thermal(2.0));
  EXPECT_NEAR(d.value.value(), kKlThermal12, 1e-14);
  EXPECT_LE(std::abs(d.quantum_part), 1e-12);
  EXPECT_NEAR(d.classical_part, kHRel / (1.0 - std::exp(-1.0)), 1e-14);
}

TEST(relative_entropy, identical_states_give_zero) {
  fixtures::Rng rng(32);
  for (int i = 0; i < 10; ++i) {
    const GaussianState rho = fixtures::random_state(1 + static_cast<std::size_t>(i % 3), rng);
    EXPECT_NEAR(relative_entropy(rho, rho).value.value(), 0.0, 1e-9);
  }
  EXPECT_NEAR(relative_entropy(GaussianState::vacuum(2), GaussianState::vacuum(2)).value.value(), 0.0, 1e-12);
  EXPECT_NEAR(relative_entropy(coherent(0.7), coherent(0.7)).value.value(), 0.0, 1e-12);
}

TEST(relative_entropy, infinity_branch) {
  const DivergenceResult d = relative_entropy(thermal(1.0), GaussianState::vacuum(1));
  EXPECT_TRUE(d.value.is_infinite());
  ASSERT_TRUE(d.infinite_mode.has_value());
  EXPECT_EQ(*d.infinite_mode, 0u);
  EXPECT_TRUE(relative_entropy(coherent(0.3), GaussianState::vacuum(1)).value.is_infinite());
  // Pure rho against a mixed sigma is finite: -ln(1 - e^{-t}) for the vacuum.
  EXPECT_NEAR(relative_entropy(GaussianState::vacuum(1), thermal(1.0)).value.value(),
              -std::log(1.0 - std::exp(-1.0)), 1e-14);
}

TEST(relative_entropy, pure_sigma_mode_with_vacuum_marginal_is_finite) {
  // sigma = vacuum x thermal(2); rho = vacuum x thermal(1) agrees on the pure mode.
  std::vector<InverseTemperature> s{InverseTemperature::infinity(), InverseTemperature(1.0)};
  std::vector<InverseTemperature> t{InverseTemperature::infinity(), InverseTemperature(2.0)};
  const DivergenceResult d = relative_entropy(product_thermal_state(s), product_thermal_state(t));
  ASSERT_FALSE(d.value.is_infinite());
  EXPECT_NEAR(d.value.value(), kKlThermal12, 1e-12);
}

TEST(relative_entropy, decomposition_invariants_and_ungrouped_path) {
  fixtures::Rng rng(33);
  for (int i = 0; i < 30; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
    const GaussianState rho = fixtures::random_state(n, rng), sigma = fixtures::random_state(n, rng);
    const DivergenceResult d = relative_entropy(rho, sigma);
    ASSERT_FALSE(d.value.is_infinite());
    double sum = 0.0;
    for (const ModeTerms& m : d.per_mode) sum += m.classical + m.quantum;
    EXPECT_NEAR(d.value.value(), d.classical_part + d.quantum_part, 1e-10);
    EXPECT_NEAR(d.value.value(), sum, 1e-10);
    EXPECT_GE(d.value.value(), -1e-9);
    const ExtendedReal u = relative_entropy_ungrouped(rho, sigma);
    EXPECT_NEAR(u.value(), d.value.value(), 1e-8 * (1.0 + d.value.value()));
  }
}

TEST(relative_entropy, rejects_mode_mismatch) {
  EXPECT_THROW(relative_entropy(GaussianState::vacuum(1), GaussianState::vacuum(2)), InvalidArgument);
}

TEST(petz_renyi, thermal_pair_reference_values) {
  const GaussianState a = thermal(1.0), b = thermal(2.0);
  EXPECT_NEAR(trace_power_overlap(a, b, 0.3), kOverlap03, 1e-13);
  EXPECT_NEAR(trace_power_overlap(a, b, 0.5), kOverlap05, 1e-13);
  EXPECT_NEAR(trace_power_overlap(a, b, 0.9), kOverlap09, 1e-13);
  EXPECT_NEAR(petz_renyi(a, b, 0.3).value.value(), kPetz03, 1e-12);
  EXPECT_NEAR(petz_renyi(a, b, 0.5).value.value(), kPetz05, 1e-12);
  EXPECT_NEAR(petz_renyi(a, b, 0.9).value.value(), kPetz09, 1e-12);
}

TEST(petz_renyi, coherent_against_vacuum) {
  EXPECT_NEAR(petz_renyi(coherent(0.7), GaussianState::vacuum(1), 0.5).value.value(), 0.98, 1e-12);
  const std::complex<double> beta(0.4, -0.8);
  for (double alpha : {0.1, 0.3, 0.5, 0.9, 0.99}) {
    EXPECT_NEAR(petz_renyi(coherent(beta), GaussianState::vacuum(1), alpha).value.value(),
                std::norm(beta) / (1.0 - alpha), 1e-9);
  }
}

TEST(petz_renyi, identical_states_give_zero) {
  fixtures::Rng rng(34);
  const GaussianState rho = fixtures::random_state(2, rng);
  EXPECT_NEAR(petz_renyi(rho, rho, 0.5).value.value(), 0.0, 1e-9);
}

TEST(petz_renyi, terms_match_overlap_path) {
  fixtures::Rng rng(35);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
    const GaussianState rho = fixtures::random_state(n, rng), sigma = fixtures::random_state(n, rng);
    for (double alpha : {0.3, 0.5, 0.9}) {
      const PetzRenyiResult p = petz_renyi(rho, sigma, alpha);
      EXPECT_NEAR(p.value.value(), p.terms.sum(), 1e-12);
      EXPECT_NEAR(p.terms.sum(), std::log(trace_power_overlap(rho, sigma, alpha)) / (alpha - 1.0), 1e-10);
      EXPECT_GE(p.value.value(), -1e-9);
    }
  }
}

TEST(petz_renyi, approaches_relative_entropy) {
  const GaussianState a = thermal(1.0), b = thermal(2.0);
  double previous = 1.0;
  for (double alpha : {0.9, 0.99, 0.999, 0.9999}) {
    const double gap = std::abs(petz_renyi(a, b, alpha).value.value() - kKlThermal12);
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(petz_renyi, pure_reference_is_finite) {
  // Tr rho^a |0><0| = (1 - e^{-s})^a for a thermal rho.
  const double alpha = 0.5;
  const double expected = alpha * std::log(1.0 - std::exp(-1.0)) / (alpha - 1.0);
  EXPECT_NEAR(petz_renyi(thermal(1.0), GaussianState::vacuum(1), alpha).value.value(), expected, 1e-12);
}

TEST(petz_renyi, rejects_alpha_outside_open_interval) {
  for (double alpha : {0.0, 1.0, -0.5, 1.5}) {
    EXPECT_THROW(petz_renyi(thermal(1.0), thermal(2.0), alpha), InvalidArgument);
  }
}
