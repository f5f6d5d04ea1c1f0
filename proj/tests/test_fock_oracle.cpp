#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "gaussent/entropy.hpp"
#include "gaussent/fock_oracle.hpp"
#include "test_support.hpp"

using namespace gaussent;
using namespace gaussent::oracle;
using Complex = std::complex<double>;

namespace {

CMatrix dense_unitary(const Generator& g, std::size_t d, std::size_t modes) {
  return oracle::detail::exp_anti_hermitian(generator_matrix(g, d, modes));
}

std::vector<Generator> sample_generators(std::size_t modes) {
  std::vector<Generator> gs{Displacement{0, {0.3, -0.4}}, Squeeze{0, 0.5, 0.3}, Rotation{0, 0.9}};
  if (modes == 2) {
    gs.push_back(Beamsplitter{0.7});
    gs.push_back(Squeeze{1, 0.2, -1.1});
    gs.push_back(Displacement{1, {-0.2, 0.6}});
  }
  return gs;
}

}  // namespace

TEST(annihilation_matrix, entries_and_truncated_commutator) {
  const CMatrix a = annihilation_matrix(5).matrix;
  EXPECT_NEAR(a(2, 3).real(), std::sqrt(3.0), 1e-15);
  EXPECT_EQ(a(3, 2), Complex(0.0));
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  // [a, a^dag] = I except in the last basis state.
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(comm(k, k).real(), 1.0, 1e-14);
  EXPECT_NEAR(comm(4, 4).real(), -4.0, 1e-14);
}

TEST(apply_generator, factorized_and_blockwise_match_dense_exponential) {
  for (std::size_t modes : {1, 2}) {
    const std::size_t d = 6;
    const std::size_t N = modes == 1 ? d : d * d;
    fixtures::Rng rng(41);
    CMatrix V = CMatrix::Random(static_cast<Eigen::Index>(N), 3);
    for (const Generator& g : sample_generators(modes)) {
      CMatrix fast = V;
      oracle::detail::apply_unitary_columns(fast, g, d, modes);
      EXPECT_LE((fast - dense_unitary(g, d, modes) * V).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(apply_generator, operator_overload_conjugates) {
  const std::size_t d = 5;
  FockOperator rho = thermal_density(InverseTemperature(1.0), d).density();
  const Generator g = Squeeze{0, 0.4, 0.2};
  const CMatrix U = dense_unitary(g, d, 1);
  EXPECT_LE((apply_generator(rho, g).matrix - U * rho.matrix * U.adjoint()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(thermal_density, weights_and_tail) {
  const FockDensity rho = thermal_density(InverseTemperature(1.0), 60);
  EXPECT_NEAR(rho.weights(0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(rho.tail_mass, std::exp(-60.0), 1e-15);
  const FockDensity vac = thermal_density(InverseTemperature::infinity(), 10);
  EXPECT_EQ(vac.weights.size(), 1);  // zero weights are dropped
  EXPECT_EQ(vac.tail_mass, 0.0);
}

TEST(oracle_entropy, thermal_matches_closed_form) {
  for (double s : {0.5, std::log(2.0), 1.0, 2.0}) {
    const double closed = thermal_entropy(InverseTemperature(s));
    EXPECT_NEAR(oracle_entropy(thermal_density(InverseTemperature(s), 60)), closed, 1e-6);
    EXPECT_NEAR(oracle_entropy(thermal_density(InverseTemperature(s), 60).density()), closed, 1e-6);
  }
}

TEST(recipe, gaussian_view_of_squeezed_vacuum) {
  const Recipe r{{InverseTemperature::infinity()}, {Squeeze{0, 0.3, 0.0}}};
  const GaussianState g = r.to_gaussian();
  EXPECT_NEAR(g.cov()(0, 0), 0.5 * std::exp(0.6), 1e-14);  // Cov(p)
  EXPECT_NEAR(g.cov()(1, 1), 0.5 * std::exp(-0.6), 1e-14);
}

TEST(recipe, characteristic_functions_agree_one_and_two_modes) {
  const Recipe one{{InverseTemperature(1.2)}, {Squeeze{0, 0.4, 0.7}, Displacement{0, {0.3, 0.5}}, Rotation{0, 0.4}}};
  const Recipe two{{InverseTemperature(1.5), InverseTemperature::infinity()},
                   {Squeeze{0, 0.3, 0.2}, Beamsplitter{0.6}, Displacement{1, {0.4, 0.1}}, Rotation{1, -0.8}}};
  fixtures::Rng rng(42);
  for (const auto& [recipe, d] : {std::pair{one, std::size_t{80}}, std::pair{two, std::size_t{40}}}) {
    const FockDensity f = recipe.to_fock(d);
    const GaussianState g = recipe.to_gaussian();
    for (int i = 0; i < 5; ++i) {
      const CVector u = fixtures::random_mean(recipe.modes(), rng, 0.8);
      EXPECT_LE(std::abs(oracle_char_fn(f, u) - characteristic_function(g, u)), 1e-6);
    }
  }
}

TEST(recipe, two_mode_squeezed_marginals_are_symmetric) {
  // Opposite single-mode squeezes followed by a balanced beamsplitter.
  const Recipe r{{InverseTemperature::infinity(), InverseTemperature::infinity()},
                 {Squeeze{0, 0.5, 0.0}, Squeeze{1, 0.5, M_PI / 2}, Beamsplitter{M_PI / 4}}};
  const GaussianState g = r.to_gaussian();
  EXPECT_NEAR(mode_marginal(g, 0).T.trace(), mode_marginal(g, 1).T.trace(), 1e-12);
  EXPECT_NEAR(mode_marginal(g, 0).T.trace(), std::cosh(1.0), 1e-12);  // each mode thermal with nu = cosh(2r)/2
  EXPECT_NEAR(von_neumann_entropy(g), 0.0, 1e-9);                     // the pair stays pure
}

TEST(oracle_relative_entropy, thermal_pair_and_infinity) {
  const FockDensity a = thermal_density(InverseTemperature(1.0), 60);
  const FockDensity b = thermal_density(InverseTemperature(2.0), 60);
  EXPECT_NEAR(oracle_relative_entropy(a, b).value(), 0.268715019351103590, 1e-8);
  const FockDensity vac = thermal_density(InverseTemperature::infinity(), 60);
  EXPECT_TRUE(oracle_relative_entropy(a, vac).is_infinite());
  EXPECT_NEAR(oracle_relative_entropy(vac, vac).value(), 0.0, 1e-12);
}

TEST(oracle_relative_entropy, dense_path_on_well_conditioned_pair) {
  // Hot states keep sigma's spectrum above the eigensolver floor at d = 40.
  const Recipe ra{{InverseTemperature(0.6)}, {Displacement{0, {0.2, 0.1}}}};
  const Recipe rb{{InverseTemperature(0.5)}, {Squeeze{0, 0.1, 0.0}}};
  const double closed = relative_entropy(ra.to_gaussian(), rb.to_gaussian()).value.value();
  OracleOptions opt;
  opt.eig_floor = 1e-300;
  const ExtendedReal spectral = oracle_relative_entropy(ra.to_fock(40), rb.to_fock(40));
  const ExtendedReal dense = oracle_relative_entropy(ra.to_fock(40).density(), rb.to_fock(40).density(), opt);
  EXPECT_NEAR(spectral.value(), closed, 1e-4);
  EXPECT_NEAR(dense.value(), spectral.value(), 1e-6);
}

TEST(oracle_petz_renyi, thermal_pair_reference) {
  const FockDensity a = thermal_density(InverseTemperature(1.0), 60);
  const FockDensity b = thermal_density(InverseTemperature(2.0), 60);
  EXPECT_NEAR(oracle_trace_power_overlap(a, b, 0.5), 0.951646303937354276, 1e-10);
  EXPECT_NEAR(oracle_petz_renyi(a, b, 0.5).value(), 0.0991236854050329559, 1e-9);
}

TEST(truncation_gate, accepts_converged_and_flags_drift) {
  const auto flat = [](std::size_t) { return ExtendedReal(1.0); };
  EXPECT_TRUE(truncation_gate(flat, 10, 1e-9).converged);
  const auto drift = [](std::size_t d) { return ExtendedReal(1.0 / static_cast<double>(d)); };
  EXPECT_FALSE(truncation_gate(drift, 10, 1e-3).converged);
  const auto inf = [](std::size_t) { return ExtendedReal::infinity(); };
  EXPECT_TRUE(truncation_gate(inf, 10, 1e-9).converged);
}

TEST(recipe_from_state, reproduces_random_states) {
  fixtures::Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
    const GaussianState rho = i % 5 == 0 ? fixtures::random_state(n, rng, 0.5, 0.5) : fixtures::random_state(n, rng);
    const Recipe r = recipe_from_state(rho);
    const GaussianState back = r.to_gaussian();
    EXPECT_LE(gaussent::detail::max_abs(back.cov() - rho.cov()), 1e-8 * (1.0 + gaussent::detail::max_abs(rho.cov())));
    EXPECT_LE((back.mean() - rho.mean()).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(recipe_from_state, refuses_three_modes) {
  EXPECT_THROW(recipe_from_state(GaussianState::vacuum(3)), Unrepresentable);
}
