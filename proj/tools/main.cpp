// gaussent: entropies and divergences of Gaussian states from JSON state files.

#include <complex>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaussent/cli/commands.hpp"

namespace {

int emit(const gaussent::cli::Report& r, bool as_json) {
  if (as_json) {
    std::cout << r.record.dump(2) << "\n";
  } else if (r.exit_code == gaussent::cli::kExitError && r.record.contains("error")) {
    std::cerr << r.text;
  } else {
    std::cout << r.text;
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gaussent;
  CLI::App app{"Entropy, relative entropy and Petz-Renyi divergence of Gaussian bosonic states"};
  app.require_subcommand(1);

  bool as_json = false;
  cli::Options opt;
  app.add_flag("--json", as_json, "Print the machine-readable record");
  app.add_option("--tol", opt.tol, "Validity / decomposition tolerance")->check(CLI::PositiveNumber);

  std::string a, b;
  auto* validate = app.add_subcommand("validate", "Check C + iJ/2 >= 0");
  validate->add_option("state", a, "State file")->required();

  auto* will = app.add_subcommand("williamson", "Symplectic spectrum and residuals");
  will->add_option("state", a, "State file")->required();

  auto* sform = app.add_subcommand("standard-form", "Inverse temperatures s_k and displacement");
  sform->add_option("state", a, "State file")->required();

  std::vector<double> disp;
  auto* vn = app.add_subcommand("vn-entropy", "von Neumann entropy");
  vn->add_option("state", a, "State file")->required();
  vn->add_flag("--bits", opt.bits, "Report in bits instead of nats");
  vn->add_option("--displace", disp, "Displace first: re0,im0[,re1,im1,...]")->delimiter(',');

  auto* rel = app.add_subcommand("rel-entropy", "Relative entropy S(rho || sigma)");
  rel->add_option("rho", a, "State file")->required();
  rel->add_option("sigma", b, "State file")->required();
  rel->add_flag("--bits", opt.bits, "Report in bits instead of nats");

  double alpha = 0.5;
  std::string sweep;
  auto* petz = app.add_subcommand("petz-renyi", "Petz-Renyi relative entropy S_alpha(rho || sigma)");
  petz->add_option("rho", a, "State file")->required();
  petz->add_option("sigma", b, "State file")->required();
  petz->add_option("--alpha", alpha, "Order in (0, 1)")->capture_default_str();
  petz->add_option("--sweep", sweep, "Table of S_alpha for alpha = a..b in `steps` points (a:b:steps)");
  petz->add_flag("--bits", opt.bits, "Report in bits instead of nats");

  cli::VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Compare closed forms with the truncated Fock oracle");
  verify->add_option("rho", a, "State file")->required();
  verify->add_option("sigma", b, "State file")->required();
  verify->add_option("--truncation", vopt.truncation, "Per-mode Fock cutoff d (default 60 for 1 mode, 16 for 2)");
  verify->add_option("--alpha-list", vopt.alphas, "Petz-Renyi orders to compare")->delimiter(',');
  verify->add_option("--tol", vopt.tol, "Comparison tolerance")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*validate) return emit(cli::cmd_validate(a, opt), as_json);
  if (*will) return emit(cli::cmd_williamson(a, opt), as_json);
  if (*sform) return emit(cli::cmd_standard_form(a, opt), as_json);
  if (*vn) {
    std::optional<CVector> z;
    if (!disp.empty()) {
      if (disp.size() % 2 != 0) {
        std::cerr << "vn-entropy: --displace needs re,im pairs\n";
        return cli::kExitError;
      }
      z = CVector(static_cast<Eigen::Index>(disp.size() / 2));
      for (std::size_t k = 0; k < disp.size() / 2; ++k) z->coeffRef(static_cast<Eigen::Index>(k)) = {disp[2 * k], disp[2 * k + 1]};
    }
    return emit(cli::cmd_vn_entropy(a, opt, z), as_json);
  }
  if (*rel) return emit(cli::cmd_rel_entropy(a, b, opt), as_json);
  if (*petz) {
    std::optional<cli::Sweep> sw;
    if (!sweep.empty()) {
      try {
        sw = cli::parse_sweep(sweep);
      } catch (const std::exception& e) {
        std::cerr << "petz-renyi: " << e.what() << "\n";
        return cli::kExitError;
      }
    }
    return emit(cli::cmd_petz_renyi(a, b, alpha, opt, sw), as_json);
  }
  if (*verify) return emit(cli::cmd_verify(a, b, vopt, opt), as_json);
  return cli::kExitError;
}
