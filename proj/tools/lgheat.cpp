#include <iostream>

#include <CLI11.hpp>

#include "lgheat/cli.hpp"

namespace {

int emit(const lgheat::cli::Output& o) {
  if (!o.csv.empty()) {
    std::cout << o.csv;
  } else if (!o.report.is_null()) {
    std::cout << o.report.dump(2) << '\n';
  }
  if (!o.error.is_null()) std::cerr << o.error.dump() << '\n';
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = lgheat::cli;
  CLI::App app{"Spectral invariants of quasi-homogeneous singularities"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = cli::default_seed();
  } catch (const lgheat::Error& e) {
    return emit(cli::detail::error_output(e));
  }

  std::string poly;
  auto* weights = app.add_subcommand("weights", "weights, Milnor number, tameness data");
  weights->add_option("polynomial", poly, "polynomial in z1..zn")->required();

  cli::IndexArgs ia;
  ia.seed = seed;
  auto* index = app.add_subcommand("index", "Milnor number from the heat supertrace at several t");
  index->add_option("polynomial", poly)->required();
  index->add_option("--t", ia.t, "comma separated times")->delimiter(',');
  index->add_option("--samples", ia.samples, "Monte Carlo samples per t");
  index->add_option("--seed", ia.seed);
  index->add_option("--method", ia.method)->check(CLI::IsMember({"mc", "quadrature"}));
  index->add_option("--strata", ia.strata);
  index->add_option("--nodes", ia.nodes, "quadrature nodes per real axis (0 = auto)");
  index->add_flag("--csv", ia.csv, "per-t estimates as CSV");

  cli::TorsionArgs ta;
  auto* torsion = app.add_subcommand("torsion", "analytic torsion of a one-variable singularity");
  torsion->add_option("polynomial", poly)->required();
  torsion->add_option("--basis", ta.basis, "Laguerre basis size per sector");
  torsion->add_option("--sectors", ta.sectors, "angular momentum cutoff (0 = auto)");
  torsion->add_flag("--exact", ta.exact, "report the closed form as the primary value");
  torsion->add_option("--threads", ta.threads, "worker cap")->check(CLI::PositiveNumber);

  std::string suite;
  std::uint64_t vseed = seed;
  auto* verify = app.add_subcommand("verify", "run built-in invariant suites");
  verify->add_option("suite", suite, "suite name or all")->required();
  verify->add_option("--seed", vseed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "Usage"}, {"message", e.what()}}.dump() << '\n';
    return cli::ParseFailure;
  }

  if (*weights) return emit(cli::cmd_weights(poly));
  if (*index) return emit(cli::cmd_index(poly, ia));
  if (*torsion) return emit(cli::cmd_torsion(poly, ta));
  return emit(cli::cmd_verify(suite, vseed));
}
