#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "biconf/errors.hpp"
#include "biconf/report.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    if (item == "all") return {};
    out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of biconformal changes of metric for maps into Hermitian manifolds"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List bundled scenarios");
  std::string list_format = "text";
  list->add_option("--format", list_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* verify = app.add_subcommand("verify", "Verify transformation identities on a scenario");
  biconf::RunConfig cfg;
  std::string sigma, rho, special, identities, format = "json";
  verify->add_option("--scenario", cfg.scenario, "Scenario name")->required();
  verify->add_option("--sigma", sigma, "Horizontal conformal factor, e.g. \"1 + 0.1*x1\"");
  verify->add_option("--rho", rho, "Vertical conformal factor");
  verify->add_option("--special-sigma", special,
                     "sigma for the change with rho = sigma^(-(2n-2)/(m-2n))");
  verify->add_option("--samples", cfg.samples, "Sample points")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--tol-ad", cfg.tol_ad, "Relative tolerance, derivative-exact sides")
      ->capture_default_str();
  verify->add_option("--tol-fd", cfg.tol_fd, "Relative tolerance, finite-difference sides")
      ->capture_default_str();
  verify->add_option("--fd-step", cfg.fd_step, "Finite-difference step")->capture_default_str();
  verify->add_option("--identities", identities, "Comma-separated subset, or all");
  verify->add_option("--report", cfg.report_path, "Output file (default stdout)");
  verify->add_option("--format", format, "json, csv or text")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    std::cout << (list_format == "json" ? biconf::list_json() : biconf::list_text());
    return 0;
  }

  if (verify->count("--sigma")) cfg.sigma = sigma;
  if (verify->count("--rho")) cfg.rho = rho;
  if (verify->count("--special-sigma")) cfg.special_sigma = special;
  try {
    cfg.format = biconf::parse_format(format);
    cfg.identities = split_list(identities);
  } catch (const biconf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return biconf::cmd_verify(cfg, std::cout, std::cerr);
}
