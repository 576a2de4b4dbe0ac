// Command-line front end: lge <check|decompose|entropy|estimate|compare> SPEC.json

#include "lge/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || !(v > 0)) throw CLI::ValidationError("--eps", "expected positive numbers, got '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--eps", "empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological entropy of Lie group automorphisms"};
  app.require_subcommand(1);

  std::string path;
  std::string format = "text";
  int n = 0;
  std::string eps;
  std::size_t grid = 0;
  double tol_rank = 0;
  std::string out_path;

  using Command = int (*)(const std::string&, const lge::CliOptions&, std::ostream&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"check", "validate the algebra, the automorphism and the group model", lge::cmd_check},
      {"decompose", "eigenvalue classes and the dynamic subalgebras", lge::cmd_decompose},
      {"entropy", "certified entropy with its rule chain", lge::cmd_entropy},
      {"estimate", "numerical spanning-set entropy estimate", lge::cmd_estimate},
      {"compare", "certified value against the numerical estimate", lge::cmd_compare}};

  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("spec", path, "spec file (JSON)")->required();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--n", n, "estimator horizon n_max")->check(CLI::PositiveNumber);
    sub->add_option("--eps", eps, "comma-separated eps values");
    sub->add_option("--grid", grid, "grid density per dimension")->check(CLI::Range(2, 1 << 20));
    sub->add_option("--tol-rank", tol_rank, "relative singular value rank threshold")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "output file (CSV for estimate)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lge::exit_code::parse_error;
  }

  lge::CliOptions opt;
  opt.format = format;
  for (auto* sub : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--n")) opt.n = n;
    if (sub->count("--grid")) opt.grid = grid;
    if (sub->count("--tol-rank")) opt.tol_rank = tol_rank;
    if (sub->count("--out")) opt.out = out_path;
    if (sub->count("--eps")) {
      try {
        opt.eps = parse_eps_list(eps);
      } catch (const std::exception& e) {
        std::cerr << "--eps: " << e.what() << "\n";
        return lge::exit_code::parse_error;
      }
    }
  }
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) return std::get<2>(commands[i])(path, opt, std::cout, std::cerr);
  return lge::exit_code::parse_error;
}
