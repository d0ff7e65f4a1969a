// Command-line front end for the pencil-resolvent shared library.
// All numerical work happens behind the C API.

#include "pencil_resolvent.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read '" << path << "'\n";
    std::exit(11);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized resolvents of linear operator pencils"};
  app.require_subcommand(1);

  std::string file_path;
  std::string family;
  std::string region;
  std::string out_path;
  std::string rule = "factorial";
  double beta_re = 2.0, beta_im = 0.0;
  double rule_c = 0.5, rule_q = 0.5;
  double contour_radius = 1.0;
  int trunc = 12, pole_order = 2, dim = 4;
  int regular_dim = 2, singular_dim = 2;
  int probe_limit = 10, depth = 24, k_max = 20, l_max = 20, nodes = 512;
  unsigned long long seed = 1;
  bool json_output = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--file", file_path, "pencil document (JSON)");
    cmd->add_option("--family", family,
                    "named family: example1|example2|example3|jordan_block|diag_split|"
                    "random_regular");
    cmd->add_option("--region", region, "near-zero|near-infinity (example3)");
    cmd->add_option("--trunc", trunc, "truncation order for semi-infinite families");
    cmd->add_option("--beta-re", beta_re, "Re(beta) for example3");
    cmd->add_option("--beta-im", beta_im, "Im(beta) for example3");
    cmd->add_option("--rule", rule, "entry sequence rule: factorial|gauss|geometric");
    cmd->add_option("--rule-c", rule_c, "c parameter of the gauss/geometric rule");
    cmd->add_option("--rule-q", rule_q, "q parameter of the geometric rule");
    cmd->add_option("--m", pole_order, "pole order for jordan_block");
    cmd->add_option("--dim", dim, "dimension for random_regular");
    cmd->add_option("--regular-dim", regular_dim, "diag_split leading block");
    cmd->add_option("--singular-dim", singular_dim, "diag_split trailing block");
    cmd->add_option("--seed", seed, "seed for random_regular");
    cmd->add_option("--contour-radius", contour_radius, "admission contour for random_regular");
    cmd->add_option("--probe", probe_limit, "ascent/descent probe limit");
    cmd->add_option("--depth", depth, "chain probe depth");
    cmd->add_option("--kmax", k_max, "negative coefficient count");
    cmd->add_option("--lmax", l_max, "nonnegative coefficient count");
    cmd->add_option("--nodes", nodes, "contour quadrature nodes");
    cmd->add_option("--out", out_path, "output path (growth CSV for laurent)");
    cmd->add_flag("--json", json_output, "machine-readable report");
  };

  for (const char* name : {"analyze", "chains", "project", "solve", "laurent", "validate",
                           "reproduce"}) {
    add_common(app.add_subcommand(name));
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  std::string document;
  if (!file_path.empty()) {
    document = read_file(file_path);
  } else if (!family.empty()) {
    json params;
    params["beta"] = json::array({beta_re, beta_im});
    json rule_json;
    rule_json["kind"] = rule;
    if (rule == "gauss") rule_json["c"] = rule_c;
    if (rule == "geometric") {
      rule_json["c"] = rule_c;
      rule_json["q"] = rule_q;
    }
    params["rule"] = rule_json;
    params["pole_order"] = pole_order;
    params["dim"] = dim;
    params["regular_dim"] = regular_dim;
    params["singular_dim"] = singular_dim;
    params["seed"] = seed;
    params["contour_radius"] = contour_radius;
    json doc;
    doc["pencil"] = {{"family", family}, {"truncation", trunc}, {"params", params}};
    document = doc.dump();
  } else {
    std::cerr << "either --file or --family is required\n";
    return 2;
  }

  json options;
  if (!region.empty()) options["region"] = region;
  options["probe_limit"] = probe_limit;
  options["depth"] = depth;
  options["k_max"] = k_max;
  options["l_max"] = l_max;
  options["nodes"] = nodes;
  if (!out_path.empty()) options["out"] = out_path;
  options["json"] = json_output;

  char* report = nullptr;
  int32_t exit_code = 0;
  pr_status status = pr_run_command(command.c_str(), document.c_str(),
                                    options.dump().c_str(), &report, &exit_code);
  if (status != PR_OK) {
    std::cerr << pr_status_name(status) << ": " << pr_last_error() << "\n";
    return pr_status_exit_code(status);
  }
  std::fputs(report, stdout);
  pr_string_free(report);
  return exit_code;
}
