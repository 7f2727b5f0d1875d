// Command-line front end. Each subcommand maps onto one run* function in
// commands.cpp; this file only declares flags, loads JSON configs and maps
// exceptions onto exit statuses.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "lyap/errors.hpp"

namespace {

using nlohmann::json;
using namespace lyapcli;

void addCommon(CLI::App* sub, Common& c) {
  sub->add_option("--model", c.modelPath, "Model JSON file");
  sub->add_option("--out", c.out, "Output file (stdout when omitted)");
  sub->add_option("--manifest", c.manifest, "Manifest path");
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

// Effective option values of a parsed subcommand, keyed by long name.
json effectiveConfig(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "manifest") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      cfg[name] = r.size() == 1 ? json(r[0]) : json(r);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

// Turns {"command": "mc", "eps": 0.5, ...} into command-line arguments.
// "modelPath", "outputPath" and "seed" are accepted as aliases.
std::vector<std::string> argsFromConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lyap::DomainError("config not found: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw lyap::DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("command") || !doc["command"].is_string()) {
    throw lyap::DomainError("config: missing field command");
  }
  std::vector<std::string> args;
  std::string command = doc["command"].get<std::string>();
  if (command == "dh constants") {
    args = {"dh", "constants"};
  } else {
    args = {command};
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    std::string flag = key;
    if (key == "modelPath") flag = "model";
    if (key == "outputPath") flag = "out";
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    std::string text;
    if (value.is_array()) {
      for (const auto& v : value) {
        if (!text.empty()) text += ',';
        text += v.is_string() ? v.get<std::string>() : v.dump();
      }
    } else {
      text = value.is_string() ? value.get<std::string>() : value.dump();
    }
    args.push_back("--" + flag);
    args.push_back(text);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents of random 2x2 Ising transfer matrices"};
  app.set_version_flag("--version", kVersion);
  std::string configPath;
  app.add_option("--config", configPath, "JSON run configuration (replaces the command line)");
  app.require_subcommand(0, 1);

  McArgs mc;
  auto* mcCmd = app.add_subcommand("mc", "Matrix-product Monte Carlo");
  addCommon(mcCmd, mc.common);
  mcCmd->add_option("--eps", mc.eps, "Epsilon values (comma separated)")->delimiter(',')->required();
  mcCmd->add_option("--steps", mc.steps)->capture_default_str();
  mcCmd->add_option("--batches", mc.batches)->capture_default_str();
  mcCmd->add_option("--norm", mc.norm, "rowsum or max")->capture_default_str();

  ChainArgs chain;
  auto* chainCmd = app.add_subcommand("chain", "Projective chain X and its ergodic average");
  addCommon(chainCmd, chain.common);
  chainCmd->add_option("--k", chain.k)->capture_default_str();
  chainCmd->add_option("--steps", chain.steps)->capture_default_str();
  chainCmd->add_option("--burn-in", chain.burnIn)->capture_default_str();
  chainCmd->add_option("--x0", chain.x0)->capture_default_str();
  chainCmd->add_option("--hist-out", chain.histOut, "Histogram CSV");

  OperatorArgs op;
  auto* opCmd = app.add_subcommand("operator", "Invariant tail of the transfer operator");
  addCommon(opCmd, op.common);
  opCmd->add_option("--k", op.k)->capture_default_str();
  opCmd->add_option("--tol", op.tol)->capture_default_str();
  opCmd->add_option("--spacing", op.spacing)->capture_default_str();
  opCmd->add_option("--margin", op.margin)->capture_default_str();
  opCmd->add_option("--max-iter", op.maxIter)->capture_default_str();
  opCmd->add_option("--method", op.method, "direct or iterate")->capture_default_str();

  EdgeArgs edge;
  auto* edgeCmd = app.add_subcommand("edge", "Invariant measure of the edge chain");
  addCommon(edgeCmd, edge.common);
  edgeCmd->add_option("--side", edge.side, "left or right")->capture_default_str();
  edgeCmd->add_option("--spacing", edge.spacing)->capture_default_str();
  edgeCmd->add_option("--x0", edge.x0)->capture_default_str();
  edgeCmd->add_option("--json-out", edge.jsonOut, "Summary JSON");

  DhArgs dh;
  auto* dhCmd = app.add_subcommand("dh", "Glued edge approximation");
  addCommon(dhCmd, dh.common);
  dhCmd->add_option("--k", dh.ks, "k values (comma separated)")->delimiter(',')->capture_default_str();
  dhCmd->require_subcommand(0, 1);
  DhConstantsArgs dhc;
  auto* dhcCmd = dhCmd->add_subcommand("constants", "kappa1, kappa2 and edge intercepts");
  addCommon(dhcCmd, dhc.common);
  dhcCmd->add_option("--json-out", dhc.jsonOut, "Constants JSON");

  WdArgs wd;
  auto* wdCmd = app.add_subcommand("wd", "Weak-disorder formula");
  addCommon(wdCmd, wd.common);
  wdCmd->add_option("--eps", wd.eps);
  wdCmd->add_option("--k", wd.k);

  CompareArgs cmp;
  auto* cmpCmd = app.add_subcommand("compare", "All estimators side by side");
  addCommon(cmpCmd, cmp.common);
  cmpCmd->add_option("--k", cmp.ks, "k values (comma separated)")->delimiter(',')->capture_default_str();
  cmpCmd->add_option("--mc-steps", cmp.mcSteps)->capture_default_str();
  cmpCmd->add_option("--chain-steps", cmp.chainSteps)->capture_default_str();
  cmpCmd->add_option("--batches", cmp.batches)->capture_default_str();

  Fig2Args fig2;
  auto* fig2Cmd = app.add_subcommand("fig2", "Invariant density and glued prolongations at one k");
  addCommon(fig2Cmd, fig2.common);
  fig2Cmd->add_option("--k", fig2.k)->capture_default_str();
  fig2Cmd->add_option("--x-min", fig2.xMin)->capture_default_str();
  fig2Cmd->add_option("--x-max", fig2.xMax)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (!configPath.empty()) {
      if (!app.get_subcommands().empty()) throw lyap::DomainError("config: do not combine --config with a command");
      std::vector<std::string> args = argsFromConfig(configPath);
      std::reverse(args.begin(), args.end());
      app.parse(args);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationError;
  } catch (const lyap::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cerr << app.help();
    return kValidationError;
  }
  CLI::App* sub = subs.front();
  std::string command = sub->get_name();
  std::uint64_t seed = 0;
  const Common* common = nullptr;

  try {
    std::vector<std::string> written;
    if (sub == mcCmd) {
      common = &mc.common;
      written = runMc(mc, std::cout);
    } else if (sub == chainCmd) {
      common = &chain.common;
      written = runChain(chain, std::cout);
    } else if (sub == opCmd) {
      common = &op.common;
      written = runOperator(op, std::cout);
    } else if (sub == edgeCmd) {
      common = &edge.common;
      written = runEdge(edge, std::cout);
    } else if (sub == dhCmd && dhcCmd->parsed()) {
      sub = dhcCmd;
      command = "dh constants";
      common = &dhc.common;
      written = runDhConstants(dhc, std::cout);
    } else if (sub == dhCmd) {
      common = &dh.common;
      written = runDh(dh, std::cout);
    } else if (sub == wdCmd) {
      common = &wd.common;
      written = runWd(wd, std::cout);
    } else if (sub == cmpCmd) {
      common = &cmp.common;
      written = runCompare(cmp, std::cout);
    } else {
      common = &fig2.common;
      written = runFig2(fig2, std::cout);
    }
    seed = common->seed;

    std::string manifestPath = common->manifest;
    if (manifestPath.empty()) {
      manifestPath = common->out.empty() ? "lyap-" + sub->get_name() + ".manifest.json" : common->out + ".manifest.json";
    }
    std::ofstream mf(manifestPath);
    if (!mf) throw lyap::DomainError("manifest not writable: " + manifestPath);
    mf << makeManifest(command, seed, effectiveConfig(sub), written).dump(2) << '\n';
  } catch (const lyap::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
