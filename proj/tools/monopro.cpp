// monopro: batch experiment harness for operator-valued monotonic
// probability over M_d(C).  Subcommands: clt, theorems, transforms,
// mfs-check, cfree, fock-moments.  Exit codes: 0 pass, 1 theorem failure,
// 2 config failure.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "monopro/json_io.hpp"
#include "monopro/runners.hpp"

namespace {

using monopro::Json;

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw monopro::ConfigError("empty integer list");
  return out;
}

// --config FILE provides defaults; explicit flags override them.
Json preload_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config")
      return monopro::load_json_file(argv[i + 1]);
  return Json::object();
}

template <typename T>
void from_cfg(const Json& cfg, const char* key, T& target) {
  if (cfg.contains(key)) target = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-valued monotonic probability workbench"};
  app.require_subcommand(1);

  Json cfg;
  try {
    cfg = preload_config(argc, argv);
  } catch (const monopro::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return monopro::kExitConfigFailure;
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");

  monopro::CltConfig clt;
  std::string n_list_str;
  auto* clt_cmd = app.add_subcommand("clt", "central limit theorem tables");
  from_cfg(cfg, "m", clt.m);
  from_cfg(cfg, "d", clt.d);
  from_cfg(cfg, "eta", clt.eta);
  from_cfg(cfg, "b", clt.b);
  from_cfg(cfg, "seed", clt.seed);
  from_cfg(cfg, "out", clt.out_dir);
  if (cfg.contains("N_list")) clt.n_list = cfg.at("N_list").get<std::vector<int>>();
  clt_cmd->add_option("--m", clt.m, "moment order");
  clt_cmd->add_option("--d", clt.d, "coefficient algebra dimension");
  clt_cmd->add_option("--N-list", n_list_str, "comma-separated N values");
  clt_cmd->add_option("--eta", clt.eta, "covariance: 'identity' or JSON path");
  clt_cmd->add_option("--b", clt.b, "coefficients: 'identity' or JSON path");
  clt_cmd->add_option("--seed", clt.seed, "rng seed");
  clt_cmd->add_option("--out", clt.out_dir, "output directory");

  monopro::TheoremsConfig thm;
  auto* thm_cmd = app.add_subcommand("theorems", "full theorem suite");
  from_cfg(cfg, "d", thm.d);
  from_cfg(cfg, "K", thm.K);
  from_cfg(cfg, "L", thm.L);
  from_cfg(cfg, "M", thm.M);
  from_cfg(cfg, "N", thm.N);
  from_cfg(cfg, "trials", thm.trials);
  from_cfg(cfg, "seed", thm.seed);
  from_cfg(cfg, "only", thm.only);
  from_cfg(cfg, "eta", thm.eta);
  from_cfg(cfg, "out", thm.out_dir);
  thm_cmd->add_option("--d", thm.d, "coefficient algebra dimension");
  thm_cmd->add_option("--K", thm.K, "number of generators");
  thm_cmd->add_option("--L", thm.L, "depth budget for independence checks");
  thm_cmd->add_option("--M", thm.M, "scalar series order");
  thm_cmd->add_option("--N", thm.N, "multilinear series order");
  thm_cmd->add_option("--trials", thm.trials, "number of random trials");
  thm_cmd->add_option("--seed", thm.seed, "rng seed");
  thm_cmd->add_option("--only", thm.only, "run a single theorem tag");
  thm_cmd->add_option("--eta", thm.eta, "covariance JSON path (validated)");
  thm_cmd->add_option("--out", thm.out_dir, "output directory");

  monopro::TransformsConfig tr;
  auto* tr_cmd = app.add_subcommand("transforms", "per-degree residual table");
  from_cfg(cfg, "d", tr.d);
  from_cfg(cfg, "M", tr.M);
  from_cfg(cfg, "N", tr.N);
  from_cfg(cfg, "trials", tr.trials);
  from_cfg(cfg, "seed", tr.seed);
  from_cfg(cfg, "out", tr.out_dir);
  tr_cmd->add_option("--d", tr.d, "coefficient algebra dimension");
  tr_cmd->add_option("--M", tr.M, "scalar series order");
  tr_cmd->add_option("--N", tr.N, "multilinear series order");
  tr_cmd->add_option("--trials", tr.trials, "number of instances");
  tr_cmd->add_option("--seed", tr.seed, "rng seed");
  tr_cmd->add_option("--out", tr.out_dir, "output directory");

  monopro::MfsCheckConfig mfs;
  auto* mfs_cmd = app.add_subcommand("mfs-check", "Mul[[B]] law suite");
  from_cfg(cfg, "d", mfs.d);
  from_cfg(cfg, "order", mfs.order);
  from_cfg(cfg, "trials", mfs.trials);
  from_cfg(cfg, "seed", mfs.seed);
  from_cfg(cfg, "out", mfs.out_dir);
  mfs_cmd->add_option("--d", mfs.d, "coefficient algebra dimension");
  mfs_cmd->add_option("--order", mfs.order, "truncation order");
  mfs_cmd->add_option("--trials", mfs.trials, "trials per law");
  mfs_cmd->add_option("--seed", mfs.seed, "rng seed");
  mfs_cmd->add_option("--out", mfs.out_dir, "output directory");

  monopro::CfreeConfig cf;
  auto* cf_cmd = app.add_subcommand("cfree", "section-6 product checks");
  from_cfg(cfg, "spec1", cf.spec1);
  from_cfg(cfg, "spec2", cf.spec2);
  from_cfg(cfg, "check", cf.check);
  from_cfg(cfg, "d", cf.d);
  from_cfg(cfg, "trials", cf.trials);
  from_cfg(cfg, "maxlen", cf.maxlen);
  from_cfg(cfg, "seed", cf.seed);
  from_cfg(cfg, "out", cf.out_dir);
  cf_cmd->add_option("--spec1", cf.spec1, "MomentSpec JSON, 'fock', or fock:<path>");
  cf_cmd->add_option("--spec2", cf.spec2, "MomentSpec JSON, 'fock', or fock:<path>");
  cf_cmd->add_option("--check", cf.check, "equivalence|positivity|independence");
  cf_cmd->add_option("--d", cf.d, "dimension for built-in fock specs");
  cf_cmd->add_option("--trials", cf.trials, "number of trials");
  cf_cmd->add_option("--maxlen", cf.maxlen, "maximum word length");
  cf_cmd->add_option("--seed", cf.seed, "rng seed");
  cf_cmd->add_option("--out", cf.out_dir, "output directory");

  monopro::FockMomentsConfig fm;
  auto* fm_cmd = app.add_subcommand("fock-moments", "vacuum moment dump");
  from_cfg(cfg, "spec", fm.spec_path);
  from_cfg(cfg, "maxlen", fm.maxlen);
  from_cfg(cfg, "out", fm.out_dir);
  fm_cmd->add_option("--spec", fm.spec_path, "ModuleSpec JSON path");
  fm_cmd->add_option("--maxlen", fm.maxlen, "maximum word length");
  fm_cmd->add_option("--out", fm.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (clt_cmd->parsed()) {
      if (!n_list_str.empty()) clt.n_list = parse_int_list(n_list_str);
      return monopro::run_clt(clt, std::cout);
    }
    if (thm_cmd->parsed()) return monopro::run_theorems(thm, std::cout);
    if (tr_cmd->parsed()) return monopro::run_transforms(tr, std::cout);
    if (mfs_cmd->parsed()) return monopro::run_mfs_check(mfs, std::cout);
    if (cf_cmd->parsed()) return monopro::run_cfree(cf, std::cout);
    if (fm_cmd->parsed()) return monopro::run_fock_moments(fm, std::cout);
  } catch (const monopro::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return monopro::kExitConfigFailure;
  } catch (const monopro::NonPositiveInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return monopro::kExitConfigFailure;
  } catch (const monopro::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return monopro::kExitConfigFailure;
  }
  return monopro::kExitConfigFailure;
}
