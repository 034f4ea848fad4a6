#include "monopro/runners.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "monopro/json_io.hpp"
#include "monopro/ncpart.hpp"

namespace monopro {

namespace fs = std::filesystem;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_csv(const std::string& out_dir, const std::string& name,
                       const std::string& schema, const std::string& header) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / name);
  if (!out) throw ConfigError("cannot write to " + out_dir);
  out << "# " << schema << "\n" << header << "\n";
  return out;
}

void write_json_report(const std::string& out_dir, const std::string& name,
                       const Json& j) {
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / name);
  out << j.dump(2) << "\n";
}

std::string mat_entries_csv(const Mat& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      s += ',' + fmt_double(m(i, j).real());
      s += ',' + fmt_double(m(i, j).imag());
    }
  return s;
}

std::string mat_header_csv(const std::string& prefix, int d) {
  std::string s;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      s += ',' + prefix + std::to_string(i) + std::to_string(j) + "_re";
      s += ',' + prefix + std::to_string(i) + std::to_string(j) + "_im";
    }
  return s;
}

}  // namespace

//==========================================================================
// Instance builders
//==========================================================================

TransformInstance make_transform_instance(int d, int L, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CPMap> etas{CPMap::random(d, 2, rng), CPMap::random(d, 2, rng)};
  TransformInstance inst;
  inst.module = std::make_shared<const ModuleSpec>(
      d, 2, L, FockMode::kWeaklyMonotone, std::move(etas));
  auto element = [&](int index) {
    FockOp word = FockOp::lmul(random_selfadjoint(d, rng)) *
                  FockOp::gauss(GenVec::random(index, d, rng)) *
                  FockOp::lmul(random_selfadjoint(d, rng));
    return FockOp::lmul(random_selfadjoint(d, rng)) + word;
  };
  inst.x_op = element(1);
  inst.y_op = element(2);
  inst.u_op = FockOp::identity() + inst.x_op;
  inst.v_op = element(2);
  inst.vu_op = inst.v_op * inst.u_op;
  inst.uv_op = inst.u_op * inst.v_op;
  return inst;
}

MomentSpec fock_moment_spec(int d, int max_order, std::uint64_t seed) {
  Rng rng(seed);
  auto module = std::make_shared<const ModuleSpec>(
      d, 1, max_order, FockMode::kWeaklyMonotone,
      std::vector<CPMap>{CPMap::random(d, 2, rng)});
  FockOp op = FockOp::lmul(random_selfadjoint(d, rng)) +
              FockOp::gauss(GenVec::zeta(1, d));
  return MomentSpec::from_handle(FockElement(module, op), max_order);
}

//==========================================================================
// clt
//==========================================================================

int run_clt(const CltConfig& cfg, std::ostream& log) {
  CPMap eta;
  std::vector<Mat> b;
  try {
    if (cfg.m < 1) throw ConfigError("m must be positive");
    eta = cfg.eta == "identity" ? CPMap::identity(cfg.d)
                                : cpmap_from_json(load_json_file(cfg.eta));
    if (eta.dim() != cfg.d) throw ConfigError("eta dimension != d");
    if (cfg.b == "identity") {
      b.assign(cfg.m - 1, Mat::Identity(cfg.d, cfg.d));
    } else {
      for (const auto& jm : load_json_file(cfg.b)) b.push_back(mat_from_json(jm));
      if (static_cast<int>(b.size()) != cfg.m - 1)
        throw ConfigError("need m-1 coefficient matrices");
    }
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }

  Mat limit = clt_limit_moment(cfg.m, b, eta);
  std::ofstream csv =
      open_csv(cfg.out_dir, "clt.csv", "monopro clt csv v1",
               "N" + mat_header_csv("m", cfg.d) + mat_header_csv("lim", cfg.d) +
                   ",abs_residual");

  std::vector<int> ns = cfg.n_list;
  std::sort(ns.begin(), ns.end());
  std::vector<double> residuals;
  for (int n : ns) {
    Mat fin = finite_n_moment(cfg.m, n, b, eta);
    const double res = max_abs(fin - limit);
    residuals.push_back(res);
    csv << n << mat_entries_csv(fin) << mat_entries_csv(limit) << ','
        << fmt_double(res) << "\n";
  }

  bool pass = true;
  // residuals must be monotone decreasing past N = 4 (flat only when zero)
  for (std::size_t t = 0; t + 1 < ns.size(); ++t) {
    if (ns[t] < 4) continue;
    const bool strictly_down = residuals[t + 1] < residuals[t];
    const bool both_zero = residuals[t] <= 1e-12 && residuals[t + 1] <= 1e-12;
    if (!(strictly_down || both_zero)) pass = false;
  }
  if (cfg.d == 1 && cfg.eta == "identity" && cfg.b == "identity") {
    const std::map<int, double> expected{{2, 1.0}, {4, 1.5}, {6, 2.5}};
    auto it = expected.find(cfg.m);
    if (it != expected.end() &&
        std::abs(limit(0, 0).real() - it->second) > kResidualTol)
      pass = false;
  }
  log << "clt: m=" << cfg.m << " d=" << cfg.d << " limit[0,0]="
      << fmt_double(limit(0, 0).real()) << (pass ? " PASS" : " FAIL") << "\n";
  return pass ? kExitPass : kExitTheoremFailure;
}

//==========================================================================
// theorems
//==========================================================================

namespace {

struct DualOrder {
  double worst_u_after_v = 0.0;
  double worst_v_after_u = 0.0;
  void absorb(const CompositionReport& rep) {
    worst_u_after_v = std::max(worst_u_after_v, rep.u_after_v);
    worst_v_after_u = std::max(worst_v_after_u, rep.v_after_u);
  }
  // Exactly one composition order must hold.
  bool resolved(double tol) const {
    return (worst_u_after_v <= tol) != (worst_v_after_u <= tol);
  }
  std::string winner(double tol) const {
    if (worst_u_after_v <= tol && worst_v_after_u > tol) return "u-after-v";
    if (worst_v_after_u <= tol && worst_u_after_v > tol) return "v-after-u";
    return "unresolved";
  }
};

}  // namespace

int run_theorems(const TheoremsConfig& cfg, std::ostream& log) {
  const double tol = kResidualTol;
  std::vector<TheoremRow> rows;
  auto note = [&rows](const std::string& tag, int trial, double residual,
                      double bar) {
    rows.push_back(TheoremRow{tag, trial, residual, residual <= bar});
  };
  auto want = [&cfg](const std::string& tag) {
    return cfg.only.empty() || cfg.only == tag;
  };

  std::vector<CPMap> file_etas;
  try {
    if (!cfg.eta.empty()) {
      // validates complete positivity; a tampered Choi matrix is rejected
      file_etas.assign(cfg.K, cpmap_from_json(load_json_file(cfg.eta)));
      if (file_etas.front().dim() != cfg.d)
        throw ConfigError("eta dimension != d");
    }
    if (cfg.d < 1 || cfg.K < 1 || cfg.M < 1 || cfg.N < 1)
      throw ConfigError("bad dimensions");
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }

  DualOrder kappa_orders, rho_orders, kmfs_orders, rmfs_orders;
  const int transform_trials = std::min(cfg.trials, 25);
  const bool any_transform =
      want("h-composition") || want("H-mfs-composition") ||
      want("kappa-composition") || want("rho-composition") ||
      want("K-mfs-composition") || want("r-mfs-composition");

  if (any_transform) {
    const int depth = 2 * std::max(cfg.M, cfg.N) + 2;
    for (int trial = 0; trial < transform_trials; ++trial) {
      TransformInstance inst =
          make_transform_instance(cfg.d, depth, mix_seed(cfg.seed, trial));
      Rng rng(cfg.seed, 1000 + trial);
      const Mat z0 = random_selfadjoint(cfg.d, rng);
      FockElement x(inst.module, inst.x_op), y(inst.module, inst.y_op);
      FockElement xy(inst.module, inst.x_op + inst.y_op);
      FockElement u(inst.module, inst.u_op), v(inst.module, inst.v_op);
      FockElement vu(inst.module, inst.vu_op), uv(inst.module, inst.uv_op);

      if (want("h-composition"))
        note("h-composition", trial, verify_h_composition(x, y, xy, z0, cfg.M),
             tol);
      if (want("H-mfs-composition"))
        note("H-mfs-composition", trial,
             verify_mfs_h_composition(x, y, xy, cfg.N), tol);
      if (want("kappa-composition")) {
        CompositionReport rep = verify_kappa_composition(u, v, vu, z0, cfg.M);
        kappa_orders.absorb(rep);
        note("kappa-composition-u-after-v", trial, rep.u_after_v, tol);
        note("kappa-composition-v-after-u", trial, rep.v_after_u, tol);
      }
      if (want("rho-composition")) {
        CompositionReport rep = verify_rho_composition(u, v, uv, z0, cfg.M);
        rho_orders.absorb(rep);
        note("rho-composition-u-after-v", trial, rep.u_after_v, tol);
        note("rho-composition-v-after-u", trial, rep.v_after_u, tol);
      }
      if (want("K-mfs-composition")) {
        CompositionReport rep = verify_mfs_kappa_composition(u, v, vu, cfg.N);
        kmfs_orders.absorb(rep);
        note("K-mfs-composition-u-after-v", trial, rep.u_after_v, tol);
        note("K-mfs-composition-v-after-u", trial, rep.v_after_u, tol);
      }
      if (want("r-mfs-composition")) {
        CompositionReport rep = verify_mfs_r_composition(u, v, uv, cfg.N);
        rmfs_orders.absorb(rep);
        note("r-mfs-composition-u-after-v", trial, rep.u_after_v, tol);
        note("r-mfs-composition-v-after-u", trial, rep.v_after_u, tol);
      }
    }
  }

  if (want("fock-independence-weak")) {
    Rng rng(cfg.seed, 77);
    std::vector<CPMap> etas = file_etas;
    for (int i = static_cast<int>(etas.size()); i < cfg.K; ++i)
      etas.push_back(CPMap::random(cfg.d, 2, rng));
    auto module = std::make_shared<const ModuleSpec>(
        cfg.d, cfg.K, cfg.L, FockMode::kWeaklyMonotone, etas);
    IndependenceReport rep =
        check_monotone_independence(module, cfg.trials, cfg.seed);
    note("fock-independence-weak", 0, rep.max_violation(), tol);
  }
  if (want("fock-independence-monotone")) {
    Rng rng(cfg.seed, 78);
    std::vector<CPMap> etas = file_etas;
    for (int i = static_cast<int>(etas.size()); i < cfg.K; ++i)
      etas.push_back(CPMap::random(cfg.d, 2, rng));
    auto module = std::make_shared<const ModuleSpec>(
        cfg.d, cfg.K, cfg.L, FockMode::kMonotone, etas);
    IndependenceReport rep =
        check_monotone_independence(module, cfg.trials, cfg.seed);
    note("fock-independence-monotone", 0, rep.max_violation(), tol);
  }

  if (want("monotone-cfree-equivalence")) {
    const MomentSpec phi1 = fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 5001));
    const MomentSpec phi2 = fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 5002));
    note("monotone-cfree-equivalence", 0,
         verify_monotone_equals_cfree(phi1, phi2, cfg.trials, 6, cfg.seed), tol);
  }
  if (want("monotone-independence-abstract")) {
    const MomentSpec phi1 = fock_moment_spec(cfg.d, 8, mix_seed(cfg.seed, 5003));
    const MomentSpec phi2 = fock_moment_spec(cfg.d, 8, mix_seed(cfg.seed, 5004));
    note("monotone-independence-abstract", 0,
         monotone_independence_residual(phi1, phi2, cfg.trials, 8, cfg.seed),
         tol);
  }

  if (want("monotone-positivity") || want("free-positivity") ||
      want("cfree-positivity") || want("mixed-gram")) {
    const int instances = std::min(cfg.trials, 20);
    double worst_mono = 0.0, worst_free = 0.0, worst_cfree = 0.0,
           worst_mixed = 0.0;
    for (int inst = 0; inst < instances; ++inst) {
      const MomentSpec phi1 =
          fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 6000 + 4 * inst));
      const MomentSpec phi2 =
          fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 6001 + 4 * inst));
      const MomentSpec psi1 =
          fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 6002 + 4 * inst));
      const MomentSpec psi2 =
          fock_moment_spec(cfg.d, 6, mix_seed(cfg.seed, 6003 + 4 * inst));
      Rng rng(cfg.seed, 9000 + inst);
      std::vector<Word> words;
      words.push_back(Word::scalar(Mat::Identity(cfg.d, cfg.d)));
      for (int i = 1; i < 8; ++i) words.push_back(random_word(cfg.d, 3, 2, rng));
      auto mono = [&](const Word& w) { return monotone_eval(w, phi1, phi2); };
      auto fre = [&](const Word& w) { return free_eval(w, psi1, psi2); };
      auto cfr = [&](const Word& w) {
        return cfree_eval(w, phi1, phi2, psi1, psi2);
      };
      worst_mono = std::max(worst_mono,
                            -min_eigenvalue(gram_matrix(mono, words, cfg.d)));
      worst_free =
          std::max(worst_free, -min_eigenvalue(gram_matrix(fre, words, cfg.d)));
      worst_cfree =
          std::max(worst_cfree, -min_eigenvalue(gram_matrix(cfr, words, cfg.d)));
      std::vector<Word> a_words, b_words;
      for (int i = 0; i < 3; ++i) {
        a_words.push_back(random_word(cfg.d, 2, 1, rng));
        Word bw = random_word(cfg.d, 2, 1, rng);
        for (Letter& l : bw.letters) l.tag = 2;
        b_words.push_back(bw);
      }
      worst_mixed = std::max(
          worst_mixed,
          -min_eigenvalue(mixed_gram(phi1, phi2, a_words, b_words)));
    }
    if (want("monotone-positivity"))
      note("monotone-positivity", 0, std::max(0.0, worst_mono), kPsdTol);
    if (want("free-positivity"))
      note("free-positivity", 0, std::max(0.0, worst_free), kPsdTol);
    if (want("cfree-positivity"))
      note("cfree-positivity", 0, std::max(0.0, worst_cfree), kPsdTol);
    if (want("mixed-gram"))
      note("mixed-gram", 0, std::max(0.0, worst_mixed), kPsdTol);
  }

  // Aggregate, with the exactly-one-order rule for the dual composition
  // checks.
  bool all_pass = true;
  std::map<std::string, bool> order_checked;
  for (const TheoremRow& row : rows) {
    if (row.tag.find("-u-after-v") != std::string::npos ||
        row.tag.find("-v-after-u") != std::string::npos)
      continue;  // handled below
    all_pass = all_pass && row.pass;
  }
  Json discrepancy = Json::object();
  auto settle = [&](const std::string& name, const DualOrder& dual,
                    bool wanted) {
    if (!wanted) return;
    discrepancy[name] = {{"u_after_v_residual", dual.worst_u_after_v},
                         {"v_after_u_residual", dual.worst_v_after_u},
                         {"winner", dual.winner(tol)}};
    all_pass = all_pass && dual.resolved(tol);
  };
  settle("kappa", kappa_orders, want("kappa-composition"));
  settle("rho", rho_orders, want("rho-composition"));
  settle("K-mfs", kmfs_orders, want("K-mfs-composition"));
  settle("r-mfs", rmfs_orders, want("r-mfs-composition"));

  std::ofstream csv = open_csv(cfg.out_dir, "theorems.csv",
                               "monopro theorems csv v1",
                               "theorem,trial,residual,pass");
  for (const TheoremRow& row : rows)
    csv << row.tag << ',' << row.trial << ',' << fmt_double(row.residual) << ','
        << (row.pass ? 1 : 0) << "\n";
  write_json_report(cfg.out_dir, "theorems_report.json",
                    Json{{"pass", all_pass},
                         {"composition_orders", discrepancy},
                         {"rows", rows.size()}});

  for (const TheoremRow& row : rows)
    if (!row.pass && row.tag.find("-after-") == std::string::npos)
      log << "FAIL " << row.tag << " residual " << fmt_double(row.residual)
          << "\n";
  log << "theorems: " << rows.size() << " rows, "
      << (all_pass ? "PASS" : "FAIL") << "\n";
  if (!discrepancy.empty()) log << "orders: " << discrepancy.dump() << "\n";
  return all_pass ? kExitPass : kExitTheoremFailure;
}

//==========================================================================
// transforms (per-degree residual table)
//==========================================================================

namespace {

void emit_ts_rows(std::ofstream& csv, const std::string& tag, const TSeries& a,
                  const TSeries& b) {
  for (int n = 0; n <= std::min(a.order(), b.order()); ++n)
    csv << tag << ',' << n << ',' << fmt_double(max_abs(a.c[n] - b.c[n]))
        << "\n";
}

void emit_series_rows(std::ofstream& csv, const std::string& tag,
                      const Series& a, const Series& b) {
  for (int n = 0; n <= std::min(a.order(), b.order()); ++n)
    csv << tag << ',' << n << ','
        << fmt_double(max_abs(a.term(n) - b.term(n))) << "\n";
}

}  // namespace

int run_transforms(const TransformsConfig& cfg, std::ostream& log) {
  try {
    if (cfg.d < 1 || cfg.M < 1 || cfg.N < 1 || cfg.trials < 1)
      throw ConfigError("bad transforms config");
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }
  std::ofstream csv = open_csv(cfg.out_dir, "transforms.csv",
                               "monopro transforms csv v1",
                               "theorem,degree,residual");
  const double tol = kResidualTol;
  bool pass = true;
  DualOrder kappa_orders, rho_orders, kmfs_orders, rmfs_orders;
  double worst_single = 0.0;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    const int depth = 2 * std::max(cfg.M, cfg.N) + 2;
    TransformInstance inst =
        make_transform_instance(cfg.d, depth, mix_seed(cfg.seed, 40 + trial));
    Rng rng(cfg.seed, 90 + trial);
    const Mat z0 = random_selfadjoint(cfg.d, rng);
    FockElement x(inst.module, inst.x_op), y(inst.module, inst.y_op);
    FockElement xy(inst.module, inst.x_op + inst.y_op);
    FockElement u(inst.module, inst.u_op), v(inst.module, inst.v_op);
    FockElement vu(inst.module, inst.vu_op), uv(inst.module, inst.uv_op);

    TSeries h_lhs = h_series(xy, z0, cfg.M);
    TSeries h_rhs = transform_curve(x, h_series(y, z0, cfg.M), WordShape::kH,
                                    cfg.M);
    emit_ts_rows(csv, "h-composition", h_lhs, h_rhs);
    worst_single = std::max(worst_single, ts_residual(h_lhs, h_rhs));

    Series hm_lhs = extract_H(xy, cfg.N);
    Series hm_rhs = series_compose(extract_H(x, cfg.N), extract_H(y, cfg.N));
    emit_series_rows(csv, "H-mfs-composition", hm_lhs, hm_rhs);
    worst_single = std::max(worst_single, hm_lhs.residual(hm_rhs));

    TSeries k_lhs = theta_kappa_series(vu, z0, cfg.M).second;
    TSeries k_uv = kappa_curve(u, theta_kappa_series(v, z0, cfg.M).second, cfg.M);
    TSeries k_vu = kappa_curve(v, theta_kappa_series(u, z0, cfg.M).second, cfg.M);
    emit_ts_rows(csv, "kappa-composition-u-after-v", k_lhs, k_uv);
    emit_ts_rows(csv, "kappa-composition-v-after-u", k_lhs, k_vu);
    kappa_orders.absorb(CompositionReport{ts_residual(k_lhs, k_uv),
                                          ts_residual(k_lhs, k_vu)});

    TSeries r_lhs = rho_series(uv, z0, cfg.M);
    TSeries r_uv = rho_curve(u, rho_series(v, z0, cfg.M), cfg.M);
    TSeries r_vu = rho_curve(v, rho_series(u, z0, cfg.M), cfg.M);
    emit_ts_rows(csv, "rho-composition-u-after-v", r_lhs, r_uv);
    emit_ts_rows(csv, "rho-composition-v-after-u", r_lhs, r_vu);
    rho_orders.absorb(
        CompositionReport{ts_residual(r_lhs, r_uv), ts_residual(r_lhs, r_vu)});

    Series km_lhs = kappa_r_mfs(vu, cfg.N).first;
    Series km_u = kappa_r_mfs(u, cfg.N).first;
    Series km_v = kappa_r_mfs(v, cfg.N).first;
    Series km_uv = series_compose(km_u, km_v);
    Series km_vu = series_compose(km_v, km_u);
    emit_series_rows(csv, "K-mfs-composition-u-after-v", km_lhs, km_uv);
    emit_series_rows(csv, "K-mfs-composition-v-after-u", km_lhs, km_vu);
    kmfs_orders.absorb(CompositionReport{km_lhs.residual(km_uv),
                                         km_lhs.residual(km_vu)});

    Series rm_lhs = kappa_r_mfs(uv, cfg.N).second;
    Series rm_u = kappa_r_mfs(u, cfg.N).second;
    Series rm_v = kappa_r_mfs(v, cfg.N).second;
    Series rm_uv = series_compose(rm_u, rm_v);
    Series rm_vu = series_compose(rm_v, rm_u);
    emit_series_rows(csv, "r-mfs-composition-u-after-v", rm_lhs, rm_uv);
    emit_series_rows(csv, "r-mfs-composition-v-after-u", rm_lhs, rm_vu);
    rmfs_orders.absorb(CompositionReport{rm_lhs.residual(rm_uv),
                                         rm_lhs.residual(rm_vu)});
  }

  pass = worst_single <= tol && kappa_orders.resolved(tol) &&
         rho_orders.resolved(tol) && kmfs_orders.resolved(tol) &&
         rmfs_orders.resolved(tol);
  write_json_report(
      cfg.out_dir, "transforms_report.json",
      Json{{"pass", pass},
           {"kappa_winner", kappa_orders.winner(tol)},
           {"rho_winner", rho_orders.winner(tol)},
           {"K_mfs_winner", kmfs_orders.winner(tol)},
           {"r_mfs_winner", rmfs_orders.winner(tol)}});
  log << "transforms: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitTheoremFailure;
}

//==========================================================================
// mfs law suite
//==========================================================================

const std::vector<std::string>& mfs_law_tags() {
  static const std::vector<std::string> tags{
      "mul-identity",     "mul-assoc",      "mul-inverse",
      "compose-identity", "compose-assoc",  "distributive-add",
      "distributive-mul", "comp-inverse",   "geometric"};
  return tags;
}

double mfs_law_residual(const std::string& law, int d, int order, Rng& rng) {
  const Series one = Series::one(d, order);
  const Series id = Series::identity(d, order);
  if (law == "mul-identity") {
    Series f = Series::random(d, order, rng);
    return std::max(series_mul(one, f).residual(f),
                    series_mul(f, one).residual(f));
  }
  if (law == "mul-assoc") {
    Series e = Series::random(d, order, rng);
    Series f = Series::random(d, order, rng);
    Series g = Series::random(d, order, rng);
    return series_mul(series_mul(e, f), g)
        .residual(series_mul(e, series_mul(f, g)));
  }
  if (law == "mul-inverse") {
    Series f = Series::random(d, order, rng);
    Series g = series_mul_inverse(f);
    return std::max(series_mul(f, g).residual(one),
                    series_mul(g, f).residual(one));
  }
  if (law == "compose-identity") {
    Series f = Series::random(d, order, rng);
    Series g = Series::random(d, order, rng, /*zero_constant=*/true);
    return std::max(series_compose(f, id).residual(f),
                    series_compose(id, g).residual(g));
  }
  if (law == "compose-assoc") {
    Series e = Series::random(d, order, rng, true);
    Series f = Series::random(d, order, rng, true);
    Series g = Series::random(d, order, rng, true);
    return series_compose(series_compose(e, f), g)
        .residual(series_compose(e, series_compose(f, g)));
  }
  if (law == "distributive-add") {
    Series e = Series::random(d, order, rng);
    Series f = Series::random(d, order, rng);
    Series g = Series::random(d, order, rng, true);
    return series_compose(series_add(e, f), g)
        .residual(series_add(series_compose(e, g), series_compose(f, g)));
  }
  if (law == "distributive-mul") {
    Series e = Series::random(d, order, rng);
    Series f = Series::random(d, order, rng);
    Series g = Series::random(d, order, rng, true);
    return series_compose(series_mul(e, f), g)
        .residual(series_mul(series_compose(e, g), series_compose(f, g)));
  }
  if (law == "comp-inverse") {
    Series f = Series::random(d, order, rng, true);
    Series g = series_comp_inverse(f);
    return std::max(series_compose(f, g).residual(id),
                    series_compose(g, f).residual(id));
  }
  if (law == "geometric") {
    Series f = Series::random(d, order, rng, true);
    Series lhs = series_mul_inverse(series_add(one, -f));
    Series rhs = one;
    Series power = one;
    for (int k = 1; k <= order; ++k) {
      power = series_mul(power, f);
      rhs = series_add(rhs, power);
    }
    return lhs.residual(rhs);
  }
  throw ConfigError("unknown law " + law);
}

int run_mfs_check(const MfsCheckConfig& cfg, std::ostream& log) {
  try {
    if (cfg.d < 1 || cfg.order < 1 || cfg.trials < 1)
      throw ConfigError("bad mfs config");
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }
  std::ofstream csv = open_csv(cfg.out_dir, "mfs.csv", "monopro mfs csv v1",
                               "law,trial,residual,pass");
  bool all_pass = true;
  for (const std::string& law : mfs_law_tags()) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng(cfg.seed, mix_seed(std::hash<std::string>{}(law), t));
      const double r = mfs_law_residual(law, cfg.d, cfg.order, rng);
      const bool pass = r <= kEqTol;
      all_pass = all_pass && pass;
      csv << law << ',' << t << ',' << fmt_double(r) << ',' << (pass ? 1 : 0)
          << "\n";
    }
  }
  log << "mfs-check: " << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? kExitPass : kExitTheoremFailure;
}

//==========================================================================
// cfree
//==========================================================================

namespace {

MomentSpec load_spec_arg(const std::string& arg, int d, int order,
                         std::uint64_t seed) {
  if (arg == "fock") return fock_moment_spec(d, order, seed);
  if (arg.rfind("fock:", 0) == 0) {
    ModuleSpec ms = module_spec_from_json(load_json_file(arg.substr(5)));
    auto module = std::make_shared<const ModuleSpec>(ms);
    if (module->L < order)
      throw ConfigError("module depth budget below required order");
    return MomentSpec::from_handle(
        FockElement(module, FockOp::gauss(GenVec::zeta(1, module->d))), order);
  }
  return moment_spec_from_json(load_json_file(arg));
}

}  // namespace

int run_cfree(const CfreeConfig& cfg, std::ostream& log) {
  MomentSpec phi1(1, 1), phi2(1, 1);
  try {
    const int order = std::max(6, 2 * cfg.maxlen);
    phi1 = load_spec_arg(cfg.spec1, cfg.d, order, mix_seed(cfg.seed, 31));
    phi2 = load_spec_arg(cfg.spec2, cfg.d, order, mix_seed(cfg.seed, 32));
    if (phi1.dim() != phi2.dim()) throw ConfigError("spec dimensions differ");
    if (cfg.check != "equivalence" && cfg.check != "positivity" &&
        cfg.check != "independence")
      throw ConfigError("unknown check " + cfg.check);
    if (cfg.maxlen > phi1.max_order() || cfg.maxlen > phi2.max_order())
      throw ConfigError("maxlen beyond spec order");
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }
  const int d = phi1.dim();
  std::ofstream csv = open_csv(cfg.out_dir, "cfree.csv", "monopro cfree csv v1",
                               "check,trial,residual");
  bool pass = true;
  const MomentSpec dlt = MomentSpec::delta(d, phi1.max_order());
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, t);
    double residual = 0.0;
    if (cfg.check == "equivalence") {
      Word w = random_word(d, cfg.maxlen, 2, rng);
      residual = max_abs(monotone_eval(w, phi1, phi2) -
                         cfree_eval(w, phi1, phi2, dlt, phi2));
      pass = pass && residual <= kResidualTol;
    } else if (cfg.check == "positivity") {
      std::vector<Word> words;
      words.push_back(Word::scalar(Mat::Identity(d, d)));
      for (int i = 1; i < 6; ++i)
        words.push_back(random_word(d, cfg.maxlen / 2, 2, rng));
      auto mono = [&](const Word& w) { return monotone_eval(w, phi1, phi2); };
      residual = std::max(0.0, -min_eigenvalue(gram_matrix(mono, words, d)));
      pass = pass && residual <= kPsdTol;
    } else {
      residual = monotone_independence_residual(phi1, phi2, 1,
                                                cfg.maxlen, mix_seed(cfg.seed, t));
      pass = pass && residual <= kResidualTol;
    }
    csv << cfg.check << ',' << t << ',' << fmt_double(residual) << "\n";
  }
  log << "cfree " << cfg.check << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitPass : kExitTheoremFailure;
}

//==========================================================================
// fock moment dump
//==========================================================================

int run_fock_moments(const FockMomentsConfig& cfg, std::ostream& log) {
  ModulePtr module;
  try {
    if (cfg.spec_path.empty()) {
      module = std::make_shared<const ModuleSpec>(
          ModuleSpec::identity_etas(2, 2, 4, FockMode::kWeaklyMonotone));
    } else {
      module = std::make_shared<const ModuleSpec>(
          module_spec_from_json(load_json_file(cfg.spec_path)));
    }
    if (cfg.maxlen > module->L)
      throw ConfigError("maxlen exceeds the module depth budget");
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigFailure;
  }
  const int d = module->d;
  std::ofstream csv = open_csv(cfg.out_dir, "fock_moments.csv",
                               "monopro fock-moments csv v1",
                               "word" + mat_header_csv("phi", d));
  // all generator words up to maxlen, lexicographic
  std::vector<std::vector<int>> words{{}};
  for (int len = 1; len <= cfg.maxlen; ++len) {
    std::vector<int> w(len, 1);
    while (true) {
      words.push_back(w);
      int pos = len - 1;
      while (pos >= 0 && w[pos] == module->K) {
        w[pos] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++w[pos];
    }
  }
  for (const auto& w : words) {
    FockOp op = FockOp::identity();
    for (int i : w) op = op * FockOp::gauss(GenVec::zeta(i, d));
    Mat phi = vacuum_phi(module, op);
    std::string word_str;
    for (std::size_t t = 0; t < w.size(); ++t)
      word_str += (t ? " " : "") + std::to_string(w[t]);
    csv << (w.empty() ? "e" : word_str) << mat_entries_csv(phi) << "\n";
  }
  log << "fock-moments: wrote " << words.size() << " rows\n";
  return kExitPass;
}

}  // namespace monopro
