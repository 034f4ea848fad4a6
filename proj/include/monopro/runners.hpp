#ifndef MONOPRO_RUNNERS_HPP_
#define MONOPRO_RUNNERS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "monopro/cfree.hpp"
#include "monopro/fock.hpp"
#include "monopro/transforms.hpp"

namespace monopro {

// Exit-code contract: 0 pass, 1 theorem failure, 2 config failure.
inline constexpr int kExitPass = 0;
inline constexpr int kExitTheoremFailure = 1;
inline constexpr int kExitConfigFailure = 2;

//==========================================================================
// Shared instance builders
//==========================================================================

// A pair of monotonically independent elements on a weakly monotone module
// (x from the index-1 algebra, y from index 2) together with the operators
// needed by the transform theorems.  Elements are lmul(b) + coeff G(f) coeff
// sums: weight 1, generically non-centered.
struct TransformInstance {
  ModulePtr module;
  FockOp x_op, y_op;
  FockOp u_op, v_op, vu_op, uv_op;  // u = 1 + x, v = y
};

TransformInstance make_transform_instance(int d, int L, std::uint64_t seed);

// Positive MomentSpec manufactured from a Fock realization: the distribution
// of L_b + G(f) with a random covariance, tabulated to max_order.
MomentSpec fock_moment_spec(int d, int max_order, std::uint64_t seed);

//==========================================================================
// CLT table runner
//==========================================================================

struct CltConfig {
  int m = 4;
  int d = 1;
  std::vector<int> n_list = {2, 4, 8, 16, 32};
  std::string eta = "identity";  // "identity" or JSON path
  std::string b = "identity";    // "identity" or JSON path (list of Mat)
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

int run_clt(const CltConfig& cfg, std::ostream& log);

//==========================================================================
// Theorem suite runner
//==========================================================================

struct TheoremsConfig {
  int d = 2;
  int K = 3;
  int L = 6;   // depth budget for the independence checks
  int M = 4;   // scalar-series order
  int N = 3;   // multilinear-series order
  int trials = 50;
  std::uint64_t seed = 1;
  std::string only;  // run a single theorem tag when nonempty
  std::string eta;   // optional JSON path; validated as CP on load
  std::string out_dir = ".";
};

struct TheoremRow {
  std::string tag;
  int trial = 0;
  double residual = 0.0;
  bool pass = false;
};

int run_theorems(const TheoremsConfig& cfg, std::ostream& log);

//==========================================================================
// Transform residual table (per-degree CSV)
//==========================================================================

struct TransformsConfig {
  int d = 2;
  int M = 4;
  int N = 3;
  int trials = 5;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_transforms(const TransformsConfig& cfg, std::ostream& log);

//==========================================================================
// Mul[[B]] law suite
//==========================================================================

struct MfsCheckConfig {
  int d = 2;
  int order = 4;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_mfs_check(const MfsCheckConfig& cfg, std::ostream& log);

// One law evaluation, shared with the acceptance suite.  Law tags:
// mul-identity, mul-inverse, mul-assoc, compose-identity, compose-assoc,
// distributive-add, distributive-mul, comp-inverse, geometric.
double mfs_law_residual(const std::string& law, int d, int order, Rng& rng);
const std::vector<std::string>& mfs_law_tags();

//==========================================================================
// Section-6 product checks
//==========================================================================

struct CfreeConfig {
  std::string spec1 = "fock";  // "fock", or JSON MomentSpec path
  std::string spec2 = "fock";
  std::string check = "equivalence";  // equivalence | positivity | independence
  int d = 2;
  int trials = 100;
  int maxlen = 4;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_cfree(const CfreeConfig& cfg, std::ostream& log);

//==========================================================================
// Fock moment dump
//==========================================================================

struct FockMomentsConfig {
  std::string spec_path;  // empty: built-in default module
  int maxlen = 3;
  std::string out_dir = ".";
};

int run_fock_moments(const FockMomentsConfig& cfg, std::ostream& log);

// Deterministic double formatting used by every CSV writer.
std::string fmt_double(double x);

}  // namespace monopro

#endif  // MONOPRO_RUNNERS_HPP_
