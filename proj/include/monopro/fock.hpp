#ifndef MONOPRO_FOCK_HPP_
#define MONOPRO_FOCK_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "monopro/cpmap.hpp"
#include "monopro/element.hpp"
#include "monopro/matrix.hpp"

namespace monopro {

enum class FockMode { kMonotone, kWeaklyMonotone };

// Truncated monotone / weakly monotone product bimodule over B = M_d(C)
// with K generators zeta_1..zeta_K and covariances eta_i.  Words are index
// tuples (i_1, ..., i_n), strictly decreasing in monotone mode, weakly
// decreasing in weakly monotone mode, with n <= L.
struct ModuleSpec {
  int d = 0;
  int K = 0;
  int L = 0;
  FockMode mode = FockMode::kWeaklyMonotone;
  std::vector<CPMap> etas;  // size K

  ModuleSpec() = default;
  ModuleSpec(int d, int K, int L, FockMode mode, std::vector<CPMap> etas);
  static ModuleSpec identity_etas(int d, int K, int L, FockMode mode);

  bool word_ok(const std::vector<int>& w) const;
  bool can_prepend(int i, const std::vector<int>& w) const;
};

using ModulePtr = std::shared_ptr<const ModuleSpec>;

// Element of E_i = B zeta_i B, coefficient tensor in B (x) B (dimension d^4,
// left slot slowest).  Represents sum c_left zeta_i c_right.
struct GenVec {
  int index = 0;
  CVec coeff;

  static GenVec zeta(int i, int d);
  static GenVec elementary(int i, const Mat& u, const Mat& v);
  static GenVec random(int i, int d, Rng& rng);
};

// E_i pairing <f, g> = sum v_f* eta_i(u_f* u_g) v_g in B (conjugate-linear
// in f).
Mat genvec_pair(const ModuleSpec& spec, const GenVec& f, const GenVec& g);

// Right-B-linear operator on B (+) E_i: a (1 + d^2) x (1 + d^2) block matrix
// over B acting on coordinates w.r.t. the free right-module basis
// {1} u {E_k zeta_i}.
struct SmallOp {
  int d = 0;
  std::vector<std::vector<Mat>> block;

  static SmallOp identity(int d);
  static SmallOp random(int d, Rng& rng);
};

// Vector of the truncated module: word -> coefficient tensor in
// B^(x)(n+1), stored as a dense column of dimension d^(2(n+1)) under the
// column-stacking convention, slot 0 (leftmost B factor) slowest.  The empty
// word holds the depth-0 component vec(b) in B.
class FockVec {
 public:
  FockVec() = default;
  explicit FockVec(ModulePtr spec) : spec_(std::move(spec)) {}
  static FockVec vacuum(ModulePtr spec);
  static FockVec random(ModulePtr spec, int max_depth, Rng& rng);

  const ModulePtr& spec() const { return spec_; }
  std::map<std::vector<int>, CVec>& comps() { return comps_; }
  const std::map<std::vector<int>, CVec>& comps() const { return comps_; }

  void add_component(const std::vector<int>& word, const CVec& tensor);
  Mat depth0() const;  // B component (zero matrix if absent)

  FockVec& operator+=(const FockVec& other);
  FockVec operator*(Complex scale) const;
  double max_abs_coeff() const;
  double residual(const FockVec& other) const;

 private:
  ModulePtr spec_;
  std::map<std::vector<int>, CVec> comps_;
};

//==========================================================================
// Operators: formal sums of primitive words, applied vector-by-vector.  No
// dense module-space matrices are materialized.
//==========================================================================

struct Prim {
  enum class Kind { kLMul, kCreate, kAnnihilate, kGauss, kLambda };
  Kind kind = Kind::kLMul;
  Mat b;          // kLMul
  GenVec f;       // kCreate / kAnnihilate / kGauss
  SmallOp op;     // kLambda
  int index = 0;  // kLambda embedding index

  int weight() const { return kind == Kind::kLMul ? 0 : 1; }
};

using OpWord = std::vector<Prim>;  // rightmost primitive acts first

class FockOp {
 public:
  static FockOp zero();
  static FockOp identity();
  static FockOp lmul(const Mat& b);
  static FockOp create(const GenVec& f);
  static FockOp annihilate(const GenVec& f);
  static FockOp gauss(const GenVec& f);
  static FockOp lambda(int index, const SmallOp& op);
  static FockOp from_word(OpWord w);

  const std::vector<OpWord>& words() const { return words_; }
  // Largest total weight over summand words.
  int weight() const;

  FockOp operator+(const FockOp& other) const;
  FockOp operator*(const FockOp& other) const;  // (A*B)(v) = A(B(v))

 private:
  std::vector<OpWord> words_;
};

FockVec apply(const Prim& p, const FockVec& v);
FockVec apply(const OpWord& w, const FockVec& v);
FockVec apply(const FockOp& op, const FockVec& v);

// Right module action v . b: multiplies the last tensor slot on the right.
FockVec rmul_vec(const FockVec& v, const Mat& b);

// <v, w>: conjugate-linear in v.  Throws SpecMismatch if the vectors live on
// different modules.
Mat inner(const FockVec& v, const FockVec& w);

// Depth-0 component of (op applied to the vacuum).  Exact whenever the word
// weight is within the depth budget; longer words are refused
// (DepthBudgetExceeded) rather than silently truncated.
Mat vacuum_phi(ModulePtr spec, const FockOp& op);

// Phi(c_0 X c_1 X ... X c_n) with X a fixed operator.
Mat phi_word(ModulePtr spec, const FockOp& x, const std::vector<Mat>& coeffs);

//==========================================================================
// Independence checking (Def 2.1 style) and the creation/annihilation
// normal form.
//==========================================================================

struct IndependenceReport {
  double max_violation_a = 0.0;       // middle-collapse condition
  double max_violation_b = 0.0;       // ordered factorization conditions
  double max_violation_strict = 0.0;  // (a') on random vectors
  int trials = 0;
  double max_violation() const {
    return std::max({max_violation_a, max_violation_b, max_violation_strict});
  }
  bool pass(double tol = kResidualTol) const { return max_violation() <= tol; }
};

// Draws random elements of the indexed algebras (G-words in weakly monotone
// mode, lambda-embedded SmallOps in monotone mode) and checks conditions (a),
// (b) and the strict (a') within the depth budget.
IndependenceReport check_monotone_independence(ModulePtr spec, int trials,
                                               std::uint64_t seed);

// Random element of the index-i algebra: product of <= max_gens generator
// factors with B coefficients.
FockOp random_algebra_element(const ModuleSpec& spec, int index, int max_gens,
                              Rng& rng);

struct NormalFormResult {
  Mat scalar;                        // Phi(P)
  std::vector<OpWord> creation;      // A*(e~_r) chains
  std::vector<OpWord> annihilation;  // A(g~_s) chains
  std::vector<OpWord> mixed;         // A*(h~_q) A(k~_q) chains
  FockOp as_op() const;              // scalar + all chains, as one operator
};

// Normal form of P = G(f_1)...G(f_n), all f_l over one generator index.
// The decomposition agrees with P on vectors supported in words with
// indices <= that generator index.
NormalFormResult normal_form(const ModuleSpec& spec,
                             const std::vector<GenVec>& fs);

//==========================================================================
// Moment handle
//==========================================================================

class FockElement : public ElementHandle {
 public:
  FockElement(ModulePtr spec, FockOp op)
      : spec_(std::move(spec)), op_(std::move(op)) {}

  int dim() const override { return spec_->d; }
  int moment_budget() const override {
    const int w = std::max(1, op_.weight());
    return spec_->L / w;
  }
  Mat phi_word(const std::vector<Mat>& coeffs) const override {
    return monopro::phi_word(spec_, op_, coeffs);
  }

  const FockOp& op() const { return op_; }
  const ModulePtr& module() const { return spec_; }

 private:
  ModulePtr spec_;
  FockOp op_;
};

}  // namespace monopro

#endif  // MONOPRO_FOCK_HPP_
