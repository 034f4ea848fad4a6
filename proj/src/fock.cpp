#include "monopro/fock.hpp"

#include <algorithm>
#include <numeric>

namespace monopro {

//==========================================================================
// ModuleSpec
//==========================================================================

ModuleSpec::ModuleSpec(int d_, int K_, int L_, FockMode mode_,
                       std::vector<CPMap> etas_)
    : d(d_), K(K_), L(L_), mode(mode_), etas(std::move(etas_)) {
  if (d < 1 || K < 1 || L < 0) throw ConfigError("bad module dimensions");
  if (static_cast<int>(etas.size()) != K)
    throw ConfigError("need one covariance per generator");
  for (const CPMap& eta : etas)
    if (eta.dim() != d) throw DimensionMismatch("eta dimension");
}

ModuleSpec ModuleSpec::identity_etas(int d, int K, int L, FockMode mode) {
  std::vector<CPMap> etas(K, CPMap::identity(d));
  return ModuleSpec(d, K, L, mode, std::move(etas));
}

bool ModuleSpec::word_ok(const std::vector<int>& w) const {
  if (static_cast<int>(w.size()) > L) return false;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] < 1 || w[j] > K) return false;
    if (j > 0) {
      if (mode == FockMode::kMonotone && !(w[j - 1] > w[j])) return false;
      if (mode == FockMode::kWeaklyMonotone && !(w[j - 1] >= w[j])) return false;
    }
  }
  return true;
}

bool ModuleSpec::can_prepend(int i, const std::vector<int>& w) const {
  if (w.empty()) return true;
  return mode == FockMode::kMonotone ? i > w.front() : i >= w.front();
}

//==========================================================================
// GenVec / SmallOp
//==========================================================================

GenVec GenVec::elementary(int i, const Mat& u, const Mat& v) {
  GenVec f;
  f.index = i;
  const int d = static_cast<int>(u.rows());
  CVec left = vec(u), right = vec(v);
  f.coeff = CVec::Zero(static_cast<Eigen::Index>(d) * d * d * d);
  for (Eigen::Index p = 0; p < left.size(); ++p)
    f.coeff.segment(p * right.size(), right.size()) = left(p) * right;
  return f;
}

GenVec GenVec::zeta(int i, int d) {
  return elementary(i, Mat::Identity(d, d), Mat::Identity(d, d));
}

GenVec GenVec::random(int i, int d, Rng& rng) {
  GenVec f;
  f.index = i;
  f.coeff = CVec(static_cast<Eigen::Index>(d) * d * d * d);
  for (Eigen::Index t = 0; t < f.coeff.size(); ++t)
    f.coeff(t) = Complex(rng.gaussian(), rng.gaussian());
  return f;
}

SmallOp SmallOp::identity(int d) {
  SmallOp a;
  a.d = d;
  const int n = 1 + d * d;
  a.block.assign(n, std::vector<Mat>(n, Mat::Zero(d, d)));
  for (int i = 0; i < n; ++i) a.block[i][i] = Mat::Identity(d, d);
  return a;
}

SmallOp SmallOp::random(int d, Rng& rng) {
  SmallOp a;
  a.d = d;
  const int n = 1 + d * d;
  a.block.assign(n, std::vector<Mat>(n, Mat()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.block[i][j] = random_matrix(d, rng);
  return a;
}

//==========================================================================
// FockVec
//==========================================================================

FockVec FockVec::vacuum(ModulePtr spec) {
  FockVec v(spec);
  v.comps_[{}] = vec(Mat::Identity(spec->d, spec->d));
  return v;
}

FockVec FockVec::random(ModulePtr spec, int max_depth, Rng& rng) {
  FockVec v(spec);
  max_depth = std::min(max_depth, spec->L);
  for (int n = 0; n <= max_depth; ++n) {
    std::vector<int> w;
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      int hi = w.empty() ? spec->K
                         : (spec->mode == FockMode::kMonotone ? w.back() - 1
                                                              : w.back());
      if (hi < 1) {
        ok = false;
        break;
      }
      w.push_back(rng.uniform_int(1, hi));
    }
    if (!ok) continue;
    Eigen::Index dim = 1;
    for (int j = 0; j <= n; ++j) dim *= spec->d * spec->d;
    CVec t(dim);
    for (Eigen::Index s = 0; s < dim; ++s)
      t(s) = Complex(rng.gaussian(), rng.gaussian());
    v.add_component(w, t);
  }
  return v;
}

void FockVec::add_component(const std::vector<int>& word, const CVec& tensor) {
  if (tensor.size() == 0 || tensor.cwiseAbs().maxCoeff() == 0.0) return;
  auto it = comps_.find(word);
  if (it == comps_.end())
    comps_[word] = tensor;
  else
    it->second += tensor;
}

Mat FockVec::depth0() const {
  auto it = comps_.find({});
  if (it == comps_.end()) return Mat::Zero(spec_->d, spec_->d);
  return unvec(it->second, spec_->d);
}

FockVec& FockVec::operator+=(const FockVec& other) {
  for (const auto& [w, t] : other.comps_) add_component(w, t);
  return *this;
}

FockVec FockVec::operator*(Complex scale) const {
  FockVec out(spec_);
  for (const auto& [w, t] : comps_) out.comps_[w] = scale * t;
  return out;
}

double FockVec::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [w, t] : comps_) m = std::max(m, t.cwiseAbs().maxCoeff());
  return m;
}

double FockVec::residual(const FockVec& other) const {
  double m = 0.0;
  for (const auto& [w, t] : comps_) {
    auto it = other.comps_.find(w);
    if (it == other.comps_.end())
      m = std::max(m, t.cwiseAbs().maxCoeff());
    else
      m = std::max(m, (t - it->second).cwiseAbs().maxCoeff());
  }
  for (const auto& [w, t] : other.comps_)
    if (!comps_.count(w)) m = std::max(m, t.cwiseAbs().maxCoeff());
  return m;
}

//==========================================================================
// Primitive application
//==========================================================================

namespace {

// Applies M (new_lead x old_lead) to the leading slot group of T.
CVec apply_leading(const CVec& t, Eigen::Index old_lead, const Mat& m) {
  const Eigen::Index rest = t.size() / old_lead;
  Eigen::Map<const Eigen::MatrixXcd> in(t.data(), rest, old_lead);
  Eigen::MatrixXcd out = in * m.transpose();
  return Eigen::Map<const CVec>(out.data(), out.size());
}

// d^4 x d^2 creation matrix: vec(b0) -> sum c_pq e_p (x) vec(E_q b0).
Mat creation_matrix(const GenVec& f, int d) {
  const int d2 = d * d;
  Mat c = Mat::Zero(static_cast<Eigen::Index>(d2) * d2, d2);
  for (int p = 0; p < d2; ++p)
    for (int q = 0; q < d2; ++q) {
      const Complex coeff = f.coeff(static_cast<Eigen::Index>(p) * d2 + q);
      if (coeff == Complex(0, 0)) continue;
      Mat eq = Mat::Zero(d, d);
      eq(q % d, q / d) = 1.0;
      c.block(static_cast<Eigen::Index>(p) * d2, 0, d2, d2) +=
          coeff * lmul_matrix(eq);
    }
  return c;
}

// d^2 x d^2 pair matrix: vec(b0) -> vec(<f, b0 zeta_i>)
//                                 = vec(sum conj(c_pq) E_q* eta(E_p* b0)).
Mat pair_matrix(const GenVec& f, const CPMap& eta, int d) {
  const int d2 = d * d;
  Mat p_f = Mat::Zero(d2, d2);
  for (int p = 0; p < d2; ++p)
    for (int q = 0; q < d2; ++q) {
      const Complex coeff =
          std::conj(f.coeff(static_cast<Eigen::Index>(p) * d2 + q));
      if (coeff == Complex(0, 0)) continue;
      Mat ep = Mat::Zero(d, d), eq = Mat::Zero(d, d);
      ep(p % d, p / d) = 1.0;
      eq(q % d, q / d) = 1.0;
      p_f += coeff * lmul_matrix(eq.adjoint()) * eta.matrix() *
             lmul_matrix(ep.adjoint());
    }
  return p_f;
}

}  // namespace

FockVec apply(const Prim& p, const FockVec& v) {
  const ModuleSpec& spec = *v.spec();
  const int d = spec.d;
  const int d2 = d * d;
  FockVec out(v.spec());

  switch (p.kind) {
    case Prim::Kind::kLMul: {
      const Mat lm = lmul_matrix(p.b);
      for (const auto& [w, t] : v.comps())
        out.add_component(w, apply_leading(t, d2, lm));
      break;
    }
    case Prim::Kind::kCreate: {
      const Mat cmat = creation_matrix(p.f, d);
      for (const auto& [w, t] : v.comps()) {
        if (!spec.can_prepend(p.f.index, w)) continue;
        if (static_cast<int>(w.size()) >= spec.L) continue;  // truncation
        std::vector<int> nw;
        nw.reserve(w.size() + 1);
        nw.push_back(p.f.index);
        nw.insert(nw.end(), w.begin(), w.end());
        out.add_component(nw, apply_leading(t, d2, cmat));
      }
      break;
    }
    case Prim::Kind::kAnnihilate: {
      Mat a2;  // built lazily: mul . (P_f (x) I)
      for (const auto& [w, t] : v.comps()) {
        if (w.empty() || w.front() != p.f.index) continue;
        if (a2.size() == 0) {
          const Mat pf = pair_matrix(p.f, spec.etas[p.f.index - 1], d);
          a2 = mul_tensor(d) * kron(pf, Mat::Identity(d2, d2));
        }
        out.add_component(std::vector<int>(w.begin() + 1, w.end()),
                          apply_leading(t, static_cast<Eigen::Index>(d2) * d2, a2));
      }
      break;
    }
    case Prim::Kind::kGauss: {
      Prim c = p;
      c.kind = Prim::Kind::kCreate;
      Prim a = p;
      a.kind = Prim::Kind::kAnnihilate;
      out += apply(c, v);
      out += apply(a, v);
      break;
    }
    case Prim::Kind::kLambda: {
      if (spec.mode != FockMode::kMonotone)
        throw ModeError("lambda embedding requires the monotone module");
      const SmallOp& a = p.op;
      const int i = p.index;
      // B-part maps and prepend maps, cf. the decomposition
      // E^m = ((B (+) E_i) (x) (B (+) E^m_(<i))) (+) E^m_(>i).
      const Mat lm00 = lmul_matrix(a.block[0][0]);
      Mat prepend = Mat::Zero(static_cast<Eigen::Index>(d2) * d2, d2);
      for (int k = 0; k < d2; ++k) {
        prepend.block(static_cast<Eigen::Index>(k) * d2, 0, d2, d2) =
            lmul_matrix(a.block[1 + k][0]);
      }
      Mat q0 = Mat::Zero(d2, static_cast<Eigen::Index>(d2) * d2);
      Mat q1 = Mat::Zero(static_cast<Eigen::Index>(d2) * d2,
                         static_cast<Eigen::Index>(d2) * d2);
      for (int pp = 0; pp < d2; ++pp) {
        q0.block(0, static_cast<Eigen::Index>(pp) * d2, d2, d2) =
            lmul_matrix(a.block[0][1 + pp]);
        for (int k = 0; k < d2; ++k)
          q1.block(static_cast<Eigen::Index>(k) * d2,
                   static_cast<Eigen::Index>(pp) * d2, d2, d2) =
              lmul_matrix(a.block[1 + k][1 + pp]);
      }
      for (const auto& [w, t] : v.comps()) {
        if (!w.empty() && w.front() > i) continue;  // 0 on E^m_(>i)
        if (w.empty() || w.front() < i) {
          out.add_component(w, apply_leading(t, d2, lm00));
          if (static_cast<int>(w.size()) < spec.L) {
            std::vector<int> nw;
            nw.reserve(w.size() + 1);
            nw.push_back(i);
            nw.insert(nw.end(), w.begin(), w.end());
            out.add_component(nw, apply_leading(t, d2, prepend));
          }
        } else {  // leading index equals i: act on the B (+) E_i factor
          out.add_component(std::vector<int>(w.begin() + 1, w.end()),
                            apply_leading(t, static_cast<Eigen::Index>(d2) * d2, q0));
          out.add_component(w,
                            apply_leading(t, static_cast<Eigen::Index>(d2) * d2, q1));
        }
      }
      break;
    }
  }
  return out;
}

FockVec apply(const OpWord& w, const FockVec& v) {
  FockVec cur = v;
  for (auto it = w.rbegin(); it != w.rend(); ++it) cur = apply(*it, cur);
  return cur;
}

FockVec apply(const FockOp& op, const FockVec& v) {
  FockVec out(v.spec());
  for (const OpWord& w : op.words()) out += apply(w, v);
  return out;
}

FockVec rmul_vec(const FockVec& v, const Mat& b) {
  const int d2 = v.spec()->d * v.spec()->d;
  const Mat rm = rmul_matrix(b);
  FockVec out(v.spec());
  for (const auto& [w, t] : v.comps()) {
    const Eigen::Index rest = t.size() / d2;
    Eigen::Map<const Eigen::MatrixXcd> in(t.data(), d2, rest);
    Eigen::MatrixXcd o = rm * in;
    out.add_component(w, Eigen::Map<const CVec>(o.data(), o.size()));
  }
  return out;
}

//==========================================================================
// FockOp
//==========================================================================

FockOp FockOp::zero() { return FockOp(); }

FockOp FockOp::identity() {
  FockOp op;
  op.words_.push_back({});
  return op;
}

FockOp FockOp::from_word(OpWord w) {
  FockOp op;
  op.words_.push_back(std::move(w));
  return op;
}

FockOp FockOp::lmul(const Mat& b) { return from_word({Prim{Prim::Kind::kLMul, b, {}, {}, 0}}); }

FockOp FockOp::create(const GenVec& f) {
  return from_word({Prim{Prim::Kind::kCreate, {}, f, {}, 0}});
}

FockOp FockOp::annihilate(const GenVec& f) {
  return from_word({Prim{Prim::Kind::kAnnihilate, {}, f, {}, 0}});
}

FockOp FockOp::gauss(const GenVec& f) {
  return from_word({Prim{Prim::Kind::kGauss, {}, f, {}, 0}});
}

FockOp FockOp::lambda(int index, const SmallOp& op) {
  return from_word({Prim{Prim::Kind::kLambda, {}, {}, op, index}});
}

int FockOp::weight() const {
  int w = 0;
  for (const OpWord& word : words_) {
    int s = 0;
    for (const Prim& p : word) s += p.weight();
    w = std::max(w, s);
  }
  return w;
}

FockOp FockOp::operator+(const FockOp& other) const {
  FockOp out = *this;
  out.words_.insert(out.words_.end(), other.words_.begin(), other.words_.end());
  return out;
}

FockOp FockOp::operator*(const FockOp& other) const {
  FockOp out;
  for (const OpWord& a : words_)
    for (const OpWord& b : other.words_) {
      OpWord w = a;
      w.insert(w.end(), b.begin(), b.end());
      out.words_.push_back(std::move(w));
    }
  return out;
}

//==========================================================================
// Inner product
//==========================================================================

Mat genvec_pair(const ModuleSpec& spec, const GenVec& f, const GenVec& g) {
  if (f.index != g.index) return Mat::Zero(spec.d, spec.d);
  const Mat pf = pair_matrix(f, spec.etas[f.index - 1], spec.d);
  // <f, u zeta v> = <f, u zeta> v; with g = sum g_pq E_p zeta E_q this is
  // sum_q unvec(pf * e_p) g_pq E_q accumulated via the mul tensor.
  const int d2 = spec.d * spec.d;
  CVec acc = CVec::Zero(d2);
  const Mat mul = mul_tensor(spec.d);
  for (int p = 0; p < d2; ++p) {
    CVec paired = pf * CVec::Unit(d2, p);
    for (int q = 0; q < d2; ++q) {
      const Complex c = g.coeff(static_cast<Eigen::Index>(p) * d2 + q);
      if (c == Complex(0, 0)) continue;
      CVec pq(static_cast<Eigen::Index>(d2) * d2);
      for (int x = 0; x < d2; ++x)
        pq.segment(static_cast<Eigen::Index>(x) * d2, d2) =
            paired(x) * CVec::Unit(d2, q);
      acc += c * (mul * pq);
    }
  }
  return unvec(acc, spec.d);
}

Mat inner(const FockVec& v, const FockVec& w) {
  if (v.spec() != w.spec()) {
    bool compatible = v.spec() && w.spec() && v.spec()->d == w.spec()->d &&
                      v.spec()->K == w.spec()->K &&
                      v.spec()->L == w.spec()->L &&
                      v.spec()->mode == w.spec()->mode;
    if (compatible) {
      for (int i = 0; i < v.spec()->K && compatible; ++i)
        compatible = (v.spec()->etas[i].matrix() - w.spec()->etas[i].matrix())
                         .norm() == 0.0;
    }
    if (!compatible) throw SpecMismatch("inner product across different modules");
  }
  const ModuleSpec& spec = *v.spec();
  const int d = spec.d;
  const int d2 = d * d;
  Mat result = Mat::Zero(d, d);

  for (const auto& [word, tv] : v.comps()) {
    auto it = w.comps().find(word);
    if (it == w.comps().end()) continue;
    const CVec& tw = it->second;
    const int n = static_cast<int>(word.size());
    if (n == 0) {
      result += unvec(tv, d).adjoint() * unvec(tw, d);
      continue;
    }
    // Elementary-pair fold.  The fold state stays scalar * matrix-unit:
    //   t_0 = E_{a0}* E_{b0},  t_j = E_{aj}* eta_{i_j}(t_{j-1}) E_{bj}.
    std::vector<int> av(n + 1), bv(n + 1);
    for (Eigen::Index alpha = 0; alpha < tv.size(); ++alpha) {
      const Complex ca = std::conj(tv(alpha));
      if (ca == Complex(0, 0)) continue;
      Eigen::Index rem = alpha;
      for (int j = n; j >= 0; --j) {
        av[j] = static_cast<int>(rem % d2);
        rem /= d2;
      }
      for (Eigen::Index beta = 0; beta < tw.size(); ++beta) {
        const Complex cb = tw(beta);
        if (cb == Complex(0, 0)) continue;
        rem = beta;
        for (int j = n; j >= 0; --j) {
          bv[j] = static_cast<int>(rem % d2);
          rem /= d2;
        }
        // slot 0
        if (av[0] % d != bv[0] % d) continue;
        Complex s = ca * cb;
        int r = av[0] / d, c = bv[0] / d;
        bool dead = false;
        for (int j = 1; j <= n; ++j) {
          const Mat& eta_hat = spec.etas[word[j - 1] - 1].matrix();
          const int ia = av[j] % d, ja = av[j] / d;
          const int ib = bv[j] % d, jb = bv[j] / d;
          s *= eta_hat(ia + d * ib, r + d * c);
          if (s == Complex(0, 0)) {
            dead = true;
            break;
          }
          r = ja;
          c = jb;
        }
        if (!dead) result(r, c) += s;
      }
    }
  }
  return result;
}

//==========================================================================
// Vacuum functional
//==========================================================================

Mat vacuum_phi(ModulePtr spec, const FockOp& op) {
  if (op.weight() > spec->L)
    throw DepthBudgetExceeded("word weight " + std::to_string(op.weight()) +
                              " > L = " + std::to_string(spec->L));
  FockVec v = apply(op, FockVec::vacuum(spec));
  return v.depth0();
}

Mat phi_word(ModulePtr spec, const FockOp& x, const std::vector<Mat>& coeffs) {
  if (coeffs.empty()) throw ConfigError("phi_word needs at least c_0");
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n * std::max(1, x.weight()) > spec->L)
    throw DepthBudgetExceeded("phi_word with " + std::to_string(n) +
                              " factors exceeds depth budget");
  FockVec v = FockVec::vacuum(spec);
  for (int j = n; j >= 0; --j) {
    v = apply(Prim{Prim::Kind::kLMul, coeffs[j], {}, {}, 0}, v);
    if (j > 0) v = apply(x, v);
  }
  return v.depth0();
}

//==========================================================================
// Independence checking
//==========================================================================

FockOp random_algebra_element(const ModuleSpec& spec, int index, int max_gens,
                              Rng& rng) {
  const int gens = rng.uniform_int(1, std::max(1, max_gens));
  OpWord w;
  w.push_back(Prim{Prim::Kind::kLMul, random_selfadjoint(spec.d, rng), {}, {}, 0});
  for (int g = 0; g < gens; ++g) {
    if (spec.mode == FockMode::kWeaklyMonotone) {
      w.push_back(Prim{Prim::Kind::kGauss, {}, GenVec::random(index, spec.d, rng),
                       {}, 0});
    } else {
      w.push_back(Prim{Prim::Kind::kLambda, {}, {}, SmallOp::random(spec.d, rng),
                       index});
    }
    w.push_back(
        Prim{Prim::Kind::kLMul, random_selfadjoint(spec.d, rng), {}, {}, 0});
  }
  return FockOp::from_word(std::move(w));
}

namespace {

Mat phi_of(ModulePtr spec, const FockOp& op) { return vacuum_phi(spec, op); }

}  // namespace

IndependenceReport check_monotone_independence(ModulePtr spec, int trials,
                                               std::uint64_t seed) {
  IndependenceReport rep;
  rep.trials = trials;
  std::vector<double> va(trials, 0.0), vb(trials, 0.0), vs(trials, 0.0);

  parallel_for(trials, [&](int trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const ModuleSpec& s = *spec;

    // Condition (a): Phi(A X_i X_j X_k B) = Phi(A X_i Phi(X_j) X_k B), i<j>k.
    if (s.K >= 2) {
      const int j = rng.uniform_int(2, s.K);
      const int i = rng.uniform_int(1, j - 1);
      const int k = rng.uniform_int(1, j - 1);
      FockOp xi = random_algebra_element(s, i, 1, rng);
      FockOp xj = random_algebra_element(s, j, 2, rng);
      FockOp xk = random_algebra_element(s, k, 1, rng);
      const bool deco = rng.uniform() < 0.5;
      FockOp a = deco ? random_algebra_element(s, rng.uniform_int(1, s.K), 1, rng)
                      : FockOp::lmul(random_selfadjoint(s.d, rng));
      FockOp b = deco ? FockOp::lmul(random_selfadjoint(s.d, rng))
                      : random_algebra_element(s, rng.uniform_int(1, s.K), 1, rng);
      Mat lhs = phi_of(spec, a * xi * xj * xk * b);
      Mat rhs = phi_of(spec, a * xi * FockOp::lmul(phi_of(spec, xj)) * xk * b);
      va[trial] = std::max(va[trial], max_abs(lhs - rhs));

      // Strict (a') on a random vector within the depth budget.
      FockVec v = FockVec::random(spec, std::max(0, s.L - 4), rng);
      FockVec lv = apply(xi * xj * xk, v);
      FockVec rv = apply(xi * FockOp::lmul(phi_of(spec, xj)) * xk, v);
      vs[trial] = std::max(vs[trial], lv.residual(rv));
    }

    // Condition (b): ordered factorization displays.
    {
      // decreasing tuple
      std::vector<int> idx(s.K);
      std::iota(idx.begin(), idx.end(), 1);
      std::shuffle(idx.begin(), idx.end(), rng.engine());
      const int m = rng.uniform_int(1, std::min(3, s.K));
      std::vector<int> dec(idx.begin(), idx.begin() + m);
      std::sort(dec.rbegin(), dec.rend());

      std::vector<FockOp> xs;
      FockOp prod = FockOp::identity();
      Mat expect = Mat::Identity(s.d, s.d);
      for (int t = 0; t < m; ++t) {
        xs.push_back(random_algebra_element(s, dec[t], 1, rng));
        prod = prod * xs.back();
        expect = expect * phi_of(spec, xs.back());
      }
      vb[trial] = std::max(vb[trial], max_abs(phi_of(spec, prod) - expect));

      // increasing tuple
      const int n = rng.uniform_int(1, std::min(3, s.K));
      std::vector<int> inc(idx.begin(), idx.begin() + n);
      std::sort(inc.begin(), inc.end());
      FockOp prod2 = FockOp::identity();
      Mat expect2 = Mat::Identity(s.d, s.d);
      for (int t = 0; t < n; ++t) {
        FockOp x = random_algebra_element(s, inc[t], 1, rng);
        prod2 = prod2 * x;
        expect2 = expect2 * phi_of(spec, x);
      }
      vb[trial] = std::max(vb[trial], max_abs(phi_of(spec, prod2) - expect2));

      // mixed tuple i_m > ... > i_1 < k_1 < ... < k_n
      if (s.K >= 2 && s.L >= 4) {
        const int i1 = rng.uniform_int(1, s.K - 1);
        std::vector<int> left{rng.uniform_int(i1 + 1, s.K), i1};
        std::vector<int> right{rng.uniform_int(i1 + 1, s.K)};
        FockOp prod3 = FockOp::identity();
        Mat expect3 = Mat::Identity(s.d, s.d);
        for (int t : left) {
          FockOp x = random_algebra_element(s, t, 1, rng);
          prod3 = prod3 * x;
          expect3 = expect3 * phi_of(spec, x);
        }
        for (int t : right) {
          FockOp x = random_algebra_element(s, t, 1, rng);
          prod3 = prod3 * x;
          expect3 = expect3 * phi_of(spec, x);
        }
        vb[trial] = std::max(vb[trial], max_abs(phi_of(spec, prod3) - expect3));
      }
    }
  });

  for (int t = 0; t < trials; ++t) {
    rep.max_violation_a = std::max(rep.max_violation_a, va[t]);
    rep.max_violation_b = std::max(rep.max_violation_b, vb[t]);
    rep.max_violation_strict = std::max(rep.max_violation_strict, vs[t]);
  }
  return rep;
}

//==========================================================================
// Normal form
//==========================================================================

namespace {

struct Sym {
  bool creation;
  GenVec f;
};

void left_act(GenVec& f, const Mat& alpha) {  // f -> alpha . f
  const int d2 = static_cast<int>(alpha.rows() * alpha.cols());
  f.coeff = kron(lmul_matrix(alpha), Mat::Identity(d2, d2)) * f.coeff;
}

void right_act(GenVec& f, const Mat& alpha) {  // f -> f . alpha
  const int d2 = static_cast<int>(alpha.rows() * alpha.cols());
  f.coeff = kron(Mat::Identity(d2, d2), rmul_matrix(alpha)) * f.coeff;
}

}  // namespace

FockOp NormalFormResult::as_op() const {
  FockOp op = FockOp::lmul(scalar);
  auto add_words = [&op](const std::vector<OpWord>& ws) {
    for (const OpWord& w : ws) op = op + FockOp::from_word(w);
  };
  add_words(creation);
  add_words(annihilation);
  add_words(mixed);
  return op;
}

NormalFormResult normal_form(const ModuleSpec& spec,
                             const std::vector<GenVec>& fs) {
  const int n = static_cast<int>(fs.size());
  for (const GenVec& f : fs)
    if (f.index != fs.front().index)
      throw SpecMismatch("normal_form needs a single generator index");

  NormalFormResult res;
  res.scalar = Mat::Zero(spec.d, spec.d);

  // Expand prod G(f_l) = sum over epsilon in {a, a*}^n.
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Sym> term;
    for (int l = 0; l < n; ++l)
      term.push_back(Sym{((mask >> l) & 1) != 0, fs[l]});

    Mat pending_scalar = Mat::Identity(spec.d, spec.d);
    bool is_pure_scalar = false;
    // Eliminate adjacent a(f) a*(g) pairs, absorbing <f, g> into neighbors.
    while (true) {
      int pos = -1;
      for (int t = 0; t + 1 < static_cast<int>(term.size()); ++t) {
        if (!term[t].creation && term[t + 1].creation) {
          pos = t;
          break;
        }
      }
      if (pos < 0) break;
      const Mat alpha = genvec_pair(spec, term[pos].f, term[pos + 1].f);
      term.erase(term.begin() + pos, term.begin() + pos + 2);
      if (term.empty()) {
        pending_scalar = alpha * pending_scalar;
        is_pure_scalar = true;
        break;
      }
      if (pos > 0) {  // absorb to the left: sym . L_alpha
        Sym& s = term[pos - 1];
        if (s.creation)
          right_act(s.f, alpha);  // a*(h) L_a = a*(h a)
        else
          left_act(s.f, alpha.adjoint());  // a(h) L_a = a(a* . h)
      } else {  // absorb to the right: L_alpha . sym
        Sym& s = term[0];
        if (s.creation)
          left_act(s.f, alpha);  // L_a a*(h) = a*(a h)
        else
          right_act(s.f, alpha.adjoint());  // L_a a(h) = a(h a*)
      }
    }

    if (is_pure_scalar || term.empty()) {
      res.scalar += is_pure_scalar ? pending_scalar
                                   : Mat::Identity(spec.d, spec.d);
      continue;
    }
    OpWord w;
    int creations = 0, annihilations = 0;
    for (const Sym& s : term) {
      if (s.creation) {
        ++creations;
        w.push_back(Prim{Prim::Kind::kCreate, {}, s.f, {}, 0});
      } else {
        ++annihilations;
        w.push_back(Prim{Prim::Kind::kAnnihilate, {}, s.f, {}, 0});
      }
    }
    if (annihilations == 0)
      res.creation.push_back(std::move(w));
    else if (creations == 0)
      res.annihilation.push_back(std::move(w));
    else
      res.mixed.push_back(std::move(w));
  }
  return res;
}

}  // namespace monopro
