#include "monopro/ncpart.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace monopro {

//==========================================================================
// Partitions
//==========================================================================

Partition Partition::from_blocks(int m, std::vector<std::vector<int>> blocks) {
  Partition p;
  p.m = m;
  std::vector<bool> seen(m + 1, false);
  for (auto& blk : blocks) {
    if (blk.empty()) throw ConfigError("empty block");
    std::sort(blk.begin(), blk.end());
    for (int e : blk) {
      if (e < 1 || e > m || seen[e]) throw ConfigError("bad block element");
      seen[e] = true;
    }
  }
  for (int e = 1; e <= m; ++e)
    if (!seen[e]) throw ConfigError("blocks do not cover {1..m}");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  p.blocks = std::move(blocks);
  return p;
}

bool Partition::is_noncrossing() const {
  // a<b<c<d with {a,c}, {b,d} in different blocks
  std::vector<int> owner(m + 1, -1);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int e : blocks[i]) owner[e] = static_cast<int>(i);
  for (int a = 1; a <= m; ++a)
    for (int c = a + 1; c <= m; ++c) {
      if (owner[a] != owner[c]) continue;
      for (int b = a + 1; b < c; ++b) {
        if (owner[b] == owner[a]) continue;
        for (int e : blocks[owner[b]])
          if (e > c) return false;
      }
    }
  return true;
}

bool Partition::is_pairing() const {
  for (const auto& blk : blocks)
    if (blk.size() != 2) return false;
  return true;
}

std::uint64_t catalan(int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

namespace {

// Recursive generator over a contiguous position range [lo, hi].
void gen_nc(const std::vector<int>& positions,
            std::vector<std::vector<int>>& acc,
            std::vector<std::vector<std::vector<int>>>& out) {
  if (positions.empty()) {
    out.push_back(acc);
    return;
  }
  const int first = positions.front();
  const int n = static_cast<int>(positions.size());
  // Choose the block containing `first` as a subset of the remaining
  // positions; the gaps between chosen elements are partitioned recursively
  // and independently, which is exactly the non-crossing structure.
  std::vector<int> chosen;
  std::function<void(int)> choose = [&](int start) {
    // finalize with current chosen set
    {
      std::vector<int> block{first};
      block.insert(block.end(), chosen.begin(), chosen.end());
      std::vector<std::vector<int>> gaps;
      std::vector<int> cuts{0};
      for (int c : chosen) {
        auto it = std::find(positions.begin(), positions.end(), c);
        cuts.push_back(static_cast<int>(it - positions.begin()));
      }
      cuts.push_back(n);
      // gap g: strictly between consecutive cut indices
      std::vector<std::vector<int>> segments;
      for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
        std::vector<int> seg;
        for (int t = cuts[g] + 1; t < cuts[g + 1]; ++t)
          seg.push_back(positions[t]);
        segments.push_back(std::move(seg));
      }
      acc.push_back(block);
      std::function<void(std::size_t)> rec_seg = [&](std::size_t g) {
        if (g == segments.size()) {
          out.push_back(acc);
          return;
        }
        std::vector<std::vector<std::vector<int>>> sub;
        std::vector<std::vector<int>> sub_acc;
        gen_nc(segments[g], sub_acc, sub);
        for (auto& parts : sub) {
          const std::size_t mark = acc.size();
          for (auto& blk : parts) acc.push_back(blk);
          rec_seg(g + 1);
          acc.resize(mark);
        }
      };
      rec_seg(0);
      acc.pop_back();
    }
    for (int t = start; t < n; ++t) {
      chosen.push_back(positions[t]);
      choose(t + 1);
      chosen.pop_back();
    }
  };
  choose(1);
}

}  // namespace

std::vector<Partition> enum_nc(int m) {
  if (m < 1 || m > 12) throw SizeLimit("enum_nc supports 1 <= m <= 12");
  std::vector<int> positions(m);
  std::iota(positions.begin(), positions.end(), 1);
  std::vector<std::vector<int>> acc;
  std::vector<std::vector<std::vector<int>>> raw;
  gen_nc(positions, acc, raw);
  std::vector<Partition> out;
  out.reserve(raw.size());
  for (auto& blocks : raw) out.push_back(Partition::from_blocks(m, blocks));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Partition> enum_pairings(int m) {
  if (m % 2 != 0) throw OddSize("pairings need even m");
  if (m < 2 || m > 16) throw SizeLimit("enum_pairings supports m <= 16");
  std::vector<Partition> out;
  std::vector<std::vector<int>> acc;
  // Pair the first unmatched position with a partner at odd offset (even gap)
  // and recurse on the remainder; crossings are filtered at the end.
  std::function<void(const std::vector<int>&)> rec = [&](const std::vector<int>& pos) {
    if (pos.empty()) {
      Partition p = Partition::from_blocks(m, acc);
      if (p.is_noncrossing()) out.push_back(p);
      return;
    }
    for (std::size_t t = 1; t < pos.size(); t += 2) {
      acc.push_back({pos.front(), pos[t]});
      std::vector<int> rest;
      for (std::size_t q = 1; q < pos.size(); ++q)
        if (q != t) rest.push_back(pos[q]);
      rec(rest);
      acc.pop_back();
    }
  };
  std::vector<int> positions(m);
  std::iota(positions.begin(), positions.end(), 1);
  rec(positions);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Partition> enum_nc_brute(int m) {
  if (m < 1 || m > 10) throw SizeLimit("enum_nc_brute supports m <= 10");
  // restricted growth strings
  std::vector<Partition> out;
  std::vector<int> rgs(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int maxv) {
    if (pos == m) {
      std::vector<std::vector<int>> blocks(maxv + 1);
      for (int t = 0; t < m; ++t) blocks[rgs[t]].push_back(t + 1);
      Partition p = Partition::from_blocks(m, blocks);
      if (p.is_noncrossing()) out.push_back(p);
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[pos] = v;
      rec(pos + 1, std::max(maxv, v));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  std::sort(out.begin(), out.end());
  return out;
}

//==========================================================================
// The nc[.] map and admissible configurations
//==========================================================================

namespace {

void nc_rec(const std::vector<int>& config, int lo, int hi,
            std::vector<std::vector<int>>& blocks) {
  if (lo > hi) return;
  int mn = config[lo];
  for (int t = lo; t <= hi; ++t) mn = std::min(mn, config[t]);
  std::vector<int> block;
  for (int t = lo; t <= hi; ++t)
    if (config[t] == mn) block.push_back(t + 1);  // 1-based positions
  blocks.push_back(block);
  int prev = -1;
  for (int t = lo; t <= hi; ++t) {
    if (config[t] == mn) {
      if (prev >= 0 && prev + 1 <= t - 1) nc_rec(config, prev + 1, t - 1, blocks);
      prev = t;
    }
  }
  if (prev + 1 <= hi) nc_rec(config, prev + 1, hi, blocks);
}

}  // namespace

Partition nc_of(const std::vector<int>& config) {
  const int m = static_cast<int>(config.size());
  if (m < 1) throw ConfigError("empty configuration");
  std::vector<std::vector<int>> blocks;
  nc_rec(config, 0, m - 1, blocks);
  return Partition::from_blocks(m, std::move(blocks));
}

std::vector<int> canonical_config(const Partition& gamma) {
  std::vector<int> config(gamma.m, 0);
  // blocks are sorted by minimum: label = 1 + block rank
  for (std::size_t i = 0; i < gamma.blocks.size(); ++i)
    for (int e : gamma.blocks[i]) config[e - 1] = static_cast<int>(i) + 1;
  return config;
}

std::int64_t admissible_count_brute(const Partition& gamma, int N, int k) {
  const int m = gamma.m;
  double total = std::pow(static_cast<double>(N), m);
  if (total > 3e8) throw SizeLimit("brute force over N^m too large");
  std::vector<int> config(m, 1);
  std::int64_t count = 0;
  while (true) {
    bool match = true;
    if (k >= 0) {
      std::vector<bool> used(N + 1, false);
      int distinct = 0;
      for (int v : config)
        if (!used[v]) {
          used[v] = true;
          ++distinct;
        }
      match = (distinct == k);
    }
    if (match && nc_of(config) == gamma) ++count;
    int pos = m - 1;
    while (pos >= 0 && config[pos] == N) {
      config[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++config[pos];
  }
  return count;
}

namespace {

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

std::int64_t admissible_count(const Partition& gamma, int N, int k) {
  const int m = gamma.m;
  const double total = std::pow(static_cast<double>(N), m);
  if (total <= 3e8) return admissible_count_brute(gamma, N, k);
  // card(a(gamma,N,k)) = C(N,k) card(a(gamma,k,k)); sum over k when k = -1.
  if (k >= 0) return binom(N, k) * admissible_count_brute(gamma, k, k);
  std::int64_t acc = 0;
  for (int kk = 1; kk <= m; ++kk)
    acc += binom(N, kk) * admissible_count_brute(gamma, kk, kk);
  return acc;
}

//==========================================================================
// Stack-admissible labelings (weakly monotone Gaussian configurations)
//==========================================================================

std::int64_t stack_label_count(const Partition& gamma, int N) {
  if (!gamma.is_noncrossing()) throw CrossingPartition("stack_label_count");
  const int nb = static_cast<int>(gamma.blocks.size());
  // parent = innermost block whose span strictly contains this block's span
  std::vector<int> parent(nb, -1);
  auto span = [&](int i) {
    return std::pair<int, int>(gamma.blocks[i].front(), gamma.blocks[i].back());
  };
  for (int i = 0; i < nb; ++i) {
    int best = -1;
    for (int j = 0; j < nb; ++j) {
      if (i == j) continue;
      auto [lo, hi] = span(j);
      if (lo < span(i).first && span(i).second < hi) {
        if (best < 0 || (span(j).first > span(best).first)) best = j;
      }
    }
    parent[i] = best;
  }
  std::vector<std::vector<int>> children(nb);
  std::vector<int> roots;
  for (int i = 0; i < nb; ++i) {
    if (parent[i] < 0)
      roots.push_back(i);
    else
      children[parent[i]].push_back(i);
  }
  // h(node, vmin) = #labelings of the subtree with label(node) >= vmin
  std::vector<std::vector<std::int64_t>> memo(
      nb, std::vector<std::int64_t>(N + 2, -1));
  std::function<std::int64_t(int, int)> h = [&](int node, int vmin) -> std::int64_t {
    if (vmin > N) return 0;
    std::int64_t& slot = memo[node][vmin];
    if (slot >= 0) return slot;
    std::int64_t acc = 0;
    for (int v = vmin; v <= N; ++v) {
      std::int64_t prod = 1;
      for (int c : children[node]) prod *= h(c, v);
      acc += prod;
    }
    return slot = acc;
  };
  std::int64_t total = 1;
  for (int r : roots) total *= h(r, 1);
  return total;
}

//==========================================================================
// Partition values
//==========================================================================

namespace {

Mat pair_value_impl(const Partition& gamma, const std::vector<Mat>& b,
                    const CPMap& eta, Rng* shuffle) {
  const int m = gamma.m;
  if (static_cast<int>(b.size()) != m - 1)
    throw DimensionMismatch("pair_value needs m-1 coefficients");
  if (!gamma.is_pairing()) throw CrossingPartition("not a pair partition");
  const int d = eta.dim();

  // Work list: alternating [value] X_block [value] X_block ... [value];
  // values[t] sits between marker t-1 and marker t.
  std::vector<int> owner(m + 1, 0);
  for (std::size_t i = 0; i < gamma.blocks.size(); ++i)
    for (int e : gamma.blocks[i]) owner[e] = static_cast<int>(i);
  std::vector<int> markers(m);
  for (int t = 0; t < m; ++t) markers[t] = owner[t + 1];
  std::vector<Mat> values;
  values.push_back(Mat::Identity(d, d));
  for (const Mat& bb : b) values.push_back(bb);
  values.push_back(Mat::Identity(d, d));

  while (!markers.empty()) {
    std::vector<int> eligible;
    for (std::size_t t = 0; t + 1 < markers.size(); ++t)
      if (markers[t] == markers[t + 1]) eligible.push_back(static_cast<int>(t));
    if (eligible.empty()) throw CrossingPartition("collapse is stuck");
    int pick = eligible.front();
    if (shuffle && eligible.size() > 1)
      pick = eligible[shuffle->uniform_int(0, static_cast<int>(eligible.size()) - 1)];
    // replace X values[pick+1] X by eta(values[pick+1]), merging neighbors
    Mat merged = values[pick] * eta.apply(values[pick + 1]) * values[pick + 2];
    values.erase(values.begin() + pick, values.begin() + pick + 3);
    values.insert(values.begin() + pick, merged);
    markers.erase(markers.begin() + pick, markers.begin() + pick + 2);
  }
  return values.front();
}

}  // namespace

Mat pair_value(const Partition& gamma, const std::vector<Mat>& b,
               const CPMap& eta) {
  return pair_value_impl(gamma, b, eta, nullptr);
}

Mat pair_value_shuffled(const Partition& gamma, const std::vector<Mat>& b,
                        const CPMap& eta, Rng& rng) {
  return pair_value_impl(gamma, b, eta, &rng);
}

Mat config_value_fock(const std::vector<int>& config, const std::vector<Mat>& b,
                      const CPMap& eta) {
  const int m = static_cast<int>(config.size());
  if (static_cast<int>(b.size()) != m - 1)
    throw DimensionMismatch("config_value_fock needs m-1 coefficients");
  const int d = eta.dim();
  const int K = *std::max_element(config.begin(), config.end());
  auto spec = std::make_shared<const ModuleSpec>(
      d, K, m, FockMode::kWeaklyMonotone, std::vector<CPMap>(K, eta));
  FockOp word = FockOp::gauss(GenVec::zeta(config[0], d));
  for (int t = 1; t < m; ++t)
    word = word * FockOp::lmul(b[t - 1]) * FockOp::gauss(GenVec::zeta(config[t], d));
  return vacuum_phi(spec, word);
}

Mat value_via_fock(const Partition& gamma, const std::vector<Mat>& b,
                   const CPMap& eta) {
  return config_value_fock(canonical_config(gamma), b, eta);
}

Mat value_via_moments(const Partition& gamma, const std::vector<Mat>& b,
                      const MomentSpec& mu) {
  const std::vector<int> config = canonical_config(gamma);
  const int m = gamma.m;
  if (m > mu.max_order()) throw OrderExceeded("value_via_moments");
  const int K = static_cast<int>(gamma.blocks.size());
  const int d = mu.dim();
  Word w;
  for (int t = 0; t < m; ++t) {
    Mat left = (t == 0) ? Mat(Mat::Identity(d, d)) : b[t - 1];
    w.letters.push_back(Letter{config[t], left});
  }
  w.trailing = Mat::Identity(d, d);
  return monotone_eval_multi(w, std::vector<MomentSpec>(K, mu));
}

//==========================================================================
// CLT moments
//==========================================================================

Mat clt_limit_moment(int m, const std::vector<Mat>& b, const CPMap& eta) {
  if (m > 10) throw SizeLimit("clt_limit_moment supports m <= 10");
  const int d = eta.dim();
  if (m % 2 != 0) return Mat::Zero(d, d);
  const int k = m / 2;
  Mat acc = Mat::Zero(d, d);
  for (const Partition& gamma : enum_pairings(m)) {
    const std::int64_t cnt = admissible_count_brute(gamma, k, k);
    if (cnt == 0) continue;
    acc += static_cast<double>(cnt) * pair_value(gamma, b, eta);
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return acc / fact;
}

Mat finite_n_moment(int m, int N, const std::vector<Mat>& b, const CPMap& eta) {
  if (m > 10) throw SizeLimit("finite_n_moment supports m <= 10");
  const int d = eta.dim();
  Mat acc = Mat::Zero(d, d);
  if (m % 2 == 0) {
    for (const Partition& gamma : enum_pairings(m)) {
      const std::int64_t cnt = stack_label_count(gamma, N);
      if (cnt == 0) continue;
      acc += static_cast<double>(cnt) * pair_value(gamma, b, eta);
    }
  }
  return acc / std::pow(static_cast<double>(N), m / 2.0);
}

Mat finite_n_moment_fock(int m, int N, const std::vector<Mat>& b,
                         const CPMap& eta) {
  const int d = eta.dim();
  auto spec = std::make_shared<const ModuleSpec>(
      d, N, m, FockMode::kWeaklyMonotone, std::vector<CPMap>(N, eta));
  FockOp s = FockOp::zero();
  for (int i = 1; i <= N; ++i) s = s + FockOp::gauss(GenVec::zeta(i, d));
  FockOp word = s;
  for (int t = 1; t < m; ++t) word = word * FockOp::lmul(b[t - 1]) * s;
  return vacuum_phi(spec, word) / std::pow(static_cast<double>(N), m / 2.0);
}

}  // namespace monopro
