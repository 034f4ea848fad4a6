#ifndef MONOPRO_NCPART_HPP_
#define MONOPRO_NCPART_HPP_

#include <cstdint>
#include <vector>

#include "monopro/cfree.hpp"
#include "monopro/cpmap.hpp"
#include "monopro/fock.hpp"
#include "monopro/matrix.hpp"

namespace monopro {

// Partition of {1..m}, blocks sorted internally and by minimum element.
struct Partition {
  int m = 0;
  std::vector<std::vector<int>> blocks;

  static Partition from_blocks(int m, std::vector<std::vector<int>> blocks);
  bool is_noncrossing() const;
  bool is_pairing() const;
  bool operator==(const Partition& other) const {
    return m == other.m && blocks == other.blocks;
  }
  bool operator<(const Partition& other) const {
    return blocks < other.blocks;
  }
};

// All non-crossing partitions of {1..m}; |NC(m)| = Catalan(m).  m <= 12.
std::vector<Partition> enum_nc(int m);
// All non-crossing pair partitions of {1..m}; m even, <= 16.
std::vector<Partition> enum_pairings(int m);
// Brute-force oracle: all set partitions filtered by the crossing predicate.
std::vector<Partition> enum_nc_brute(int m);

std::uint64_t catalan(int n);

// The nc[i_1, ..., i_m] map: block of minima, then recursive splitting.
Partition nc_of(const std::vector<int>& config);

// Admissible configuration for gamma with exactly #blocks distinct values:
// block labels ordered by block minimum.
std::vector<int> canonical_config(const Partition& gamma);

// Number of configs with values in {1..N} (exactly k distinct values when
// k >= 0) whose nc partition equals gamma.  Brute force over N^m tuples when
// feasible; the binomial identity card = C(N,k) card(a(gamma,k,k)) extends
// larger N.  Throws SizeLimit when neither route applies.
std::int64_t admissible_count(const Partition& gamma, int N, int k = -1);
// Pure brute force (oracle); throws SizeLimit if N^m is too large.
std::int64_t admissible_count_brute(const Partition& gamma, int N, int k = -1);

// Number of block labelings ell: blocks -> {1..N} with ell(child) >=
// ell(parent) for directly nested blocks: the configurations realized by the
// weakly monotone Gaussian family.  gamma must be non-crossing.
std::int64_t stack_label_count(const Partition& gamma, int N);

// V(gamma, b_1..b_{m-1}) for a non-crossing pairing: innermost-pair collapse
// X b X -> eta(b).  Throws CrossingPartition if the collapse gets stuck.
Mat pair_value(const Partition& gamma, const std::vector<Mat>& b,
               const CPMap& eta);
// Same, collapsing eligible pairs in a shuffled order (order independence).
Mat pair_value_shuffled(const Partition& gamma, const std::vector<Mat>& b,
                        const CPMap& eta, Rng& rng);

// V(gamma, b) evaluated on the weakly monotone module with Gaussian
// generators of covariance eta, using the canonical admissible config.
Mat value_via_fock(const Partition& gamma, const std::vector<Mat>& b,
                   const CPMap& eta);
// Direct Fock evaluation of a given admissible configuration.
Mat config_value_fock(const std::vector<int>& config, const std::vector<Mat>& b,
                      const CPMap& eta);
// V(gamma, b) for general moment data: monotonically independent copies of
// the given distribution, evaluated with the multi-algebra monotone product.
Mat value_via_moments(const Partition& gamma, const std::vector<Mat>& b,
                      const MomentSpec& mu);

// Operator-valued arcsine limit moment:
//   nu_m = (1/(m/2)!) sum_{gamma in PP(m)} V(gamma, b) card(a(gamma,m/2,m/2));
// zero for odd m.
Mat clt_limit_moment(int m, const std::vector<Mat>& b, const CPMap& eta);

// Phi(S_N b_1 S_N ... b_{m-1} S_N) / N^{m/2} for S_N = sum_i G(zeta_i),
// computed combinatorially over pairings with stack-admissible label counts.
Mat finite_n_moment(int m, int N, const std::vector<Mat>& b, const CPMap& eta);
// Direct Fock evaluation of the same quantity (cross-check oracle).
Mat finite_n_moment_fock(int m, int N, const std::vector<Mat>& b,
                         const CPMap& eta);

}  // namespace monopro

#endif  // MONOPRO_NCPART_HPP_
