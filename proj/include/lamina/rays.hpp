#pragma once

// Geodesic ray streams, including the poisoned ray
//
//     w = a_r^k_r v_r t_r a_{r+1}^k_{r+1} v_{r+1} t_{r+1} ...
//
// assembled from pieces of a leaf ray: v_m is a recurring length-m factor,
// v_m u_m v_m and v_m t_m v_{m+1} occur in the leaf ray, a_m = v_m u_m, and
// the power k_m is large enough that the block a_m^k_m is certified not to
// fellow-travel any leaf. Every block carries a replayable certificate.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "lamina/leaflang.hpp"
#include "lamina/ray_stream.hpp"
#include "lamina/words.hpp"

namespace lamina {

/// The stream w w w ... Throws NotCyclicallyReduced.
RayStream periodic_ray(const Alphabet& alphabet, const ReducedWord& period);

/// Finite stream: the reduced concatenation of `pieces`. Extension past its
/// end throws RayExhausted.
RayStream explicit_ray(const Alphabet& alphabet, const std::vector<ReducedWord>& pieces);

/// One membership lookup, recorded so it can be replayed.
struct MembershipQuery {
  ReducedWord queried;
  std::size_t horizon = 0;
  std::string language_hash;
  bool member = false;
};

struct NonLeafBlockCertificate {
  std::size_t index = 0;  // m
  ReducedWord period;     // a_m
  std::size_t power = 0;  // k_m
  ReducedWord block;      // a_m^k_m
  ReducedWord truncation; // block minus 20*delta letters at each end
  MembershipQuery query;  // on the 2*delta-trimmed core of the truncation
  bool non_leaf = false;
};

struct WInfinityStage {
  std::size_t m = 0;
  ReducedWord v;      // v_m
  ReducedWord u;      // u_m
  ReducedWord t;      // t_m
  ReducedWord alpha;  // v_m u_m
  std::size_t kappa = 0;
  /// max_leaf_overlap of alpha at search bound = horizon.
  std::size_t overlap_bound = 0;
  /// Longest member factor of alpha^inf.
  std::size_t longest_leaf_power = 0;
  /// Offsets in the examined leaf-ray prefix.
  std::size_t v_position = 0;
  std::size_t vuv_position = 0;
  std::size_t vtv_position = 0;
  /// Offset of the block a_m^k_m inside the constructed ray.
  std::size_t offset = 0;
  NonLeafBlockCertificate certificate;

  std::size_t period() const noexcept { return alpha.size(); }
  std::size_t length() const noexcept { return kappa * alpha.size() + v.size() + t.size(); }
};

struct WInfinityScheme {
  HyperbolicityParams params;
  std::string language_hash;
  std::size_t horizon = 0;
  Provenance leaf;
  std::size_t leaf_prefix_examined = 0;
  std::vector<WInfinityStage> stages;
  /// Letters covered by the completed stages.
  std::size_t length = 0;
  /// The constructed prefix is freely reduced, hence an r-local geodesic in
  /// the tree.
  bool local_geodesic = false;
  /// Every length-r factor of the prefix occurs in the examined leaf prefix.
  bool r_factors_in_leaf = false;
};

struct WInfinityBuild {
  RayStream ray;
  WInfinityScheme scheme;
};

/// Builds at least `target_length` letters of the poisoned ray from the
/// first `search_budget` letters of `leaf_ray`. Throws SearchBudgetExhausted
/// and HorizonTooSmall.
WInfinityBuild build_w_infinity(std::shared_ptr<const LeafLanguage> language,
                                const HyperbolicityParams& params, RayStream& leaf_ray,
                                std::size_t target_length, std::size_t search_budget);

/// Scheme of a stream produced by build_w_infinity, reflecting every stage
/// materialized so far; nullptr for other streams. Not synchronized with a
/// concurrent extend().
const WInfinityScheme* w_infinity_scheme(const RayStream& ray);

/// Materializes and returns the first `new_length` letters; producer errors
/// propagate.
ReducedWord extend(RayStream& ray, std::size_t new_length);

/// Certificate for the block alpha^kappa: truncation by 20*delta, then the
/// coarse-leaf test. Throws HorizonTooSmall when the core exceeds the horizon.
NonLeafBlockCertificate certify_block(const LeafLanguage& language, const HyperbolicityParams& params,
                                      std::size_t index, const ReducedWord& alpha, std::size_t kappa);

struct ReplayResult {
  bool ok = false;
  std::string reason;
};

/// Recomputes the block, its truncation and the membership verdict.
ReplayResult replay_block(const NonLeafBlockCertificate& certificate, const LeafLanguage& language,
                          const HyperbolicityParams& params);

/// C-truncation of a segment: drops `c` letters from each end.
ReducedWord truncate(const ReducedWord& w, std::size_t c);

}  // namespace lamina
