#pragma once

// Train-track maps on a rose: substitution-style self-maps of a free basis.
//
// A map sends each positive generator to a nonempty reduced word; the image
// of an inverse generator is the inverse word. Iterating such a map on a
// generator produces the words f^n(e) whose factors are the leaf segments of
// the stable lamination. That description is only valid while iterates never
// cancel, which verify_train_track checks up to a chosen depth.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lamina/ray_stream.hpp"
#include "lamina/words.hpp"

namespace lamina {

struct VerificationReport;

class TrainTrackMap {
 public:
  /// `images[i]` is the image of generator i. Throws InvalidMap when an image
  /// is empty or when `primitive` is set but the transition matrix is not.
  TrainTrackMap(Alphabet alphabet, std::vector<ReducedWord> images, bool primitive = false);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  /// Image of any letter; inverse letters map to inverted images.
  const ReducedWord& image(Letter x) const noexcept { return images_[code(x)]; }
  bool flagged_primitive() const noexcept { return primitive_; }
  std::size_t verified_depth() const noexcept { return verified_depth_; }
  std::size_t max_image_length() const noexcept;

  /// Content hash of the definition file; empty for maps built in code.
  const std::string& source_hash() const noexcept { return source_hash_; }
  const std::string& source_name() const noexcept { return source_name_; }
  /// Depth requested by `verify_depth = N` in the definition file (0 if absent).
  std::size_t requested_verify_depth() const noexcept { return requested_verify_depth_; }

  /// Unsigned occurrence counts: entry [i][j] counts generator i (either
  /// sign) in the image of generator j.
  std::vector<std::vector<std::uint64_t>> transition_matrix() const;

 private:
  friend VerificationReport verify_train_track(TrainTrackMap& map, std::size_t depth);
  friend TrainTrackMap parse_map(std::string_view text, const std::string& source_name);

  Alphabet alphabet_;
  std::vector<ReducedWord> images_;  // indexed by letter code
  bool primitive_ = false;
  std::size_t verified_depth_ = 0;
  std::size_t requested_verify_depth_ = 0;
  std::string source_hash_;
  std::string source_name_;
};

struct Turn {
  Letter first;
  Letter second;
  bool operator==(const Turn&) const = default;
};

struct VerificationReport {
  std::size_t depth = 0;
  /// Turns seen in iterates f^k(e), k <= depth, in order of discovery.
  std::vector<Turn> turns;
  /// Number of previously unseen turns discovered at each iterate k = 1..depth.
  std::vector<std::size_t> new_turns_per_iterate;
};

/// Checks that no turn occurring in f^k(e), k <= depth, cancels under the
/// map; records verified_depth on success. Throws CancellationDetected.
VerificationReport verify_train_track(TrainTrackMap& map, std::size_t depth);

/// Some power of the boolean transition matrix is positive, tested up to
/// exponent n^2.
bool is_primitive(const std::vector<std::vector<std::uint64_t>>& matrix);

/// n-fold image of w, freely reduced at every stage.
ReducedWord apply(const TrainTrackMap& map, const ReducedWord& w, std::size_t n);

struct FixedRayScheme {
  std::shared_ptr<const TrainTrackMap> map;
  Letter seed{};
};

/// The infinite word fixed by the map whose prefixes are f^n(seed).
/// Throws SeedNotExpanding unless image(seed) starts with seed and is longer.
RayStream fixed_ray(const FixedRayScheme& scheme);

/// Map definition text:
///
///     alphabet a b c
///     a -> a b
///     b -> a c
///     c -> a
///     primitive
///     verify_depth = 8
///
/// `#` starts a comment. The content hash of `text` becomes source_hash().
TrainTrackMap parse_map(std::string_view text, const std::string& source_name = "<map>");
TrainTrackMap read_map_file(const std::filesystem::path& path);

/// Reads and verifies to the requested depth (default 8).
TrainTrackMap load_map(const std::filesystem::path& path);

}  // namespace lamina
