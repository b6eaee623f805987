#pragma once

// Lazily extendable infinite reduced words.
//
// A RayStream owns a materialized prefix and a producer that knows how to
// append more letters. Extension is exclusive; reads of the materialized
// prefix may run concurrently (single writer, many readers).

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "lamina/words.hpp"

namespace lamina {

enum class RaySource { fixed_point, periodic, w_infinity, explicit_words };

std::string to_string(RaySource source);

struct Provenance {
  RaySource source = RaySource::explicit_words;
  std::string description;
  /// Content hash of the map file the ray derives from, if any.
  std::string source_hash;
};

class RayProducer {
 public:
  virtual ~RayProducer() = default;
  /// Appends letters to `prefix` until it holds at least `length` letters.
  /// May overshoot. The result must stay freely reduced.
  virtual void extend(std::vector<Letter>& prefix, std::size_t length) = 0;
};

class RayStream {
 public:
  RayStream(Alphabet alphabet, std::unique_ptr<RayProducer> producer, Provenance provenance);
  RayStream(RayStream&&) noexcept;
  RayStream& operator=(RayStream&&) noexcept;
  ~RayStream();

  /// Materializes at least `length` letters and returns exactly that prefix.
  ReducedWord extend(std::size_t length);
  /// Already-materialized prefix; throws std::out_of_range past it.
  ReducedWord prefix(std::size_t length) const;
  std::size_t materialized() const;

  const Alphabet& alphabet() const noexcept;
  const Provenance& provenance() const noexcept;
  RayProducer& producer() noexcept;
  const RayProducer& producer() const noexcept;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace lamina
