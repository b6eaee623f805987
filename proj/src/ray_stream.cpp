#include "lamina/ray_stream.hpp"

#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace lamina {

std::string to_string(RaySource source) {
  switch (source) {
    case RaySource::fixed_point:
      return "fixed";
    case RaySource::periodic:
      return "periodic";
    case RaySource::w_infinity:
      return "winf";
    case RaySource::explicit_words:
      return "explicit";
  }
  return "unknown";
}

struct RayStream::State {
  Alphabet alphabet;
  std::unique_ptr<RayProducer> producer;
  Provenance provenance;
  mutable std::shared_mutex mutex;
  std::vector<Letter> letters;
};

RayStream::RayStream(Alphabet alphabet, std::unique_ptr<RayProducer> producer,
                     Provenance provenance)
    : state_(std::make_unique<State>()) {
  if (!producer) throw std::invalid_argument("RayStream requires a producer");
  state_->alphabet = std::move(alphabet);
  state_->producer = std::move(producer);
  state_->provenance = std::move(provenance);
}

RayStream::RayStream(RayStream&&) noexcept = default;
RayStream& RayStream::operator=(RayStream&&) noexcept = default;
RayStream::~RayStream() = default;

ReducedWord RayStream::extend(std::size_t length) {
  std::unique_lock lock(state_->mutex);
  auto& letters = state_->letters;
  if (letters.size() < length) {
    const std::size_t old = letters.size();
    state_->producer->extend(letters, length);
    if (letters.size() < length) throw std::logic_error("ray producer did not extend far enough");
    const std::size_t from = old == 0 ? 0 : old - 1;
    if (!is_reduced(std::span<const Letter>(letters).subspan(from))) {
      letters.resize(old);
      throw std::logic_error("ray producer emitted a cancelling junction");
    }
  }
  return ReducedWord::from_reduced({letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(length)});
}

ReducedWord RayStream::prefix(std::size_t length) const {
  std::shared_lock lock(state_->mutex);
  const auto& letters = state_->letters;
  if (length > letters.size()) throw std::out_of_range("RayStream::prefix beyond materialized length");
  return ReducedWord::from_reduced({letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(length)});
}

std::size_t RayStream::materialized() const {
  std::shared_lock lock(state_->mutex);
  return state_->letters.size();
}

const Alphabet& RayStream::alphabet() const noexcept { return state_->alphabet; }
const Provenance& RayStream::provenance() const noexcept { return state_->provenance; }
RayProducer& RayStream::producer() noexcept { return *state_->producer; }
const RayProducer& RayStream::producer() const noexcept { return *state_->producer; }

}  // namespace lamina
