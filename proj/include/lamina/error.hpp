#pragma once

// Exception hierarchy shared by every lamina module. Each error names the
// failing contract so callers (and the CLI) can report it without parsing
// messages.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lamina {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownLetter : public Error {
 public:
  explicit UnknownLetter(const std::string& symbol)
      : Error("unknown letter '" + symbol + "'"), symbol_(symbol) {}
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::string symbol_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& what)
      : Error(where + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidMap : public Error {
 public:
  using Error::Error;
};

/// A turn x.y whose images cancel, with the iterate where it first appeared.
class CancellationDetected : public Error {
 public:
  CancellationDetected(std::string turn, std::string generator, std::size_t iterate)
      : Error("cancellation at turn '" + turn + "' (first seen in f^" +
              std::to_string(iterate) + "(" + generator + "))"),
        turn_(std::move(turn)),
        generator_(std::move(generator)),
        iterate_(iterate) {}
  const std::string& turn() const noexcept { return turn_; }
  const std::string& generator() const noexcept { return generator_; }
  std::size_t iterate() const noexcept { return iterate_; }

 private:
  std::string turn_;
  std::string generator_;
  std::size_t iterate_;
};

class SeedNotExpanding : public Error {
 public:
  using Error::Error;
};

class HorizonTooLarge : public Error {
 public:
  using Error::Error;
};

class NotStabilized : public Error {
 public:
  explicit NotStabilized(std::size_t cap)
      : Error("factor language did not stabilize before depth cap " + std::to_string(cap)),
        cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

class BeyondHorizon : public Error {
 public:
  BeyondHorizon(std::size_t length, std::size_t horizon)
      : Error("word of length " + std::to_string(length) + " exceeds language horizon " +
              std::to_string(horizon)) {}
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class NotCyclicallyReduced : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class BeyondBall : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExhausted : public Error {
 public:
  SearchBudgetExhausted(std::size_t index, const std::string& piece)
      : Error("search budget exhausted at m=" + std::to_string(index) + " while looking for " +
              piece),
        index_(index),
        piece_(piece) {}
  std::size_t index() const noexcept { return index_; }
  const std::string& piece() const noexcept { return piece_; }

 private:
  std::size_t index_;
  std::string piece_;
};

class HorizonTooSmall : public Error {
 public:
  using Error::Error;
};

class DepthTooSmall : public Error {
 public:
  using Error::Error;
};

class DepthMismatch : public Error {
 public:
  using Error::Error;
};

class RayExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace lamina
