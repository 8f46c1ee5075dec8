#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace qwgrow {

/// Supplier of raw 64-bit words. Swap in hardware or recorded entropy here.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual std::uint64_t next_u64() = 0;
};

/// std::mt19937_64, whose output sequence for a given seed is fixed by the standard.
class Mt19937Source final : public EntropySource {
 public:
  explicit Mt19937Source(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Replays a fixed list of words; throws once exhausted. Used to force outcomes.
class ScriptedSource final : public EntropySource {
 public:
  explicit ScriptedSource(std::vector<std::uint64_t> words) : words_(std::move(words)) {}

  /// Words that RandomStream::uniform() maps back to exactly these values in [0, 1).
  static std::unique_ptr<ScriptedSource> from_uniforms(const std::vector<double>& values);

  std::uint64_t next_u64() override;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t cursor_ = 0;
};

/*
 * Single-owner stream of uniform variates.
 *
 * uniform() takes the top 53 bits of one 64-bit word: u = (w >> 11) * 2^-53,
 * which lies in [0, 1). uniform_open_closed() returns 1 - uniform(), in (0, 1].
 * Every variate consumes exactly one word, and draws() counts them.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  explicit RandomStream(std::unique_ptr<EntropySource> source);

  RandomStream(RandomStream&&) noexcept = default;
  RandomStream& operator=(RandomStream&&) noexcept = default;

  double uniform();
  double uniform_open_closed() { return 1.0 - uniform(); }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::unique_ptr<EntropySource> source_;
  std::uint64_t draws_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream (a, b) of `base`; used as (tau index, trial index).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace qwgrow
