#include "qwgrow/random.hpp"

#include <cmath>

#include "qwgrow/error.hpp"

namespace qwgrow {

namespace {
constexpr double kTwoToMinus53 = 1.0 / 9007199254740992.0;
}

std::unique_ptr<ScriptedSource> ScriptedSource::from_uniforms(const std::vector<double>& values) {
  std::vector<std::uint64_t> words;
  words.reserve(values.size());
  for (double u : values) {
    if (!(u >= 0.0 && u < 1.0)) throw InvalidArgument("scripted uniform must lie in [0, 1)");
    const auto mantissa = static_cast<std::uint64_t>(std::ldexp(u, 53));
    words.push_back(mantissa << 11);
  }
  return std::make_unique<ScriptedSource>(std::move(words));
}

std::uint64_t ScriptedSource::next_u64() {
  if (cursor_ >= words_.size()) throw Error("scripted entropy source exhausted");
  return words_[cursor_++];
}

RandomStream::RandomStream(std::uint64_t seed)
    : source_(std::make_unique<Mt19937Source>(seed)) {}

RandomStream::RandomStream(std::unique_ptr<EntropySource> source) : source_(std::move(source)) {
  if (!source_) throw InvalidArgument("RandomStream: null entropy source");
}

double RandomStream::uniform() {
  ++draws_;
  return static_cast<double>(source_->next_u64() >> 11) * kTwoToMinus53;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(mix64(base) ^ a) ^ b);
}

}  // namespace qwgrow
