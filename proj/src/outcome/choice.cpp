#include "fvf/choice.hpp"

#include <charconv>
#include <stdexcept>

namespace fvf {

ChoiceScript::ChoiceScript(std::vector<Int> script, Exhaustion on_exhaustion, std::uint64_t seed,
                           Ranges ranges)
    : script_(std::move(script)), on_exhaustion_(on_exhaustion), rng_(seed), ranges_(ranges) {}

ChoiceScript ChoiceScript::random(std::uint64_t seed, Ranges ranges) {
  return ChoiceScript({}, Exhaustion::Random, seed, ranges);
}

std::optional<Int> ChoiceScript::next(ChoiceTag tag) {
  Int v;
  if (pos_ < script_.size()) {
    v = script_[pos_++];
  } else if (on_exhaustion_ == Exhaustion::Random) {
    Int lo = tag == ChoiceTag::Address ? ranges_.address_lo : ranges_.value_lo;
    Int hi = tag == ChoiceTag::Address ? ranges_.address_hi : ranges_.value_hi;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    v = lo + static_cast<Int>(rng_() % span);
  } else {
    return std::nullopt;
  }
  consumed_.push_back(v);
  return v;
}

std::vector<Int> parse_choice_list(const std::string& csv) {
  std::vector<Int> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string::npos) end = csv.size();
    std::string item = csv.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (item.empty()) {
      if (csv.find_first_not_of(' ') == std::string::npos) return out;
      throw std::invalid_argument("empty entry in choice list");
    }
    Int v{};
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw std::invalid_argument("not an integer: " + item);
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finaliser
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok:
      return "ok";
    case RunStatus::Failed:
      return "failed";
    case RunStatus::Blocked:
      return "blocked";
    case RunStatus::ScriptExhausted:
      return "script-exhausted";
  }
  return "?";
}

}  // namespace fvf
