#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fvf/outcome.hpp"

namespace fvf {

// Supplies integers for demonic integer choices: first from a fixed script,
// then (optionally) from std::mt19937_64. Random values are lo + (x mod span)
// so streams are identical across standard libraries.
struct ChoiceRanges {
  Int address_lo = 1, address_hi = Int{1} << 24;
  Int value_lo = -1000, value_hi = 1000;
};

class ChoiceScript {
 public:
  enum class Exhaustion { Fail, Random };
  using Ranges = ChoiceRanges;

  explicit ChoiceScript(std::vector<Int> script = {}, Exhaustion on_exhaustion = Exhaustion::Fail,
                        std::uint64_t seed = 0, Ranges ranges = {});
  static ChoiceScript random(std::uint64_t seed, Ranges ranges = {});

  // nullopt when the script is exhausted and the policy is Fail.
  std::optional<Int> next(ChoiceTag tag);

  // Every value handed out so far; replaying it reproduces the run.
  const std::vector<Int>& consumed() const { return consumed_; }

 private:
  std::vector<Int> script_;
  std::size_t pos_ = 0;
  Exhaustion on_exhaustion_;
  std::mt19937_64 rng_;
  Ranges ranges_;
  std::vector<Int> consumed_;
};

// Parses "1,2,-3"; throws std::invalid_argument.
std::vector<Int> parse_choice_list(const std::string& csv);

// Well-mixed per-trial seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class RunStatus { Ok, Failed, Blocked, ScriptExhausted };
std::string to_string(RunStatus s);

struct TraceEvent {
  MessageKind kind;
  std::string text;
};

template <class S, class A>
struct Resolution {
  RunStatus status = RunStatus::Blocked;
  std::optional<S> state;
  std::optional<A> answer;
  std::vector<TraceEvent> events;  // messages on the decisive path

  std::string failure() const {
    for (auto it = events.rbegin(); it != events.rend(); ++it)
      if (it->kind == MessageKind::Failure) return it->text;
    return {};
  }
};

// Resolves an outcome against a script. Integer choices take the next script
// value; boolean choices are both explored, left first. A failing branch wins,
// then script exhaustion, then the first successful branch; otherwise blocked,
// keeping the events of the blocked branch with the longest trace.
template <class S, class A>
Resolution<S, A> resolve(const Outcome<S, A>& root, ChoiceScript& src) {
  using K = typename Outcome<S, A>::Kind;
  Resolution<S, A> r;
  Outcome<S, A> cur = root;
  auto splice = [&r](Resolution<S, A> sub) {
    r.status = sub.status;
    r.state = std::move(sub.state);
    r.answer = std::move(sub.answer);
    r.events.insert(r.events.end(), sub.events.begin(), sub.events.end());
    return std::move(r);
  };
  while (true) {
    if (cur.is_message()) {
      r.events.push_back({cur.message_kind(), cur.text()});
      cur = cur.rest();
      continue;
    }
    if (cur.is_single()) {
      r.status = RunStatus::Ok;
      r.state = cur.state();
      r.answer = cur.answer();
      return r;
    }
    bool demonic = cur.kind() == K::Demonic;
    switch (cur.domain()) {
      case IndexDomain::Empty:
        r.status = demonic ? RunStatus::Blocked : RunStatus::Failed;
        return r;
      case IndexDomain::Opaque:
        throw NonFinitaryOutcome();
      case IndexDomain::Int: {
        auto v = src.next(cur.tag());
        if (!v) {
          r.status = RunStatus::ScriptExhausted;
          return r;
        }
        cur = cur.branch(*v);
        continue;
      }
      case IndexDomain::Bool: {
        auto a = resolve(cur.branch(true), src);
        auto bad = [](RunStatus s) { return s == RunStatus::Failed || s == RunStatus::ScriptExhausted; };
        if (demonic) {
          if (bad(a.status)) return splice(std::move(a));
          auto b = resolve(cur.branch(false), src);
          if (bad(b.status)) return splice(std::move(b));
          if (a.status == RunStatus::Ok) return splice(std::move(a));
          if (b.status == RunStatus::Ok) return splice(std::move(b));
          // Both blocked: keep the branch that got further.
          return splice(b.events.size() > a.events.size() ? std::move(b) : std::move(a));
        }
        if (!bad(a.status)) return splice(std::move(a));
        auto b = resolve(cur.branch(false), src);
        if (!bad(b.status)) return splice(std::move(b));
        return splice(std::move(a));
      }
    }
  }
}

}  // namespace fvf
