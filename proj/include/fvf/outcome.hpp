#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "fvf/common.hpp"

namespace fvf {

struct Unit {
  bool operator==(const Unit&) const = default;
};

// Index set of a choice node. Empty gives the two trivial outcomes.
enum class IndexDomain { Empty, Bool, Int, Opaque };

// Hint for whoever resolves an integer choice (scripts, random sources).
enum class ChoiceTag { None, Address, Value };

using IndexValue = std::variant<bool, Int>;

enum class MessageKind { User, Trace, Failure };

class NonFinitaryOutcome : public std::logic_error {
 public:
  NonFinitaryOutcome() : std::logic_error("outcome has an infinite or opaque choice") {}
};

// Tree of results of a nondeterministic computation. Choice branches are
// computed on demand, so trees may be infinitely wide.
template <class S, class A = Unit>
class Outcome {
 public:
  enum class Kind { Single, Demonic, Angelic, Message };
  using Branch = std::function<Outcome(const IndexValue&)>;

  static Outcome single(S state, A answer = A{}) {
    Node n;
    n.state = std::move(state);
    n.answer = std::move(answer);
    return Outcome(std::move(n));
  }
  static Outcome demonic(IndexDomain d, Branch b, ChoiceTag tag = ChoiceTag::None) {
    return choice(Kind::Demonic, d, std::move(b), tag);
  }
  static Outcome angelic(IndexDomain d, Branch b, ChoiceTag tag = ChoiceTag::None) {
    return choice(Kind::Angelic, d, std::move(b), tag);
  }
  static Outcome message(MessageKind k, std::string text, Outcome rest) {
    Node n;
    n.kind = Kind::Message;
    n.message_kind = k;
    n.text = std::move(text);
    n.rest = std::make_shared<const Outcome>(std::move(rest));
    return Outcome(std::move(n));
  }
  // Vacuous success: no result to check.
  static Outcome top() { return demonic(IndexDomain::Empty, nullptr); }
  // Failure.
  static Outcome bot() { return angelic(IndexDomain::Empty, nullptr); }
  static Outcome fail(std::string why) { return message(MessageKind::Failure, std::move(why), bot()); }

  static Outcome demonic2(Outcome a, Outcome b) {
    return demonic(IndexDomain::Bool, [a = std::move(a), b = std::move(b)](const IndexValue& i) {
      return std::get<bool>(i) ? a : b;
    });
  }
  static Outcome angelic2(Outcome a, Outcome b) {
    return angelic(IndexDomain::Bool, [a = std::move(a), b = std::move(b)](const IndexValue& i) {
      return std::get<bool>(i) ? a : b;
    });
  }

  Kind kind() const { return node_->kind; }
  bool is_single() const { return kind() == Kind::Single; }
  bool is_choice() const { return kind() == Kind::Demonic || kind() == Kind::Angelic; }
  bool is_message() const { return kind() == Kind::Message; }

  const S& state() const { return *node_->state; }
  const A& answer() const { return *node_->answer; }

  IndexDomain domain() const { return node_->domain; }
  ChoiceTag tag() const { return node_->tag; }
  Outcome branch(const IndexValue& i) const {
    if (!is_choice() || domain() == IndexDomain::Empty)
      throw std::logic_error("branch() on a node without branches");
    return node_->branch(i);
  }

  MessageKind message_kind() const { return node_->message_kind; }
  const std::string& text() const { return node_->text; }
  const Outcome& rest() const { return *node_->rest; }

  // First node that is not a message.
  const Outcome& skip_messages() const {
    const Outcome* o = this;
    while (o->is_message()) o = &o->rest();
    return *o;
  }

 private:
  struct Node {
    Kind kind = Kind::Single;
    std::optional<S> state;
    std::optional<A> answer;
    IndexDomain domain = IndexDomain::Empty;
    ChoiceTag tag = ChoiceTag::None;
    Branch branch;
    MessageKind message_kind = MessageKind::User;
    std::string text;
    std::shared_ptr<const Outcome> rest;
  };

  static Outcome choice(Kind k, IndexDomain d, Branch b, ChoiceTag tag) {
    Node n;
    n.kind = k;
    n.domain = d;
    n.branch = std::move(b);
    n.tag = tag;
    return Outcome(std::move(n));
  }

  explicit Outcome(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

template <class S, class A = Unit>
using Mutator = std::function<Outcome<S, A>(const S&)>;

// Sequential composition: continue every result leaf of `o` with `k`.
// `k` receives (answer, state) and returns an outcome over the same states.
template <class S, class A, class K>
auto bind(const Outcome<S, A>& o, K k) -> decltype(k(o.answer(), o.state())) {
  using R = decltype(k(o.answer(), o.state()));
  switch (o.kind()) {
    case Outcome<S, A>::Kind::Single:
      return k(o.answer(), o.state());
    case Outcome<S, A>::Kind::Message:
      return R::message(o.message_kind(), o.text(), fvf::bind(o.rest(), k));
    case Outcome<S, A>::Kind::Demonic:
    case Outcome<S, A>::Kind::Angelic: {
      bool demonic = o.kind() == Outcome<S, A>::Kind::Demonic;
      typename R::Branch b;
      if (o.domain() != IndexDomain::Empty)
        b = [o, k](const IndexValue& i) { return fvf::bind(o.branch(i), k); };
      return demonic ? R::demonic(o.domain(), std::move(b), o.tag())
                     : R::angelic(o.domain(), std::move(b), o.tag());
    }
  }
  throw std::logic_error("unreachable");
}

namespace mut {

template <class S, class A>
Mutator<S, A> yield(A a) {
  return [a](const S& s) { return Outcome<S, A>::single(s, a); };
}

template <class S>
Mutator<S, Unit> noop() {
  return [](const S& s) { return Outcome<S, Unit>::single(s); };
}

template <class S, class A>
Mutator<S, A> top() {
  return [](const S&) { return Outcome<S, A>::top(); };
}

template <class S, class A>
Mutator<S, A> bot() {
  return [](const S&) { return Outcome<S, A>::bot(); };
}

// m; k(answer)
template <class S, class A, class B>
Mutator<S, B> bind(Mutator<S, A> m, std::function<Mutator<S, B>(const A&)> k) {
  return [m, k](const S& s) {
    return fvf::bind(m(s), [k](const A& a, const S& s2) { return k(a)(s2); });
  };
}

// m; n (answer of m discarded)
template <class S, class A, class B>
Mutator<S, B> then(Mutator<S, A> m, Mutator<S, B> n) {
  return [m, n](const S& s) {
    return fvf::bind(m(s), [n](const A&, const S& s2) { return n(s2); });
  };
}

// x <- m; n; yield x
template <class S, class A, class B>
Mutator<S, A> side_seq(Mutator<S, A> m, Mutator<S, B> n) {
  return [m, n](const S& s) {
    return fvf::bind(m(s), [n](const A& a, const S& s2) {
      return fvf::bind(n(s2), [a](const B&, const S& s3) { return Outcome<S, A>::single(s3, a); });
    });
  };
}

template <class S, class A>
Mutator<S, A> demonic2(Mutator<S, A> m, Mutator<S, A> n) {
  return [m, n](const S& s) {
    return Outcome<S, A>::demonic(IndexDomain::Bool, [m, n, s](const IndexValue& i) {
      return std::get<bool>(i) ? m(s) : n(s);
    });
  };
}

template <class S, class A>
Mutator<S, A> angelic2(Mutator<S, A> m, Mutator<S, A> n) {
  return [m, n](const S& s) {
    return Outcome<S, A>::angelic(IndexDomain::Bool, [m, n, s](const IndexValue& i) {
      return std::get<bool>(i) ? m(s) : n(s);
    });
  };
}

}  // namespace mut

// Does every demonic path (with some angelic resolution) reach a leaf
// satisfying q? Only defined for trees whose choices are Empty or Bool.
template <class S, class A, class Q>
bool satisfies(const Outcome<S, A>& o, const Q& q) {
  using K = typename Outcome<S, A>::Kind;
  const Outcome<S, A>& n = o.skip_messages();
  if (n.kind() == K::Single) return q(n.state(), n.answer());
  switch (n.domain()) {
    case IndexDomain::Empty:
      return n.kind() == K::Demonic;
    case IndexDomain::Bool: {
      bool a = satisfies(n.branch(true), q);
      if (n.kind() == K::Demonic) return a && satisfies(n.branch(false), q);
      return a || satisfies(n.branch(false), q);
    }
    default:
      throw NonFinitaryOutcome();
  }
}

template <class S, class A>
bool is_block(const Outcome<S, A>& o) {
  const auto& n = o.skip_messages();
  return n.kind() == Outcome<S, A>::Kind::Demonic && n.domain() == IndexDomain::Empty;
}

template <class S, class A>
bool is_fail(const Outcome<S, A>& o) {
  const auto& n = o.skip_messages();
  return n.kind() == Outcome<S, A>::Kind::Angelic && n.domain() == IndexDomain::Empty;
}

template <class S, class A>
bool is_single(const Outcome<S, A>& o) {
  return o.skip_messages().is_single();
}

struct AtBool {
  bool value;
};
struct AtInt {
  Int value;
};
struct Here {};
using Step = std::variant<AtBool, AtInt, Here>;

// Follow one step into a choice node (messages are passed through).
// nullopt if the step does not fit the node.
template <class S, class A>
std::optional<Outcome<S, A>> navigate(const Outcome<S, A>& o, const Step& step) {
  const auto& n = o.skip_messages();
  if (std::holds_alternative<Here>(step)) return n;
  if (!n.is_choice()) return std::nullopt;
  if (const auto* b = std::get_if<AtBool>(&step)) {
    if (n.domain() != IndexDomain::Bool) return std::nullopt;
    return n.branch(b->value);
  }
  if (n.domain() != IndexDomain::Int) return std::nullopt;
  return n.branch(std::get<AtInt>(step).value);
}

}  // namespace fvf
