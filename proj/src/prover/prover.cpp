#include "fvf/prover.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fvf {

namespace {

void accumulate(const Term& t, Int sign, LinearForm& out) {
  std::visit(Overloaded{
                 [&](const Term::Lit& l) { out.constant = checked_add(out.constant, checked_mul(sign, l.value)); },
                 [&](const Term::Sym& s) {
                   Int& c = out.coefficients[s.id];
                   c = checked_add(c, sign);
                   if (c == 0) out.coefficients.erase(s.id);
                 },
                 [&](const Term::Add& a) {
                   accumulate(*a.lhs, sign, out);
                   accumulate(*a.rhs, sign, out);
                 },
                 [&](const Term::Sub& a) {
                   accumulate(*a.lhs, sign, out);
                   accumulate(*a.rhs, -sign, out);
                 },
             },
             t.node);
}

// out += k * f
void add_scaled(LinearForm& out, Int k, const LinearForm& f) {
  out.constant = checked_add(out.constant, checked_mul(k, f.constant));
  for (const auto& [x, c] : f.coefficients) {
    Int& slot = out.coefficients[x];
    slot = checked_add(slot, checked_mul(k, c));
    if (slot == 0) out.coefficients.erase(x);
  }
}

LinearForm difference(const Term& a, const Term& b) {
  LinearForm f;
  accumulate(a, 1, f);
  accumulate(b, -1, f);
  return f;
}

LinearForm negated(LinearForm f) {
  LinearForm zero;
  add_scaled(zero, -1, f);
  return zero;
}

Int coefficient_gcd(const LinearForm& f) {
  Int g = 0;
  for (const auto& [x, c] : f.coefficients) g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

Int ceil_div(Int a, Int b) {  // b > 0
  Int q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

// f = 0, f <= 0 and f != 0 constraints of a refutation problem.
struct Problem {
  std::vector<LinearForm> eqs, les, nes;
};

void lower(const Formula& f, bool positive, Problem& p) {
  std::visit(Overloaded{
                 [&](const Formula::Eq& e) {
                   (positive ? p.eqs : p.nes).push_back(difference(e.lhs, e.rhs));
                 },
                 [&](const Formula::Lt& e) {
                   if (positive) {  // lhs - rhs + 1 <= 0
                     LinearForm d = difference(e.lhs, e.rhs);
                     d.constant = checked_add(d.constant, 1);
                     p.les.push_back(std::move(d));
                   } else {  // rhs - lhs <= 0
                     p.les.push_back(difference(e.rhs, e.lhs));
                   }
                 },
                 [&](const Formula::Not& n) { lower(*n.operand, !positive, p); },
             },
             f.node);
}

class Refuter {
 public:
  explicit Refuter(const EntailmentProver::Limits& limits) : limits_(limits) {}

  bool unsat(Problem p, int splits_left) const {
    if (!eliminate_equalities(p)) return true;
    for (auto it = p.nes.begin(); it != p.nes.end();) {
      if (it->coefficients.empty()) {
        if (it->constant == 0) return true;
        it = p.nes.erase(it);
      } else {
        ++it;
      }
    }
    if (inequalities_unsat(p.les)) return true;
    if (p.nes.empty() || splits_left == 0) return false;

    LinearForm n = p.nes.front();
    p.nes.erase(p.nes.begin());
    // n != 0 means n + 1 <= 0 or 1 - n <= 0.
    Problem below = p, above = p;
    LinearForm lo = n;
    lo.constant = checked_add(lo.constant, 1);
    below.les.push_back(std::move(lo));
    LinearForm hi = negated(n);
    hi.constant = checked_add(hi.constant, 1);
    above.les.push_back(std::move(hi));
    return unsat(std::move(below), splits_left - 1) && unsat(std::move(above), splits_left - 1);
  }

 private:
  // Substitutes away equalities with a unit coefficient and turns the rest
  // into pairs of inequalities. False if an equality has no integer solution.
  static bool eliminate_equalities(Problem& p) {
    while (!p.eqs.empty()) {
      LinearForm e = std::move(p.eqs.back());
      p.eqs.pop_back();
      if (e.coefficients.empty()) {
        if (e.constant != 0) return false;
        continue;
      }
      Int g = coefficient_gcd(e);
      if (e.constant % g != 0) return false;
      e.constant /= g;
      for (auto& [x, c] : e.coefficients) c /= g;

      const SymbolId* unit = nullptr;
      for (const auto& [x, c] : e.coefficients)
        if (c == 1 || c == -1) {
          unit = &x;
          break;
        }
      if (!unit) {
        p.les.push_back(e);
        p.les.push_back(negated(e));
        continue;
      }
      SymbolId x = *unit;
      Int k = e.coefficients.at(x);
      auto substitute = [&](LinearForm& f) {
        auto it = f.coefficients.find(x);
        if (it == f.coefficients.end()) return;
        Int m = it->second;
        add_scaled(f, -checked_mul(m, k), e);
      };
      for (auto& f : p.eqs) substitute(f);
      for (auto& f : p.les) substitute(f);
      for (auto& f : p.nes) substitute(f);
    }
    return true;
  }

  using Coeffs = std::map<SymbolId, Int>;
  // Each entry reads coeffs . x + constant <= 0; only the strongest
  // (largest) constant per coefficient vector is kept.
  using System = std::map<Coeffs, Int>;

  // False if the constraint is contradictory on its own.
  static bool insert(System& sys, LinearForm f) {
    if (f.coefficients.empty()) return f.constant <= 0;
    Int g = coefficient_gcd(f);
    if (g > 1) {
      for (auto& [x, c] : f.coefficients) c /= g;
      f.constant = ceil_div(f.constant, g);
    }
    auto [it, fresh] = sys.emplace(std::move(f.coefficients), f.constant);
    if (!fresh && it->second < f.constant) it->second = f.constant;
    return true;
  }

  bool inequalities_unsat(const std::vector<LinearForm>& les) const {
    System sys;
    for (const auto& f : les)
      if (!insert(sys, f)) return true;

    while (true) {
      // Pick the variable whose elimination creates the fewest constraints.
      std::map<SymbolId, std::pair<std::size_t, std::size_t>> occurrences;
      for (const auto& [coeffs, c] : sys)
        for (const auto& [x, a] : coeffs) (a > 0 ? occurrences[x].first : occurrences[x].second)++;
      if (occurrences.empty()) return false;
      SymbolId best{};
      long long best_cost = -1;
      for (const auto& [x, pn] : occurrences) {
        long long cost = static_cast<long long>(pn.first * pn.second) -
                         static_cast<long long>(pn.first + pn.second);
        if (best_cost == -1 || cost < best_cost) {
          best = x;
          best_cost = cost;
        }
      }

      std::vector<LinearForm> pos, neg;
      System next;
      for (const auto& [coeffs, c] : sys) {
        auto it = coeffs.find(best);
        if (it == coeffs.end()) {
          next.emplace(coeffs, c);
          continue;
        }
        LinearForm f{c, coeffs};
        (it->second > 0 ? pos : neg).push_back(std::move(f));
      }
      for (const auto& p : pos) {
        Int a = p.coefficients.at(best);
        for (const auto& n : neg) {
          Int b = -n.coefficients.at(best);
          LinearForm combined;
          add_scaled(combined, b, p);
          add_scaled(combined, a, n);
          if (!insert(next, std::move(combined))) return true;
          if (next.size() > limits_.max_constraints) return false;
        }
      }
      sys = std::move(next);
    }
  }

  EntailmentProver::Limits limits_;
};

std::string smt_term(const Term& t) {
  return std::visit(Overloaded{
                        [](const Term::Lit& l) {
                          if (l.value >= 0) return std::to_string(l.value);
                          // Avoids negating the minimum value.
                          std::string digits = std::to_string(l.value).substr(1);
                          return "(- " + digits + ")";
                        },
                        [](const Term::Sym& s) { return "s" + std::to_string(s.id.value); },
                        [](const Term::Add& a) { return "(+ " + smt_term(*a.lhs) + " " + smt_term(*a.rhs) + ")"; },
                        [](const Term::Sub& a) { return "(- " + smt_term(*a.lhs) + " " + smt_term(*a.rhs) + ")"; },
                    },
                    t.node);
}

std::string smt_formula(const Formula& f) {
  return std::visit(Overloaded{
                        [](const Formula::Eq& e) { return "(= " + smt_term(e.lhs) + " " + smt_term(e.rhs) + ")"; },
                        [](const Formula::Lt& e) { return "(< " + smt_term(e.lhs) + " " + smt_term(e.rhs) + ")"; },
                        [](const Formula::Not& n) { return "(not " + smt_formula(*n.operand) + ")"; },
                    },
                    f.node);
}

}  // namespace

LinearForm normalize(const Term& t) {
  LinearForm f;
  accumulate(t, 1, f);
  return f;
}

bool EntailmentProver::entails(const std::vector<Formula>& pc, const Formula& goal) const {
  bool answer = decide(pc, goal);
  if (observer_) observer_(EntailmentQuery{pc, goal}, answer);
  return answer;
}

bool EntailmentProver::decide(const std::vector<Formula>& pc, const Formula& goal) const {
  for (const auto& f : pc)
    if (f == goal) return true;
  try {
    // Disequalities from the goal are split first: they are the likeliest
    // to matter.
    Problem goal_part;
    lower(goal, false, goal_part);
    Problem p;
    for (const auto& f : pc) lower(f, true, p);
    p.eqs.insert(p.eqs.end(), goal_part.eqs.begin(), goal_part.eqs.end());
    p.les.insert(p.les.end(), goal_part.les.begin(), goal_part.les.end());
    p.nes.insert(p.nes.begin(), goal_part.nes.begin(), goal_part.nes.end());
    return Refuter(limits_).unsat(std::move(p), limits_.max_splits);
  } catch (const ArithmeticOverflow&) {
    return false;
  }
}

std::string export_smtlib(const EntailmentQuery& q) {
  std::set<SymbolId> symbols;
  for (const auto& f : q.pc) collect_symbols(f, symbols);
  collect_symbols(q.goal, symbols);
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  for (SymbolId s : symbols) out << "(declare-const s" << s.value << " Int)\n";
  for (const auto& f : q.pc) out << "(assert " << smt_formula(f) << ")\n";
  out << "(assert (not " << smt_formula(q.goal) << "))\n";
  out << "(check-sat)\n";
  return out.str();
}

EntailmentProver::Observer smtlib_dumper(const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto counter = std::make_shared<std::atomic<unsigned>>(0);
  return [dir, counter](const EntailmentQuery& q, bool answer) {
    unsigned n = ++*counter;
    char name[32];
    std::snprintf(name, sizeof name, "query-%06u.smt2", n);
    std::ofstream out(std::filesystem::path(dir) / name);
    out << "; prover answer: " << (answer ? "entailed" : "not proved") << "\n" << export_smtlib(q);
  };
}

}  // namespace fvf
