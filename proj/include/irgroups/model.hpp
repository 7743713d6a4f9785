// Strategies, social norms and parameters of the two-group donation game.
//
// Encodings (fixed, recorded in every output manifest):
//   Strategy  code bit (2*reputation + relation) holds the action.
//   HalfNorm  code bit (2*action + reputation) holds the assigned reputation.
//   Norm      code = 16 * in_group_half + out_group_half.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace irgroups {

enum class Relation : std::uint8_t { Out = 0, In = 1 };
enum class Reputation : std::uint8_t { Bad = 0, Good = 1 };
enum class Action : std::uint8_t { Defect = 0, Cooperate = 1 };
enum class Group : std::uint8_t { Majority = 0, Minority = 1 };

inline constexpr std::array<Group, 2> kGroups{Group::Majority, Group::Minority};

constexpr int bit(Relation r) { return static_cast<int>(r); }
constexpr int bit(Reputation r) { return static_cast<int>(r); }
constexpr int bit(Action a) { return static_cast<int>(a); }
constexpr std::size_t index(Group g) { return static_cast<std::size_t>(g); }

constexpr Relation relation_between(Group donor, Group recipient) {
  return donor == recipient ? Relation::In : Relation::Out;
}

constexpr Group other(Group g) {
  return g == Group::Majority ? Group::Minority : Group::Majority;
}

std::string_view to_string(Group g);

class Strategy {
 public:
  static constexpr int kCount = 16;

  constexpr Strategy() = default;
  constexpr explicit Strategy(int code) : code_(checked(code)) {}

  /// Table indexed [relation][reputation].
  using Table = std::array<std::array<Action, 2>, 2>;
  static constexpr Strategy from_table(const Table& t) {
    int code = 0;
    for (int rel = 0; rel < 2; ++rel)
      for (int rep = 0; rep < 2; ++rep)
        code |= bit(t[rel][rep]) << (2 * rep + rel);
    return Strategy(code);
  }

  constexpr int code() const { return code_; }

  constexpr Action action(Relation rel, Reputation rep) const {
    return static_cast<Action>((code_ >> (2 * bit(rep) + bit(rel))) & 1);
  }

  constexpr Table table() const {
    Table t{};
    for (int rel = 0; rel < 2; ++rel)
      for (int rep = 0; rep < 2; ++rep)
        t[rel][rep] = action(static_cast<Relation>(rel), static_cast<Reputation>(rep));
    return t;
  }

  friend constexpr bool operator==(Strategy, Strategy) = default;

 private:
  static constexpr std::uint8_t checked(int code) {
    if (code < 0 || code >= kCount) throw std::out_of_range("strategy code must be in 0..15");
    return static_cast<std::uint8_t>(code);
  }
  std::uint8_t code_ = 0;
};

class HalfNorm {
 public:
  static constexpr int kCount = 16;

  constexpr HalfNorm() = default;
  constexpr explicit HalfNorm(int code) : code_(checked(code)) {}

  /// Table indexed [action][recipient reputation].
  using Table = std::array<std::array<Reputation, 2>, 2>;
  static constexpr HalfNorm from_table(const Table& t) {
    int code = 0;
    for (int a = 0; a < 2; ++a)
      for (int rep = 0; rep < 2; ++rep)
        code |= bit(t[a][rep]) << (2 * a + rep);
    return HalfNorm(code);
  }

  constexpr int code() const { return code_; }

  constexpr Reputation judge(Action a, Reputation rep) const {
    return static_cast<Reputation>((code_ >> (2 * bit(a) + bit(rep))) & 1);
  }

  constexpr Table table() const {
    Table t{};
    for (int a = 0; a < 2; ++a)
      for (int rep = 0; rep < 2; ++rep)
        t[a][rep] = judge(static_cast<Action>(a), static_cast<Reputation>(rep));
    return t;
  }

  friend constexpr bool operator==(HalfNorm, HalfNorm) = default;

 private:
  static constexpr std::uint8_t checked(int code) {
    if (code < 0 || code >= kCount) throw std::out_of_range("half-norm code must be in 0..15");
    return static_cast<std::uint8_t>(code);
  }
  std::uint8_t code_ = 0;
};

class Norm {
 public:
  static constexpr int kCount = 256;

  constexpr Norm() = default;
  constexpr Norm(HalfNorm in_group, HalfNorm out_group) : in_(in_group), out_(out_group) {}
  constexpr explicit Norm(int code)
      : in_(checked(code) >> 4), out_(code & 0xF) {}

  constexpr HalfNorm in_half() const { return in_; }
  constexpr HalfNorm out_half() const { return out_; }
  constexpr int code() const { return 16 * in_.code() + out_.code(); }
  constexpr bool is_fair() const { return in_ == out_; }

  constexpr HalfNorm half(Relation rel) const { return rel == Relation::In ? in_ : out_; }

  constexpr Reputation judge(Relation rel, Reputation rep, Action a) const {
    return half(rel).judge(a, rep);
  }

  friend constexpr bool operator==(Norm, Norm) = default;

 private:
  static constexpr int checked(int code) {
    if (code < 0 || code >= kCount) throw std::out_of_range("norm code must be in 0..255");
    return code;
  }
  HalfNorm in_{};
  HalfNorm out_{};
};

namespace strategies {
inline constexpr Strategy AllD{0};
inline constexpr Strategy AllC{15};
/// Cooperates with good recipients of either group.
inline constexpr Strategy Disc{12};
/// Disc toward the in-group, AllD toward the out-group.
inline constexpr Strategy pDisc{8};
}  // namespace strategies

namespace half_norms {
inline constexpr HalfNorm Shunning{8};
inline constexpr HalfNorm SternJudging{9};
inline constexpr HalfNorm ImageScoring{12};
inline constexpr HalfNorm SimpleStanding{13};
}  // namespace half_norms

// Strategy categories used to summarise stable combinations.
enum class StrategyCategory : std::uint8_t { AlwaysDefect = 0, GroupAgnostic = 1, Discriminatory = 2 };

StrategyCategory classify(Strategy s);
std::string_view to_string(StrategyCategory c);

/// Name of the two-cell rule a strategy applies toward one relation:
/// AllD, AllC, Disc, or AntiDisc (cooperate only with bad recipients).
std::string_view sub_strategy_name(Strategy s, Relation rel);

/// Registered short name ("Disc") or the decimal code.
std::string label(Strategy s);
std::string label(HalfNorm h);
/// "IN/OUT" using half-norm labels, e.g. "SJ/Sh".
std::string label(Norm n);

class UnknownNameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using NamedEntity = std::variant<Strategy, Norm, HalfNorm>;

/// Case-insensitive lookup of a registered name. Throws UnknownNameError
/// listing the valid names.
NamedEntity named_lookup(std::string_view name);
std::vector<std::string> registered_names();

// Parsers accepting either registered names or integer codes.
Strategy parse_strategy(std::string_view text);
HalfNorm parse_half_norm(std::string_view text);
/// "IN/OUT" with each side a half-norm name or code, a single half-norm name
/// (fair norm), or an integer norm code 0..255.
Norm parse_norm(std::string_view text);

struct Params {
  double p = 0.9;
  std::array<double, 2> benefit{5.0, 5.0};
  std::array<double, 2> cost{1.0, 1.0};
  std::array<double, 2> eps{0.01, 0.01};
  double delta = 0.01;

  double proportion(Group g) const { return g == Group::Majority ? p : 1.0 - p; }
  double benefit_of(Group g) const { return benefit[index(g)]; }
  double cost_of(Group g) const { return cost[index(g)]; }
  double eps_of(Group g) const { return eps[index(g)]; }

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;

  static Params uniform(double p, double b, double c, double eps, double delta) {
    return Params{p, {b, b}, {c, c}, {eps, eps}, delta};
  }
};

/// A norm plus the incumbent strategy of each group.
struct NSS {
  Norm norm;
  Strategy majority;
  Strategy minority;

  Strategy strategy(Group g) const { return g == Group::Majority ? majority : minority; }

  static constexpr std::size_t kCount = 65536;
  /// Position in code-triple order (norm, majority, minority).
  std::size_t index() const {
    return static_cast<std::size_t>(norm.code()) * 256 + majority.code() * 16 + minority.code();
  }
  static NSS from_index(std::size_t i) {
    return NSS{Norm(static_cast<int>(i >> 8)), Strategy(static_cast<int>((i >> 4) & 0xF)),
               Strategy(static_cast<int>(i & 0xF))};
  }

  friend bool operator==(const NSS&, const NSS&) = default;
};

}  // namespace irgroups
