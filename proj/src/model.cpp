#include "irgroups/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

namespace irgroups {

namespace {

struct NamedStrategy {
  std::string_view name;
  Strategy value;
};

struct NamedHalfNorm {
  std::string_view name;
  HalfNorm value;
};

constexpr std::array<NamedStrategy, 4> kStrategies{{
    {"AllD", strategies::AllD},
    {"AllC", strategies::AllC},
    {"Disc", strategies::Disc},
    {"pDisc", strategies::pDisc},
}};

// First entry per value is the canonical short label.
constexpr std::array<NamedHalfNorm, 8> kHalfNorms{{
    {"Sh", half_norms::Shunning},
    {"SJ", half_norms::SternJudging},
    {"IS", half_norms::ImageScoring},
    {"SS", half_norms::SimpleStanding},
    {"Shunning", half_norms::Shunning},
    {"SternJudging", half_norms::SternJudging},
    {"ImageScoring", half_norms::ImageScoring},
    {"SimpleStanding", half_norms::SimpleStanding},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void unknown(std::string_view what, std::string_view name) {
  std::ostringstream msg;
  msg << "unknown " << what << " '" << name << "'; valid names: ";
  auto names = registered_names();
  for (std::size_t i = 0; i < names.size(); ++i) msg << (i ? ", " : "") << names[i];
  msg << " (or an integer code)";
  throw UnknownNameError(msg.str());
}

}  // namespace

std::string_view to_string(Group g) { return g == Group::Majority ? "majority" : "minority"; }

StrategyCategory classify(Strategy s) {
  if (s == strategies::AllD) return StrategyCategory::AlwaysDefect;
  for (auto rep : {Reputation::Bad, Reputation::Good})
    if (s.action(Relation::In, rep) != s.action(Relation::Out, rep))
      return StrategyCategory::Discriminatory;
  return StrategyCategory::GroupAgnostic;
}

std::string_view to_string(StrategyCategory c) {
  switch (c) {
    case StrategyCategory::AlwaysDefect: return "AlwaysDefect";
    case StrategyCategory::GroupAgnostic: return "GroupAgnostic";
    case StrategyCategory::Discriminatory: return "Discriminatory";
  }
  return "?";
}

std::string_view sub_strategy_name(Strategy s, Relation rel) {
  const bool bad = s.action(rel, Reputation::Bad) == Action::Cooperate;
  const bool good = s.action(rel, Reputation::Good) == Action::Cooperate;
  if (bad && good) return "AllC";
  if (good) return "Disc";
  if (bad) return "AntiDisc";
  return "AllD";
}

std::string label(Strategy s) {
  for (const auto& e : kStrategies)
    if (e.value == s) return std::string(e.name);
  return std::to_string(s.code());
}

std::string label(HalfNorm h) {
  for (const auto& e : kHalfNorms)
    if (e.value == h) return std::string(e.name);
  return std::to_string(h.code());
}

std::string label(Norm n) { return label(n.in_half()) + "/" + label(n.out_half()); }

std::vector<std::string> registered_names() {
  std::vector<std::string> out;
  for (const auto& e : kStrategies) out.emplace_back(e.name);
  for (const auto& e : kHalfNorms) out.emplace_back(e.name);
  return out;
}

NamedEntity named_lookup(std::string_view name) {
  name = trim(name);
  for (const auto& e : kStrategies)
    if (iequals(e.name, name)) return e.value;
  for (const auto& e : kHalfNorms)
    if (iequals(e.name, name)) return e.value;
  unknown("name", name);
}

Strategy parse_strategy(std::string_view text) {
  text = trim(text);
  if (auto code = parse_int(text)) return Strategy(*code);
  for (const auto& e : kStrategies)
    if (iequals(e.name, text)) return e.value;
  unknown("strategy", text);
}

HalfNorm parse_half_norm(std::string_view text) {
  text = trim(text);
  if (auto code = parse_int(text)) return HalfNorm(*code);
  for (const auto& e : kHalfNorms)
    if (iequals(e.name, text)) return e.value;
  unknown("half-norm", text);
}

Norm parse_norm(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Norm(parse_half_norm(text.substr(0, slash)), parse_half_norm(text.substr(slash + 1)));
  if (auto code = parse_int(text)) return Norm(*code);
  const HalfNorm h = parse_half_norm(text);
  return Norm(h, h);
}

void Params::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p) || !(p > 0.0 && p < 1.0)) fail("p must lie in (0, 1)");
  for (Group g : kGroups) {
    const std::string who(to_string(g));
    const double b = benefit_of(g), c = cost_of(g), e = eps_of(g);
    if (!finite(b) || !finite(c) || !(c > 0.0)) fail(who + " cost must be positive");
    if (!(b > c)) fail(who + " benefit must exceed its cost");
    if (!finite(e) || !(e > 0.0 && e < 1.0)) fail(who + " execution error rate must lie in (0, 1)");
  }
  if (!finite(delta) || !(delta >= 0.0 && delta < 0.5)) fail("delta must lie in [0, 0.5)");
}

}  // namespace irgroups
