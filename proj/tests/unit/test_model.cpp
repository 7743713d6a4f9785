#include <doctest.h>

#include <set>
#include <string>

#include "irgroups/model.hpp"

using namespace irgroups;

TEST_CASE("strategy codes round-trip through their tables") {
  for (int k = 0; k < Strategy::kCount; ++k) CHECK(Strategy::from_table(Strategy(k).table()).code() == k);
  CHECK_THROWS_AS(Strategy(16), std::out_of_range);
  CHECK_THROWS_AS(Strategy(-1), std::out_of_range);
}

TEST_CASE("half-norm and norm codes round-trip") {
  for (int k = 0; k < HalfNorm::kCount; ++k) CHECK(HalfNorm::from_table(HalfNorm(k).table()).code() == k);
  for (int k = 0; k < Norm::kCount; ++k) {
    const Norm n(k);
    CHECK(n.code() == k);
    CHECK(n.code() == 16 * n.in_half().code() + n.out_half().code());
    CHECK(Norm(n.in_half(), n.out_half()) == n);
  }
  CHECK_THROWS_AS(Norm(256), std::out_of_range);
}

TEST_CASE("strategy actions") {
  using enum Relation;
  using enum Reputation;
  CHECK(strategies::AllD.action(In, Good) == Action::Defect);
  CHECK(strategies::Disc.action(Out, Good) == Action::Cooperate);
  CHECK(strategies::Disc.action(Out, Bad) == Action::Defect);

  const Strategy s13(13);
  CHECK(s13.action(In, Bad) == Action::Defect);
  CHECK(s13.action(In, Good) == Action::Cooperate);
  CHECK(s13.action(Out, Bad) == Action::Cooperate);
  CHECK(s13.action(Out, Good) == Action::Cooperate);

  CHECK(strategies::pDisc.action(In, Good) == Action::Cooperate);
  CHECK(strategies::pDisc.action(In, Bad) == Action::Defect);
  CHECK(strategies::pDisc.action(Out, Good) == Action::Defect);
  CHECK(strategies::pDisc.action(Out, Bad) == Action::Defect);
}

TEST_CASE("named half-norm tables in (action, reputation) order 00, 01, 10, 11") {
  auto row = [](HalfNorm h) {
    std::string s;
    for (Action a : {Action::Defect, Action::Cooperate})
      for (Reputation r : {Reputation::Bad, Reputation::Good}) s += bit(h.judge(a, r)) ? '1' : '0';
    return s;
  };
  CHECK(row(half_norms::Shunning) == "0001");
  CHECK(row(half_norms::SternJudging) == "1001");
  CHECK(row(half_norms::ImageScoring) == "0011");
  CHECK(row(half_norms::SimpleStanding) == "1011");
}

TEST_CASE("norm judgement dispatches on relation") {
  const Norm sj(half_norms::SternJudging, half_norms::SternJudging);
  const Norm sh(half_norms::Shunning, half_norms::Shunning);
  const Norm is(half_norms::ImageScoring, half_norms::ImageScoring);
  CHECK(sj.judge(Relation::In, Reputation::Bad, Action::Defect) == Reputation::Good);
  CHECK(sh.judge(Relation::Out, Reputation::Bad, Action::Cooperate) == Reputation::Bad);
  CHECK(is.judge(Relation::In, Reputation::Good, Action::Cooperate) == Reputation::Good);

  const Norm mixed(half_norms::ImageScoring, half_norms::Shunning);
  CHECK(mixed.judge(Relation::In, Reputation::Bad, Action::Cooperate) == Reputation::Good);
  CHECK(mixed.judge(Relation::Out, Reputation::Bad, Action::Cooperate) == Reputation::Bad);
}

TEST_CASE("strategy categories partition the 16 strategies") {
  int counts[3] = {0, 0, 0};
  for (int k = 0; k < 16; ++k) ++counts[static_cast<int>(classify(Strategy(k)))];
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 3);
  CHECK(counts[2] == 12);
  CHECK(classify(strategies::AllD) == StrategyCategory::AlwaysDefect);
  CHECK(classify(strategies::Disc) == StrategyCategory::GroupAgnostic);
  CHECK(classify(strategies::AllC) == StrategyCategory::GroupAgnostic);
  CHECK(classify(strategies::pDisc) == StrategyCategory::Discriminatory);
}

TEST_CASE("fair norms") {
  int fair = 0;
  for (int k = 0; k < 256; ++k) {
    const Norm n(k);
    if (!n.is_fair()) continue;
    ++fair;
    for (Reputation r : {Reputation::Bad, Reputation::Good})
      for (Action a : {Action::Defect, Action::Cooperate})
        CHECK(n.judge(Relation::In, r, a) == n.judge(Relation::Out, r, a));
  }
  CHECK(fair == 16);
}

TEST_CASE("sub-strategy names") {
  CHECK(sub_strategy_name(strategies::Disc, Relation::In) == "Disc");
  CHECK(sub_strategy_name(Strategy(13), Relation::In) == "Disc");
  CHECK(sub_strategy_name(Strategy(13), Relation::Out) == "AllC");
  CHECK(sub_strategy_name(Strategy(3), Relation::Out) == "AntiDisc");
  CHECK(sub_strategy_name(strategies::AllD, Relation::Out) == "AllD");
}

TEST_CASE("named lookup") {
  CHECK(std::get<Strategy>(named_lookup("AllC")).code() == 15);
  CHECK(std::get<Strategy>(named_lookup("allc")).code() == 15);
  CHECK(std::get<HalfNorm>(named_lookup("SJ")) == half_norms::SternJudging);
  CHECK(std::get<HalfNorm>(named_lookup("sternjudging")) == half_norms::SternJudging);
  CHECK(std::get<Strategy>(named_lookup("pDisc")) == strategies::pDisc);

  try {
    named_lookup("Tit-for-tat");
    FAIL("expected UnknownNameError");
  } catch (const UnknownNameError& e) {
    const std::string msg = e.what();
    for (const std::string& name : {"AllD", "AllC", "Disc", "pDisc", "Sh", "SJ", "IS", "SS"})
      CHECK(msg.find(name) != std::string::npos);
  }
  const auto names = registered_names();
  CHECK(std::set<std::string>(names.begin(), names.end()).count("SimpleStanding") == 1);
}

TEST_CASE("parsers accept names and codes") {
  CHECK(parse_strategy("Disc") == strategies::Disc);
  CHECK(parse_strategy("13").code() == 13);
  CHECK_THROWS_AS(parse_strategy("16"), std::out_of_range);
  CHECK_THROWS_AS(parse_strategy("Nope"), UnknownNameError);
  CHECK(parse_half_norm("9") == half_norms::SternJudging);
  CHECK(parse_norm("SJ/Sh") == Norm(half_norms::SternJudging, half_norms::Shunning));
  CHECK(parse_norm("9/8") == Norm(half_norms::SternJudging, half_norms::Shunning));
  CHECK(parse_norm("SJ") == Norm(half_norms::SternJudging, half_norms::SternJudging));
  CHECK(parse_norm("153") == Norm(half_norms::SternJudging, half_norms::SternJudging));
  CHECK_THROWS(parse_norm("SJ/XX"));
  CHECK(label(Norm(half_norms::SternJudging, half_norms::ImageScoring)) == "SJ/IS");
  CHECK(label(Strategy(13)) == "13");
  CHECK(label(strategies::Disc) == "Disc");
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(Params{}.validate());
  CHECK_NOTHROW(Params::uniform(0.9, 10, 1, 0.01, 0.0).validate());
  CHECK_THROWS_AS(Params::uniform(1.0, 5, 1, 0.01, 0.01).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params::uniform(0.9, 1, 1, 0.01, 0.01).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params::uniform(0.9, 5, 0, 0.01, 0.01).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params::uniform(0.9, 5, 1, 0.0, 0.01).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Params::uniform(0.9, 5, 1, 0.01, 0.5).validate(), std::invalid_argument);
  Params p;
  p.benefit[1] = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("NSS index round-trip") {
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{4242}, NSS::kCount - 1})
    CHECK(NSS::from_index(i).index() == i);
  const NSS nss{Norm(153), strategies::Disc, strategies::AllD};
  CHECK(NSS::from_index(nss.index()).minority == strategies::AllD);
}
