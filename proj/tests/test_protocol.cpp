#include <doctest.h>

#include <sstream>

#include "strategem/protocol.hpp"
#include "strategem/services.hpp"

using namespace strategem;

namespace {

const char* const kS =
    R"("state":{"expr":"(a^3*a^4)^2","strategy":{"term":"somewhere(AddExp) ; MulExp | DistExp ; repeat(MulExp) ; AddExp"}})";

json call(const std::string& line) {
  return json::parse(handle_request(line, default_registry(), ServeOptions{}));
}

json power(const std::string& service, const std::string& rest) {
  return call(R"({"service":")" + service + R"(","exercise":"powerExercise",)" + rest + "}");
}

std::string error_code(const json& r) {
  REQUIRE(r.contains("error"));
  return r["error"]["code"].get<std::string>();
}

}  // namespace

TEST_CASE("derivation, ready and stepsremaining") {
  auto d = power("derivation", R"("state":{"expr":"(a^3*a^4)^2"})");
  CHECK(d["ok"]["steps"] == json::parse(R"([["AddExp","(a^7)^2"],["MulExp","a^14"]])"));
  CHECK(power("ready", R"("state":{"expr":"a^14"})")["ok"] == true);
  CHECK(power("ready", R"("state":{"expr":"(a^7)^2"})")["ok"] == false);
  CHECK(power("stepsremaining", R"("state":{"expr":"(a^3*a^4)^2"})")["ok"] == 2);
  CHECK(power("derivation", R"("state":{"expr":"a^14"})")["ok"]["steps"].empty());
}

TEST_CASE("allfirsts and onefirst on the two-branch state") {
  auto all = power("allfirsts", kS)["ok"];
  REQUIRE(all.size() == 2);
  CHECK(all[0]["rule"] == "AddExp");
  CHECK(all[0]["location"] == json::array({0}));
  CHECK(all[0]["state"]["expr"] == "(a^7)^2");
  CHECK(all[0]["state"]["path"] == json::array({0}));
  CHECK(all[0]["state"]["strategy"]["term"] == "Up ; MulExp");
  CHECK(all[1]["rule"] == "DistExp");
  CHECK(all[1]["state"]["expr"] == "(a^3)^2*(a^4)^2");
  CHECK(parse_strategy(all[1]["state"]["strategy"]["term"].get<std::string>()) ==
        seq(repeat(rule(kMulExp)), rule(kAddExp)));

  auto one = power("onefirst", kS)["ok"];
  CHECK(one == all[0]);
}

TEST_CASE("a returned state can be sent back") {
  auto one = power("onefirst", R"("state":{"expr":"(a^3*a^4)^2"})")["ok"];
  CHECK(one["rule"] == "AddExp");
  auto next = power("onefirst", R"("state":)" + one["state"].dump())["ok"];
  CHECK(next["rule"] == "MulExp");
  CHECK(next["state"]["expr"] == "a^14");
  auto done = power("onefirst", R"("state":)" + next["state"].dump());
  CHECK(error_code(done) == "no-step-available");
}

TEST_CASE("apply and applicable") {
  auto r = power("apply", R"("rule":"MulExp","location":[1],"state":{"expr":"(a^3)^2*(a^4)^2"})")["ok"];
  CHECK(r["expr"] == "(a^3)^2*a^8");
  CHECK(r["path"] == json::array({1}));
  // The remaining strategy was kept and now runs on the focused a^8 only.
  CHECK(power("derivation", R"("state":)" + r.dump())["ok"]["steps"].empty());
  CHECK(power("stepsremaining", R"("state":)" + r.dump())["ok"] == 0);

  CHECK(power("applicable", R"("location":[1],"state":{"expr":"(a^3)^2*(a^4)^2"})")["ok"] ==
        json::parse(R"(["MulExp","ReciExp"])"));
  CHECK(power("applicable", R"("location":[],"state":{"expr":"(a^3*a^4)^2"})")["ok"] ==
        json::parse(R"(["DistExp","ReciExp"])"));

  CHECK(error_code(power("apply", R"("rule":"MulExp","location":[5],"state":{"expr":"a^2"})")) ==
        "invalid-location");
  CHECK(error_code(power("apply", R"("rule":"AddExp","location":[],"state":{"expr":"a^2"})")) ==
        "rule-not-applicable");
  CHECK(error_code(power("apply", R"("rule":"Nope","location":[],"state":{"expr":"a^2"})")) == "unknown-rule");
}

TEST_CASE("diagnose categories") {
  auto diag = [](const std::string& expr, const std::string& submitted) {
    return power("diagnose", R"("expression":")" + submitted + R"(","state":{"expr":")" + expr + R"("})")["ok"];
  };
  CHECK(diag("(a^3*a^4)^2", "(a^7)^2") == json::parse(R"({"diagnosis":"Expected","rule":"AddExp"})"));
  CHECK(diag("a^3*a^4", "a^12") == json::parse(R"({"diagnosis":"Buggy","rule":"BugAddExp"})"));
  CHECK(diag("a^3*a^4", "b^7")["diagnosis"] == "NotEq");
  CHECK(diag("a*b", "1/1/a*b") == json::parse(R"({"diagnosis":"Correct"})"));
}

TEST_CASE("generate is seeded and yields exercise material") {
  auto a = call(R"({"service":"generate","exercise":"powerExercise","seed":7,"difficulty":"hard"})");
  auto b = call(R"({"service":"generate","exercise":"powerExercise","seed":7,"difficulty":"hard"})");
  CHECK(a == b);
  Expr e = parse_expr(a["ok"]["expr"].get<std::string>());
  CHECK(e == generate_power(Difficulty::Hard, 7));
  CHECK(suitable_power(e));
  CHECK_FALSE(ready_power(e));
  CHECK(a["ok"]["strategy"]["trace"].empty());
  CHECK(error_code(call(R"({"service":"generate","exercise":"powerExercise","seed":1,"difficulty":"extreme"})")) ==
        "invalid-argument");
}

TEST_CASE("lint service") {
  auto bad = call(R"({"service":"lint","strategy":"mu x . x ; AddExp"})")["ok"];
  CHECK(bad["clean"] == false);
  CHECK(bad["findings"][0]["kind"] == "LeftRecursion");
  CHECK(call(R"({"service":"lint","exercise":"powerExercise"})")["ok"]["clean"] == true);
  auto opaque = call(R"({"service":"lint","strategy":"mu x . Down ; x ; AddExp","mode":"opaque"})")["ok"];
  CHECK(opaque["clean"] == true);
}

TEST_CASE("request errors") {
  CHECK(error_code(call("not json")) == "parse-error");
  CHECK(error_code(call(R"({"service":"ready","exercise":"powerExercise","bogus":1})")) == "parse-error");
  CHECK(error_code(call(R"({"service":"fly","exercise":"powerExercise"})")) == "unknown-service");
  CHECK(error_code(call(R"({"service":"ready","exercise":"nope","state":{"expr":"a"}})")) == "unknown-code");
  CHECK(error_code(power("ready", R"("state":{"expr":"a^"})")) == "parse-error");
  CHECK(error_code(power("allfirsts", R"("state":{"expr":"a","strategy":{"term":"mu x . x ; AddExp"}})")) ==
        "budget-exceeded");
  CHECK(error_code(power("onefirst", R"("state":{"expr":"a","strategy":{"term":"succeed"}})")) ==
        "no-step-available");
  CHECK(error_code(power("ready", R"("state":{"expr":"a","path":[3]})")) == "invalid-location");
}

TEST_CASE("state round trip") {
  auto ex = power_exercise();
  StepBudget budget;
  std::vector<json> states{
      json::parse(R"({"expr":"(a^3*a^4)^2"})"),
      json::parse(std::string("{") + std::string(kS).substr(std::string(R"("state":{)").size())),
  };
  auto one = power("onefirst", R"("state":{"expr":"(a^3*a^4)^2"})")["ok"]["state"];
  states.push_back(one);
  states.push_back(power("apply", R"("rule":"ReciExp","location":[0],"state":)" + one.dump())["ok"]);
  for (const auto& j : states) {
    CAPTURE(j.dump());
    auto s = state_from_json(j, ex, budget);
    auto back = state_to_json(s);
    auto again = state_from_json(back, ex, budget);
    CHECK(state_key(again.state) == state_key(s.state));
    CHECK(state_to_json(again) == back);
  }
}

TEST_CASE("serve keeps going after bad lines") {
  std::istringstream in(
      "{\"service\":\"ready\",\"exercise\":\"powerExercise\",\"state\":{\"expr\":\"a^14\"}}\n"
      "\n"
      "{oops\n"
      "{\"service\":\"ready\",\"exercise\":\"powerExercise\",\"state\":{\"expr\":\"a^2*a^3\"}}\n");
  std::ostringstream out;
  serve(in, out, default_registry(), ServeOptions{});
  CHECK(out.str() ==
        "{\"ok\":true}\n"
        "{\"error\":{\"code\":\"parse-error\",\"message\":" +
            json(json::parse(handle_request("{oops", default_registry(), ServeOptions{}))["error"]["message"]).dump() +
            "}}\n"
            "{\"ok\":false}\n");
}
