#include <doctest.h>

#include "tailbound/rational.hpp"
#include "tailbound/toml.hpp"

using namespace tailbound;

TEST_CASE("toml subset: sections, arrays, values") {
    const char* text = R"(
# comment
[prr]
name = "quickselect"   # trailing comment
toll = "n - 1"
nstar = 100

[[branch]]
region = ["x <= 50", "x >= 0"]
[[branch.step]]
prob = "3/4"
delta = {x = -1, y = 2.5}
[[branch]]
[[branch.step]]
prob = "1"
delta = {x = 1}
)";
    toml::document doc = toml::parse(text);
    const toml::table* prr = doc.find("prr");
    REQUIRE(prr != nullptr);
    CHECK(prr->get_string("name") == "quickselect");
    CHECK(prr->get_int("nstar", 0) == 100);
    CHECK(prr->get_int("B", 7) == 7);

    int branches = 0, steps = 0;
    for (const auto& s : doc.sections) {
        if (s.name == "branch") ++branches;
        if (s.name == "branch.step") ++steps;
    }
    CHECK(branches == 2);
    CHECK(steps == 2);

    for (const auto& s : doc.sections) {
        if (s.name == "branch" && s.tbl.has("region")) {
            CHECK(s.tbl.entries.at("region").list.size() == 2);
        }
        if (s.name == "branch.step" && s.tbl.get_string("prob") == "3/4") {
            const auto& d = s.tbl.entries.at("delta");
            REQUIRE(d.k == toml::value::TABLE);
            CHECK(d.table.at("x").str == "-1");
            CHECK(d.table.at("y").str == "2.5");
        }
    }
}

TEST_CASE("toml subset: errors") {
    CHECK_THROWS_AS(toml::parse("key = 1\n"), error);       // key outside table
    CHECK_THROWS_AS(toml::parse("[t]\nbad line\n"), error); // no equals
    CHECK_THROWS_AS(toml::parse("[t\n"), error);            // unterminated header
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == rational(3, 4));
    CHECK(parse_rational("0.75") == rational(3, 4));
    CHECK(parse_rational("-1") == rational(-1));
    CHECK(parse_rational("2.5e-1") == rational(1, 4));
    CHECK(parse_rational("1e3") == rational(1000));
    CHECK_THROWS_AS(parse_rational("1/0"), error);
    CHECK_THROWS_AS(parse_rational("abc"), error);
}
