#include <doctest.h>

#include <string>

#include "evstudy/csv.hpp"
#include "evstudy/error.hpp"
#include "evstudy/events.hpp"
#include "evstudy/ingest.hpp"
#include "evstudy/synth.hpp"

using namespace evstudy;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return sys_days{year{y} / month{m} / day{d}}; }

std::string release_list() { return read_file(std::string(EVSTUDY_SOURCE_DIR) + "/data/release_events.csv"); }

std::size_t error_row(auto&& f) {
    try {
        f();
    } catch (const ParseError& e) {
        return e.row();
    }
    return SIZE_MAX;
}

}  // namespace

TEST_CASE("csv reader") {
    const auto t = read_csv("\xEF\xBB\xBF" "a,b\r\n1,\"x,\"\"y\"\"\"\r\n\r\n2,\"multi\nline\"\n");
    REQUIRE(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "x,\"y\"");
    CHECK(t.rows[1][1] == "multi\nline");
    CHECK(t.column("b") == 1u);
    CHECK_FALSE(t.column("c"));
    CHECK(error_row([] { read_csv("a,b\n1,2\n3\n"); }) == 2);
    CHECK_THROWS_AS(read_csv("a\n\"open"), ParseError);
    CHECK(csv_line({"a,b", "c\"d", "e"}) == "\"a,b\",\"c\"\"d\",e\n");
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, -17.6, 1e-300, 3.0, 12345.678901234567})
        CHECK(parse_number(format_number(v)) == v);
    CHECK_FALSE(parse_number("1.5x"));
    CHECK_FALSE(parse_number(""));
    CHECK_FALSE(parse_number("nan"));
    CHECK(parse_number(" 2.5 ") == 2.5);
}

TEST_CASE("parse_fred_csv") {
    const auto s = parse_fred_csv("DATE,DGS30\n2023-01-03,3.88\n2023-01-04,.\n");
    CHECK(s.size() == 1);
    CHECK(s.values()[0] == 3.88);
    CHECK(s.asset_id() == "DGS30");
    CHECK(s.transform() == Transform::Level);

    CHECK_THROWS_AS(parse_fred_csv("DATE,DGS30\n"), ParseError);
    CHECK_THROWS_AS(parse_fred_csv("DATE,DGS30\n2023-01-03,.\n"), ParseError);
    CHECK(error_row([] { parse_fred_csv("DATE,DGS30\n2023-01-03,3.8\n2023-01-03,3.9\n"); }) == 2);
    CHECK(error_row([] { parse_fred_csv("DATE,DGS30\n2023-01-04,3.8\n2023-01-03,3.9\n"); }) == 2);
    CHECK(error_row([] { parse_fred_csv("DATE,DGS30\n2023-01-03,3.8\n2023-01-04,abc\n"); }) == 2);
    CHECK(error_row([] { parse_fred_csv("DATE,DGS30\n2023-13-03,3.8\n"); }) == 1);
    CHECK_THROWS_AS(parse_fred_csv("DATE,A,B\n2023-01-03,1,2\n"), ParseError);
}

TEST_CASE("parse_ohlc_csv") {
    const std::string head = "Date,Open,High,Low,Close,Adj Close,Volume\n";
    const auto s = parse_ohlc_csv(head + "2024-01-02,1,1,1,1,10,5\n2024-01-03,1,1,1,1,11,5\n2024-01-04,1,1,1,1,12,5\n");
    CHECK(s.size() == 3);
    CHECK(s.transform() == Transform::Log);
    CHECK(s.values()[2] == 12.0);
    CHECK_THROWS_AS(parse_ohlc_csv(head + "2024-01-02,1,1,1,1,0,5\n"), ParseError);
    CHECK_THROWS_AS(parse_ohlc_csv(head + "2024-01-03,1,1,1,1,10,5\n2024-01-02,1,1,1,1,10,5\n"), ParseError);
    CHECK_THROWS_AS(parse_ohlc_csv("Date,Close\n2024-01-02,10\n"), ParseError);
}

TEST_CASE("parse_event_table on the release list") {
    const auto events = parse_event_table(release_list());
    CHECK(events.size() == 47);
    const auto g = split_by_openness(events);
    CHECK(g.group_a.size() == 23);
    CHECK(g.group_b.size() == 24);

    const auto& llama = *std::find_if(events.begin(), events.end(),
                                      [](const Event& e) { return e.name == "Meta LLaMA 1"; });
    CHECK(llama.date == ymd(2023, 2, 24));
    CHECK(llama.openness == Openness::Open);
    CHECK(llama.text(attr::country) == "United States");

    CHECK(events.filter_years(2023, 2024).size() == 33);
}

TEST_CASE("parse_event_table rejects malformed rows") {
    CHECK(parse_event_table("").empty());
    CHECK(parse_event_table("date,model,open\n").empty());
    CHECK_THROWS_AS(parse_event_table("date,model\n2024-01-01,a\n"), ParseError);
    CHECK(error_row([] { parse_event_table("date,model,open\n2024-01-01,a,x\n2024-01-01,b,y\n"); }) == 2);
    CHECK(error_row([] { parse_event_table("date,model,open\n2024-01-01,a,x\n2024-02-31,b,\n"); }) == 2);
    CHECK_THROWS_AS(parse_event_table("date,model,open\n2024-01-01,a,x\n2024-01-01,a,\n"), Error);
    CHECK_THROWS_AS(parse_event_table("date,model,open,arena_score\n2024-01-01,a,x,high\n"), ParseError);
}

TEST_CASE("event table round trip") {
    const auto events = parse_event_table(
        "date,model,open,lab,country,arena_score,frontier_gap,agi_shift,notes\n"
        "02/24/2023,Meta LLaMA 1,x,Meta,United States,1200.5,,-3,\"quoted, note\"\n"
        "2023-03-14,OpenAI GPT 4,,OpenAI,United States,,12,,\n"
        "2023-03-14,Anthropic Claude 1,,Anthropic,United States,,,,\n");
    const auto text = render_event_table(events);
    CHECK(parse_event_table(text) == events);
    CHECK(render_event_table(parse_event_table(text)) == text);
    CHECK(parse_event_table(render_event_table(parse_event_table(release_list()))) == parse_event_table(release_list()));
}

TEST_CASE("parse_forecast_series") {
    const auto s = parse_forecast_series("date,forecast\n2024-01-02,2031-06-01\n2024-01-03,.\n2024-01-04,22000\n");
    REQUIRE(s.size() == 2);
    CHECK(s.values()[0] == static_cast<double>(ymd(2031, 6, 1).time_since_epoch().count()));
    CHECK(s.values()[1] == 22000.0);
    CHECK_THROWS_AS(parse_forecast_series("date,forecast\n2024-01-03,1\n2024-01-02,2\n"), ParseError);
}

TEST_CASE("synthetic series round-trip through the CSV writers") {
    const auto walk = generate_walk({.length = 60, .sigma = 0.07, .seed = 4});
    const auto fred = parse_fred_csv(render_fred_csv(walk), walk.asset_id());
    CHECK(std::equal(fred.values().begin(), fred.values().end(), walk.values().begin()));
    CHECK(fred.calendar().dates().size() == walk.calendar().size());

    const PriceSeries equity("EQ", walk.calendar(), std::vector<double>(60, 101.25), Transform::Log);
    const auto ohlc = parse_ohlc_csv(render_ohlc_csv(equity), "EQ");
    CHECK(ohlc.values()[59] == 101.25);
    CHECK(ohlc.transform() == Transform::Log);
}
