#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"

using namespace frust;
using testutil::make_series;

namespace {

IndexSeries parse(const std::string& csv, const std::string& id = "SPX") {
    std::istringstream in(csv);
    return parse_series_csv(in, id, "test.csv");
}

} // namespace

TEST_CASE("parse_iso_date accepts strict ISO-8601 and rejects the rest") {
    CHECK(*parse_iso_date("1987-07-01") == Date{1987, 7, 1});
    CHECK(*parse_iso_date("2000-02-29") == Date{2000, 2, 29}); // leap
    CHECK(!parse_iso_date("1900-02-29").has_value());          // 1900 is not leap
    CHECK(!parse_iso_date("1987-13-01").has_value());
    CHECK(!parse_iso_date("1987-04-31").has_value());
    CHECK(!parse_iso_date("1987/07/01").has_value());
    CHECK(!parse_iso_date("87-07-01").has_value());
    CHECK(!parse_iso_date("1987-7-1").has_value());
    CHECK(!parse_iso_date("").has_value());
}

TEST_CASE("day_number round-trips dates") {
    CHECK(day_number(Date{1970, 1, 1}) == 0);
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(-60000, 60000);
    for (int i = 0; i < 200; ++i) {
        const long n = d(rng);
        CHECK(day_number(date_from_day_number(n)) == n);
    }
}

TEST_CASE("load_series: minimal well-formed input") {
    const auto s = parse("date,value\n1987-07-01,100.0\n1987-07-02,101.0\n");
    CHECK(s.sector_id == "SPX");
    REQUIRE(s.observations.size() == 2);
    CHECK(s.observations[0].date == Date{1987, 7, 1});
    CHECK(s.observations[0].level == 100.0);
    CHECK(s.observations[1].level == 101.0);
}

TEST_CASE("load_series: out-of-order rows come back sorted, same content") {
    const auto s = parse("date,value\n1987-07-03,103\n1987-07-01,101\n1987-07-02,102\n");
    REQUIRE(s.observations.size() == 3);
    CHECK(s.observations[0].date.day == 1);
    CHECK(s.observations[1].date.day == 2);
    CHECK(s.observations[2].date.day == 3);
    CHECK(s.observations[0].level == 101.0);
    CHECK(s.observations[2].level == 103.0);
}

TEST_CASE("load_series: duplicate date is a validation error") {
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,100\n1987-07-01,101\n"), ValidationError);
}

TEST_CASE("load_series: non-positive or non-finite level is a validation error") {
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,0\n1987-07-02,101\n"), ValidationError);
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,-3.5\n1987-07-02,101\n"), ValidationError);
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,inf\n1987-07-02,101\n"), ValidationError);
}

TEST_CASE("load_series: malformed rows carry the line number") {
    try {
        parse("date,value\n1987-07-01,100\nnot-a-date,101\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    try {
        parse("date,value\n1987-07-01,abc\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("date,value\n1987-07-01\n"), ParseError);        // one field
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,1,2\n"), ParseError);    // three fields
    CHECK_THROWS_AS(parse("wrong,header\n1987-07-01,100\n"), ParseError);  // bad header
    CHECK_THROWS_AS(parse(""), ParseError);                                // empty file
}

TEST_CASE("load_series: fewer than 2 observations rejected") {
    CHECK_THROWS_AS(parse("date,value\n1987-07-01,100\n"), ValidationError);
}

TEST_CASE("load_series: missing file is a data error") {
    CHECK_THROWS_AS(load_series("/nonexistent/nope.csv", "SPX"), DataError);
}

TEST_CASE("align: inner join keeps only shared dates, column order = input order") {
    const auto a = make_series("A", {{"1987-01-01", 1},
                                     {"1987-01-02", 2},
                                     {"1987-01-03", 3},
                                     {"1987-01-04", 4},
                                     {"1987-01-05", 5},
                                     {"1987-01-06", 6},
                                     {"1987-01-07", 7}});
    const auto b = make_series("B", {{"1987-01-01", 10},
                                     {"1987-01-02", 20},
                                     {"1987-01-04", 40},
                                     {"1987-01-05", 50},
                                     {"1987-01-06", 60}});
    const auto c = make_series("C", {{"1987-01-01", 100},
                                     {"1987-01-02", 200},
                                     {"1987-01-03", 300},
                                     {"1987-01-04", 400},
                                     {"1987-01-05", 500},
                                     {"1987-01-06", 600},
                                     {"1987-01-07", 700}});
    const std::vector<IndexSeries> all = {a, b, c};
    const auto panel = align(all);
    CHECK(panel.sectors == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(panel.rows() == 5); // b misses Jan 3 and 7
    CHECK(panel.at(2, 0) == 4.0);
    CHECK(panel.at(2, 1) == 40.0);
    CHECK(panel.at(2, 2) == 400.0);
}

TEST_CASE("align: identical date sets keep every date") {
    const auto a = make_series("A", {{"1987-01-01", 1}, {"1987-01-02", 2}});
    auto b = a, c = a;
    b.sector_id = "B";
    c.sector_id = "C";
    const std::vector<IndexSeries> all = {a, b, c};
    CHECK(align(all).rows() == 2);
}

TEST_CASE("align: disjoint dates raise an alignment error") {
    const auto a = make_series("A", {{"1987-01-01", 1}, {"1987-01-02", 2}});
    const auto b = make_series("B", {{"1987-02-01", 1}, {"1987-02-02", 2}});
    const auto c = make_series("C", {{"1987-03-01", 1}, {"1987-03-02", 2}});
    const std::vector<IndexSeries> all = {a, b, c};
    CHECK_THROWS_AS(align(all), AlignmentError);
}

TEST_CASE("align: needs 3 series with distinct ids") {
    const auto a = make_series("A", {{"1987-01-01", 1}, {"1987-01-02", 2}});
    auto b = a;
    b.sector_id = "B";
    {
        const std::vector<IndexSeries> two = {a, b};
        CHECK_THROWS_AS(align(two), ValidationError);
    }
    {
        const std::vector<IndexSeries> dup = {a, b, a};
        CHECK_THROWS_AS(align(dup), ValidationError);
    }
}

TEST_CASE("align is idempotent on already-aligned data") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> level(50.0, 150.0);
    std::uniform_int_distribution<int> keep(0, 4);
    std::vector<IndexSeries> series;
    for (int s = 0; s < 4; ++s) {
        IndexSeries is{"S" + std::to_string(s), {}};
        for (int d = 0; d < 40; ++d) {
            if (keep(rng) == 0) continue; // drop ~20% of dates
            is.observations.push_back({date_from_day_number(6000 + d), level(rng)});
        }
        series.push_back(std::move(is));
    }
    const auto panel = align(series);

    std::vector<IndexSeries> rederived;
    for (std::size_t c = 0; c < panel.cols(); ++c) {
        IndexSeries is{panel.sectors[c], {}};
        for (std::size_t r = 0; r < panel.rows(); ++r)
            is.observations.push_back({panel.dates[r], panel.at(r, c)});
        rederived.push_back(std::move(is));
    }
    const auto again = align(rederived);
    CHECK(again.sectors == panel.sectors);
    CHECK(again.dates == panel.dates);
    CHECK(again.values == panel.values);
}

namespace {

// Three synchronized series covering consecutive calendar days.
std::vector<IndexSeries> daily_series(Date first, Date last) {
    std::vector<IndexSeries> series;
    for (int s = 0; s < 3; ++s) {
        IndexSeries is{"S" + std::to_string(s), {}};
        for (long d = day_number(first); d <= day_number(last); ++d)
            is.observations.push_back({date_from_day_number(d), 100.0 + (d % 17) + s});
        series.push_back(std::move(is));
    }
    return series;
}

} // namespace

TEST_CASE("partition_windows: a full 1987 panel yields y 87.0 and 87.5") {
    const auto series = daily_series(Date{1987, 1, 2}, Date{1987, 12, 31});
    const auto part = partition_windows(align(series), 20);
    REQUIRE(part.windows.size() == 2);
    CHECK(part.windows[0].window.y() == 87.0);
    CHECK(part.windows[1].window.y() == 87.5);
    CHECK(part.skipped.empty());
    CHECK(part.windows[0].panel.dates.back() == Date{1987, 6, 30});
    CHECK(part.windows[1].panel.dates.front() == Date{1987, 7, 1});
}

TEST_CASE("partition_windows: short windows are skipped with a report, not an error") {
    // 3 rows at the end of H1, the whole of H2
    auto series = daily_series(Date{1987, 6, 28}, Date{1987, 12, 31});
    const auto part = partition_windows(align(series), 20);
    REQUIRE(part.windows.size() == 1);
    CHECK(part.windows[0].window == WindowId{1987, 2});
    REQUIRE(part.skipped.size() == 1);
    CHECK(part.skipped[0].window == WindowId{1987, 1});
    CHECK(part.skipped[0].rows == 3);
    CHECK(part.skipped[0].reason.find("min_obs") != std::string::npos);
}

TEST_CASE("partition_windows: panel inside one half-year gives exactly one window") {
    const auto series = daily_series(Date{1990, 2, 1}, Date{1990, 3, 15});
    const auto part = partition_windows(align(series), 20);
    REQUIRE(part.windows.size() == 1);
    CHECK(part.windows[0].window.y() == 90.0);
}

TEST_CASE("partition_windows covers every row exactly once") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long> start(3000, 9000);
    for (int trial = 0; trial < 20; ++trial) {
        AlignedPanel panel;
        panel.sectors = {"A", "B", "C"};
        const long s = start(rng);
        const long len = 30 + static_cast<long>(rng() % 500);
        for (long d = s; d < s + len; ++d) {
            panel.dates.push_back(date_from_day_number(d));
            for (int c = 0; c < 3; ++c) panel.values.push_back(1.0 + double((d + c) % 7));
        }
        const auto part = partition_windows(panel, 20);
        std::size_t covered = 0;
        for (const auto& wp : part.windows) {
            covered += wp.panel.rows();
            for (const auto& d : wp.panel.dates) CHECK(WindowId::of(d) == wp.window);
        }
        for (const auto& sw : part.skipped) covered += sw.rows;
        CHECK(covered == panel.rows());
        for (std::size_t i = 1; i < part.windows.size(); ++i)
            CHECK(part.windows[i - 1].window.y() < part.windows[i].window.y());
    }
}

TEST_CASE("window y coordinate round-trips bijectively over 1900-2100") {
    std::set<double> seen;
    for (int year = 1900; year <= 2100; ++year)
        for (int half : {1, 2}) {
            const WindowId w{year, half};
            const double y = w.y();
            CHECK(WindowId::from_y(y) == w);
            CHECK(seen.insert(y).second); // no two windows share a y
        }
    CHECK(WindowId{1987, 1}.y() == 87.0);
    CHECK(WindowId{1987, 2}.y() == 87.5);
    CHECK(WindowId{1987, 2}.tag() == "087.5");
    CHECK(WindowId{2004, 1}.tag() == "104.0");
    CHECK_THROWS_AS(WindowId::from_y(87.25), ValidationError);
}

TEST_CASE("half-year boundaries split at June 30 / July 1") {
    CHECK(WindowId::of(Date{1987, 6, 30}) == WindowId{1987, 1});
    CHECK(WindowId::of(Date{1987, 7, 1}) == WindowId{1987, 2});
    CHECK(WindowId::of(Date{1987, 1, 1}) == WindowId{1987, 1});
    CHECK(WindowId::of(Date{1987, 12, 31}) == WindowId{1987, 2});
}

TEST_CASE("to_log_returns drops the first row and takes per-column log ratios") {
    AlignedPanel panel;
    panel.sectors = {"A", "B", "C"};
    panel.dates = {Date{1987, 1, 1}, Date{1987, 1, 2}, Date{1987, 1, 3}};
    panel.values = {100, 10, 1, 110, 20, 2, 121, 10, 4};
    const auto r = to_log_returns(panel);
    REQUIRE(r.rows() == 2);
    CHECK(r.dates.front() == Date{1987, 1, 2});
    CHECK(r.at(0, 0) == doctest::Approx(std::log(1.1)).epsilon(1e-12));
    CHECK(r.at(1, 1) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(r.at(1, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("forward_fill bridges small gaps only") {
    const auto a = make_series("A", {{"1987-01-01", 1}, {"1987-01-10", 2}}); // 9-day hole
    const auto b = make_series("B", {{"1987-01-01", 5}, {"1987-01-03", 6}, {"1987-01-10", 7}});
    const auto c = make_series("C", {{"1987-01-01", 8}, {"1987-01-03", 9}, {"1987-01-10", 10}});
    const std::vector<IndexSeries> all = {a, b, c};
    const auto filled = forward_fill(all, 5);
    REQUIRE(filled[0].observations.size() == 3); // gains Jan 3, keeps the 9-day hole
    CHECK(filled[0].observations[1].date == Date{1987, 1, 3});
    CHECK(filled[0].observations[1].level == 1.0);
    CHECK(align(filled).rows() == 3);

    const auto unfilled = forward_fill(all, 1);
    CHECK(unfilled[0].observations.size() == 2); // Jan 3 is 2 days out, over the cap
}
