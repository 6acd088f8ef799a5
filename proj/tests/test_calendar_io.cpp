#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "mcast/calendar_io.hpp"
#include "mcast/errors.hpp"
#include "mcast/features.hpp"
#include "mcast/io_util.hpp"

using namespace mcast;
namespace fs = std::filesystem;

namespace {

std::string tmpfile(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "mcast_io_tests";
    fs::create_directories(dir);
    std::string path = (dir / name).string();
    write_file(path, content);
    return path;
}

} // namespace

TEST_CASE("price csv: happy path, weekend rows dropped with a count") {
    // 2024-01-06 is a Saturday
    std::string p = tmpfile("px.csv",
                            "date,open,high,low,close,volume\n"
                            "2024-01-05,10,11,9,10.5,1000\n"
                            "2024-01-06,10.5,11,10,10.8,50\n"
                            "2024-01-08,10.8,12,10.5,11.9,1200\n");
    int weekend = 0;
    auto bars = load_price_csv(p, BusinessCalendar{}, &weekend);
    REQUIRE(bars.size() == 2);
    CHECK(weekend == 1);
    CHECK(bars[0].date == Date(2024, 1, 5));
    CHECK(bars[1].close == doctest::Approx(11.9));
}

TEST_CASE("price csv: header, arity, OHLC and duplicate-date rejection") {
    CHECK_THROWS_AS(load_price_csv(tmpfile("h.csv", "date,open,close\n"), BusinessCalendar{}),
                    ValidationError);
    CHECK_THROWS_AS(load_price_csv(tmpfile("a.csv",
                                           "date,open,high,low,close,volume\n"
                                           "2024-01-05,10,11,9\n"),
                                   BusinessCalendar{}),
                    ValidationError);
    // low above open violates the bar invariant; the message names the line
    try {
        load_price_csv(tmpfile("o.csv",
                               "date,open,high,low,close,volume\n"
                               "2024-01-05,10,11,10.2,10.5,1000\n"),
                       BusinessCalendar{});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_price_csv(tmpfile("d.csv",
                                           "date,open,high,low,close,volume\n"
                                           "2024-01-05,10,11,9,10.5,1000\n"
                                           "2024-01-05,10,11,9,10.5,1000\n"),
                                   BusinessCalendar{}),
                    ValidationError);
    CHECK_THROWS_AS(load_price_csv("/nonexistent/px.csv", BusinessCalendar{}), MissingInputError);
}

TEST_CASE("macro csv: '.' placeholders skipped and counted") {
    std::string p = tmpfile("cpi.csv",
                            "date,value\n"
                            "2023-11-01,307.0\n"
                            "2023-12-01,.\n"
                            "2024-01-01,308.4\n");
    MacroSeries s = load_macro_csv(p, "CPI");
    CHECK(s.series_id == "CPI");
    CHECK(s.skipped_missing == 1);
    REQUIRE(s.observations.size() == 2);
    CHECK(s.observations[1].value == doctest::Approx(308.4));
    CHECK(s.release_lag_bd == 10);
}

TEST_CASE("macro csv: non-increasing dates rejected") {
    std::string p = tmpfile("bad.csv",
                            "date,value\n"
                            "2024-01-01,1\n"
                            "2024-01-01,2\n");
    CHECK_THROWS_AS(load_macro_csv(p, "X"), ValidationError);
}

TEST_CASE("default publication lags") {
    CHECK(default_release_lag("CPIAUCSL") == 10);
    CHECK(default_release_lag("CPI") == 10);
    CHECK(default_release_lag("UNRATE") == 5);
    CHECK(default_release_lag("GDP") == 30);
    CHECK(default_release_lag("T10Y2Y") == 0);
    CHECK(default_release_lag("SOMETHING_ELSE") == 0);
}

TEST_CASE("publication lag: availability shifted by business days, then forward-filled") {
    // Reference date Friday 2024-01-05 with a 5-business-day lag becomes
    // available Friday 2024-01-12.
    MacroSeries s;
    s.series_id = "UNRATE";
    s.release_lag_bd = 5;
    s.observations = {{Date(2024, 1, 5), 3.7}, {Date(2024, 2, 2), 3.9}};
    BusinessCalendar cal;
    DailySeries daily = apply_publication_lag(s, cal, Date(2024, 1, 1), Date(2024, 2, 15));
    CHECK(daily.count(Date(2024, 1, 11)) == 0); // day before availability
    REQUIRE(daily.count(Date(2024, 1, 12)) == 1);
    CHECK(daily.at(Date(2024, 1, 12)) == doctest::Approx(3.7));
    // forward-filled across the gap, on business days only
    CHECK(daily.at(Date(2024, 2, 2)) == doctest::Approx(3.7));
    CHECK(daily.count(Date(2024, 1, 13)) == 0); // Saturday
    // 2024-02-02 + 5 bd = 2024-02-09
    CHECK(daily.at(Date(2024, 2, 9)) == doctest::Approx(3.9));
    CHECK(daily.at(Date(2024, 2, 8)) == doctest::Approx(3.7));
}

TEST_CASE("publication lag: a holiday inside the lag window delays availability") {
    // 10 business days from Friday 2024-01-12 is Friday 2024-01-26; with MLK
    // day (Monday 2024-01-15) as a holiday it slips to Monday 2024-01-29.
    MacroSeries s;
    s.series_id = "CPI";
    s.release_lag_bd = 10;
    s.observations = {{Date(2024, 1, 12), 100.0}};
    BusinessCalendar plain;
    BusinessCalendar with_holiday({0, 1, 2, 3, 4}, {Date(2024, 1, 15)});
    auto d0 = apply_publication_lag(s, plain, Date(2024, 1, 12), Date(2024, 2, 2));
    auto d1 = apply_publication_lag(s, with_holiday, Date(2024, 1, 12), Date(2024, 2, 2));
    CHECK(d0.count(Date(2024, 1, 25)) == 0);
    CHECK(d0.count(Date(2024, 1, 26)) == 1);
    CHECK(d1.count(Date(2024, 1, 26)) == 0);
    CHECK(d1.count(Date(2024, 1, 29)) == 1);
}

TEST_CASE("scaler: population statistics over the window") {
    std::vector<std::vector<double>> rows = {{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}, {99.0, 99.0}};
    std::vector<Date> dates = {Date(2024, 1, 2), Date(2024, 1, 3), Date(2024, 1, 4),
                               Date(2024, 1, 5)};
    // window excludes the last row
    ScalerParams sc = fit_scaler(rows, dates, Date(2024, 1, 2), Date(2024, 1, 4));
    REQUIRE(sc.size() == 2);
    CHECK(sc.mean[0] == doctest::Approx(2.0));
    CHECK(sc.std[0] == doctest::Approx(std::sqrt(2.0 / 3.0))); // 0.8164965...
    CHECK(!sc.degenerate[0]);
    // constant column: std snapped to 1 and flagged
    CHECK(sc.mean[1] == doctest::Approx(5.0));
    CHECK(sc.std[1] == doctest::Approx(1.0));
    CHECK(sc.degenerate[1]);

    auto z = sc.apply({3.0, 5.0});
    CHECK(z[0] == doctest::Approx(1.0 / std::sqrt(2.0 / 3.0)));
    CHECK(z[1] == doctest::Approx(0.0));
    auto back = sc.invert(z);
    CHECK(back[0] == doctest::Approx(3.0));
    CHECK(back[1] == doctest::Approx(5.0));
}

TEST_CASE("scaler: needs at least two rows in the window") {
    std::vector<std::vector<double>> rows = {{1.0}};
    std::vector<Date> dates = {Date(2024, 1, 2)};
    CHECK_THROWS_AS(fit_scaler(rows, dates, Date(2024, 1, 2), Date(2024, 1, 2)), ValidationError);
}

TEST_CASE("embeddings: header parsing and renormalization") {
    std::string p = tmpfile("emb.txt",
                            "# dim=3 normalized=false\n"
                            "2024-01-05,3,0,4\n"
                            "2024-01-08,0,1,0\n");
    EmbeddingFile f = load_embeddings(p);
    CHECK(f.dim == 3);
    REQUIRE(f.records.size() == 2);
    CHECK(f.records[0].vector[0] == doctest::Approx(0.6));
    CHECK(f.records[0].vector[2] == doctest::Approx(0.8));
}

TEST_CASE("embeddings: dimension mismatch names the offending date") {
    std::string p = tmpfile("emb_bad.txt",
                            "# dim=3 normalized=true\n"
                            "2024-01-05,1,0,0\n"
                            "2024-01-08,1,0\n");
    try {
        load_embeddings(p);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("2024-01-08") != std::string::npos);
    }
    CHECK_THROWS_AS(load_embeddings(tmpfile("emb_h.txt", "2024-01-05 1 0 0\n")), ValidationError);
}

TEST_CASE("sentiment csv loads named columns") {
    std::string p = tmpfile("sent.csv",
                            "date,s1,s2\n"
                            "2024-01-05,0.5,-0.25\n");
    SentimentTable t = load_sentiment_csv(p);
    REQUIRE(t.columns.size() == 2);
    CHECK(t.columns[0] == "s1");
    CHECK(t.rows.at(Date(2024, 1, 5))[1] == doctest::Approx(-0.25));
}

namespace {

// Ten consecutive business days of bars plus matching embeddings/macro, used
// by the alignment cases below.
struct Fixture {
    std::vector<PriceBar> bars;
    EmbeddingFile emb;
    std::map<std::string, DailySeries> macro;
    SentimentTable sent;
    BusinessCalendar cal;
    FeatureSpec spec;

    Fixture() {
        Date d(2024, 1, 1); // Monday
        double px = 100.0;
        for (int i = 0; i < 10;) {
            if (cal.is_business_day(d)) {
                PriceBar b;
                b.date = d;
                b.open = px;
                b.close = px * (1.0 + 0.01 * ((i % 3) - 1));
                b.high = std::max(b.open, b.close) * 1.001;
                b.low = std::min(b.open, b.close) * 0.999;
                b.volume = 1000 + i;
                bars.push_back(b);
                px = b.close;
                EmbeddingRecord r;
                r.date = d;
                r.vector = {i % 2 ? 1.0 : 0.0, i % 2 ? 0.0 : 1.0};
                emb.records.push_back(r);
                macro["M1"][d] = 1.0 + i;
                sent.rows[d] = {0.1 * i};
                ++i;
            }
            d = d + 1;
        }
        emb.dim = 2;
        sent.columns = {"s1"};
        spec.return_lags = {1};
        spec.vol_window = 3;
        spec.sentiment_columns = {"s1"};
    }
};

} // namespace

TEST_CASE("align: text and sentiment come from the previous business day") {
    Fixture fx;
    AlignReport rep;
    AlignedDataset ds = align(fx.bars, fx.macro, fx.emb, fx.sent, fx.spec, fx.cal,
                              fx.bars.front().date, fx.bars.back().date, &rep);
    REQUIRE(!ds.records.empty());
    // vol_window=3 needs 3 trailing returns -> first feature-complete bar is
    // index 3; the last bar has no next-day label.
    CHECK(ds.records.front().date == fx.bars[3].date);
    CHECK(ds.records.back().date == fx.bars[8].date);
    for (const auto& r : ds.records) {
        // locate the bar and confirm t_vec equals the previous bar's embedding
        std::size_t i = 0;
        while (fx.bars[i].date != r.date) ++i;
        CHECK(r.t_vec == fx.emb.records[i - 1].vector);
        // sentiment column rides the previous evening too
        CHECK(r.x_num.back() == doctest::Approx(0.1 * (i - 1)));
        // macro is day-t availability
        CHECK(r.z_vec[0] == doctest::Approx(fx.macro.at("M1").at(r.date)));
        // label matches next bar's open vs today's close
        std::size_t j = i + 1;
        CHECK(r.label == (fx.bars[j].open > fx.bars[i].close ? 1 : 0));
        CHECK(r.fwd_return == doctest::Approx(fx.bars[j].close / fx.bars[i].close - 1.0));
    }
    CHECK(rep.kept == static_cast<int>(ds.records.size()));
    CHECK(rep.dropped_missing_label == 1);
}

TEST_CASE("align: missing embedding or macro drops the day with a count") {
    Fixture fx;
    AlignReport base;
    align(fx.bars, fx.macro, fx.emb, fx.sent, fx.spec, fx.cal, fx.bars.front().date,
          fx.bars.back().date, &base);
    fx.emb.records.erase(fx.emb.records.begin() + 4); // kills day 5's t_vec
    AlignReport rep;
    AlignedDataset ds = align(fx.bars, fx.macro, fx.emb, fx.sent, fx.spec, fx.cal,
                              fx.bars.front().date, fx.bars.back().date, &rep);
    CHECK(rep.dropped_missing_embedding == base.dropped_missing_embedding + 1);
    for (const auto& r : ds.records) CHECK(r.date != fx.bars[5].date);

    Fixture fx2;
    fx2.macro.at("M1").erase(fx2.bars[6].date);
    AlignReport rep2;
    align(fx2.bars, fx2.macro, fx2.emb, fx2.sent, fx2.spec, fx2.cal, fx2.bars.front().date,
          fx2.bars.back().date, &rep2);
    CHECK(rep2.dropped_missing_macro == 1);
}

TEST_CASE("align: zero usable rows is an error") {
    Fixture fx;
    fx.emb.records.clear();
    CHECK_THROWS_AS(align(fx.bars, fx.macro, fx.emb, fx.sent, fx.spec, fx.cal,
                          fx.bars.front().date, fx.bars.back().date, nullptr),
                    ValidationError);
}

TEST_CASE("aligned dataset: save/load round trip is exact") {
    Fixture fx;
    AlignedDataset ds = align(fx.bars, fx.macro, fx.emb, fx.sent, fx.spec, fx.cal,
                              fx.bars.front().date, fx.bars.back().date, nullptr);
    fs::path dir = fs::temp_directory_path() / "mcast_io_tests";
    std::string p = (dir / "aligned.csv").string();
    save_aligned(ds, p);
    AlignedDataset back = load_aligned(p);
    REQUIRE(back.records.size() == ds.records.size());
    CHECK(back.text_dim == ds.text_dim);
    CHECK(back.macro_dim == ds.macro_dim);
    CHECK(back.num_dim == ds.num_dim);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(back.records[i].date == ds.records[i].date);
        CHECK(back.records[i].label == ds.records[i].label);
        CHECK(back.records[i].x_num == ds.records[i].x_num); // bit-exact via %.17g
        CHECK(back.records[i].t_vec == ds.records[i].t_vec);
        CHECK(back.records[i].z_vec == ds.records[i].z_vec);
        CHECK(back.records[i].fwd_return == ds.records[i].fwd_return);
    }
    // a second save is byte-identical
    std::string p2 = (dir / "aligned2.csv").string();
    save_aligned(back, p2);
    CHECK(read_file(p) == read_file(p2));
}
