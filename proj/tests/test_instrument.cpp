#include <doctest.h>

#include <stdexcept>

#include "cbtree/instrument.hpp"
#include "sample_terms.hpp"

using namespace cbtree;

TEST_CASE("coupon amounts accrue on actual days over 365") {
    const auto coupons = coupon_amounts(sample_convertible());
    REQUIRE(coupons.size() == 10);
    // 2009-01-06 to 2009-07-06 is 181 days: 100 * 0.08 * 181/365, frozen as
    // 3.9671232876712329 from a high-precision reference.
    CHECK(coupons[0].date == Date::parse("2009-07-06"));
    CHECK(coupons[0].amount == doctest::Approx(3.9671232876712329).epsilon(1e-15));
    // The back half of each year runs 184 days.
    CHECK(coupons[1].amount == doctest::Approx(100.0 * 0.08 * 184.0 / 365.0).epsilon(1e-15));
    // Periods chain: each accrual starts at the previous coupon date.
    double total_days = 0.0;
    Date prev = Date::parse("2009-01-06");
    for (const CouponPayment& c : coupons) {
        total_days += days_between(prev, c.date);
        prev = c.date;
    }
    CHECK(total_days == 1826.0);
}

TEST_CASE("a full 365-day period pays exactly the annual rate") {
    ConvertibleTerms t = zero_note_terms();
    t.coupon_rate = 0.08;
    t.coupon_dates = {Date::parse("2010-01-06")};  // 365 days after issue
    const auto coupons = coupon_amounts(t);
    REQUIRE(coupons.size() == 1);
    CHECK(coupons[0].amount == 8.0);  // 100 * 0.08 * 365/365, exact
}

TEST_CASE("no coupon dates means no coupons") {
    CHECK(coupon_amounts(zero_note_terms()).empty());
}

TEST_CASE("provisions switch on and off by date") {
    const ConvertibleTerms t = sample_convertible();

    SUBCASE("conversion runs the whole life") {
        CHECK(provisions_at(t, Date::parse("2009-01-06")).conversion_ratio == 1.0);
        CHECK(provisions_at(t, Date::parse("2011-06-15")).conversion_ratio == 1.0);
        CHECK(provisions_at(t, Date::parse("2014-01-06")).conversion_ratio == 1.0);
    }

    SUBCASE("the call window opens at year two") {
        CHECK_FALSE(provisions_at(t, Date::parse("2010-12-31")).call_price.has_value());
        CHECK(provisions_at(t, Date::parse("2011-01-06")).call_price == 110.0);
        CHECK(provisions_at(t, Date::parse("2013-05-01")).call_price == 110.0);
        CHECK(provisions_at(t, Date::parse("2014-01-06")).call_price == 110.0);
    }

    SUBCASE("the put exists on its exact date only") {
        CHECK(provisions_at(t, Date::parse("2012-01-06")).put_price == 105.0);
        CHECK_FALSE(provisions_at(t, Date::parse("2012-01-05")).put_price.has_value());
        CHECK_FALSE(provisions_at(t, Date::parse("2012-01-07")).put_price.has_value());
    }
}

TEST_CASE("ratio periods hand over at their start dates") {
    ConvertibleTerms t = zero_note_terms();
    t.conversion_start = Date::parse("2010-01-06");
    t.conversion_end = Date::parse("2013-01-06");
    t.conversion_ratios = {
        {Date::parse("2009-06-01"), 1.2},  // starts before the window opens
        {Date::parse("2011-01-06"), 0.9},
    };
    // Outside the window: nothing, even though a period has started.
    CHECK_FALSE(provisions_at(t, Date::parse("2009-12-31")).conversion_ratio.has_value());
    // Window open, first period's ratio in force.
    CHECK(provisions_at(t, Date::parse("2010-01-06")).conversion_ratio == 1.2);
    CHECK(provisions_at(t, Date::parse("2011-01-05")).conversion_ratio == 1.2);
    // Handover day.
    CHECK(provisions_at(t, Date::parse("2011-01-06")).conversion_ratio == 0.9);
    CHECK(provisions_at(t, Date::parse("2013-01-06")).conversion_ratio == 0.9);
    // Window closed again.
    CHECK_FALSE(provisions_at(t, Date::parse("2013-01-07")).conversion_ratio.has_value());
}

TEST_CASE("validation rejects inconsistent sheets") {
    const auto expect_reject = [](auto mutate) {
        ConvertibleTerms t = sample_convertible();
        mutate(t);
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    };
    expect_reject([](ConvertibleTerms& t) { t.face = 0.0; });
    expect_reject([](ConvertibleTerms& t) { t.face = -10.0; });
    expect_reject([](ConvertibleTerms& t) { t.coupon_rate = -0.01; });
    expect_reject([](ConvertibleTerms& t) { t.recovery = -0.1; });
    expect_reject([](ConvertibleTerms& t) { t.recovery = 1.5; });
    expect_reject([](ConvertibleTerms& t) { t.maturity_date = t.issue_date; });
    expect_reject([](ConvertibleTerms& t) {
        t.coupon_dates.push_back(Date::parse("2015-01-01"));  // past maturity
    });
    expect_reject([](ConvertibleTerms& t) {
        std::swap(t.coupon_dates[0], t.coupon_dates[1]);  // out of order
    });
    expect_reject([](ConvertibleTerms& t) { t.coupon_dates[0] = t.issue_date; });
    expect_reject([](ConvertibleTerms& t) { t.conversion_ratios[0].ratio = 0.0; });
    expect_reject([](ConvertibleTerms& t) { t.conversion_end = Date::parse("2008-01-01"); });
    expect_reject([](ConvertibleTerms& t) { t.calls[0].price = -5.0; });
    expect_reject([](ConvertibleTerms& t) {
        std::swap(t.calls[0].start, t.calls[0].end);  // inverted window
    });
    expect_reject([](ConvertibleTerms& t) {
        t.calls.push_back({Date::parse("2013-01-01"), Date::parse("2013-06-01"), 108.0});
    });  // overlaps the first window
    expect_reject([](ConvertibleTerms& t) { t.puts[0].price = 0.0; });
    expect_reject([](ConvertibleTerms& t) {
        t.puts.push_back({Date::parse("2012-01-06"), 104.0});  // duplicate date
    });

    CHECK_NOTHROW(sample_convertible().validate());
    CHECK_NOTHROW(zero_note_terms().validate());
}
