#include "common/error.hpp"
#include "enclave/policy.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace teevil;
using namespace teevil::enclave;

namespace {

Amount coins(double c) { return Amount::from_coins(c); }

OwnerRecord owner(const std::string& id, double price, SimTime last_poll,
                  std::set<ActionKind> kinds = {ActionKind::upvote}, bool revert_ok = true)
{
    OwnerRecord r;
    r.owner_id = id;
    r.last_poll = last_poll;
    Policy p{"forum", std::move(kinds), {}, coins(price), revert_ok};
    r.services["forum"] = ServiceEnrollment{{"forum", id, "pw"}, p};
    return r;
}

} // namespace

TEST_CASE("policy validation")
{
    CHECK_NOTHROW(validate_policy({"s", {ActionKind::upvote}, {}, coins(1)}));
    CHECK_THROWS_AS(validate_policy({"s", {ActionKind::upvote}, {}, Amount{}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_policy({"s", {}, {}, coins(1)}), std::invalid_argument);
}

TEST_CASE("allows checks service, kind, whitelist and revert window")
{
    Policy p{"poll", {ActionKind::vote}, {"x"}, coins(1), false};
    CHECK(allows(p, "poll", {ActionKind::vote, "x", ""}, Duration{0}));
    CHECK_FALSE(allows(p, "poll", {ActionKind::vote, "y", ""}, Duration{0}));
    CHECK_FALSE(allows(p, "forum", {ActionKind::vote, "x", ""}, Duration{0}));
    CHECK_FALSE(allows(p, "poll", {ActionKind::upvote, "x", ""}, Duration{0}));
    CHECK_FALSE(allows(p, "poll", {ActionKind::vote, "x", ""}, seconds(60)));
}

TEST_CASE("select_compliant filters stale proxies and sorts by price then id")
{
    auto a = owner("a", 2.0, seconds(100));
    auto b = owner("b", 1.0, seconds(100));
    auto c = owner("c", 1.0, seconds(100));
    auto stale = owner("d", 0.5, seconds(10));
    auto wrong = owner("e", 0.5, seconds(100), {ActionKind::follow});
    auto norevert = owner("f", 0.5, seconds(100), {ActionKind::upvote}, false);
    auto got = select_compliant({&a, &b, &c, &stale, &wrong, &norevert}, "forum", {ActionKind::upvote, "p", ""},
                                seconds(30), seconds(110), seconds(60));
    REQUIRE(got.size() == 3);
    CHECK(got[0].owner_id == "b");
    CHECK(got[1].owner_id == "c");
    CHECK(got[2].owner_id == "a");
}

TEST_CASE("quote: the highest prices bound the funds")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Amount> prices;
        std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i)
            prices.push_back(Amount::from_units(1 + static_cast<std::int64_t>(rng() % 1'000'000'000)));
        std::size_t count = 1 + rng() % 15;
        Rate rate = Rate::from_ppm(static_cast<std::int64_t>(rng() % 2'000'000));
        Quote q = quote_from_prices(prices, count, rate);

        // Brute force: any choice of min(count, n) prices sums to at most the bound.
        auto sorted = prices;
        std::sort(sorted.rbegin(), sorted.rend());
        std::size_t k = std::min(count, n);
        Amount expected;
        for (std::size_t i = 0; i < k; ++i)
            expected += sorted[i];
        CHECK(q.slots() == k);
        CHECK(q.funds_upper_bound == expected);
        __int128 dep = static_cast<__int128>(expected.units()) * rate.ppm() / 1'000'000;
        CHECK(q.deposit_required.units() == static_cast<std::int64_t>(dep));
        CHECK(std::is_sorted(q.budgets.begin(), q.budgets.end()));
        CHECK(q.total() == q.funds_upper_bound + q.deposit_required);
    }
    CHECK_THROWS_AS(quote_from_prices({}, 3, Rate::from_ppm(0)), Error);
}

TEST_CASE("baseline quote numbers")
{
    Quote q = quote_from_prices({coins(1.0), coins(1.1), coins(1.2)}, 3, Rate::from_double(0.1));
    CHECK(q.funds_upper_bound == coins(3.3));
    CHECK(q.deposit_required == coins(0.33));
    CHECK(q.total() == coins(3.63));
}

TEST_CASE("split_price carves the fee out of the price")
{
    auto s = split_price(coins(1.1), Rate::from_double(0.05));
    CHECK(s.fee == coins(0.055));
    CHECK(s.reward + s.fee == coins(1.1));
    auto odd = split_price(Amount::from_units(7), Rate::from_double(0.5));
    CHECK(odd.fee == Amount::from_units(3));
    CHECK(odd.reward == Amount::from_units(4));
}

TEST_CASE("even_split and round robin")
{
    auto parts = even_split(Amount::from_units(10), 3);
    CHECK(parts == std::vector<Amount>{Amount::from_units(4), Amount::from_units(3), Amount::from_units(3)});
    CHECK_THROWS_AS(even_split(Amount::from_units(1), 0), Error);
    auto rr = partition_round_robin(7, 3);
    CHECK(rr[0] == std::vector<std::size_t>{0, 3, 6});
    CHECK(rr[2] == std::vector<std::size_t>{2, 5});
    CHECK_THROWS_AS(partition_round_robin(3, 0), Error);
}

TEST_CASE("plan_schedule conserves the quote total")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Amount> prices;
        std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i)
            prices.push_back(Amount::from_units(1 + static_cast<std::int64_t>(rng() % 500'000'000)));
        Quote q = quote_from_prices(prices, n, Rate::from_ppm(static_cast<std::int64_t>(rng() % 500'000)));
        std::size_t P = 1 + rng() % 6;
        auto s = plan_schedule(q, P);
        CHECK(s.total() == q.total());
        CHECK(s.shares.size() == std::min(P, q.slots()));
        CHECK(s.deposit_per_slot * static_cast<std::int64_t>(q.slots()) + s.deposit_remainder == q.deposit_required);
        CHECK(s.deposit_remainder < Amount::from_units(static_cast<std::int64_t>(q.slots())));
        std::size_t covered = 0;
        for (std::size_t j = 0; j < s.shares.size(); ++j)
            for (auto e : s.shares[j].entries) {
                CHECK(e % s.shares.size() == j);
                ++covered;
            }
        CHECK(covered == q.slots());
    }
    CHECK_THROWS_AS(plan_schedule(quote_from_prices({coins(1)}, 1, Rate{}), 0), Error);
}

TEST_CASE("match_confirmed uses the highest entries in price order")
{
    std::vector<Amount> budgets{coins(1.0), coins(1.1), coins(1.2), coins(1.3)};
    std::vector<std::int64_t> order;
    auto entries = match_confirmed(budgets, {{5, coins(1.2)}, {2, coins(1.0)}}, order);
    CHECK(entries == std::vector<std::size_t>{2, 3});
    CHECK(order == std::vector<std::int64_t>{2, 5});
    CHECK_THROWS_AS(match_confirmed(budgets, {{0, coins(1.3)}, {1, coins(1.3)}}, order), Error);
    CHECK_THROWS_AS(match_confirmed({coins(1)}, {{0, coins(1)}, {1, coins(1)}}, order), Error);
}
