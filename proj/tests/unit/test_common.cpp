#include "common/amount.hpp"
#include "common/digest.hpp"
#include "common/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace teevil;

TEST_CASE("amount parsing is exact to the unit")
{
    CHECK(Amount::parse("12").units() == 1'200'000'000);
    CHECK(Amount::parse("0.5").units() == 50'000'000);
    CHECK(Amount::parse("65.50000001").units() == 6'550'000'001);
    CHECK(Amount::parse(".25").units() == 25'000'000);
    CHECK_THROWS_AS(Amount::parse("1.000000001"), std::invalid_argument);
    CHECK_THROWS_AS(Amount::parse("1e5"), std::invalid_argument);
    CHECK_THROWS_AS(Amount::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Amount::parse("."), std::invalid_argument);
}

TEST_CASE("amount text round-trips")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto units = static_cast<std::int64_t>(rng() % 10'000'000'000'000ull) - 5'000'000'000'000;
        Amount a = Amount::from_units(units);
        CHECK(Amount::parse(a.to_string()) == a);
    }
    CHECK(Amount::from_units(150'000'000).to_string() == "1.5");
    CHECK(Amount::from_units(1).to_string() == "0.00000001");
    CHECK(Amount::from_units(-5).to_string() == "-0.00000005");
}

TEST_CASE("rate floors toward zero")
{
    Rate five = Rate::from_double(0.05);
    CHECK(five.ppm() == 50'000);
    CHECK(five.apply_floor(Amount::from_coins(1)).units() == 5'000'000);
    // 0.05 * 19 units = 0.95 units
    CHECK(five.apply_floor(Amount::from_units(19)).units() == 0);
    CHECK(five.apply_floor(Amount::from_units(21)).units() == 1);
    CHECK(Rate::from_ppm(0).apply_floor(Amount::from_coins(100)) == Amount{});
    CHECK_THROWS(Rate::from_double(-0.1));
}

TEST_CASE("sha256 agrees with libsodium")
{
    REQUIRE(sodium_init() >= 0);
    CHECK(sha256("abc").hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        std::string s(rng() % 300, '\0');
        for (auto& c : s)
            c = static_cast<char>(rng());
        CHECK(sha256(s).hex() == oracle::sha256_hex(s));
    }
}

TEST_CASE("hasher frames strings with a little-endian length")
{
    Hasher h;
    h.add("teevil").add_u64(0x0102030405060708ull);
    std::string framed = oracle::le64(6) + "teevil" + oracle::le64(0x0102030405060708ull);
    CHECK(h.finish().hex() == oracle::sha256_hex(framed));
}

TEST_CASE("digest hex and leading zeros")
{
    Digest d = sha256("x");
    CHECK(Digest::from_hex(d.hex()) == d);
    for (int i = 0; i < 100; ++i) {
        Digest x = sha256(std::to_string(i));
        CHECK(x.leading_zero_bits() == oracle::leading_zero_bits(x.hex()));
    }
    CHECK(Digest{}.is_zero());
    CHECK(Digest{}.leading_zero_bits() == 256);
}

TEST_CASE("error carries its code name")
{
    Error e(ErrorCode::cpu_already_bound, "cpu-1");
    CHECK(e.code() == ErrorCode::cpu_already_bound);
    CHECK(std::string(e.what()).find("cpu-1") != std::string::npos);
    CHECK(!to_string(ErrorCode::schema_error).empty());
}
