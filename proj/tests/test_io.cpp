#include <sstream>

#include <gtest/gtest.h>

#include "ffbias/io.hpp"

using namespace ffbias;

TEST(Io, ShortestRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 123456789.0, 5e-324}) {
        const auto s = format_double(x);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), x) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_fixed(0.3637572383791, 12), "0.363757238379");
}

TEST(Io, CsvHeaderAndRows) {
    Table t{{"k", "re"}, {}};
    t.add({0LL, 0.5});
    t.add({1LL, std::string("x")});
    std::ostringstream a, b;
    write_csv(a, t, true, "sums --n 3");
    write_csv(b, t, false, "sums --n 3");
    EXPECT_EQ(a.str(), "# generated-by ffbias sums --n 3\nk,re\n0,0.5\n1,x\n");
    EXPECT_EQ(b.str(), "k,re\n0,0.5\n1,x\n");
    EXPECT_THROW(t.add({1LL}), std::logic_error);
}

TEST(Io, EmptyConfigGivesDefaults) {
    std::istringstream in("");
    const auto c = parse_config(in);
    EXPECT_EQ(c.q, 3u);
    EXPECT_EQ(c.euler_cutoff, 12u);
    EXPECT_EQ(c.n_cap, 300u);
    EXPECT_EQ(c.enum_cap, u64{1} << 24);
}

TEST(Io, ConfigOverridesAndComments) {
    std::istringstream in("# comment\nq = 5\n\nmodulus = t^3+t+1   # trailing\nenum-cap = 2^20\nchar-index = all\n");
    const auto c = parse_config(in);
    EXPECT_EQ(c.q, 5u);
    EXPECT_EQ(c.modulus, "t^3+t+1");
    EXPECT_EQ(c.enum_cap, u64{1} << 20);
    EXPECT_FALSE(c.char_index.has_value());
}

TEST(Io, ConfigErrorsCarryLineNumbers) {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_config(in);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(message("q = 3\nbogus = 1\n"), "line 2: unknown key 'bogus'");
    EXPECT_EQ(message("\n\nq 3\n"), "line 3: expected key = value");
    EXPECT_EQ(message("q = x\n"), "line 1: bad value 'x' for q");
    EXPECT_EQ(message("n-cap = 0\n"), "line 1: n-cap must be positive");
    EXPECT_EQ(message("n-min = 5\nn-max = 4\n"), "n-min exceeds n-max");
}

TEST(Io, FlagErrorsNameTheFlag) {
    RunConfig c;
    try {
        apply_config_value(c, "method", "guess", 0);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(std::string(e.what()), "--method: method must be analytic or enumerate");
    }
}
