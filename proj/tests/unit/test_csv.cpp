#include "foilspace/csv.hpp"
#include "foilspace/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace foilspace;

TEST(Csv, ParsesHeaderRowsAndComments) {
    std::istringstream in("# made by hand\nx1,x2,f\n1,2,3\n\n-0.5, 1e-3 ,4\n");
    const auto t = csv::parse(in);
    ASSERT_EQ(t.header, (std::vector<std::string>{"x1", "x2", "f"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_DOUBLE_EQ(t.rows[1][1], 1e-3);
    EXPECT_EQ(t.comments.size(), 1u);
    EXPECT_EQ(t.lines, (std::vector<long>{3, 5}));
}

TEST(Csv, BadFieldReportsLine) {
    std::istringstream in("x1,f\n1,2\n1,abc\n");
    try {
        csv::parse(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Csv, WrongFieldCountReportsLine) {
    std::istringstream in("x1,f\n1,2\n1,2,3\n");
    try {
        csv::parse(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Csv, MissingHeaderIsAnError) {
    std::istringstream in("# only comments\n");
    EXPECT_THROW(csv::parse(in), ParseError);
}

TEST(Csv, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 6.02214076e23}) {
        const auto s = csv::format(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
}

TEST(Csv, MissingFileIsIoError) { EXPECT_THROW(csv::read("/nonexistent/file.csv"), IoError); }
