// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <string>

#include "arrobf/metrics.hpp"

using namespace arrobf;

namespace
{
double r2(double v) { return round_half_up(v, 2); }
double r3(double v) { return round_half_up(v, 3); }
}  // namespace

TEST(RoundHalfUp, Cases)
{
    EXPECT_EQ(round_half_up(155.625, 2), 155.63);
    EXPECT_EQ(round_half_up(12.5 * 12.45, 2), 155.63);
    EXPECT_EQ(round_half_up(0.1815, 3), 0.182);
    EXPECT_EQ(round_half_up(0.0915, 3), 0.092);
    EXPECT_EQ(round_half_up(0.1125, 3), 0.113);
    EXPECT_EQ(round_half_up(-1.005, 2), -1.01);
    EXPECT_EQ(round_half_up(2.344, 2), 2.34);
    EXPECT_EQ(round_half_up(0.0, 2), 0.0);
}

TEST(CompositeLoc, Examples)
{
    EXPECT_EQ(composite_loc(22, 76, 9, 22), 296u);
    EXPECT_EQ(composite_loc(22, 0, 0, 0), 22u);
    EXPECT_EQ(composite_loc(22, 32, 5, 22), 164u);
    EXPECT_EQ(composite_loc(22, 27, 3, 22), 115u);
    EXPECT_THROW(composite_loc(0, 0, 0, 0), std::invalid_argument);
    EXPECT_THROW(composite_loc(0, 0, 4, 0), std::invalid_argument);
}

TEST(SLoc, Examples)
{
    EXPECT_EQ(r2(s_loc(22, 296)), 12.45);
    EXPECT_EQ(r2(s_loc(22, 164)), 6.45);
    EXPECT_EQ(r2(s_loc(22, 117)), 4.32);
    EXPECT_EQ(s_loc(22, 22), 0.0);
    EXPECT_THROW(s_loc(0, 3), std::invalid_argument);
}

TEST(SPot, Examples)
{
    EXPECT_EQ(r2(s_pot(12.45, 12.50)), 155.63);
    EXPECT_EQ(r2(s_pot(6.45, 12.50)), 80.63);
    EXPECT_EQ(r2(s_pot(4.32, 12.50)), 54.00);
    EXPECT_EQ(s_pot(0, 12.50), 0.0);
    // weighting the raw ratio instead would give 155.68
    EXPECT_EQ(r2(s_pot(s_loc(22, 296))), 155.63);
    EXPECT_THROW(s_pot(1.0, 0.0), std::invalid_argument);
}

TEST(SStorage, Examples)
{
    EXPECT_EQ(r2(s_storage(0.704, 1.135)), 0.61);
    EXPECT_EQ(r2(s_storage(0.704, 1.136)), 0.61);
    EXPECT_EQ(r2(s_storage(0.704, 1.223)), 0.74);
    EXPECT_EQ(r2(s_storage(704, 1223)), 0.74);
    EXPECT_EQ(s_storage(3.5, 3.5), 0.0);
    EXPECT_THROW(s_storage(0, 1), std::invalid_argument);
}

TEST(SRuntime, Examples)
{
    EXPECT_DOUBLE_EQ(s_runtime(5, 6), 0.2);
    EXPECT_EQ(s_runtime(7, 7), 0.0);
    EXPECT_EQ(s_runtime(4, 4), 0.0);
    EXPECT_THROW(s_runtime(0, 1), std::invalid_argument);
}

TEST(SCst, Examples)
{
    EXPECT_EQ(r3(s_cst(0.61, 0.2)), 0.182);
    EXPECT_EQ(r3(s_cst(0.61, 0.0)), 0.092);
    EXPECT_EQ(r3(s_cst(0.75, 0.0)), 0.113);
    EXPECT_EQ(s_cst(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(s_cst(0.61, 0.2), 0.1815);
}

TEST(SQuality, Examples)
{
    EXPECT_EQ(r2(s_quality(155.625, 0.1815)), 62.07);
    EXPECT_EQ(r2(s_quality(80.625, 0.0915)), 32.16);
    EXPECT_EQ(r2(s_quality(54.00, 0.1125)), 21.49);
    EXPECT_EQ(s_quality(0, 0), 0.0);
}

TEST(BuildReport, ReferenceRows)
{
    MetricsInput split;
    split.loc_orig = 22;
    split.loc_obf = 296;
    split.size_orig = 704;
    split.size_obf = 1135;
    split.t_orig = 5;
    split.t_obf = 6;
    auto r = build_report(split);
    EXPECT_EQ(r.s_loc_display(), 12.45);
    EXPECT_EQ(r.s_pot_display(), 155.63);
    EXPECT_EQ(r.s_storage_display(), 0.61);
    EXPECT_EQ(r.s_cst_display(), 0.182);
    EXPECT_EQ(r.s_quality_display(), 62.07);
    EXPECT_TRUE(r.runtime_measured);

    MetricsInput fold = split;
    fold.loc_obf = 164;
    fold.size_obf = 1136;
    fold.t_orig = 7;
    fold.t_obf = 7;
    r = build_report(fold);
    EXPECT_EQ(r.s_pot_display(), 80.63);
    EXPECT_EQ(r.s_cst_display(), 0.092);
    EXPECT_EQ(r.s_quality_display(), 32.16);

    MetricsInput flat = fold;
    flat.loc_obf = 117;
    flat.size_obf = 1223;
    r = build_report(flat);
    EXPECT_EQ(r.s_pot_display(), 54.00);
    EXPECT_EQ(r.s_storage_display(), 0.74);
    // computed storage 0.74 instead of the reference 0.75
    EXPECT_EQ(r.s_cst_display(), 0.111);
    EXPECT_EQ(r.s_quality_display(), 21.49);
}

TEST(BuildReport, ZeroTransform)
{
    MetricsInput in;
    in.loc_orig = in.loc_obf = 22;
    in.size_orig = in.size_obf = 704;
    auto r = build_report(in);
    EXPECT_EQ(r.s_loc, 0.0);
    EXPECT_EQ(r.s_pot, 0.0);
    EXPECT_EQ(r.s_storage, 0.0);
    EXPECT_EQ(r.s_runtime, 0.0);
    EXPECT_EQ(r.s_cst, 0.0);
    EXPECT_EQ(r.s_quality, 0.0);
    EXPECT_FALSE(r.runtime_measured);
}

TEST(BuildReport, Errors)
{
    MetricsInput in;
    in.t_orig = 1;
    EXPECT_THROW(build_report(in), std::invalid_argument);
    in = {};
    in.loc_orig = 0;
    EXPECT_THROW(build_report(in), std::invalid_argument);
    in = {};
    in.y2 = 0;
    EXPECT_THROW(build_report(in), std::invalid_argument);
    in = {};
    in.size_orig = 0;
    EXPECT_THROW(build_report(in), std::invalid_argument);
}

TEST(BuildReport, CompositionIdentity)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i)
    {
        MetricsInput in;
        in.loc_orig = 1 + rng() % 100;
        in.loc_obf = 1 + rng() % 1000;
        in.size_orig = 1 + rng() % 5000;
        in.size_obf = 1 + rng() % 5000;
        in.t_orig = 1 + rng() % 50;
        in.t_obf = 1 + rng() % 50;
        auto r = build_report(in);
        ASSERT_EQ(r.s_quality, 0.4 * r.s_pot - r.s_cst);
    }
}

TEST(Metrics, Monotonicity)
{
    for (std::uint64_t a = 1; a < 50; ++a)
        EXPECT_LT(s_loc(22, 22 + a), s_loc(22, 23 + a));
    for (double x = 0.5; x < 3; x += 0.01)
    {
        EXPECT_LT(s_storage(0.704, x), s_storage(0.704, x + 0.001));
        EXPECT_LT(s_runtime(7, x), s_runtime(7, x + 0.001));
    }
}

TEST(RenderReport, Format)
{
    MetricsInput in;
    in.loc_orig = 22;
    in.loc_obf = 296;
    in.size_orig = 704;
    in.size_obf = 1135;
    auto text = render_report(build_report(in));
    EXPECT_EQ(text.rfind("s_loc=", 0), 0u);
    EXPECT_NE(text.find("\ns_loc_display=12.45\n"), std::string::npos);
    EXPECT_NE(text.find("\ns_pot_display=155.63\n"), std::string::npos);
    EXPECT_NE(text.find("\ns_cst_display=0.092\n"), std::string::npos);
    EXPECT_NE(text.find("\nruntime_measured=false\n"), std::string::npos);
    std::vector<std::string> keys;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        auto eq = text.find('=', pos);
        keys.push_back(text.substr(pos, eq - pos));
        pos = text.find('\n', pos) + 1;
    }
    std::vector<std::string> const expected{
        "s_loc", "s_loc_display", "s_pot", "s_pot_display",
        "s_storage", "s_storage_display", "s_runtime", "s_runtime_display",
        "s_cst", "s_cst_display", "s_quality", "s_quality_display",
        "runtime_measured"};
    EXPECT_EQ(keys, expected);
    EXPECT_EQ(text, render_report(build_report(in)));
}
