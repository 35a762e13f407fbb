// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/constant_hiding.hpp
//! Constant hiding through a chain of modulus reductions F(y, count).
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace arrobf
{
//---------------------------------------------------------------------------//
struct FactorPair
{
    std::uint64_t n1;
    std::uint64_t n2;

    constexpr std::uint64_t sum() const { return n1 + n2; }

    friend constexpr bool operator==(FactorPair const&, FactorPair const&) = default;
};

inline constexpr int max_hide_count = 13;

//! Smallest modulus of the chain; only values below it can be hidden.
inline constexpr std::uint64_t hideable_limit = 5;

using FactorTable = std::array<FactorPair, max_hide_count>;

//! The fixed pair table driving F. The pair sums are 5, 11, 23, ... 24575.
inline FactorTable const& factor_table()
{
    static constexpr FactorTable table{{{2, 3},
                                        {5, 6},
                                        {11, 12},
                                        {23, 24},
                                        {47, 48},
                                        {95, 96},
                                        {191, 192},
                                        {383, 384},
                                        {767, 768},
                                        {1535, 1536},
                                        {3071, 3072},
                                        {6143, 6144},
                                        {12287, 12288}}};
    return table;
}

inline void check_count(int count)
{
    if (count < 1 || count > max_hide_count)
    {
        throw std::invalid_argument("count must be in [1, 13], got "
                                    + std::to_string(count));
    }
}

/*!
 * Evaluate F(y, count): reduce y modulo the pair sums from pair \c count
 * down to pair 1. The result is always below 5.
 */
inline std::uint64_t f_eval(std::uint64_t y, int count)
{
    check_count(count);
    auto const& table = factor_table();
    for (int i = count; i > 0; --i)
    {
        y %= table[i - 1].sum();
    }
    return y;
}

//---------------------------------------------------------------------------//
//! A renderable F call site.
struct HidingCall
{
    //! Value fed to F after the surface modulus
    std::uint64_t base{0};
    //! B in "F(A % B, count)" when surface rendering applies
    std::optional<std::uint64_t> surface_modulus;
    int count{1};
    std::uint64_t hidden{0};

    //! Numerator A of the surface form (A % B == base)
    std::uint64_t numerator() const
    {
        return surface_modulus ? base + *surface_modulus : base;
    }

    friend bool operator==(HidingCall const&, HidingCall const&) = default;
};

//! Smallest first pair element strictly greater than \c base.
inline std::optional<std::uint64_t> surface_modulus_for(std::uint64_t base)
{
    for (auto const& pair : factor_table())
    {
        if (pair.n1 > base)
            return pair.n1;
    }
    return std::nullopt;
}

//! Build the call for an explicit base.
inline HidingCall make_call(std::uint64_t base, int count)
{
    check_count(count);
    return {base, surface_modulus_for(base), count, f_eval(base, count)};
}

/*!
 * Manufacture an F call that evaluates to \c value.
 *
 * Residues are built forward: r_1 = value, r_{i+1} = r_i + k_i * s_i with
 * r_{i+1} < s_{i+1}, where s_i is the sum of pair i. The base is r_count plus
 * zero or one extra multiple of s_count. Each draw takes one word from a
 * mt19937_64 seeded with \c seed, so results are platform independent.
 */
inline HidingCall hide_constant(std::uint64_t value, int count, std::uint64_t seed)
{
    if (value >= hideable_limit)
    {
        throw std::invalid_argument(
            "F can only hide constants below 5 (its last modulus is 2+3=5), got "
            + std::to_string(value));
    }
    check_count(count);
    auto const& table = factor_table();
    std::mt19937_64 rng(seed);
    auto draw = [&rng](std::uint64_t bound) { return rng() % bound; };

    std::uint64_t residue = value;
    for (int i = 1; i < count; ++i)
    {
        std::uint64_t step = table[i - 1].sum();
        std::uint64_t next_limit = table[i].sum();
        std::uint64_t max_k = (next_limit - 1 - residue) / step;
        residue += draw(max_k + 1) * step;
    }
    std::uint64_t base = residue + draw(2) * table[count - 1].sum();
    return make_call(base, count);
}

struct RenderOptions
{
    bool surface{true};
};

//! "F(A % B, count)", or "F(base, count)" without a usable surface modulus.
inline std::string render_call(HidingCall const& call, RenderOptions opts = {})
{
    if (opts.surface && call.surface_modulus)
    {
        return fmt::format("F({} % {}, {})", call.numerator(),
                           *call.surface_modulus, call.count);
    }
    return fmt::format("F({}, {})", call.base, call.count);
}

struct ParsedCall
{
    std::uint64_t numerator{0};
    std::optional<std::uint64_t> modulus;
    int count{0};

    std::uint64_t base() const { return modulus ? numerator % *modulus : numerator; }
};

//! Parse text produced by render_call (whitespace tolerant).
inline std::optional<ParsedCall> parse_call(std::string_view text)
{
    static std::regex const pattern(
        R"(^\s*F\s*\(\s*(\d+)\s*(?:%\s*(\d+)\s*)?,\s*(\d+)\s*\)\s*$)");
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(text.begin(), text.end(), m, pattern))
        return std::nullopt;
    ParsedCall result;
    try
    {
        result.numerator = std::stoull(m[1].str());
        if (m[2].matched)
            result.modulus = std::stoull(m[2].str());
        result.count = std::stoi(m[3].str());
    }
    catch (std::out_of_range const&)
    {
        return std::nullopt;
    }
    if (result.modulus && *result.modulus == 0)
        return std::nullopt;
    return result;
}

//---------------------------------------------------------------------------//
//! Java source of the F helper, emitted into generated classes.
inline std::string const& emit_hiding_helper()
{
    static std::string const text = [] {
        std::string pairs;
        for (auto const& pair : factor_table())
        {
            if (!pairs.empty())
                pairs += ",";
            pairs += fmt::format("{{{},{}}}", pair.n1, pair.n2);
        }
        std::string out;
        out += "    private static int F(int y,int count)\n";
        out += "    {\n";
        out += "        int[][] y_factors={" + pairs + "};\n";
        out += "        for (int i=count;i>0;i--){\n";
        out += "            int y1=y_factors[i-1][0]+y_factors[i-1][1];\n";
        out += "            y=y%y1;\n";
        out += "        }\n";
        out += "        return y;\n";
        out += "    }\n";
        return out;
    }();
    return text;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
