// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/index_maps.hpp
//! Index mappings for the array restructuring operations.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace arrobf
{
//---------------------------------------------------------------------------//
/*!
 * Location of a logical element inside a split array.
 *
 * Even logical positions live in the first sub-array, odd ones in the second,
 * both at offset pos / 2.
 */
struct SplitLocation
{
    enum class Half
    {
        first,
        second
    };

    Half half{Half::first};
    std::size_t offset{0};

    friend bool operator==(SplitLocation const&, SplitLocation const&) = default;
};

//! Source of a merged element.
enum class MergeSource
{
    a,
    b
};

struct MergeLocation
{
    MergeSource source{MergeSource::a};
    std::size_t offset{0};

    friend bool operator==(MergeLocation const&, MergeLocation const&) = default;
};

//! Row-major 2D shape.
struct Dim2
{
    std::size_t rows{1};
    std::size_t cols{1};

    constexpr std::size_t cells() const { return rows * cols; }

    friend bool operator==(Dim2 const&, Dim2 const&) = default;
};

struct Cell
{
    std::size_t row{0};
    std::size_t col{0};

    friend bool operator==(Cell const&, Cell const&) = default;
};

//! Index permutation i -> (k*i + b) mod n.
struct AffineMap
{
    std::uint64_t k{1};
    std::uint64_t b{0};
    std::uint64_t n{1};

    friend bool operator==(AffineMap const&, AffineMap const&) = default;
};

namespace detail
{
inline std::string pos_message(char const* what, std::size_t pos, std::size_t bound)
{
    return std::string(what) + ": index " + std::to_string(pos)
           + " out of range [0, " + std::to_string(bound) + ")";
}

//! Product that refuses to wrap.
inline std::size_t checked_mul(std::size_t a, std::size_t b)
{
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    {
        throw std::overflow_error("index arithmetic overflow");
    }
    return a * b;
}

constexpr std::uint64_t gcd(std::uint64_t a, std::uint64_t b)
{
    while (b != 0)
    {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

//! (a * b) mod n without intermediate overflow.
constexpr std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n)
{
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % n);
}

inline void check_dims(Dim2 const& dims)
{
    if (dims.rows == 0 || dims.cols == 0)
    {
        throw std::invalid_argument("Dim2 requires rows >= 1 and cols >= 1");
    }
    checked_mul(dims.rows, dims.cols);
}
}  // namespace detail

//---------------------------------------------------------------------------//
// SPLITTING
//---------------------------------------------------------------------------//
/*!
 * Backing lengths of the two sub-arrays of a split array of \c size elements.
 *
 * Odd sizes put the extra element in the first half.
 */
inline std::pair<std::size_t, std::size_t> split_sizes(std::size_t size)
{
    if (size == 0)
    {
        throw std::invalid_argument("split_sizes: size must be >= 1");
    }
    if (size % 2 == 0)
    {
        return {size / 2, size / 2};
    }
    std::size_t first = size / 2 + 1;
    return {first, size - first};
}

inline SplitLocation split_locate(std::size_t pos, std::size_t size)
{
    if (pos >= size)
    {
        throw std::out_of_range(detail::pos_message("split_locate", pos, size));
    }
    return {pos % 2 == 0 ? SplitLocation::Half::first
                         : SplitLocation::Half::second,
            pos / 2};
}

//---------------------------------------------------------------------------//
// MERGING
//---------------------------------------------------------------------------//
/*!
 * Source of merged position \c pos when arrays of \c len_a and \c len_b
 * elements are interleaved.
 *
 * The first 2*min(len_a, len_b) positions alternate A, B, A, B...; the rest
 * of the longer input follows in order.
 */
inline MergeLocation
merge_locate(std::size_t pos, std::size_t len_a, std::size_t len_b)
{
    std::size_t total = len_a + len_b;
    if (total < len_a || pos >= total)
    {
        throw std::out_of_range(detail::pos_message("merge_locate", pos, total));
    }
    std::size_t shared = len_a < len_b ? len_a : len_b;
    if (pos < 2 * shared)
    {
        return {pos % 2 == 0 ? MergeSource::a : MergeSource::b, pos / 2};
    }
    std::size_t offset = shared + (pos - 2 * shared);
    return {len_a > len_b ? MergeSource::a : MergeSource::b, offset};
}

//---------------------------------------------------------------------------//
// FOLDING / FLATTENING
//---------------------------------------------------------------------------//
//! Smallest c with c*c >= n.
constexpr std::size_t ceil_sqrt(std::size_t n)
{
    if (n < 2)
    {
        return n;
    }
    // Newton iteration for floor(sqrt(n)), starting above the root
    std::size_t x = n;
    std::size_t y = (x + 1) / 2;
    while (y < x)
    {
        x = y;
        y = (x + n / x) / 2;
    }
    return x * x == n ? x : x + 1;
}

/*!
 * Shape used to fold \c size elements into 2D.
 *
 * Without a hint the shape is near-square: cols = ceil(sqrt(size)) and just
 * enough rows to hold every element. Trailing cells past \c size are padding.
 */
inline Dim2 fold_dims(std::size_t size, std::optional<std::size_t> cols_hint = {})
{
    if (size == 0)
    {
        throw std::invalid_argument("fold_dims: size must be >= 1");
    }
    if (cols_hint && *cols_hint == 0)
    {
        throw std::invalid_argument("fold_dims: cols hint must be >= 1");
    }
    std::size_t cols = cols_hint ? *cols_hint : ceil_sqrt(size);
    std::size_t rows = size / cols + (size % cols != 0 ? 1 : 0);
    return {rows, cols};
}

inline Cell fold_locate(std::size_t pos, Dim2 const& dims)
{
    detail::check_dims(dims);
    if (pos >= dims.cells())
    {
        throw std::out_of_range(
            detail::pos_message("fold_locate", pos, dims.cells()));
    }
    return {pos / dims.cols, pos % dims.cols};
}

//! Exact inverse of fold_locate.
inline std::size_t flatten_locate(std::size_t row, std::size_t col, Dim2 const& dims)
{
    detail::check_dims(dims);
    if (row >= dims.rows)
    {
        throw std::out_of_range(
            detail::pos_message("flatten_locate row", row, dims.rows));
    }
    if (col >= dims.cols)
    {
        throw std::out_of_range(
            detail::pos_message("flatten_locate col", col, dims.cols));
    }
    return row * dims.cols + col;
}

inline std::size_t flatten_locate(Cell const& cell, Dim2 const& dims)
{
    return flatten_locate(cell.row, cell.col, dims);
}

//---------------------------------------------------------------------------//
// AFFINE INDEX PERMUTATION
//---------------------------------------------------------------------------//
//! True iff the map permutes [0, n).
constexpr bool affine_valid(AffineMap const& map)
{
    return map.k >= 1 && map.n >= 1 && detail::gcd(map.k, map.n) == 1;
}

inline std::uint64_t affine_index(std::uint64_t i, AffineMap const& map)
{
    if (map.k == 0 || map.n == 0)
    {
        throw std::invalid_argument("affine_index: k and n must be positive");
    }
    if (i >= map.n)
    {
        throw std::out_of_range(detail::pos_message("affine_index", i, map.n));
    }
    return (detail::mulmod(map.k, i, map.n) + map.b % map.n) % map.n;
}

/*!
 * Map undoing \c map on [0, n).
 *
 * The inverse multiplier is reported in [1, n] so that it stays a valid
 * positive multiplier when n == 1.
 */
inline AffineMap affine_inverse(AffineMap const& map)
{
    if (!affine_valid(map))
    {
        throw std::invalid_argument("affine_inverse: gcd(k, n) != 1, map is not a permutation");
    }
    // Extended Euclid on (k mod n, n), tracking the coefficient of k
    std::int64_t old_r = static_cast<std::int64_t>(map.k % map.n);
    std::int64_t r = static_cast<std::int64_t>(map.n);
    __int128 old_s = 1;
    __int128 s = 0;
    while (r != 0)
    {
        std::int64_t q = old_r / r;
        std::int64_t next_r = old_r - q * r;
        old_r = r;
        r = next_r;
        __int128 next_s = old_s - static_cast<__int128>(q) * s;
        old_s = s;
        s = next_s;
    }
    auto const n = static_cast<__int128>(map.n);
    auto k_inv = static_cast<std::uint64_t>(((old_s % n) + n) % n);
    if (k_inv == 0)
    {
        k_inv = map.n;  // only when n == 1
    }
    // i = k_inv * (j - b) = k_inv * j + (n - k_inv * b mod n)
    std::uint64_t shift = detail::mulmod(k_inv % map.n, map.b % map.n, map.n);
    std::uint64_t b_inv = (map.n - shift) % map.n;
    return {k_inv, b_inv, map.n};
}

//! Smallest odd prime >= 3 that does not divide n.
constexpr std::uint64_t select_multiplier(std::uint64_t n)
{
    auto is_prime = [](std::uint64_t v) {
        for (std::uint64_t d = 3; d * d <= v; d += 2)
        {
            if (v % d == 0)
                return false;
        }
        return true;
    };
    std::uint64_t k = 3;
    while (!is_prime(k) || (n != 0 && n % k == 0))
    {
        k += 2;
    }
    return k;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
