// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/restructured_store.hpp
//! Executable models of the generated accessor classes.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "index_maps.hpp"
#include "kinds.hpp"

namespace arrobf
{
//---------------------------------------------------------------------------//
/*!
 * One cell value. Alternative order follows ElementKind.
 *
 * Default-constructed cells are 0, 0.0, the empty string and NUL; the Java
 * classes would hold null for an unset String.
 */
using Value = std::variant<std::int32_t, double, std::string, char>;

template<class T>
struct element_kind_of;
template<>
struct element_kind_of<std::int32_t>
    : std::integral_constant<ElementKind, ElementKind::integer>
{
};
template<>
struct element_kind_of<double>
    : std::integral_constant<ElementKind, ElementKind::real>
{
};
template<>
struct element_kind_of<std::string>
    : std::integral_constant<ElementKind, ElementKind::text>
{
};
template<>
struct element_kind_of<char>
    : std::integral_constant<ElementKind, ElementKind::character>
{
};

inline ElementKind kind_of(Value const& v)
{
    return static_cast<ElementKind>(v.index());
}

inline Value default_value(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::integer: return std::int32_t{0};
        case ElementKind::real: return 0.0;
        case ElementKind::text: return std::string{};
        case ElementKind::character: return char{'\0'};
    }
    throw std::invalid_argument("unknown element kind");
}

//---------------------------------------------------------------------------//
/*!
 * Split array: even positions in the first backing array, odd positions in
 * the second, both at pos / 2.
 */
template<class T>
class SplitArray
{
  public:
    using value_type = T;
    static constexpr RestructureOp op = RestructureOp::split;

    explicit SplitArray(std::size_t size)
    {
        auto [first, second] = split_sizes(size);
        first_.resize(first);
        second_.resize(second);
    }

    void set(std::size_t pos, T value) { slot(*this, pos) = std::move(value); }

    T const& get(std::size_t pos) const { return slot(*this, pos); }

    std::size_t length() const { return first_.size() + second_.size(); }

    std::span<T const> first() const { return first_; }
    std::span<T const> second() const { return second_; }

  private:
    std::vector<T> first_;
    std::vector<T> second_;

    template<class Self>
    static auto& slot(Self& self, std::size_t pos)
    {
        auto loc = split_locate(pos, self.length());
        return loc.half == SplitLocation::Half::first ? self.first_[loc.offset]
                                                      : self.second_[loc.offset];
    }
};

//---------------------------------------------------------------------------//
/*!
 * Folded array: a 1D interface over a rows x cols backing in row-major order.
 *
 * Positions are checked against the requested size; padding cells past it
 * are allocated but unreachable. length() reports rows * cols.
 */
template<class T>
class FoldedArray
{
  public:
    using value_type = T;
    static constexpr RestructureOp op = RestructureOp::folded;

    explicit FoldedArray(std::size_t size)
        : size_(size), dims_(fold_dims(size))
    {
        cells_.assign(dims_.rows, std::vector<T>(dims_.cols));
    }

    void set(std::size_t pos, T value) { slot(*this, pos) = std::move(value); }

    T const& get(std::size_t pos) const { return slot(*this, pos); }

    std::size_t length() const { return dims_.cells(); }
    std::size_t size() const { return size_; }
    Dim2 const& dims() const { return dims_; }

    T const& cell(std::size_t row, std::size_t col) const
    {
        return cells_.at(row).at(col);
    }

  private:
    std::size_t size_;
    Dim2 dims_;
    std::vector<std::vector<T>> cells_;

    template<class Self>
    static auto& slot(Self& self, std::size_t pos)
    {
        if (pos >= self.size_)
        {
            throw std::out_of_range(
                detail::pos_message("folded array", pos, self.size_));
        }
        auto [row, col] = fold_locate(pos, self.dims_);
        return self.cells_[row][col];
    }
};

//---------------------------------------------------------------------------//
//! Flattened array: a 2D interface over a single row-major backing array.
template<class T>
class FlattenedArray
{
  public:
    using value_type = T;
    static constexpr RestructureOp op = RestructureOp::flattened;

    FlattenedArray(std::size_t rows, std::size_t cols) : dims_{rows, cols}
    {
        detail::check_dims(dims_);
        cells_.resize(dims_.cells());
    }

    void set(std::size_t row, std::size_t col, T value)
    {
        cells_[flatten_locate(row, col, dims_)] = std::move(value);
    }

    T const& get(std::size_t row, std::size_t col) const
    {
        return cells_[flatten_locate(row, col, dims_)];
    }

    std::size_t length() const { return cells_.size(); }
    Dim2 const& dims() const { return dims_; }
    std::span<T const> backing() const { return cells_; }

  private:
    Dim2 dims_;
    std::vector<T> cells_;
};

//---------------------------------------------------------------------------//
/*!
 * Affine map used to obscure logical positions of an n-element array.
 *
 * The multiplier is the smallest odd prime not dividing n and the offset is
 * reduced modulo n, matching the code emitted for index obscuring.
 */
inline AffineMap obscuring_map(std::uint64_t n, std::uint64_t offset)
{
    if (n == 0)
        throw std::invalid_argument("obscuring_map: n must be >= 1");
    return {select_multiplier(n), offset % n, n};
}

/*!
 * Wraps a restructured array so that logical positions are permuted by an
 * affine map before the layout mapping is applied.
 */
template<class Array>
class PermutedArray
{
  public:
    using value_type = typename Array::value_type;
    using T = value_type;

    template<class... Extents>
    PermutedArray(std::uint64_t offset, Extents... extents)
        : inner_(extents...)
        , map_(obscuring_map(logical_count(extents...), offset))
    {
    }

    void set(std::size_t pos, T value)
        requires(Array::op != RestructureOp::flattened)
    {
        inner_.set(this->physical(pos), std::move(value));
    }

    T const& get(std::size_t pos) const
        requires(Array::op != RestructureOp::flattened)
    {
        return inner_.get(this->physical(pos));
    }

    void set(std::size_t row, std::size_t col, T value)
        requires(Array::op == RestructureOp::flattened)
    {
        auto cell = this->physical_cell(row, col);
        inner_.set(cell.row, cell.col, std::move(value));
    }

    T const& get(std::size_t row, std::size_t col) const
        requires(Array::op == RestructureOp::flattened)
    {
        auto cell = this->physical_cell(row, col);
        return inner_.get(cell.row, cell.col);
    }

    //! Logical position stored at a given permuted position
    std::size_t logical_of(std::size_t physical) const
    {
        return affine_index(physical, affine_inverse(map_));
    }

    AffineMap const& map() const { return map_; }
    Array const& inner() const { return inner_; }
    std::size_t length() const { return inner_.length(); }

  private:
    Array inner_;
    AffineMap map_;

    static std::size_t logical_count(std::size_t size) { return size; }
    static std::size_t logical_count(std::size_t rows, std::size_t cols)
    {
        return detail::checked_mul(rows, cols);
    }

    std::size_t physical(std::size_t pos) const
    {
        return affine_index(pos, map_);
    }

    Cell physical_cell(std::size_t row, std::size_t col) const
    {
        auto const& dims = inner_.dims();
        auto pos = affine_index(flatten_locate(row, col, dims), map_);
        return fold_locate(pos, dims);
    }
};

//---------------------------------------------------------------------------//
/*!
 * Runtime-typed store covering every op x kind combination.
 *
 * Coordinates are one position for split and folded stores, (row, col) for
 * flattened ones.
 */
class Store
{
  public:
    using Variant = std::variant<SplitArray<std::int32_t>,
                                 SplitArray<double>,
                                 SplitArray<std::string>,
                                 SplitArray<char>,
                                 FoldedArray<std::int32_t>,
                                 FoldedArray<double>,
                                 FoldedArray<std::string>,
                                 FoldedArray<char>,
                                 FlattenedArray<std::int32_t>,
                                 FlattenedArray<double>,
                                 FlattenedArray<std::string>,
                                 FlattenedArray<char>>;

    Store(RestructureOp op, ElementKind kind, std::span<std::size_t const> extents)
        : op_(op), kind_(kind), impl_(make(op, kind, extents))
    {
    }

    Store(RestructureOp op, ElementKind kind, std::initializer_list<std::size_t> extents)
        : Store(op, kind, std::span<std::size_t const>(extents.begin(), extents.size()))
    {
    }

    RestructureOp op() const { return op_; }
    ElementKind kind() const { return kind_; }

    void set(std::span<std::size_t const> coords, Value value)
    {
        this->check_arity(coords);
        if (kind_of(value) != kind_)
        {
            throw std::invalid_argument(
                "store kind mismatch: store holds "
                + std::string(java_type(kind_)) + ", value is "
                + std::string(java_type(kind_of(value))));
        }
        std::visit(
            [&](auto& arr) {
                using T = typename std::decay_t<decltype(arr)>::value_type;
                T& v = std::get<T>(value);
                if constexpr (std::decay_t<decltype(arr)>::op
                              == RestructureOp::flattened)
                    arr.set(coords[0], coords[1], std::move(v));
                else
                    arr.set(coords[0], std::move(v));
            },
            impl_);
    }

    void set(std::initializer_list<std::size_t> coords, Value value)
    {
        this->set(std::span<std::size_t const>(coords.begin(), coords.size()),
                  std::move(value));
    }

    Value get(std::span<std::size_t const> coords) const
    {
        this->check_arity(coords);
        return std::visit(
            [&](auto const& arr) -> Value {
                if constexpr (std::decay_t<decltype(arr)>::op
                              == RestructureOp::flattened)
                    return arr.get(coords[0], coords[1]);
                else
                    return arr.get(coords[0]);
            },
            impl_);
    }

    Value get(std::initializer_list<std::size_t> coords) const
    {
        return this->get(
            std::span<std::size_t const>(coords.begin(), coords.size()));
    }

    std::size_t length() const
    {
        return std::visit([](auto const& arr) { return arr.length(); }, impl_);
    }

    //! Typed access for structural inspection
    Variant const& layout() const { return impl_; }

  private:
    RestructureOp op_;
    ElementKind kind_;
    Variant impl_;

    void check_arity(std::span<std::size_t const> coords) const
    {
        if (coords.size() != op_arity(op_))
        {
            throw std::invalid_argument(
                std::string(op_class_prefix(op_)) + " store takes "
                + std::to_string(op_arity(op_)) + " coordinate(s), got "
                + std::to_string(coords.size()));
        }
    }

    template<template<class> class A, class... Args>
    static Variant make_kind(ElementKind kind, Args... args)
    {
        switch (kind)
        {
            case ElementKind::integer: return A<std::int32_t>(args...);
            case ElementKind::real: return A<double>(args...);
            case ElementKind::text: return A<std::string>(args...);
            case ElementKind::character: return A<char>(args...);
        }
        throw std::invalid_argument("unknown element kind");
    }

    static Variant
    make(RestructureOp op, ElementKind kind, std::span<std::size_t const> extents)
    {
        if (extents.size() != op_arity(op))
        {
            throw std::invalid_argument(
                std::string(op_class_prefix(op)) + " store takes "
                + std::to_string(op_arity(op)) + " extent(s), got "
                + std::to_string(extents.size()));
        }
        for (auto e : extents)
        {
            if (e == 0)
                throw std::invalid_argument("store extents must be >= 1");
        }
        switch (op)
        {
            case RestructureOp::split:
                return make_kind<SplitArray>(kind, extents[0]);
            case RestructureOp::folded:
                return make_kind<FoldedArray>(kind, extents[0]);
            case RestructureOp::flattened:
                return make_kind<FlattenedArray>(kind, extents[0], extents[1]);
        }
        throw std::invalid_argument("unknown restructuring op");
    }
};

//---------------------------------------------------------------------------//
}  // namespace arrobf
