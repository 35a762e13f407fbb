// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/kinds.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace arrobf
{
//---------------------------------------------------------------------------//
//! Element kinds of the generated class families, in planning order.
enum class ElementKind
{
    integer,
    real,
    text,
    character,
};

inline constexpr std::array<ElementKind, 4> all_kinds{
    ElementKind::integer, ElementKind::real, ElementKind::text,
    ElementKind::character};

enum class RestructureOp
{
    split,
    folded,
    flattened,
};

inline constexpr std::array<RestructureOp, 3> all_ops{
    RestructureOp::split, RestructureOp::folded, RestructureOp::flattened};

//! Java spelling of the element type ("int", "double", "String", "char")
constexpr std::string_view java_type(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::integer: return "int";
        case ElementKind::real: return "double";
        case ElementKind::text: return "String";
        case ElementKind::character: return "char";
    }
    return {};
}

//! Suffix used in class names ("Integer", "Double", "String", "Char")
constexpr std::string_view kind_class_suffix(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::integer: return "Integer";
        case ElementKind::real: return "Double";
        case ElementKind::text: return "String";
        case ElementKind::character: return "Char";
    }
    return {};
}

constexpr std::string_view op_class_prefix(RestructureOp op)
{
    switch (op)
    {
        case RestructureOp::split: return "Split";
        case RestructureOp::folded: return "Folded";
        case RestructureOp::flattened: return "Flattened";
    }
    return {};
}

//! Number of extents (constructor arguments) an op takes.
constexpr std::size_t op_arity(RestructureOp op)
{
    return op == RestructureOp::flattened ? 2 : 1;
}

inline std::optional<ElementKind> kind_from_java_type(std::string_view name)
{
    for (auto kind : all_kinds)
    {
        if (java_type(kind) == name)
            return kind;
    }
    return std::nullopt;
}

//! Accepts "split", "fold"/"folded", "flatten"/"flattened".
inline std::optional<RestructureOp> op_from_name(std::string_view name)
{
    if (name == "split")
        return RestructureOp::split;
    if (name == "fold" || name == "folded")
        return RestructureOp::folded;
    if (name == "flatten" || name == "flattened")
        return RestructureOp::flattened;
    return std::nullopt;
}

//! "<Op>Array_<Kind>", e.g. "SplitArray_Integer" or "FoldedArray_String"
inline std::string class_name(RestructureOp op, ElementKind kind)
{
    return std::string(op_class_prefix(op)) + "Array_"
           + std::string(kind_class_suffix(kind));
}

struct ClassId
{
    RestructureOp op;
    ElementKind kind;

    friend bool operator==(ClassId const&, ClassId const&) = default;
};

//! The twelve predefined classes, split first, kinds in planning order.
inline std::array<ClassId, 12> const& predefined_classes()
{
    static std::array<ClassId, 12> const all = [] {
        std::array<ClassId, 12> out{};
        std::size_t i = 0;
        for (auto op : all_ops)
            for (auto kind : all_kinds)
                out[i++] = {op, kind};
        return out;
    }();
    return all;
}

inline std::optional<ClassId> parse_class_name(std::string_view name)
{
    for (auto const& id : predefined_classes())
    {
        if (class_name(id.op, id.kind) == name)
            return id;
    }
    return std::nullopt;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
