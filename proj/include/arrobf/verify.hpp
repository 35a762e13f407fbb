// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/verify.hpp
//! Self-check suites: bijections, hiding round trips and store equivalence
//! against plain reference arrays.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "codegen.hpp"
#include "constant_hiding.hpp"
#include "index_maps.hpp"
#include "restructured_store.hpp"

namespace arrobf
{
//---------------------------------------------------------------------------//
struct VerifyOptions
{
    std::size_t size_limit{300};
    std::size_t ops_per_case{10000};
    std::uint64_t seed{default_seed};
    //! Also run a 100000-element split store
    bool large_split{true};
    //! Largest rows*cols for the sampled fold/flatten inverse suite
    std::size_t fold_cell_limit{100000};
    //! Largest rows*cols checked at every position
    std::size_t fold_exhaustive_limit{2000};
};

//! Replaceable subjects, so the harness itself can be mutation tested.
struct VerifyHooks
{
    std::function<SplitLocation(std::size_t, std::size_t)> split_locate
        = [](std::size_t pos, std::size_t size) { return arrobf::split_locate(pos, size); };
    std::function<std::uint64_t(std::uint64_t, int)> f_eval
        = [](std::uint64_t y, int count) { return arrobf::f_eval(y, count); };
    std::function<Value(Store const&, std::span<std::size_t const>)> store_get
        = [](Store const& s, std::span<std::size_t const> c) { return s.get(c); };
};

struct SuiteResult
{
    std::string name;
    std::size_t cases{0};
    std::size_t passed{0};
    std::optional<std::string> counterexample;

    bool ok() const { return !counterexample && passed == cases; }
};

namespace detail
{
//! Bitwise equality, so doubles compare byte for byte.
inline bool same_bytes(Value const& a, Value const& b)
{
    if (a.index() != b.index())
        return false;
    if (auto const* x = std::get_if<double>(&a))
    {
        double y = std::get<double>(b);
        return std::memcmp(x, &y, sizeof(double)) == 0;
    }
    return a == b;
}

inline std::string describe(Value const& v)
{
    return std::visit(
        [](auto const& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string>)
                return "\"" + x + "\"";
            else if constexpr (std::is_same_v<T, char>)
                return fmt::format("char({})", static_cast<int>(static_cast<unsigned char>(x)));
            else
                return fmt::format("{}", x);
        },
        v);
}

inline Value random_value(ElementKind kind, std::mt19937_64& rng)
{
    switch (kind)
    {
        case ElementKind::integer:
            return static_cast<std::int32_t>(static_cast<std::uint32_t>(rng()));
        case ElementKind::real:
            return static_cast<double>(static_cast<std::int32_t>(rng())) / 7.0;
        case ElementKind::text: {
            std::string s(rng() % 9, 'a');
            for (auto& ch : s)
                ch = static_cast<char>('a' + rng() % 26);
            return s;
        }
        case ElementKind::character: return static_cast<char>(rng() % 256);
    }
    return std::int32_t{0};
}

//! One step of a randomized store session.
struct StoreOp
{
    bool write;
    std::size_t row;
    std::size_t col;  //!< unused for 1D stores
    Value value;
};

/*!
 * Replay ops against a store and an independent reference. Returns the index
 * of the first op whose observation differs, or ops.size() when the final
 * full sweep differs, or nullopt when everything agrees.
 */
inline std::optional<std::size_t>
replay(RestructureOp op, ElementKind kind, std::size_t size, Dim2 dims,
       std::vector<StoreOp> const& ops, VerifyHooks const& hooks,
       std::string* detail_out)
{
    bool const flat = op == RestructureOp::flattened;
    Store store = flat ? Store(op, kind, {dims.rows, dims.cols})
                       : Store(op, kind, {size});
    // reference: a plain 1D vector, or a vector of rows for flattened stores
    std::vector<std::vector<Value>> ref(flat ? dims.rows : 1,
                                        std::vector<Value>(flat ? dims.cols : size,
                                                           default_value(kind)));
    auto observe = [&](std::size_t row, std::size_t col) {
        std::array<std::size_t, 2> coords{row, col};
        auto span = flat ? std::span<std::size_t const>(coords.data(), 2)
                         : std::span<std::size_t const>(coords.data(), 1);
        return hooks.store_get(store, span);
    };
    auto cell = [&](std::size_t row, std::size_t col) -> Value& {
        return flat ? ref[row][col] : ref[0][row];
    };

    for (std::size_t i = 0; i < ops.size(); ++i)
    {
        auto const& o = ops[i];
        if (o.write)
        {
            if (flat)
                store.set({o.row, o.col}, o.value);
            else
                store.set({o.row}, o.value);
            cell(o.row, o.col) = o.value;
        }
        else
        {
            auto got = observe(o.row, o.col);
            if (!same_bytes(got, cell(o.row, o.col)))
            {
                if (detail_out)
                {
                    *detail_out = fmt::format("get at op {} returned {}, reference {}",
                                              i, describe(got),
                                              describe(cell(o.row, o.col)));
                }
                return i;
            }
        }
    }
    std::size_t expected_length = flat ? dims.cells() : (op == RestructureOp::folded
                                                             ? fold_dims(size).cells()
                                                             : size);
    if (store.length() != expected_length)
    {
        if (detail_out)
            *detail_out = fmt::format("length {} != {}", store.length(), expected_length);
        return ops.size();
    }
    for (std::size_t r = 0; r < (flat ? dims.rows : size); ++r)
    {
        for (std::size_t c = 0; c < (flat ? dims.cols : 1); ++c)
        {
            auto got = observe(r, c);
            if (!same_bytes(got, cell(r, c)))
            {
                if (detail_out)
                {
                    auto where = flat ? fmt::format("({}, {})", r, c)
                                      : fmt::format("({})", r);
                    *detail_out = fmt::format("final sweep at {} returned {}, reference {}",
                                              where, describe(got), describe(cell(r, c)));
                }
                return ops.size();
            }
        }
    }
    return std::nullopt;
}

inline std::string describe_ops(std::vector<StoreOp> const& ops, bool flat)
{
    std::string out;
    for (auto const& o : ops)
    {
        auto where = flat ? fmt::format("({}, {})", o.row, o.col)
                          : fmt::format("({})", o.row);
        out += o.write ? fmt::format(" set{}={};", where, describe(o.value))
                       : fmt::format(" get{};", where);
    }
    return out;
}
}  // namespace detail

//---------------------------------------------------------------------------//
//! Shape of the flattened store exercised for a given case size.
inline Dim2 flattened_case_dims(std::size_t size)
{
    return {size, 1 + (size * 7) % 5};
}

inline SuiteResult verify_split_bijection(VerifyOptions const& opt, VerifyHooks const& hooks = {})
{
    SuiteResult res;
    res.name = "split bijection";
    for (std::size_t n = 1; n <= opt.size_limit; ++n)
    {
        ++res.cases;
        auto [len1, len2] = split_sizes(n);
        std::vector<char> hit1(len1), hit2(len2);
        std::optional<std::string> bad;
        for (std::size_t p = 0; p < n && !bad; ++p)
        {
            auto loc = hooks.split_locate(p, n);
            auto& hits = loc.half == SplitLocation::Half::first ? hit1 : hit2;
            if (loc.offset >= hits.size())
                bad = fmt::format("n={} pos={} maps outside its sub-array", n, p);
            else if (hits[loc.offset]++)
                bad = fmt::format("n={} pos={} collides with an earlier position", n, p);
        }
        if (bad)
        {
            // sizes run upward, so the first failure is the smallest
            res.counterexample = *bad;
            return res;
        }
        ++res.passed;
    }
    return res;
}

inline SuiteResult verify_merge_bijection(VerifyOptions const&)
{
    SuiteResult res;
    res.name = "merge bijection";
    for (std::size_t la = 0; la <= 40; ++la)
    {
        for (std::size_t lb = 0; lb <= 40; ++lb)
        {
            ++res.cases;
            std::vector<char> a(la), b(lb);
            for (std::size_t p = 0; p < la + lb; ++p)
            {
                auto loc = merge_locate(p, la, lb);
                auto& hits = loc.source == MergeSource::a ? a : b;
                if (loc.offset >= hits.size() || hits[loc.offset]++)
                {
                    res.counterexample = fmt::format("len_a={} len_b={} pos={}", la, lb, p);
                    return res;
                }
            }
            ++res.passed;
        }
    }
    return res;
}

/*!
 * Fold/flatten inversion. Shapes up to fold_exhaustive_limit cells are
 * checked at every position; every larger shape up to fold_cell_limit is
 * checked at its corners, row boundaries and seeded random positions.
 */
inline SuiteResult verify_fold_flatten(VerifyOptions const& opt)
{
    SuiteResult res;
    res.name = "fold/flatten inverse";
    std::mt19937_64 rng(opt.seed);
    for (std::size_t rows = 1; rows <= opt.fold_cell_limit; ++rows)
    {
        for (std::size_t cols = 1; rows * cols <= opt.fold_cell_limit; ++cols)
        {
            ++res.cases;
            Dim2 dims{rows, cols};
            std::size_t const cells = dims.cells();
            auto check = [&](std::size_t p) {
                auto c = fold_locate(p, dims);
                if (c.row >= rows || c.col >= cols || flatten_locate(c, dims) != p)
                    return false;
                return true;
            };
            bool ok = true;
            if (cells <= opt.fold_exhaustive_limit)
            {
                for (std::size_t p = 0; p < cells && ok; ++p)
                    ok = check(p);
            }
            else
            {
                std::size_t const probes[] = {0, cols - 1, cols % cells,
                                              cells - cols, cells - 1};
                for (auto p : probes)
                    ok = ok && check(p);
                for (int i = 0; i < 16 && ok; ++i)
                    ok = check(rng() % cells);
            }
            if (!ok)
            {
                res.counterexample = fmt::format("dims {}x{}", rows, cols);
                return res;
            }
            ++res.passed;
        }
    }
    return res;
}

//! gcd(k, n) == 1 exactly when the images of [0, n) are a permutation.
inline SuiteResult verify_affine(VerifyOptions const& opt)
{
    SuiteResult res;
    res.name = "affine permutation";
    std::size_t const limit = std::min<std::size_t>(opt.size_limit, 120);
    for (std::uint64_t n = 1; n <= limit; ++n)
    {
        for (std::uint64_t k = 1; k <= n + 1; ++k)
        {
            ++res.cases;
            AffineMap map{k, (k * 7) % n, n};
            std::vector<char> seen(n);
            bool perm = true;
            for (std::uint64_t i = 0; i < n; ++i)
                perm = !seen[affine_index(i, map)]++ && perm;
            if (perm != affine_valid(map))
            {
                res.counterexample = fmt::format("k={} b={} n={}", map.k, map.b, n);
                return res;
            }
            ++res.passed;
        }
    }
    std::mt19937_64 rng(opt.seed);
    for (int trial = 0; trial < 50; ++trial)
    {
        ++res.cases;
        std::uint64_t n = 1 + rng() % 5000;
        AffineMap map{1 + rng() % (3 * n), rng() % n, n};
        while (!affine_valid(map))
            map.k = 1 + rng() % (3 * n);
        auto inv = affine_inverse(map);
        for (std::uint64_t i = 0; i < n; ++i)
        {
            if (affine_index(affine_index(i, map), inv) != i)
            {
                res.counterexample = fmt::format("inverse of k={} b={} n={} fails at {}",
                                                 map.k, map.b, n, i);
                return res;
            }
        }
        ++res.passed;
    }
    return res;
}

//! Every hidden constant evaluates back to itself, rendered and re-parsed.
inline SuiteResult verify_hiding(VerifyOptions const& opt, VerifyHooks const& hooks = {})
{
    SuiteResult res;
    res.name = "constant hiding round trip";
    for (std::uint64_t c = 0; c < hideable_limit; ++c)
    {
        for (int count = 1; count <= max_hide_count; ++count)
        {
            for (std::uint64_t s = 0; s < 100; ++s)
            {
                ++res.cases;
                auto call = hide_constant(c, count, opt.seed + s);
                auto parsed = parse_call(render_call(call));
                bool ok = hooks.f_eval(call.base, count) == c && parsed
                          && parsed->base() == call.base && parsed->count == count
                          && hooks.f_eval(parsed->base(), count) == c;
                if (!ok)
                {
                    res.counterexample = fmt::format(
                        "hide({}, count={}, seed={}) -> {} evaluates to {}", c, count,
                        opt.seed + s, render_call(call), hooks.f_eval(call.base, count));
                    return res;
                }
                ++res.passed;
            }
        }
    }
    return res;
}

namespace detail
{
inline std::optional<std::string>
check_store_case(RestructureOp op, ElementKind kind, std::size_t size,
                 std::size_t nops, std::uint64_t seed, VerifyHooks const& hooks)
{
    bool const flat = op == RestructureOp::flattened;
    Dim2 dims = flat ? flattened_case_dims(size) : Dim2{size, 1};
    std::mt19937_64 rng(seed);
    std::vector<StoreOp> ops;
    ops.reserve(nops);
    for (std::size_t i = 0; i < nops; ++i)
    {
        StoreOp o{rng() % 2 == 0, 0, 0, {}};
        o.row = rng() % (flat ? dims.rows : size);
        o.col = flat ? rng() % dims.cols : 0;
        if (o.write)
            o.value = random_value(kind, rng);
        ops.push_back(std::move(o));
    }

    std::string what;
    auto fail = replay(op, kind, size, dims, ops, hooks, &what);
    if (!fail)
        return std::nullopt;

    // shrink: cut after the failing op, then drop ops one at a time
    if (*fail < ops.size())
        ops.resize(*fail + 1);
    for (std::size_t i = ops.size(); i-- > 0;)
    {
        auto trial = ops;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        if (replay(op, kind, size, dims, trial, hooks, nullptr))
            ops = std::move(trial);
    }
    replay(op, kind, size, dims, ops, hooks, &what);
    return fmt::format("{} size {}{}: {}; ops:{}", class_name(op, kind), size,
                       flat ? fmt::format(" ({}x{})", dims.rows, dims.cols) : "",
                       what, ops.empty() ? " none" : describe_ops(ops, flat));
}
}  // namespace detail

/*!
 * Randomized set/get sessions on every op x kind store, each compared with a
 * plain reference array that never touches the index mappings.
 */
inline SuiteResult verify_stores(VerifyOptions const& opt, VerifyHooks const& hooks = {})
{
    SuiteResult res;
    res.name = "store vs reference";
    std::vector<std::pair<RestructureOp, std::size_t>> extra;
    if (opt.large_split)
        extra.emplace_back(RestructureOp::split, 100000);

    auto run = [&](RestructureOp op, ElementKind kind, std::size_t size) {
        ++res.cases;
        std::uint64_t case_seed = opt.seed ^ (size * 0x100000001B3ULL)
                                  ^ (static_cast<std::uint64_t>(op) << 56)
                                  ^ (static_cast<std::uint64_t>(kind) << 60);
        auto bad = detail::check_store_case(op, kind, size, opt.ops_per_case,
                                            case_seed, hooks);
        if (bad)
        {
            res.counterexample = *bad;
            return false;
        }
        ++res.passed;
        return true;
    };

    for (auto op : all_ops)
    {
        for (auto kind : all_kinds)
        {
            for (std::size_t size = 1; size <= opt.size_limit; ++size)
            {
                if (!run(op, kind, size))
                    return res;
            }
            for (auto [xop, xsize] : extra)
            {
                if (xop == op && !run(op, kind, xsize))
                    return res;
            }
        }
    }
    return res;
}

//---------------------------------------------------------------------------//
//! Run every suite, printing one line per suite; true when all pass.
inline bool run_verification(VerifyOptions const& opt, std::ostream& out,
                             std::vector<SuiteResult>* results = nullptr,
                             VerifyHooks const& hooks = {})
{
    std::vector<SuiteResult> all;
    all.push_back(verify_split_bijection(opt, hooks));
    all.push_back(verify_merge_bijection(opt));
    all.push_back(verify_fold_flatten(opt));
    all.push_back(verify_affine(opt));
    all.push_back(verify_hiding(opt, hooks));
    all.push_back(verify_stores(opt, hooks));

    bool ok = true;
    for (auto const& r : all)
    {
        out << fmt::format("{}: {}/{} cases passed{}\n", r.name, r.passed, r.cases,
                           r.ok() ? "" : " FAILED");
        if (r.counterexample)
            out << "  counterexample: " << *r.counterexample << "\n";
        ok = ok && r.ok();
    }
    out << (ok ? "verify: all suites passed\n" : "verify: FAILED\n");
    if (results)
        *results = std::move(all);
    return ok;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
