// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/metrics.hpp
//! Obfuscation quality scorecard: potency, cost and overall quality.
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace arrobf
{
//---------------------------------------------------------------------------//
/*!
 * Round half away from zero to \c digits decimals.
 *
 * A relative nudge absorbs binary representation error, so that values such
 * as 12.5 * 12.45 (stored as 155.62499999...) round to 155.63.
 */
inline double round_half_up(double value, int digits)
{
    double scale = std::pow(10.0, digits);
    double scaled = std::abs(value) * scale;
    double rounded = std::floor(scaled + 0.5 + 1e-9 * (1.0 + scaled)) / scale;
    return std::copysign(rounded, value);
}

inline constexpr double default_potency_weight = 12.50;
inline constexpr double default_storage_weight = 0.15;
inline constexpr double default_runtime_weight = 0.45;

//! Composite statement count of an obfuscated program: its own statements,
//! the expanded F calls, and the accessor class.
inline std::uint64_t composite_loc(std::uint64_t source_stmts,
                                   std::uint64_t class_stmts,
                                   std::uint64_t distinct_call_count,
                                   std::uint64_t stmts_per_call)
{
    std::uint64_t total = source_stmts + distinct_call_count * stmts_per_call
                          + class_stmts;
    if (total == 0)
        throw std::invalid_argument("composite LOC is zero; the program is empty");
    return total;
}

inline double s_loc(std::uint64_t loc_orig, std::uint64_t loc_obf)
{
    if (loc_orig == 0)
        throw std::invalid_argument("original LOC must be >= 1");
    return (static_cast<double>(loc_obf) - static_cast<double>(loc_orig))
           / static_cast<double>(loc_orig);
}

//! Potency: the weight times S_LOC already rounded to two decimals.
inline double s_pot(double s_loc_value, double x_weight = default_potency_weight)
{
    if (!(x_weight > 0))
        throw std::invalid_argument("potency weight must be positive");
    return x_weight * round_half_up(s_loc_value, 2);
}

inline double s_storage(double size_orig, double size_obf)
{
    if (!(size_orig > 0))
        throw std::invalid_argument("original file size must be positive");
    return (size_obf - size_orig) / size_orig;
}

inline double s_runtime(double t_orig, double t_obf)
{
    if (!(t_orig > 0))
        throw std::invalid_argument("original runtime must be positive");
    return (t_obf - t_orig) / t_orig;
}

//! Cost from storage and runtime scores rounded to two decimals.
inline double s_cst(double storage, double runtime,
                    double y2 = default_storage_weight,
                    double z2 = default_runtime_weight)
{
    return y2 * round_half_up(storage, 2) + z2 * round_half_up(runtime, 2);
}

inline double s_quality(double pot, double cst)
{
    return 0.4 * pot - cst;
}

//---------------------------------------------------------------------------//
struct MetricsInput
{
    std::uint64_t loc_orig{1};
    std::uint64_t loc_obf{1};
    double size_orig{1};
    double size_obf{1};
    std::optional<double> t_orig;
    std::optional<double> t_obf;
    double x_weight{default_potency_weight};
    double y2{default_storage_weight};
    double z2{default_runtime_weight};
};

struct MetricsReport
{
    double s_loc{0};
    double s_pot{0};
    double s_storage{0};
    double s_runtime{0};
    double s_cst{0};
    double s_quality{0};
    bool runtime_measured{false};

    double s_loc_display() const { return round_half_up(s_loc, 2); }
    double s_pot_display() const { return round_half_up(s_pot, 2); }
    double s_storage_display() const { return round_half_up(s_storage, 2); }
    double s_runtime_display() const { return round_half_up(s_runtime, 2); }
    double s_cst_display() const { return round_half_up(s_cst, 3); }
    double s_quality_display() const { return round_half_up(s_quality, 2); }
};

/*!
 * Compose the full scorecard.
 *
 * Without both timings the runtime score is 0 and flagged as unmeasured.
 */
inline MetricsReport build_report(MetricsInput const& in)
{
    if (in.loc_orig == 0 || in.loc_obf == 0)
        throw std::invalid_argument("LOC values must be >= 1");
    if (!(in.x_weight > 0) || !(in.y2 > 0) || !(in.z2 > 0))
        throw std::invalid_argument("metric weights must be positive");
    if (in.t_orig.has_value() != in.t_obf.has_value())
        throw std::invalid_argument("runtimes must be given as a pair");

    MetricsReport r;
    r.s_loc = s_loc(in.loc_orig, in.loc_obf);
    r.s_pot = s_pot(r.s_loc, in.x_weight);
    r.s_storage = s_storage(in.size_orig, in.size_obf);
    if (in.t_orig && in.t_obf)
    {
        r.s_runtime = s_runtime(*in.t_orig, *in.t_obf);
        r.runtime_measured = true;
    }
    r.s_cst = s_cst(r.s_storage, r.s_runtime, in.y2, in.z2);
    r.s_quality = s_quality(r.s_pot, r.s_cst);
    return r;
}

//! key=value lines in a fixed order, full precision then display value.
inline std::string render_report(MetricsReport const& r)
{
    std::string out;
    auto add = [&out](char const* key, double full, double shown, int digits) {
        // normalise -0 so identical inputs print identically
        if (full == 0)
            full = 0;
        if (shown == 0)
            shown = 0;
        out += fmt::format("{}={}\n", key, full);
        out += fmt::format("{}_display={:.{}f}\n", key, shown, digits);
    };
    add("s_loc", r.s_loc, r.s_loc_display(), 2);
    add("s_pot", r.s_pot, r.s_pot_display(), 2);
    add("s_storage", r.s_storage, r.s_storage_display(), 2);
    add("s_runtime", r.s_runtime, r.s_runtime_display(), 2);
    add("s_cst", r.s_cst, r.s_cst_display(), 3);
    add("s_quality", r.s_quality, r.s_quality_display(), 2);
    out += fmt::format("runtime_measured={}\n", r.runtime_measured ? "true" : "false");
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
