// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/cli.hpp
//! Subcommands of the arrobf tool. Exit codes: 0 success, 1 user or input
//! error, 2 internal invariant violation.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "codegen.hpp"
#include "constant_hiding.hpp"
#include "decl_parser.hpp"
#include "metrics.hpp"
#include "verify.hpp"

namespace arrobf::cli
{
//---------------------------------------------------------------------------//
enum ExitCode : int
{
    success = 0,
    user_error = 1,
    internal_error = 2,
};

struct GenerateOptions
{
    std::filesystem::path infile;
    std::string op{"split"};
    std::filesystem::path out_dir{"."};
    std::uint64_t seed{default_seed};
    bool hide{false};
    bool index_obfuscate{false};
};

struct RewriteOptions
{
    std::filesystem::path source;
    std::filesystem::path class_dir{"."};
    std::uint64_t seed{default_seed};
    bool hide{false};
    bool index_obfuscate{false};
};

struct MetricsOptions
{
    std::filesystem::path orig;
    std::filesystem::path obf;
    std::vector<std::filesystem::path> class_files;
    std::optional<double> t_orig;
    std::optional<double> t_obf;
    double x_weight{default_potency_weight};
    std::optional<std::uint64_t> loc_orig;
    std::optional<std::uint64_t> loc_obf;
};

struct HideOptions
{
    std::int64_t value{0};
    int count{1};
    std::uint64_t seed{default_seed};
};

namespace detail
{
inline std::optional<std::string> read_text(std::filesystem::path const& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return std::nullopt;
    std::ostringstream ss;
    ss << is.rdbuf();
    if (is.bad())
        return std::nullopt;
    return ss.str();
}

//! Invariants every emitted class must satisfy before it is written.
inline std::optional<std::string> check_generated(GeneratedClass const& cls, bool hide)
{
    if (cls.statement_count != count_statements(cls.source_text))
        return cls.name + ": statement count out of sync";
    std::size_t expected = hide ? hiding_site_count(cls.op) : 0;
    if (cls.hiding_sites != expected)
    {
        return fmt::format("{}: {} hiding sites, expected {}", cls.name,
                           cls.hiding_sites, expected);
    }
    for (auto const& site : cls.sites)
    {
        if (f_eval(site.call.base, site.call.count) != site.literal)
            return fmt::format("{}: {} does not evaluate to {}", cls.name, site.text,
                               site.literal);
    }
    return std::nullopt;
}

inline int emit_and_write(std::vector<ClassId> const& ids, ObfConfig const& config,
                          std::filesystem::path const& dir, std::ostream& out,
                          std::ostream& err)
{
    std::vector<GeneratedClass> classes;
    for (auto const& id : ids)
    {
        classes.push_back(emit_full(id.op, id.kind, config));
        if (auto bad = check_generated(classes.back(), config.hide_constants))
        {
            err << "internal error: " << *bad << "\n";
            return internal_error;
        }
    }
    std::vector<std::filesystem::path> written;
    try
    {
        written = write_workspace(classes, dir);
    }
    catch (WorkspaceError const& e)
    {
        err << "error: " << e.what() << "\n";
        return user_error;
    }
    for (std::size_t i = 0; i < classes.size(); ++i)
    {
        out << fmt::format("{} -> {} ({} statements, {} hiding sites)\n",
                           classes[i].name, written[i].string(),
                           classes[i].statement_count, classes[i].hiding_sites);
    }
    out << fmt::format("{} class file(s) written\n", classes.size());
    return success;
}

inline bool ensure_dir(std::filesystem::path const& dir, std::ostream& err)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
    {
        err << "error: " << dir.string() << ": cannot create output directory\n";
        return false;
    }
    return true;
}

//! F-call sites in Java text (the helper's own declaration excluded).
inline std::size_t count_call_sites(std::string_view java)
{
    auto toks = lex_java(java).tokens;
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
    {
        if (toks[i].kind == Token::Kind::identifier && toks[i].text == "F"
            && toks[i + 1].is("(") && !(i > 0 && toks[i - 1].is("int")))
            ++n;
    }
    return n;
}
}  // namespace detail

//---------------------------------------------------------------------------//
inline int cmd_generate(GenerateOptions const& opt, std::ostream& out, std::ostream& err)
{
    auto op = op_from_name(opt.op);
    if (!op)
    {
        err << "error: unknown op '" << opt.op << "' (use split, fold or flatten)\n";
        return user_error;
    }
    auto text = detail::read_text(opt.infile);
    if (!text)
    {
        err << "error: " << opt.infile.string() << ": cannot read file\n";
        return user_error;
    }
    auto parsed = parse_infile(*text);
    for (auto const& issue : parsed.issues)
    {
        err << fmt::format("{}:{}: {}: {}\n", opt.infile.string(), issue.line_number,
                           issue.severity == ParseIssue::Severity::error ? "error"
                                                                         : "warning",
                           issue.message);
    }
    if (parsed.decls.empty())
    {
        err << "error: no array declarations found\n";
        return user_error;
    }
    auto plan = plan_classes(parsed.decls, *op);
    for (auto const& issue : plan.issues)
        err << "warning: " << issue.decl_name << ": " << issue.message << "\n";
    if (plan.classes.empty())
    {
        err << fmt::format("error: no declarations compatible with {}\n", opt.op);
        return user_error;
    }
    if (!detail::ensure_dir(opt.out_dir, err))
        return user_error;

    ObfConfig config;
    config.hide_constants = opt.hide;
    config.index_obfuscate = opt.index_obfuscate;
    config.seed = opt.seed;
    return detail::emit_and_write(plan.classes, config, opt.out_dir, out, err);
}

inline int cmd_stubs(std::filesystem::path const& out_dir, std::ostream& out, std::ostream& err)
{
    if (!detail::ensure_dir(out_dir, err))
        return user_error;
    std::vector<GeneratedClass> stubs;
    for (auto const& id : predefined_classes())
        stubs.push_back(emit_stub(id.op, id.kind));
    try
    {
        for (auto const& path : write_workspace(stubs, out_dir))
            out << path.string() << "\n";
    }
    catch (WorkspaceError const& e)
    {
        err << "error: " << e.what() << "\n";
        return user_error;
    }
    out << fmt::format("{} stub file(s) written\n", stubs.size());
    return success;
}

inline int cmd_rewrite(RewriteOptions const& opt, std::ostream& out, std::ostream& err)
{
    auto text = detail::read_text(opt.source);
    if (!text)
    {
        err << "error: " << opt.source.string() << ": cannot read file\n";
        return user_error;
    }
    auto used = scan_class_usages(*text);
    if (used.empty())
    {
        out << "nothing to rewrite: no predefined classes used in "
            << opt.source.string() << "\n";
        return success;
    }
    std::error_code ec;
    if (!std::filesystem::is_directory(opt.class_dir, ec))
    {
        err << "error: " << opt.class_dir.string() << ": not a directory\n";
        return user_error;
    }
    std::vector<ClassId> ids;
    for (auto const& id : predefined_classes())
    {
        if (used.count(class_name(id.op, id.kind)))
            ids.push_back(id);
    }
    ObfConfig config;
    config.hide_constants = opt.hide;
    config.index_obfuscate = opt.index_obfuscate;
    config.seed = opt.seed;
    return detail::emit_and_write(ids, config, opt.class_dir, out, err);
}

inline int cmd_metrics(MetricsOptions const& opt, std::ostream& out, std::ostream& err)
{
    namespace fs = std::filesystem;
    auto orig = detail::read_text(opt.orig);
    auto obf = detail::read_text(opt.obf);
    for (auto const& [text, path] : {std::pair{&orig, &opt.orig}, std::pair{&obf, &opt.obf}})
    {
        if (!*text)
        {
            err << "error: " << path->string() << ": cannot read file\n";
            return user_error;
        }
    }
    std::uint64_t class_stmts = 0;
    std::uint64_t call_sites = 0;
    for (auto const& path : opt.class_files)
    {
        auto text = detail::read_text(path);
        if (!text)
        {
            err << "error: " << path.string() << ": cannot read file\n";
            return user_error;
        }
        class_stmts += count_statements(*text);
        call_sites += detail::count_call_sites(*text);
    }

    MetricsInput in;
    try
    {
        in.loc_orig = opt.loc_orig ? *opt.loc_orig : count_statements(*orig);
        in.loc_obf = opt.loc_obf ? *opt.loc_obf
                                 : composite_loc(count_statements(*obf), class_stmts,
                                                 call_sites, hiding_helper_statements());
        in.size_orig = static_cast<double>(fs::file_size(opt.orig));
        in.size_obf = static_cast<double>(fs::file_size(opt.obf));
        in.t_orig = opt.t_orig;
        in.t_obf = opt.t_obf;
        in.x_weight = opt.x_weight;
        out << render_report(build_report(in));
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << "\n";
        return user_error;
    }
    return success;
}

inline int cmd_hide(HideOptions const& opt, std::ostream& out, std::ostream& err)
{
    if (opt.value < 0 || opt.value >= static_cast<std::int64_t>(hideable_limit))
    {
        err << "error: F can only hide constants 0..4: every chain ends with "
               "a reduction modulo 2+3=5 (got "
            << opt.value << ")\n";
        return user_error;
    }
    if (opt.count < 1 || opt.count > max_hide_count)
    {
        err << "error: --count must be in [1, 13] (got " << opt.count << ")\n";
        return user_error;
    }
    auto call = hide_constant(static_cast<std::uint64_t>(opt.value), opt.count, opt.seed);
    auto evaluated = f_eval(call.base, call.count);
    if (evaluated != static_cast<std::uint64_t>(opt.value))
    {
        err << "internal error: generated call evaluates to " << evaluated << "\n";
        return internal_error;
    }
    out << render_call(call) << "\n";
    out << "evaluates to " << evaluated << "\n";
    return success;
}

inline int cmd_verify(VerifyOptions const& opt, std::ostream& out, std::ostream& err,
                      VerifyHooks const& hooks = {})
{
    try
    {
        if (run_verification(opt, out, nullptr, hooks))
            return success;
    }
    catch (std::exception const& e)
    {
        err << "verify: exception: " << e.what() << "\n";
    }
    err << "verify: property violation\n";
    return internal_error;
}

//---------------------------------------------------------------------------//
/*!
 * Parse arguments and dispatch. Output goes to \c out, diagnostics to
 * \c err.
 */
inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Array restructuring obfuscator for Java sources", "arrobf"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Generate full classes from an array manifest");
    generate->add_option("--infile", gen.infile, "Array declaration manifest")->required();
    generate->add_option("--op", gen.op, "Restructuring operation")
        ->required()
        ->check(CLI::IsMember({"split", "fold", "flatten"}));
    generate->add_option("--out", gen.out_dir, "Output directory")->required();
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_flag("--hide", gen.hide, "Hide integer constants behind F calls");
    generate->add_flag("--index-obfuscate", gen.index_obfuscate,
                       "Permute logical indices with an affine map");

    std::filesystem::path stub_dir;
    auto* stubs = app.add_subcommand("stubs", "Write the 12 stub classes");
    stubs->add_option("--out", stub_dir, "Output directory")->required();

    RewriteOptions rw;
    auto* rewrite = app.add_subcommand("rewrite",
                                       "Rewrite the classes a source file uses");
    rewrite->add_option("--source", rw.source, "Java source using the classes")->required();
    rewrite->add_option("--class-dir", rw.class_dir, "Directory holding the class files")
        ->required();
    rewrite->add_option("--seed", rw.seed, "Random seed");
    rewrite->add_flag("--hide", rw.hide, "Hide integer constants behind F calls");
    rewrite->add_flag("--index-obfuscate", rw.index_obfuscate,
                      "Permute logical indices with an affine map");

    MetricsOptions mo;
    std::vector<std::string> class_files;
    double t_orig = 0;
    double t_obf = 0;
    std::uint64_t loc_orig = 0;
    std::uint64_t loc_obf = 0;
    auto* metrics = app.add_subcommand("metrics", "Score an obfuscated program");
    metrics->add_option("--orig", mo.orig, "Original source")->required();
    metrics->add_option("--obf", mo.obf, "Obfuscated source")->required();
    metrics->add_option("--class", class_files, "Generated class file (repeatable)")
        ->take_all();
    auto* t_orig_opt = metrics->add_option("--t-orig", t_orig, "Original runtime");
    auto* t_obf_opt = metrics->add_option("--t-obf", t_obf, "Obfuscated runtime");
    t_orig_opt->needs(t_obf_opt);
    t_obf_opt->needs(t_orig_opt);
    metrics->add_option("--x", mo.x_weight, "Potency weight");
    auto* loc_orig_opt = metrics->add_option("--loc-orig", loc_orig, "Override original LOC");
    auto* loc_obf_opt = metrics->add_option("--loc-obf", loc_obf, "Override obfuscated LOC");

    HideOptions ho;
    auto* hide = app.add_subcommand("hide", "Print an F call hiding a constant");
    hide->add_option("--value", ho.value, "Constant to hide (0..4)")->required();
    hide->add_option("--count", ho.count, "Chain depth (1..13)")->required();
    hide->add_option("--seed", ho.seed, "Random seed");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run the built-in property suites");
    verify->add_option("--size-limit", vo.size_limit, "Largest array size checked");
    verify->add_option("--ops", vo.ops_per_case, "Random operations per store case");
    verify->add_option("--seed", vo.seed, "Random seed");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int code = app.exit(e, out, err);
        return code == 0 ? success : user_error;
    }

    if (generate->parsed())
        return cmd_generate(gen, out, err);
    if (stubs->parsed())
        return cmd_stubs(stub_dir, out, err);
    if (rewrite->parsed())
        return cmd_rewrite(rw, out, err);
    if (metrics->parsed())
    {
        mo.class_files.assign(class_files.begin(), class_files.end());
        if (*t_orig_opt)
        {
            mo.t_orig = t_orig;
            mo.t_obf = t_obf;
        }
        if (*loc_orig_opt)
            mo.loc_orig = loc_orig;
        if (*loc_obf_opt)
            mo.loc_obf = loc_obf;
        return cmd_metrics(mo, out, err);
    }
    if (hide->parsed())
        return cmd_hide(ho, out, err);
    if (verify->parsed())
        return cmd_verify(vo, out, err);
    return user_error;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf::cli
