// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/codegen.hpp
//! Java source emission for the restructured-array accessor classes.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "constant_hiding.hpp"
#include "decl_parser.hpp"
#include "kinds.hpp"

namespace arrobf
{
//---------------------------------------------------------------------------//
inline constexpr std::uint64_t default_seed = 20090521;

struct ObfConfig
{
    bool hide_constants{false};
    //! Fixed chain depth for every F call; drawn per site when unset
    std::optional<int> hide_count;
    //! Permute logical positions with an affine map before layout mapping
    bool index_obfuscate{false};
    std::uint64_t seed{default_seed};
};

//! One integer literal replaced by an F call.
struct HidingSite
{
    std::uint64_t literal;
    HidingCall call;
    std::string text;
};

struct GeneratedClass
{
    enum class Variant
    {
        stub,
        full
    };

    std::string name;
    RestructureOp op{RestructureOp::split};
    ElementKind kind{ElementKind::integer};
    Variant variant{Variant::stub};
    std::string source_text;
    std::size_t statement_count{0};
    std::size_t hiding_sites{0};
    std::vector<HidingSite> sites;
    //! Offset constant of the index permutation, when enabled
    std::optional<std::uint64_t> index_offset;

    std::string file_name() const { return name + ".java"; }
};

//! Number of F-call sites in each full class when hiding is enabled.
constexpr std::size_t hiding_site_count(RestructureOp op)
{
    switch (op)
    {
        case RestructureOp::split: return 9;
        case RestructureOp::folded: return 5;
        case RestructureOp::flattened: return 3;
    }
    return 0;
}

inline std::size_t hiding_helper_statements()
{
    static std::size_t const count = count_statements(emit_hiding_helper());
    return count;
}

namespace detail
{
//! Java literal of a kind's default value.
inline std::string_view default_literal(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::integer: return "0";
        case ElementKind::real: return "0.0";
        case ElementKind::text: return "\"\"";
        case ElementKind::character: return "'\\0'";
    }
    return "0";
}

//! Backing array name prefix: iObj, dObj, sObj, cObj.
inline std::string backing_prefix(ElementKind kind)
{
    switch (kind)
    {
        case ElementKind::integer: return "iObj";
        case ElementKind::real: return "dObj";
        case ElementKind::text: return "sObj";
        case ElementKind::character: return "cObj";
    }
    return "obj";
}

inline std::uint64_t class_stream_seed(std::uint64_t seed, RestructureOp op, ElementKind kind)
{
    auto index = static_cast<std::uint64_t>(op) * 4 + static_cast<std::uint64_t>(kind);
    return seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

//! Renders hideable literals, either plainly or as F calls.
class SiteWriter
{
  public:
    SiteWriter(ObfConfig const& config, std::mt19937_64& rng)
        : config_(config), rng_(rng)
    {
    }

    std::string operator()(std::uint64_t literal)
    {
        if (!config_.hide_constants)
            return std::to_string(literal);
        int count = config_.hide_count
                        ? *config_.hide_count
                        : static_cast<int>(rng_() % max_hide_count) + 1;
        auto call = hide_constant(literal, count, rng_());
        auto text = render_call(call);
        sites_.push_back({literal, call, text});
        return text;
    }

    std::vector<HidingSite> take_sites() { return std::move(sites_); }

  private:
    ObfConfig const& config_;
    std::mt19937_64& rng_;
    std::vector<HidingSite> sites_;
};

//! Members shared by every class that permutes its indices.
inline std::string index_helpers()
{
    return "    private int permute(int pos)\n"
           "    {\n"
           "        if(pos<0||pos>=idxN) throw new ArrayIndexOutOfBoundsException(pos);\n"
           "        return (int)(((long)pos*idxK+idxB)%idxN);\n"
           "    }\n"
           "    private static int stepFor(int n)\n"
           "    {\n"
           "        int k=3;\n"
           "        while(!isPrime(k)||n%k==0) k+=2;\n"
           "        return k;\n"
           "    }\n"
           "    private static boolean isPrime(int k)\n"
           "    {\n"
           "        for(int d=3;d*d<=k;d+=2)\n"
           "            if(k%d==0) return false;\n"
           "        return true;\n"
           "    }\n";
}

inline std::string index_fields() { return "int idxK;int idxB;int idxN;"; }

inline std::string index_init(std::string_view count_expr, std::uint64_t offset)
{
    return fmt::format("        idxN={0};idxK=stepFor(idxN);idxB={1}%idxN;\n",
                       count_expr, offset);
}

inline std::string emit_split_body(std::string const& name, ElementKind kind,
                                   SiteWriter& hide, std::optional<std::uint64_t> offset)
{
    auto const t = std::string(java_type(kind));
    auto const a = backing_prefix(kind) + "1";
    auto const b = backing_prefix(kind) + "2";
    std::string out;
    out += fmt::format("    {0}[] {1};{0}[] {2};", t, a, b);
    if (offset)
        out += index_fields();
    out += "\n";
    out += fmt::format("    public {}(int size )\n", name);
    out += "    {\n";
    out += fmt::format("        if((size%{})==0)\n", hide(2));
    auto half1 = hide(2);
    auto half2 = hide(2);
    out += fmt::format("            {{ {0}= new {1}[(int)(size/{2})]; {3}= new {1}[(int)(size/{4})];}}\n",
                       a, t, half1, b, half2);
    out += "        else\n";
    out += fmt::format("            {{int temp=(int)(size/2)+1;{0}= new {1}[temp];\n", a, t);
    out += fmt::format("            {0}= new {1}[size-temp];}}\n", b, t);
    if (offset)
        out += index_init("size", *offset);
    out += "    }\n";

    // setArray
    out += fmt::format("    public void setArray(int pos,{} elem)\n", t);
    out += "    {\n";
    if (offset)
        out += "        pos=permute(pos);\n";
    out += fmt::format("        if((pos%{})==0)\n", hide(2));
    out += fmt::format("            {}[(int)pos/{}]=elem;\n", a, hide(2));
    out += "        else\n";
    out += fmt::format("            {}[(int)pos/{}]=elem;\n", b, hide(2));
    out += "    }\n";

    // getArray
    out += fmt::format("    public {} getArray(int pos)\n", t);
    out += "    {\n";
    if (offset)
        out += "        pos=permute(pos);\n";
    out += fmt::format("        if((pos%{})==0)\n", hide(2));
    out += fmt::format("            return({}[(int)pos/{}]);\n", a, hide(2));
    out += "        else\n";
    out += fmt::format("            return({}[(int)pos/{}]);\n", b, hide(2));
    out += "    }\n";

    out += fmt::format("    public int lengthArray() {{return({}.length+{}.length);}}\n", a, b);
    return out;
}

inline std::string emit_folded_body(std::string const& name, ElementKind kind,
                                    SiteWriter& hide, std::optional<std::uint64_t> offset)
{
    auto const t = std::string(java_type(kind));
    auto const a = backing_prefix(kind);
    std::string out;
    out += fmt::format("    {}[][] {};int size;int cols;", t, a);
    if (offset)
        out += index_fields();
    out += "\n";
    out += fmt::format("    public {}(int size)\n", name);
    out += "    {\n";
    out += "        if(size<1) throw new IllegalArgumentException(\"size\");\n";
    out += "        this.size=size;\n";
    out += "        cols=(int)Math.sqrt(size);\n";
    out += fmt::format("        while((long)cols*cols<size) cols=cols+{};\n", hide(1));
    out += fmt::format("        int rows=(size+cols-{})/cols;\n", hide(1));
    out += fmt::format("        {}= new {}[rows][cols];\n", a, t);
    if (offset)
        out += index_init("size", *offset);
    out += "    }\n";

    out += fmt::format("    public void setArray(int pos,{} elem)\n", t);
    out += "    {\n";
    if (offset)
        out += "        pos=permute(pos);\n";
    out += fmt::format("        if(pos<{}||pos>=size) throw new ArrayIndexOutOfBoundsException(pos);\n",
                       hide(0));
    out += fmt::format("        {}[pos/cols][pos%cols]=elem;\n", a);
    out += "    }\n";

    out += fmt::format("    public {} getArray(int pos)\n", t);
    out += "    {\n";
    if (offset)
        out += "        pos=permute(pos);\n";
    out += fmt::format("        if(pos<{}||pos>=size) throw new ArrayIndexOutOfBoundsException(pos);\n",
                       hide(0));
    out += fmt::format("        return({}[pos/cols][pos%cols]);\n", a);
    out += "    }\n";

    out += fmt::format("    public int lengthArray() {{return({0}.length*{0}[{1}].length);}}\n",
                       a, hide(0));
    return out;
}

inline std::string emit_flattened_body(std::string const& name, ElementKind kind,
                                       SiteWriter& hide, std::optional<std::uint64_t> offset)
{
    auto const t = std::string(java_type(kind));
    auto const a = backing_prefix(kind);
    std::string out;
    out += fmt::format("    {}[] {};int rows;int cols;", t, a);
    if (offset)
        out += index_fields();
    out += "\n";
    out += fmt::format("    public {}(int rows,int cols)\n", name);
    out += "    {\n";
    out += "        if((long)rows*cols>Integer.MAX_VALUE) throw new IllegalArgumentException(\"rows*cols\");\n";
    out += "        this.rows=rows;this.cols=cols;\n";
    out += fmt::format("        {}= new {}[rows*cols];\n", a, t);
    out += fmt::format("        if({}.length=={}) throw new IllegalArgumentException(\"rows*cols\");\n",
                       a, hide(0));
    if (offset)
        out += index_init("rows*cols", *offset);
    out += "    }\n";

    auto const index = offset ? std::string("permute(row*cols+col)")
                              : std::string("row*cols+col");
    out += fmt::format("    public void setArray(int row,int col,{} elem)\n", t);
    out += "    {\n";
    out += fmt::format("        if((row|col)<{}||row>=rows||col>=cols) throw new ArrayIndexOutOfBoundsException(row*cols+col);\n",
                       hide(0));
    out += fmt::format("        {}[{}]=elem;\n", a, index);
    out += "    }\n";

    out += fmt::format("    public {} getArray(int row,int col)\n", t);
    out += "    {\n";
    out += fmt::format("        if((row|col)<{}||row>=rows||col>=cols) throw new ArrayIndexOutOfBoundsException(row*cols+col);\n",
                       hide(0));
    out += fmt::format("        return({}[{}]);\n", a, index);
    out += "    }\n";

    out += fmt::format("    public int lengthArray() {{return({}.length);}}\n", a);
    return out;
}

inline GeneratedClass finish(GeneratedClass cls)
{
    cls.statement_count = count_statements(cls.source_text);
    cls.hiding_sites = cls.sites.size();
    return cls;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Skeleton class whose methods compile but do nothing: constructor and
 * setArray are empty, getArray returns the kind's default, lengthArray 0.
 */
inline GeneratedClass emit_stub(RestructureOp op, ElementKind kind)
{
    GeneratedClass cls;
    cls.name = class_name(op, kind);
    cls.op = op;
    cls.kind = kind;
    cls.variant = GeneratedClass::Variant::stub;

    auto const t = java_type(kind);
    bool const flat = op == RestructureOp::flattened;
    auto& out = cls.source_text;
    out += fmt::format("public class {} {{\n", cls.name);
    out += fmt::format("    public {}({}) {{}}\n", cls.name,
                       flat ? "int rows,int cols" : "int size");
    out += fmt::format("    public void setArray({},{} elem) {{ }}\n",
                       flat ? "int row,int col" : "int pos", t);
    out += fmt::format("    public {} getArray({}) {{ return {};}}\n", t,
                       flat ? "int row,int col" : "int pos",
                       detail::default_literal(kind));
    out += "    public int lengthArray() {return 0;}\n";
    out += "}\n";
    return detail::finish(std::move(cls));
}

/*!
 * Complete accessor class.
 *
 * Hiding replaces a fixed list of integer literals with F calls: 9 in split
 * classes (the even-size constructor branch plus every literal in setArray
 * and getArray), 5 in folded and 3 in flattened classes. The F helper is then
 * appended as a private static member. Index obscuring permutes logical
 * positions through (k*pos + b) mod n, with k the smallest odd prime not
 * dividing n, in both setArray and getArray.
 */
inline GeneratedClass emit_full(RestructureOp op, ElementKind kind, ObfConfig const& config)
{
    if (config.hide_count)
        check_count(*config.hide_count);

    GeneratedClass cls;
    cls.name = class_name(op, kind);
    cls.op = op;
    cls.kind = kind;
    cls.variant = GeneratedClass::Variant::full;

    std::mt19937_64 rng(detail::class_stream_seed(config.seed, op, kind));
    if (config.index_obfuscate)
        cls.index_offset = rng() % 1000003;
    detail::SiteWriter hide(config, rng);

    std::string body;
    switch (op)
    {
        case RestructureOp::split:
            body = detail::emit_split_body(cls.name, kind, hide, cls.index_offset);
            break;
        case RestructureOp::folded:
            body = detail::emit_folded_body(cls.name, kind, hide, cls.index_offset);
            break;
        case RestructureOp::flattened:
            body = detail::emit_flattened_body(cls.name, kind, hide, cls.index_offset);
            break;
    }
    cls.sites = hide.take_sites();

    auto& out = cls.source_text;
    out += fmt::format("public class {} {{\n", cls.name);
    out += body;
    if (cls.index_offset)
        out += detail::index_helpers();
    if (!cls.sites.empty())
        out += emit_hiding_helper();
    out += "}\n";
    return detail::finish(std::move(cls));
}

//---------------------------------------------------------------------------//
struct PlanIssue
{
    std::string decl_name;
    std::string message;
};

struct ClassPlan
{
    std::vector<ClassId> classes;
    std::vector<PlanIssue> issues;
};

/*!
 * One class per element kind present among the declarations compatible with
 * \c op, in kind order. Flattening needs 2D declarations, the others 1D.
 */
inline ClassPlan plan_classes(std::vector<ArrayDecl> const& decls, RestructureOp op)
{
    ClassPlan plan;
    std::array<bool, all_kinds.size()> present{};
    for (auto const& decl : decls)
    {
        if (decl.extents.size() != op_arity(op))
        {
            plan.issues.push_back(
                {decl.name, fmt::format("{}D array cannot use {}Array classes "
                                        "(needs {}D); skipped",
                                        decl.extents.size(), op_class_prefix(op),
                                        op_arity(op))});
            continue;
        }
        present[static_cast<std::size_t>(decl.kind)] = true;
    }
    for (auto kind : all_kinds)
    {
        if (present[static_cast<std::size_t>(kind)])
            plan.classes.push_back({op, kind});
    }
    return plan;
}

//---------------------------------------------------------------------------//
class WorkspaceError : public std::runtime_error
{
  public:
    WorkspaceError(std::filesystem::path path, std::string const& what)
        : std::runtime_error(path.string() + ": " + what), path_(std::move(path))
    {
    }

    std::filesystem::path const& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

/*!
 * Write each class to "<dir>/<ClassName>.java", replacing existing files.
 *
 * All files are first written to temporaries; if any write fails the
 * temporaries are removed and nothing is replaced.
 */
inline std::vector<std::filesystem::path>
write_workspace(std::vector<GeneratedClass> const& classes,
                std::filesystem::path const& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw WorkspaceError(dir, "not a directory");

    std::vector<fs::path> temps;
    std::vector<fs::path> targets;
    auto cleanup = [&temps] {
        std::error_code ignored;
        for (auto const& p : temps)
            fs::remove(p, ignored);
    };

    for (auto const& cls : classes)
    {
        auto target = dir / cls.file_name();
        auto temp = dir / (cls.file_name() + ".tmp");
        std::ofstream os(temp, std::ios::binary | std::ios::trunc);
        if (os)
            temps.push_back(temp);
        if (!os || !(os << cls.source_text) || !os.flush())
        {
            cleanup();
            throw WorkspaceError(temp, "cannot write file");
        }
        targets.push_back(std::move(target));
    }
    for (std::size_t i = 0; i < temps.size(); ++i)
    {
        fs::rename(temps[i], targets[i], ec);
        if (ec)
        {
            cleanup();
            throw WorkspaceError(targets[i], ec.message());
        }
    }
    return targets;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
