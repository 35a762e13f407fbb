// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/decl_parser.hpp
//! Array declaration manifests, class-usage scanning and statement counting.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "java_lexer.hpp"
#include "kinds.hpp"

namespace arrobf
{
//---------------------------------------------------------------------------//
struct ArrayDecl
{
    std::string name;
    ElementKind kind{ElementKind::integer};
    std::vector<std::size_t> extents;

    friend bool operator==(ArrayDecl const&, ArrayDecl const&) = default;
};

struct ParseIssue
{
    enum class Severity
    {
        error,
        warning
    };

    std::size_t line_number{1};
    std::string message;
    Severity severity{Severity::error};
};

struct ParseResult
{
    std::vector<ArrayDecl> decls;
    std::vector<ParseIssue> issues;

    std::size_t count(ParseIssue::Severity sev) const
    {
        return static_cast<std::size_t>(std::count_if(
            issues.begin(), issues.end(),
            [sev](ParseIssue const& i) { return i.severity == sev; }));
    }
};

namespace detail
{
inline bool is_java_keyword(std::string_view word)
{
    static std::set<std::string_view> const keywords{
        "abstract", "assert",     "boolean",   "break",     "byte",
        "case",     "catch",      "char",      "class",     "const",
        "continue", "default",    "do",        "double",    "else",
        "enum",     "extends",    "final",     "finally",   "float",
        "for",      "goto",       "if",        "implements", "import",
        "instanceof", "int",      "interface", "long",      "native",
        "new",      "package",    "private",   "protected", "public",
        "return",   "short",      "static",    "strictfp",  "super",
        "switch",   "synchronized", "this",    "throw",     "throws",
        "transient", "try",       "void",      "volatile",  "while",
        "true",     "false",      "null"};
    return keywords.count(word) != 0;
}

//! Cursor over the tokens of a single manifest line.
class LineCursor
{
  public:
    explicit LineCursor(std::vector<Token const*> tokens)
        : tokens_(std::move(tokens))
    {
    }

    bool done() const { return pos_ >= tokens_.size(); }
    Token const* peek() const { return done() ? nullptr : tokens_[pos_]; }
    Token const* next() { return done() ? nullptr : tokens_[pos_++]; }

    bool accept(std::string_view s)
    {
        if (!done() && tokens_[pos_]->is(s))
        {
            ++pos_;
            return true;
        }
        return false;
    }

    //! Consume as many "[]" pairs as present
    std::size_t empty_brackets()
    {
        std::size_t count = 0;
        while (pos_ + 1 < tokens_.size() && tokens_[pos_]->is("[")
               && tokens_[pos_ + 1]->is("]"))
        {
            pos_ += 2;
            ++count;
        }
        return count;
    }

  private:
    std::vector<Token const*> tokens_;
    std::size_t pos_{0};
};

struct LineError
{
    std::string message;
};

inline ElementKind expect_type(LineCursor& cur, std::string_view where)
{
    auto const* tok = cur.next();
    if (!tok || tok->kind != Token::Kind::identifier)
        throw LineError{"expected element type " + std::string(where)};
    auto kind = kind_from_java_type(tok->text);
    if (!kind)
    {
        throw LineError{"unsupported element type '" + tok->text
                        + "' (expected int, double, String or char)"};
    }
    return *kind;
}

inline void expect(LineCursor& cur, std::string_view what)
{
    if (!cur.accept(what))
    {
        auto const* tok = cur.peek();
        throw LineError{"expected '" + std::string(what) + "'"
                        + (tok ? " before '" + tok->text + "'" : " at end of line")};
    }
}

//! Java int range: extents must fit a Java array length.
inline std::size_t parse_extent(Token const* tok)
{
    if (!tok || tok->kind != Token::Kind::number)
        throw LineError{"expected an integer array extent"};
    std::uint64_t value = 0;
    auto const& s = tok->text;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw LineError{"invalid array extent '" + s + "'"};
    if (value == 0)
        throw LineError{"array extent must be >= 1"};
    if (value > 2147483647ULL)
        throw LineError{"array extent " + s + " exceeds the Java int range"};
    return static_cast<std::size_t>(value);
}

inline ArrayDecl parse_decl_line(LineCursor& cur, std::vector<std::string>& warnings)
{
    ArrayDecl decl;
    decl.kind = expect_type(cur, "at start of declaration");
    std::size_t left_brackets = cur.empty_brackets();

    auto const* name = cur.next();
    if (!name || name->kind != Token::Kind::identifier)
        throw LineError{"expected array name"};
    if (is_java_keyword(name->text))
        throw LineError{"'" + name->text + "' is a reserved word"};
    decl.name = name->text;
    left_brackets += cur.empty_brackets();

    expect(cur, "=");
    expect(cur, "new");
    auto new_kind = expect_type(cur, "after 'new'");
    if (new_kind != decl.kind)
    {
        throw LineError{"declared type " + std::string(java_type(decl.kind))
                        + " does not match allocated type "
                        + std::string(java_type(new_kind))};
    }
    while (cur.accept("["))
    {
        decl.extents.push_back(parse_extent(cur.next()));
        expect(cur, "]");
    }
    if (decl.extents.empty())
        throw LineError{"expected '[' extent after allocated type"};
    if (decl.extents.size() > 2)
        throw LineError{"only 1D and 2D arrays are supported"};
    expect(cur, ";");
    if (!cur.done())
        throw LineError{"unexpected '" + cur.peek()->text + "' after ';'"};

    if (left_brackets == 0)
    {
        warnings.push_back("declared type of '" + decl.name
                           + "' lacks []; accepted as an array declaration");
    }
    else if (left_brackets != decl.extents.size())
    {
        throw LineError{"declared rank " + std::to_string(left_brackets)
                        + " does not match allocated rank "
                        + std::to_string(decl.extents.size())};
    }
    return decl;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Parse an array-declaration manifest, one declaration per line:
 *
 * \code
   int[] array=new int[100000];
   char abcd[]=new char[100];
   int[][] m = new int[500][200];
 * \endcode
 *
 * Malformed lines are reported and skipped; nothing is fatal.
 */
inline ParseResult parse_infile(std::string_view text)
{
    ParseResult result;
    auto lexed = lex_java(text);

    std::map<std::size_t, std::vector<Token const*>> lines;
    for (auto const& tok : lexed.tokens)
        lines[tok.line].push_back(&tok);

    std::set<std::string> seen;
    for (auto& [line, toks] : lines)
    {
        detail::LineCursor cur(std::move(toks));
        std::vector<std::string> warnings;
        try
        {
            auto decl = detail::parse_decl_line(cur, warnings);
            if (!seen.insert(decl.name).second)
            {
                warnings.push_back("array '" + decl.name
                                   + "' is declared more than once");
            }
            result.decls.push_back(std::move(decl));
        }
        catch (detail::LineError const& e)
        {
            result.issues.push_back({line, e.message, ParseIssue::Severity::error});
        }
        for (auto& w : warnings)
        {
            result.issues.push_back({line, std::move(w), ParseIssue::Severity::warning});
        }
    }
    if (lexed.unterminated_line != 0)
    {
        result.issues.push_back({lexed.unterminated_line,
                                 "unterminated comment or literal",
                                 ParseIssue::Severity::error});
    }
    return result;
}

//! Canonical manifest line for a declaration.
inline std::string format_decl(ArrayDecl const& decl)
{
    std::string type(java_type(decl.kind));
    std::string brackets;
    std::string extents;
    for (auto e : decl.extents)
    {
        brackets += "[]";
        extents += "[" + std::to_string(e) + "]";
    }
    return type + brackets + " " + decl.name + "=new " + type + extents + ";";
}

inline std::string format_manifest(std::vector<ArrayDecl> const& decls)
{
    std::string out;
    for (auto const& d : decls)
        out += format_decl(d) + "\n";
    return out;
}

//---------------------------------------------------------------------------//
//! Predefined class names used as identifiers in \c source.
inline std::set<std::string> scan_class_usages(std::string_view source)
{
    std::set<std::string> used;
    for (auto const& tok : lex_java(source).tokens)
    {
        if (tok.kind == Token::Kind::identifier && parse_class_name(tok.text))
            used.insert(tok.text);
    }
    return used;
}

//---------------------------------------------------------------------------//
struct StatementCount
{
    std::size_t statements{0};
    std::vector<ParseIssue> issues;
};

/*!
 * Count statements in Java source.
 *
 * Counted: type declaration headers, field declarations, method and
 * constructor signatures, ';'-terminated statements in bodies, and each
 * control keyword (if, else, for, while, do, switch, try, catch, finally).
 * Comments, blank lines and layout never change the count.
 */
inline StatementCount count_statements_checked(std::string_view source)
{
    enum class Scope
    {
        type_body,
        code_block,
        initializer,  // braces inside an expression, e.g. {1,2}
    };

    static std::set<std::string_view> const headed_control{
        "if", "for", "while", "switch", "catch", "synchronized"};
    static std::set<std::string_view> const bare_control{
        "else", "do", "try", "finally"};
    static std::set<std::string_view> const type_keywords{
        "class", "interface", "enum"};

    StatementCount result;
    auto lexed = lex_java(source);
    auto const& toks = lexed.tokens;

    std::vector<Scope> scopes;
    std::vector<Token const*> pending;
    std::size_t paren_depth = 0;
    bool header_parens = false;

    auto scope = [&] { return scopes.empty() ? Scope::type_body : scopes.back(); };
    auto pending_has = [&](auto const& words) {
        return std::any_of(pending.begin(), pending.end(), [&](Token const* t) {
            return t->kind == Token::Kind::identifier && words.count(t->text);
        });
    };
    auto pending_has_word = [&](std::string_view w) {
        return std::any_of(pending.begin(), pending.end(),
                           [&](Token const* t) { return t->is(w); });
    };

    for (std::size_t i = 0; i < toks.size(); ++i)
    {
        auto const& tok = toks[i];
        if (paren_depth > 0)
        {
            if (tok.is("("))
                ++paren_depth;
            else if (tok.is(")"))
                --paren_depth;
            if (paren_depth == 0 && header_parens)
            {
                header_parens = false;
                pending.clear();
            }
            else
            {
                pending.push_back(&tok);
            }
            continue;
        }

        if (scope() == Scope::code_block && tok.kind == Token::Kind::identifier)
        {
            if (headed_control.count(tok.text))
            {
                ++result.statements;
                pending.clear();
                if (i + 1 < toks.size() && toks[i + 1].is("("))
                {
                    ++i;
                    paren_depth = 1;
                    header_parens = true;
                }
                continue;
            }
            if (bare_control.count(tok.text))
            {
                ++result.statements;
                pending.clear();
                continue;
            }
        }

        if (tok.is("("))
        {
            ++paren_depth;
            pending.push_back(&tok);
        }
        else if (tok.is(")"))
        {
            // unbalanced close; keep going
            pending.push_back(&tok);
        }
        else if (tok.is("{"))
        {
            Token const* last = pending.empty() ? nullptr : pending.back();
            if (scope() == Scope::initializer)
            {
                scopes.push_back(Scope::initializer);
            }
            else if (pending_has(type_keywords))
            {
                ++result.statements;
                scopes.push_back(Scope::type_body);
                pending.clear();
            }
            else if (scope() == Scope::type_body)
            {
                bool signature = last
                                 && (last->is(")")
                                     || (pending_has_word("throws")
                                         && pending_has_word(")")));
                if (signature)
                {
                    ++result.statements;
                    scopes.push_back(Scope::code_block);
                    pending.clear();
                }
                else if (!last || (pending.size() == 1 && last->is("static")))
                {
                    scopes.push_back(Scope::code_block);
                    pending.clear();
                }
                else
                {
                    scopes.push_back(Scope::initializer);
                    pending.push_back(&tok);
                }
            }
            else
            {
                if (!last || last->is("->"))
                {
                    scopes.push_back(Scope::code_block);
                    pending.clear();
                }
                else if (last->is(")") && pending_has_word("new"))
                {
                    // anonymous class body
                    scopes.push_back(Scope::type_body);
                    pending.clear();
                }
                else
                {
                    scopes.push_back(Scope::initializer);
                    pending.push_back(&tok);
                }
            }
        }
        else if (tok.is("}"))
        {
            if (scopes.empty())
            {
                result.issues.push_back({tok.line, "unbalanced '}'",
                                         ParseIssue::Severity::warning});
                continue;
            }
            auto closed = scopes.back();
            scopes.pop_back();
            if (closed == Scope::initializer)
                pending.push_back(&tok);
            else
                pending.clear();
        }
        else if (tok.is(";"))
        {
            if (scope() == Scope::initializer)
            {
                pending.push_back(&tok);
            }
            else if (!pending.empty())
            {
                ++result.statements;
                pending.clear();
            }
        }
        else if (tok.is(":") && scope() == Scope::code_block && !pending.empty()
                 && (pending.front()->is("case") || pending.front()->is("default")))
        {
            pending.clear();
        }
        else
        {
            pending.push_back(&tok);
        }
    }

    std::size_t last_line = toks.empty() ? 1 : toks.back().line;
    if (!scopes.empty())
    {
        result.issues.push_back({last_line,
                                 std::to_string(scopes.size()) + " unclosed '{'",
                                 ParseIssue::Severity::warning});
    }
    if (paren_depth > 0)
    {
        result.issues.push_back(
            {last_line, "unclosed '('", ParseIssue::Severity::warning});
    }
    if (lexed.unterminated_line != 0)
    {
        result.issues.push_back({lexed.unterminated_line,
                                 "unterminated comment or literal",
                                 ParseIssue::Severity::warning});
    }
    return result;
}

inline std::size_t count_statements(std::string_view source)
{
    return count_statements_checked(source).statements;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
