// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file arrobf/java_lexer.hpp
//! Token-level scanner for the Java subset handled by the tool.
//---------------------------------------------------------------------------//
#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace arrobf
{
//---------------------------------------------------------------------------//
struct Token
{
    enum class Kind
    {
        identifier,
        number,
        string_literal,
        char_literal,
        punct,
    };

    Kind kind;
    std::string text;  //!< literal tokens keep their quotes only
    std::size_t line;  //!< 1-based

    bool is(std::string_view s) const
    {
        return (kind == Kind::punct || kind == Kind::identifier) && text == s;
    }
};

struct LexResult
{
    std::vector<Token> tokens;
    //! Line of an unterminated block comment or literal, 0 if none
    std::size_t unterminated_line{0};
};

/*!
 * Split Java source into tokens.
 *
 * Comments are dropped and literal contents are blanked, so identifiers
 * inside them never reach later passes. Punctuation is one character per
 * token except "->".
 */
inline LexResult lex_java(std::string_view src)
{
    LexResult result;
    auto& out = result.tokens;
    std::size_t line = 1;
    std::size_t i = 0;
    auto const n = src.size();

    auto is_ident_start = [](unsigned char c) {
        return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
    };
    auto is_ident_char = [&](unsigned char c) {
        return is_ident_start(c) || std::isdigit(c);
    };

    while (i < n)
    {
        char c = src[i];
        if (c == '\n')
        {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)))
        {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/')
        {
            while (i < n && src[i] != '\n')
                ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*')
        {
            std::size_t start_line = line;
            i += 2;
            while (i < n && !(src[i] == '*' && i + 1 < n && src[i + 1] == '/'))
            {
                if (src[i] == '\n')
                    ++line;
                ++i;
            }
            if (i >= n)
            {
                result.unterminated_line = start_line;
                break;
            }
            i += 2;
            continue;
        }
        if (c == '"' || c == '\'')
        {
            std::size_t start_line = line;
            char quote = c;
            ++i;
            bool closed = false;
            while (i < n && src[i] != '\n')
            {
                if (src[i] == '\\')
                {
                    i += 2;
                    continue;
                }
                if (src[i] == quote)
                {
                    closed = true;
                    ++i;
                    break;
                }
                ++i;
            }
            if (!closed && result.unterminated_line == 0)
                result.unterminated_line = start_line;
            out.push_back({quote == '"' ? Token::Kind::string_literal
                                        : Token::Kind::char_literal,
                           std::string(2, quote), start_line});
            continue;
        }
        if (is_ident_start(static_cast<unsigned char>(c)))
        {
            std::size_t start = i;
            while (i < n && is_ident_char(static_cast<unsigned char>(src[i])))
                ++i;
            out.push_back({Token::Kind::identifier,
                           std::string(src.substr(start, i - start)), line});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
        {
            std::size_t start = i;
            while (i < n
                   && (std::isalnum(static_cast<unsigned char>(src[i]))
                       || src[i] == '.' || src[i] == '_'))
                ++i;
            out.push_back({Token::Kind::number,
                           std::string(src.substr(start, i - start)), line});
            continue;
        }
        if (c == '-' && i + 1 < n && src[i + 1] == '>')
        {
            out.push_back({Token::Kind::punct, "->", line});
            i += 2;
            continue;
        }
        out.push_back({Token::Kind::punct, std::string(1, c), line});
        ++i;
    }
    return result;
}

//---------------------------------------------------------------------------//
}  // namespace arrobf
