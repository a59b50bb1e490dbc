#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cipherlint/source.hpp"

namespace cipherlint {

struct LexError {
    std::string message;
    uint32_t line = 1;
    uint32_t column = 0;
};

enum class TokType { Name, Number, Str, Op, Newline, Indent, Dedent, EndMarker };

struct Token {
    TokType type = TokType::Op;
    std::string_view text;
    Span span;
    // string literal details
    bool str_is_bytes = false;
    bool str_is_fstring = false;
    bool str_decode_ok = false;
    std::string str_decoded;
    // number details
    bool num_is_int = false;
    bool num_overflow = false;
    long long int_value = 0;
};

/// Python 3 tokenizer: logical lines, INDENT/DEDENT, implicit continuation
/// inside brackets, explicit backslash continuation, string prefixes and
/// escape decoding. Columns count bytes, tabs advance to the next multiple
/// of 8 for indentation purposes.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    /// Tokenizes the whole input. On failure returns false and fills `err`.
    bool run(std::vector<Token>& out, LexError& err) {
        indents_.push_back(0);
        at_line_start_ = true;
        while (true) {
            if (at_line_start_ && bracket_depth_ == 0) {
                if (!handle_line_start(out, err)) return false;
                if (done_) break;
            }
            if (pos_ >= src_.size()) {
                if (bracket_depth_ > 0) return fail(err, "unexpected end of file inside brackets");
                if (!out.empty() && out.back().type != TokType::Newline)
                    push_simple(out, TokType::Newline, pos_, pos_);
                break;
            }
            char c = src_[pos_];
            if (c == '#') {
                skip_comment();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f') {
                advance();
                continue;
            }
            if (c == '\\' && pos_ + 1 < src_.size() && is_newline_at(pos_ + 1)) {
                advance(); // backslash
                consume_newline();
                continue;
            }
            if (is_newline_at(pos_)) {
                size_t start = pos_;
                consume_newline();
                if (bracket_depth_ > 0) continue;
                push_simple(out, TokType::Newline, start, start);
                at_line_start_ = true;
                continue;
            }
            if (c == '\\') return fail(err, "unexpected character after line continuation");
            if (!lex_token(out, err)) return false;
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            push_simple(out, TokType::Dedent, pos_, pos_);
        }
        push_simple(out, TokType::EndMarker, pos_, pos_);
        return true;
    }

private:
    // --- low-level cursor -------------------------------------------------

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 0;
        } else {
            ++col_;
        }
        ++pos_;
    }

    bool is_newline_at(size_t p) const { return src_[p] == '\n' || src_[p] == '\r'; }

    void consume_newline() {
        if (src_[pos_] == '\r') {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
            ++line_;
            col_ = 0;
        } else {
            advance();
        }
    }

    void skip_comment() {
        while (pos_ < src_.size() && !is_newline_at(pos_)) advance();
    }

    bool fail(LexError& err, std::string msg) {
        err = {std::move(msg), line_, col_};
        return false;
    }

    Span make_span(size_t begin, uint32_t bline, uint32_t bcol) const {
        return Span{static_cast<uint32_t>(begin), static_cast<uint32_t>(pos_), bline, bcol};
    }

    void push_simple(std::vector<Token>& out, TokType t, size_t begin, size_t end) {
        Token tok;
        tok.type = t;
        tok.text = src_.substr(begin, end - begin);
        tok.span = Span{static_cast<uint32_t>(begin), static_cast<uint32_t>(end), line_, col_};
        out.push_back(std::move(tok));
    }

    // --- line structure ---------------------------------------------------

    bool handle_line_start(std::vector<Token>& out, LexError& err) {
        while (true) {
            uint32_t width = 0;
            size_t scan = pos_;
            while (scan < src_.size()) {
                char c = src_[scan];
                if (c == ' ') {
                    ++width;
                } else if (c == '\t') {
                    width = (width / 8 + 1) * 8;
                } else if (c == '\f') {
                    width = 0;
                } else {
                    break;
                }
                ++scan;
            }
            if (scan >= src_.size()) {
                pos_ = scan;
                done_after_dedents(out);
                return true;
            }
            char c = src_[scan];
            if (c == '#' || is_newline_at(scan)) {
                // blank or comment-only line: no tokens, no indent change
                while (pos_ < scan) advance();
                if (src_[pos_] == '#') skip_comment();
                if (pos_ < src_.size()) consume_newline();
                if (pos_ >= src_.size()) {
                    done_after_dedents(out);
                    return true;
                }
                continue;
            }
            while (pos_ < scan) advance();
            if (width > indents_.back()) {
                indents_.push_back(width);
                push_simple(out, TokType::Indent, pos_, pos_);
            } else {
                while (width < indents_.back()) {
                    indents_.pop_back();
                    push_simple(out, TokType::Dedent, pos_, pos_);
                }
                if (width != indents_.back())
                    return fail(err, "unindent does not match any outer indentation level");
            }
            at_line_start_ = false;
            return true;
        }
    }

    void done_after_dedents(std::vector<Token>&) { done_ = true; }

    // --- tokens -----------------------------------------------------------

    static bool is_ident_start(unsigned char c) {
        return std::isalpha(c) || c == '_' || c >= 0x80;
    }
    static bool is_ident_cont(unsigned char c) {
        return std::isalnum(c) || c == '_' || c >= 0x80;
    }

    bool lex_token(std::vector<Token>& out, LexError& err) {
        size_t begin = pos_;
        uint32_t bline = line_, bcol = col_;
        unsigned char c = src_[pos_];

        if (is_ident_start(c)) {
            // maybe a string prefix
            size_t p = pos_;
            while (p < src_.size() && is_ident_cont(static_cast<unsigned char>(src_[p]))) ++p;
            std::string_view word = src_.substr(pos_, p - pos_);
            if (word.size() <= 2 && p < src_.size() && (src_[p] == '\'' || src_[p] == '"')) {
                bool raw = false, bytes = false, fstr = false, valid = true;
                for (char pc : word) {
                    switch (std::tolower(static_cast<unsigned char>(pc))) {
                    case 'r': raw = true; break;
                    case 'b': bytes = true; break;
                    case 'f': fstr = true; break;
                    case 'u': break;
                    default: valid = false;
                    }
                }
                if (valid) {
                    while (pos_ < p) advance();
                    return lex_string(out, err, begin, bline, bcol, raw, bytes, fstr);
                }
            }
            while (pos_ < p) advance();
            Token tok;
            tok.type = TokType::Name;
            tok.text = src_.substr(begin, pos_ - begin);
            tok.span = make_span(begin, bline, bcol);
            out.push_back(std::move(tok));
            return true;
        }
        if (std::isdigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            return lex_number(out, err, begin, bline, bcol);
        }
        if (c == '\'' || c == '"') {
            return lex_string(out, err, begin, bline, bcol, false, false, false);
        }
        return lex_operator(out, err, begin, bline, bcol);
    }

    bool lex_number(std::vector<Token>& out, LexError& err, size_t begin, uint32_t bline,
                    uint32_t bcol) {
        bool is_int = true;
        bool overflow = false;
        unsigned long long value = 0;
        auto accum = [&](int digit, int base) {
            if (value > (0x7fffffffffffffffull - digit) / base)
                overflow = true;
            else
                value = value * base + digit;
        };

        if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
            (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X' || src_[pos_ + 1] == 'o' ||
             src_[pos_ + 1] == 'O' || src_[pos_ + 1] == 'b' || src_[pos_ + 1] == 'B')) {
            char kind = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_ + 1])));
            advance();
            advance();
            int base = kind == 'x' ? 16 : kind == 'o' ? 8 : 2;
            bool any = false;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (d == '_') {
                    advance();
                    continue;
                }
                int v;
                if (d >= '0' && d <= '9') v = d - '0';
                else if (d >= 'a' && d <= 'f') v = d - 'a' + 10;
                else if (d >= 'A' && d <= 'F') v = d - 'A' + 10;
                else break;
                if (v >= base) break;
                accum(v, base);
                any = true;
                advance();
            }
            if (!any) return fail(err, "invalid numeric literal");
        } else {
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                if (src_[pos_] != '_') accum(src_[pos_] - '0', 10);
                advance();
            }
            // fraction / exponent
            if (pos_ < src_.size() && src_[pos_] == '.') {
                is_int = false;
                advance();
                while (pos_ < src_.size() &&
                       (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t save_pos = pos_;
                uint32_t save_col = col_;
                advance();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    is_int = false;
                    while (pos_ < src_.size() &&
                           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                            src_[pos_] == '_'))
                        advance();
                } else {
                    // the 'e' starts a following name; stop the number here
                    pos_ = save_pos;
                    col_ = save_col;
                }
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) {
            is_int = false;
            advance();
        }
        Token tok;
        tok.type = TokType::Number;
        tok.text = src_.substr(begin, pos_ - begin);
        tok.span = make_span(begin, bline, bcol);
        tok.num_is_int = is_int;
        tok.num_overflow = overflow;
        tok.int_value = is_int && !overflow ? static_cast<long long>(value) : 0;
        out.push_back(std::move(tok));
        return true;
    }

    bool lex_string(std::vector<Token>& out, LexError& err, size_t begin, uint32_t bline,
                    uint32_t bcol, bool raw, bool bytes, bool fstr) {
        char quote = src_[pos_];
        advance();
        bool triple = false;
        if (pos_ + 1 < src_.size() && src_[pos_] == quote && src_[pos_ + 1] == quote) {
            triple = true;
            advance();
            advance();
        } else if (pos_ < src_.size() && src_[pos_] == quote) {
            // empty short string
            advance();
            emit_string(out, begin, bline, bcol, bytes, fstr, !fstr, "");
            return true;
        }
        std::string decoded;
        bool decode_ok = !fstr;
        while (true) {
            if (pos_ >= src_.size())
                return fail(err, triple ? "unterminated triple-quoted string"
                                        : "unterminated string literal");
            char c = src_[pos_];
            if (!triple && is_newline_at(pos_))
                return fail(err, "unterminated string literal");
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (pos_ + 2 < src_.size() + 1 && pos_ + 2 <= src_.size() &&
                    src_.substr(pos_, 3) == std::string(3, quote)) {
                    advance();
                    advance();
                    advance();
                    break;
                }
                decoded.push_back(c);
                advance();
                continue;
            }
            if (c == '\\' && pos_ + 1 < src_.size()) {
                if (raw) {
                    decoded.push_back('\\');
                    advance();
                    if (pos_ < src_.size()) {
                        if (is_newline_at(pos_)) {
                            decoded.push_back('\n');
                            consume_newline();
                        } else {
                            decoded.push_back(src_[pos_]);
                            advance();
                        }
                    }
                    continue;
                }
                advance(); // backslash
                if (!decode_escape(decoded, bytes, decode_ok, err)) return false;
                continue;
            }
            decoded.push_back(c);
            if (is_newline_at(pos_)) {
                decoded.back() = '\n';
                consume_newline();
            } else {
                advance();
            }
        }
        emit_string(out, begin, bline, bcol, bytes, fstr, decode_ok, std::move(decoded));
        return true;
    }

    bool decode_escape(std::string& decoded, bool bytes, bool& decode_ok, LexError& err) {
        if (pos_ >= src_.size()) return fail(err, "unterminated string literal");
        char e = src_[pos_];
        if (is_newline_at(pos_)) { // line continuation inside string
            consume_newline();
            return true;
        }
        advance();
        switch (e) {
        case 'n': decoded.push_back('\n'); return true;
        case 't': decoded.push_back('\t'); return true;
        case 'r': decoded.push_back('\r'); return true;
        case '\\': decoded.push_back('\\'); return true;
        case '\'': decoded.push_back('\''); return true;
        case '"': decoded.push_back('"'); return true;
        case 'a': decoded.push_back('\a'); return true;
        case 'b': decoded.push_back('\b'); return true;
        case 'f': decoded.push_back('\f'); return true;
        case 'v': decoded.push_back('\v'); return true;
        case '0': case '1': case '2': case '3':
        case '4': case '5': case '6': case '7': {
            int v = e - '0';
            for (int i = 0; i < 2 && pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7';
                 ++i) {
                v = v * 8 + (src_[pos_] - '0');
                advance();
            }
            decoded.push_back(static_cast<char>(v & 0xff));
            return true;
        }
        case 'x': {
            int v = 0, n = 0;
            while (n < 2 && pos_ < src_.size() &&
                   std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                v = v * 16 + hex_val(src_[pos_]);
                advance();
                ++n;
            }
            if (n < 2) {
                decode_ok = false; // CPython raises; we keep the token but mark undecodable
                return true;
            }
            decoded.push_back(static_cast<char>(v));
            return true;
        }
        case 'u':
        case 'U': {
            if (bytes) { // not an escape in bytes literals
                decoded.push_back('\\');
                decoded.push_back(e);
                return true;
            }
            int want = e == 'u' ? 4 : 8;
            uint32_t v = 0;
            int n = 0;
            while (n < want && pos_ < src_.size() &&
                   std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
                v = v * 16 + static_cast<uint32_t>(hex_val(src_[pos_]));
                advance();
                ++n;
            }
            if (n < want) {
                decode_ok = false;
                return true;
            }
            append_utf8(decoded, v);
            return true;
        }
        case 'N':
            decode_ok = false; // named escapes are out of scope
            if (pos_ < src_.size() && src_[pos_] == '{') {
                while (pos_ < src_.size() && src_[pos_] != '}' && !is_newline_at(pos_)) advance();
                if (pos_ < src_.size() && src_[pos_] == '}') advance();
            }
            return true;
        default:
            // unknown escape: Python keeps the backslash
            decoded.push_back('\\');
            decoded.push_back(e);
            return true;
        }
    }

    static int hex_val(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return c - 'A' + 10;
    }

    static void append_utf8(std::string& out, uint32_t cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    }

    void emit_string(std::vector<Token>& out, size_t begin, uint32_t bline, uint32_t bcol,
                     bool bytes, bool fstr, bool decode_ok, std::string decoded) {
        Token tok;
        tok.type = TokType::Str;
        tok.text = src_.substr(begin, pos_ - begin);
        tok.span = make_span(begin, bline, bcol);
        tok.str_is_bytes = bytes;
        tok.str_is_fstring = fstr;
        tok.str_decode_ok = !fstr && decode_ok;
        tok.str_decoded = fstr || !decode_ok ? std::string() : std::move(decoded);
        out.push_back(std::move(tok));
    }

    bool lex_operator(std::vector<Token>& out, LexError& err, size_t begin, uint32_t bline,
                      uint32_t bcol) {
        static const std::string_view three[] = {"**=", "//=", ">>=", "<<=", "..."};
        static const std::string_view two[] = {"**", "//", ">>", "<<", "<=", ">=", "==", "!=",
                                               "->", ":=", "+=", "-=", "*=", "/=", "%=", "@=",
                                               "&=", "|=", "^="};
        std::string_view rest = src_.substr(pos_);
        size_t len = 0;
        for (auto t : three)
            if (rest.size() >= 3 && rest.substr(0, 3) == t) {
                len = 3;
                break;
            }
        if (!len)
            for (auto t : two)
                if (rest.size() >= 2 && rest.substr(0, 2) == t) {
                    len = 2;
                    break;
                }
        if (!len) {
            static const std::string_view singles = "+-*/%@&|^~<>()[]{},:.;=";
            if (singles.find(rest[0]) == std::string_view::npos)
                return fail(err, "unexpected character");
            len = 1;
        }
        char open = rest[0];
        if (len == 1 && (open == '(' || open == '[' || open == '{')) ++bracket_depth_;
        if (len == 1 && (open == ')' || open == ']' || open == '}')) {
            if (bracket_depth_ == 0) return fail(err, "unmatched closing bracket");
            --bracket_depth_;
        }
        for (size_t i = 0; i < len; ++i) advance();
        Token tok;
        tok.type = TokType::Op;
        tok.text = src_.substr(begin, pos_ - begin);
        tok.span = make_span(begin, bline, bcol);
        out.push_back(std::move(tok));
        return true;
    }

    std::string_view src_;
    size_t pos_ = 0;
    uint32_t line_ = 1;
    uint32_t col_ = 0;
    int bracket_depth_ = 0;
    bool at_line_start_ = true;
    bool done_ = false;
    std::vector<uint32_t> indents_;
};

} // namespace cipherlint
