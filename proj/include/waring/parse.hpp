#pragma once

// Recursive-descent parser for the textual expression grammar.
//
// Precedence, loosest to tightest: sum, product, unary minus, integer
// power '^', function call, parentheses. Variables are z1..zn. Complex
// literals: a, bi, (a+bi) — the parenthesized form is ordinary grammar.
// Whitespace is insignificant. There is no division and no fractional
// power; '^' takes a non-negative integer only.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "expr.hpp"

namespace waring {

struct ParseError : std::runtime_error {
    std::size_t position; // 0-based offset into the input
    ParseError(std::string msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    Expr parse() {
        Expr e = sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    Expr sum() {
        Expr e = product();
        for (;;) {
            skip_ws();
            if (accept('+')) e = e + product();
            else if (accept('-')) e = e - product();
            else return e;
        }
    }

    Expr product() {
        Expr e = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) e = e * unary();
            else return e;
        }
    }

    Expr unary() {
        skip_ws();
        if (accept('-')) return -unary();
        return power();
    }

    Expr power() {
        Expr e = atom();
        for (;;) {
            skip_ws();
            if (!accept('^')) return e;
            skip_ws();
            std::size_t at = pos_;
            if (peek() == '-') throw ParseError("power with negative exponent", at);
            int k = 0;
            auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), k);
            if (ec != std::errc() || p == text_.data() + pos_)
                throw ParseError("expected non-negative integer exponent", at);
            pos_ = static_cast<std::size_t>(p - text_.data());
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
                throw ParseError("power with non-integer exponent", at);
            e = Expr::pow_int(e, k);
        }
    }

    Expr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = sum();
            skip_ws();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr number() {
        std::size_t at = pos_;
        double v = 0.0;
        auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec == std::errc::result_out_of_range) throw ParseError("number out of range", at);
        if (ec != std::errc() || p == text_.data() + pos_) throw ParseError("malformed number", at);
        pos_ = static_cast<std::size_t>(p - text_.data());
        if (pos_ < text_.size() && text_[pos_] == 'i') { // imaginary literal "bi"
            ++pos_;
            return Expr::constant(Cx(0.0, v));
        }
        return Expr::constant(Cx(v, 0.0));
    }

    Expr identifier() {
        std::size_t at = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_]))))
            ++pos_;
        std::string_view name = text_.substr(at, pos_ - at);
        if (name == "i") return Expr::constant(Cx(0.0, 1.0));
        if (name == "exp" || name == "sin" || name == "cos" || name == "sinh" || name == "cosh") {
            skip_ws();
            if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
            Expr arg = sum();
            skip_ws();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            if (name == "exp") return Expr::exp(arg);
            if (name == "sin") return Expr::sin(arg);
            if (name == "cos") return Expr::cos(arg);
            if (name == "sinh") return Expr::sinh(arg);
            return Expr::cosh(arg);
        }
        if (name.size() >= 2 && name[0] == 'z') {
            std::size_t k = 0;
            auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
            if (ec == std::errc() && p == name.data() + name.size() && k >= 1) {
                if (k > dim_)
                    throw ParseError("unknown identifier '" + std::string(name) +
                                     "' (dimension is " + std::to_string(dim_) + ")", at);
                return Expr::var(k - 1);
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", at);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `text` as an expression over z1..zn.
inline Expr parse_expr(std::string_view text, std::size_t n) {
    return detail::Parser(text, n).parse();
}

} // namespace waring
