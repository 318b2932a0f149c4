#pragma once

#include <cctype>
#include <string>

#include "fedforge/series.hpp"

namespace fedforge {

/** Recursive-descent parser for polynomial input in the chart coordinates.
 *
 *  expr   := ['+'|'-'] term (('+'|'-') term)*
 *  term   := factor ('*' factor)*
 *  factor := base ['^' digits]
 *  base   := '(' expr ')' | rational | 'i' | 'x' digits
 *  rational := digits ['/' digits]
 *
 *  Multiplication is always explicit; whitespace is ignored. The result is an
 *  exact series using only the x variables of the target profile. */
class PolynomialParser {
  public:
    PolynomialParser(std::string_view text, const VariableProfile& profile)
        : text_(text), p_(profile) {}

    GradedSeries parse() {
        GradedSeries r = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return r;
    }

  private:
    GradedSeries parse_expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (take() == '-');
        GradedSeries r = parse_term();
        if (neg) r = -r;
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') return r;
            take();
            GradedSeries t = parse_term();
            r = (c == '+') ? r + t : r - t;
        }
    }

    GradedSeries parse_term() {
        GradedSeries r = parse_factor();
        while (true) {
            skip_ws();
            if (peek() != '*') return r;
            take();
            r = r * parse_factor();
        }
    }

    GradedSeries parse_factor() {
        GradedSeries b = parse_base();
        skip_ws();
        if (peek() != '^') return b;
        take();
        skip_ws();
        if (!is_digit(peek())) fail("expected an exponent after '^'");
        unsigned e = parse_uint();
        GradedSeries r = GradedSeries::one(p_);
        for (unsigned k = 0; k < e; ++k) r = r * b;
        return r;
    }

    GradedSeries parse_base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            take();
            GradedSeries r = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            take();
            return r;
        }
        if (is_digit(c)) {
            BigInt num(parse_digits());
            skip_ws();
            if (peek() == '/') {
                take();
                skip_ws();
                if (!is_digit(peek())) fail("expected a denominator");
                BigInt den(parse_digits());
                if (den == 0) fail("zero denominator");
                return GradedSeries::constant(p_, GaussianRational(BigRational(num, den)));
            }
            return GradedSeries::constant(p_, GaussianRational(BigRational(num)));
        }
        if (c == 'i' && !is_alnum(peek_at(pos_ + 1))) {
            take();
            return GradedSeries::constant(p_, GaussianRational::i());
        }
        if (c == 'x') {
            take();
            if (!is_digit(peek())) fail("expected a coordinate index after 'x'");
            unsigned idx = parse_uint();
            if (idx < 1 || static_cast<int>(idx) > p_.n)
                fail("coordinate index out of range for this chart");
            return GradedSeries::variable(p_, x_var(static_cast<int>(idx)));
        }
        fail(c == '\0' ? "unexpected end of input" : "unexpected character");
    }

    std::string parse_digits() {
        std::size_t start = pos_;
        while (is_digit(peek())) take();
        return std::string(text_.substr(start, pos_ - start));
    }

    unsigned parse_uint() {
        std::string d = parse_digits();
        if (d.size() > 4) fail("exponent or index is unreasonably large");
        return static_cast<unsigned>(std::stoul(d));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return peek_at(pos_); }
    char peek_at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }
    char take() { return text_[pos_++]; }
    static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
    static bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" +
                         std::string(text_) + "\"");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    const VariableProfile& p_;
};

inline GradedSeries parse_polynomial(const std::string& text, const VariableProfile& profile) {
    return PolynomialParser(text, profile).parse();
}

}  // namespace fedforge
