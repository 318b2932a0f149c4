#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fedforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/** Errors raised when a caller violates an operation's contract
 *  (profile mismatch, exhausted jet order, inadmissible substitution). */
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Errors that indicate the engine itself is inconsistent
 *  (failed residual, non-natural operator, failed held-out probe). */
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Exact element of Q(i). Both parts are kept reduced with positive
 *  denominator by the underlying rational type. */
class GaussianRational {
  public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}  // NOLINT: implicit by design
    GaussianRational(BigRational re) : re_(std::move(re)) {}
    GaussianRational(BigRational re, BigRational im)
        : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {BigRational(0), BigRational(1)}; }

    const BigRational& re() const { return re_; }
    const BigRational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.is_zero()) throw ContractError("division by zero coefficient");
        BigRational n = b.re_ * b.re_ + b.im_ * b.im_;
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational conj() const { return {re_, -im_}; }

    GaussianRational pow(unsigned e) const {
        GaussianRational acc(1), base = *this;
        for (; e; e >>= 1) {
            if (e & 1) acc *= base;
            base *= base;
        }
        return acc;
    }

    /** Canonical text form: "p", "p/q", "i", "2/3*i", "1/2+1/3*i", "1/2-1/3*i". */
    std::string str() const {
        if (is_zero()) return "0";
        if (im_ == 0) return rat_str(re_);
        std::string im = imag_str(im_);
        if (re_ == 0) return im;
        if (im_ > 0) return rat_str(re_) + "+" + im;
        return rat_str(re_) + "-" + imag_str(-im_);
    }

    static std::string rat_str(const BigRational& q) {
        std::string s = numerator(q).str();
        if (denominator(q) != 1) s += "/" + denominator(q).str();
        return s;
    }

  private:
    static std::string imag_str(const BigRational& q) {
        if (q == 1) return "i";
        if (q == -1) return "-i";
        return rat_str(q) + "*i";
    }

    BigRational re_{0};
    BigRational im_{0};
};

inline BigRational big_factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return BigRational(f);
}

/** Parses "p", "p/q", "i", "-i", "3i", "r/s i", "p/q+r/s*i", "p/q-r/s i".
 *  Whitespace and '*' separators are ignored. */
inline GaussianRational parse_gaussian_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '*' && c != '\t') s.push_back(c);
    if (s.empty()) throw ParseError("empty coefficient");

    auto parse_rat = [&](const std::string& p) -> BigRational {
        if (p.empty() || p == "+") return BigRational(1);
        if (p == "-") return BigRational(-1);
        try {
            return BigRational(p[0] == '+' ? p.substr(1) : p);
        } catch (const std::exception&) {
            throw ParseError("bad rational '" + p + "' in coefficient '" + text + "'");
        }
    };

    // Split at the last top-level +/- that is not a leading sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/' && s[k - 1] != '+' && s[k - 1] != '-') {
            split = k;
            break;
        }
    }
    bool tail_imag = s.back() == 'i';
    if (split == std::string::npos) {
        if (tail_imag) return {BigRational(0), parse_rat(s.substr(0, s.size() - 1))};
        return {parse_rat(s)};
    }
    std::string left = s.substr(0, split);
    std::string right = s.substr(split);
    if (!tail_imag) {
        // e.g. "-3/4" with a '-' inside: no actual split needed
        return {parse_rat(s)};
    }
    right.pop_back();  // drop 'i'
    if (left.back() == 'i') throw ParseError("two imaginary parts in '" + text + "'");
    return {parse_rat(left), parse_rat(right)};
}

}  // namespace fedforge
