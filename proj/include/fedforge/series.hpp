#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "fedforge/rational.hpp"
#include "fedforge/variables.hpp"

namespace fedforge {

/** Sparse multigraded series truncated by its profile. Terms live in a map
 *  under the canonical monomial order, zero coefficients are never stored.
 *
 *  x-dependence is either exact polynomial data (valid_x_order() == kExactOrder,
 *  no x truncation applies) or a jet trusted through total x-degree
 *  valid_x_order(); each x-derivative of a jet consumes one order. */
class GradedSeries {
  public:
    using TermMap = std::map<MonomialKey, GaussianRational, MonomialLess>;

    GradedSeries() = default;
    explicit GradedSeries(VariableProfile p, int valid_x = kExactOrder)
        : profile_(p), valid_x_(valid_x) {
        p.check();
    }

    static GradedSeries zero(const VariableProfile& p) { return GradedSeries(p); }

    static GradedSeries constant(const VariableProfile& p, GaussianRational c) {
        GradedSeries s(p);
        if (!c.is_zero()) s.terms_[MonomialKey{}] = std::move(c);
        return s;
    }

    static GradedSeries one(const VariableProfile& p) { return constant(p, 1); }

    static GradedSeries variable(const VariableProfile& p, VarId v) {
        check_var(p, v);
        MonomialKey k;
        if (v.cls == VarClass::X)
            k.x[v.index - 1] = 1;
        else
            k.fib[v.index - 1] = 1;
        return monomial(p, k, 1);
    }

    static GradedSeries nu(const VariableProfile& p, int power = 1) {
        MonomialKey k;
        k.nu = static_cast<std::uint8_t>(power);
        return monomial(p, k, 1);
    }

    static GradedSeries dx(const VariableProfile& p, int j) {
        check_var(p, x_var(j));
        MonomialKey k;
        k.odd = static_cast<std::uint16_t>(1u << (j - 1));
        return monomial(p, k, 1);
    }

    /** Odd generator paired with the j-th fiber variable (dy/dzeta/dxi by tag). */
    static GradedSeries d_fiber(const VariableProfile& p, int j) {
        check_var(p, x_var(j));
        MonomialKey k;
        k.odd = static_cast<std::uint16_t>(1u << (p.n + j - 1));
        return monomial(p, k, 1);
    }

    static GradedSeries monomial(const VariableProfile& p, const MonomialKey& k,
                                 GaussianRational c) {
        GradedSeries s(p);
        if (!c.is_zero() && s.admissible(k)) s.terms_[k] = std::move(c);
        return s;
    }

    /** Finite jet: trusted through total x-degree `valid_x` only. */
    static GradedSeries jet(const VariableProfile& p,
                            const std::vector<std::pair<MonomialKey, GaussianRational>>& terms,
                            int valid_x) {
        if (valid_x < 0) throw ContractError("jet order must be >= 0");
        GradedSeries s(p, std::min(valid_x, p.x_cap));
        for (const auto& [k, c] : terms) s.add_term(k, c);
        return s;
    }

    static GradedSeries from_terms(
        const VariableProfile& p,
        const std::vector<std::pair<MonomialKey, GaussianRational>>& terms) {
        GradedSeries s(p);
        for (const auto& [k, c] : terms) s.add_term(k, c);
        return s;
    }

    const VariableProfile& profile() const { return profile_; }
    int valid_x_order() const { return valid_x_; }
    bool x_exact() const { return valid_x_ >= kExactOrder; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    GaussianRational coefficient(const MonomialKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    GaussianRational constant_term() const { return coefficient(MonomialKey{}); }

    bool fiber_free() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& t) { return t.first.fiber_degree() == 0; });
    }
    bool form_free() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& t) { return t.first.odd == 0; });
    }

    int max_fiber_degree() const {
        int m = 0;
        for (const auto& [k, c] : terms_) m = std::max(m, k.fiber_degree());
        return m;
    }

    friend bool operator==(const GradedSeries& a, const GradedSeries& b) {
        return a.profile_ == b.profile_ && a.valid_x_ == b.valid_x_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const GradedSeries& a, const GradedSeries& b) { return !(a == b); }

    friend GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) {
        a.check_same_class(b);
        GradedSeries r(a.profile_, std::min(a.valid_x_, b.valid_x_));
        r.terms_ = a.terms_;
        for (const auto& [k, c] : b.terms_) r.accumulate(k, c);
        r.clamp_to_valid();
        return r;
    }

    friend GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) {
        return a + (-b);
    }

    friend GradedSeries operator-(const GradedSeries& a) {
        GradedSeries r(a.profile_, a.valid_x_);
        for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
        return r;
    }

    friend GradedSeries operator*(const GaussianRational& c, const GradedSeries& a) {
        GradedSeries r(a.profile_, a.valid_x_);
        if (c.is_zero()) return r;
        for (const auto& [k, v] : a.terms_) r.terms_[k] = c * v;
        return r;
    }

    /** Graded product. Odd factors multiply with the Koszul sign; the result is
     *  truncated to the profile and to the weaker of the two jet orders. */
    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
        a.check_same_class(b);
        GradedSeries r(a.profile_, std::min(a.valid_x_, b.valid_x_));
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                int sign = odd_product_sign(ka.odd, kb.odd);
                if (sign == 0) continue;
                MonomialKey k;
                int nu = ka.nu + kb.nu;
                if (nu > r.profile_.nu_cap) continue;
                k.nu = static_cast<std::uint8_t>(nu);
                k.odd = ka.odd | kb.odd;
                int fd = 0, xd = 0;
                for (int j = 0; j < kMaxDim; ++j) {
                    k.x[j] = static_cast<std::uint8_t>(ka.x[j] + kb.x[j]);
                    k.fib[j] = static_cast<std::uint8_t>(ka.fib[j] + kb.fib[j]);
                    xd += k.x[j];
                    fd += k.fib[j];
                }
                if (fd > r.profile_.fiber_cap) continue;
                if (!r.x_exact() && xd > r.valid_x_) continue;
                GaussianRational c = ca * cb;
                if (sign < 0) c = -c;
                r.accumulate(k, c);
            }
        }
        return r;
    }

    GradedSeries& operator+=(const GradedSeries& o) { return *this = *this + o; }
    GradedSeries& operator-=(const GradedSeries& o) { return *this = *this - o; }
    GradedSeries& operator*=(const GradedSeries& o) { return *this = *this * o; }

    /** Extracts the part of one homogeneity degree. */
    GradedSeries component(Grading g, int k) const {
        GradedSeries r(profile_, valid_x_);
        for (const auto& [key, c] : terms_)
            if (grading_of(key, g) == k) r.terms_[key] = c;
        return r;
    }

    GradedSeries truncate(Grading g, int max_degree) const {
        GradedSeries r(profile_, valid_x_);
        for (const auto& [key, c] : terms_)
            if (grading_of(key, g) <= max_degree) r.terms_[key] = c;
        return r;
    }

    /** Re-declares the jet order (weakening only) and drops terms beyond it. */
    GradedSeries truncate_x(int order) const {
        GradedSeries r(profile_, std::min(valid_x_, order));
        for (const auto& [key, c] : terms_)
            if (key.x_degree() <= order) r.terms_[key] = c;
        return r;
    }

    GradedSeries partial_deriv(VarId v) const {
        check_var(profile_, v);
        int valid = valid_x_;
        if (v.cls == VarClass::X && !x_exact()) {
            if (valid_x_ == 0)
                throw ContractError("x-order exhausted: cannot differentiate a jet of order 0");
            valid = valid_x_ - 1;
        }
        GradedSeries r(profile_, valid);
        int j = v.index - 1;
        for (const auto& [key, c] : terms_) {
            int e = (v.cls == VarClass::X) ? key.x[j] : key.fib[j];
            if (e == 0) continue;
            MonomialKey k = key;
            if (v.cls == VarClass::X)
                k.x[j] = static_cast<std::uint8_t>(e - 1);
            else
                k.fib[j] = static_cast<std::uint8_t>(e - 1);
            r.accumulate(k, GaussianRational(e) * c);
        }
        return r;
    }

    /** Interior product with d/dx^j acting on the dx block; the sign is
     *  (-1)^(position of dx^j among the monomial's odd factors). */
    GradedSeries interior_product(int j) const {
        check_var(profile_, x_var(j));
        std::uint16_t bit = static_cast<std::uint16_t>(1u << (j - 1));
        GradedSeries r(profile_, valid_x_);
        for (const auto& [key, c] : terms_) {
            if (!(key.odd & bit)) continue;
            MonomialKey k = key;
            k.odd = static_cast<std::uint16_t>(key.odd & ~bit);
            int below = std::popcount(static_cast<std::uint16_t>(key.odd & (bit - 1)));
            r.accumulate(k, (below % 2) ? -c : c);
        }
        return r;
    }

    /** Exact division by nu; every term must carry a positive nu power. */
    GradedSeries exact_div_nu() const {
        GradedSeries r(profile_, valid_x_);
        for (const auto& [key, c] : terms_) {
            if (key.nu == 0)
                throw ContractError("exact_div_nu: series has a nu-free term");
            MonomialKey k = key;
            k.nu = static_cast<std::uint8_t>(key.nu - 1);
            r.terms_[k] = c;
        }
        return r;
    }

    /** Multiplies by c * nu^k without going through a full product; k may be
     *  negative if every term carries enough nu powers. */
    GradedSeries shift_nu(int k, const GaussianRational& c) const {
        GradedSeries r(profile_, valid_x_);
        if (c.is_zero()) return r;
        for (const auto& [key, v] : terms_) {
            int nu = key.nu + k;
            if (nu < 0) throw ContractError("shift_nu: nu power would become negative");
            if (nu > profile_.nu_cap) continue;
            MonomialKey kk = key;
            kk.nu = static_cast<std::uint8_t>(nu);
            r.terms_[kk] = c * v;
        }
        return r;
    }

    /** Moves a fiber-compatible series into another profile of the same
     *  dimension, truncating to the new caps. Retagging requires the source
     *  to be fiber-free (fiber variables cannot silently change meaning). */
    GradedSeries with_profile(const VariableProfile& p) const {
        if (p.n != profile_.n) throw ContractError("profile conversion changes dimension");
        if (p.tag != profile_.tag && !fiber_free())
            throw ContractError("profile conversion cannot retag fiber-dependent series");
        GradedSeries r(p, valid_x_);
        for (const auto& [key, c] : terms_)
            if (r.admissible(key)) r.terms_[key] = c;
        return r;
    }

    /** Reinterprets fiber variables under a new tag, exponents unchanged. */
    GradedSeries retag(FiberTag t) const {
        GradedSeries r = *this;
        r.profile_.tag = t;
        return r;
    }

    std::string str() const;

    /** Substitution; see free function substitute() below. */
    friend GradedSeries substitute(const GradedSeries& a,
                                   const std::map<VarId, GradedSeries>& images);

  private:
    static void check_var(const VariableProfile& p, VarId v) {
        if (v.index < 1 || v.index > p.n) throw ContractError("variable index out of range");
    }

    void check_same_class(const GradedSeries& o) const {
        if (profile_ != o.profile_)
            throw ContractError("operands live in different series classes");
    }

    bool admissible(const MonomialKey& k) const {
        if (k.nu > profile_.nu_cap) return false;
        if (k.fiber_degree() > profile_.fiber_cap) return false;
        if (!x_exact() && k.x_degree() > valid_x_) return false;
        return true;
    }

    void add_term(const MonomialKey& k, const GaussianRational& c) {
        if (c.is_zero()) return;
        if (!admissible(k))
            throw ContractError("term exceeds the truncation profile of its series class");
        accumulate(k, c);
    }

    void accumulate(const MonomialKey& k, const GaussianRational& c) {
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        } else if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    void clamp_to_valid() {
        if (x_exact()) return;
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (it->first.x_degree() > valid_x_) ? terms_.erase(it) : std::next(it);
    }

    VariableProfile profile_{};
    int valid_x_ = kExactOrder;
    TermMap terms_;
};

/** Equality after truncating both sides to the weaker jet order. */
inline bool equal_to_order(const GradedSeries& a, const GradedSeries& b) {
    int v = std::min(a.valid_x_order(), b.valid_x_order());
    return a.truncate_x(v).terms() == b.truncate_x(v).terms();
}

inline std::string render_monomial(const MonomialKey& k, const VariableProfile& p) {
    std::string out;
    auto push = [&out](const std::string& f) {
        if (!out.empty()) out += "*";
        out += f;
    };
    auto var = [](const char* base, int idx, int e) {
        std::string s = base + std::to_string(idx);
        if (e > 1) s += "^" + std::to_string(e);
        return s;
    };
    for (int j = 0; j < p.n; ++j)
        if (k.x[j]) push(var("x", j + 1, k.x[j]));
    for (int j = 0; j < p.n; ++j)
        if (k.fib[j]) push(var(fiber_prefix(p.tag), j + 1, k.fib[j]));
    if (k.nu) push(k.nu > 1 ? "nu^" + std::to_string(k.nu) : std::string("nu"));
    std::string odd;
    for (int j = 0; j < 2 * p.n; ++j) {
        if (!(k.odd & (1u << j))) continue;
        if (!odd.empty()) odd += "^";
        odd += (j < p.n) ? "dx" + std::to_string(j + 1)
                         : "d" + std::string(fiber_prefix(p.tag)) + std::to_string(j - p.n + 1);
    }
    if (!odd.empty()) push(odd);
    return out;
}

inline std::string GradedSeries::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [key, c] : terms_) {
        std::string mono = render_monomial(key, profile_);
        std::string term;
        if (mono.empty()) {
            term = c.str();
        } else if (c.is_one()) {
            term = mono;
        } else if (c == GaussianRational(-1)) {
            term = "-" + mono;
        } else if (c.is_real() || c.re() == 0) {
            term = c.str() + "*" + mono;
        } else {
            term = "(" + c.str() + ")*" + mono;
        }
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

/** Composition a(x, u) -> a(images). Unlisted variables map to themselves.
 *
 *  Every image must be free of odd factors and have no pure-constant term;
 *  images of fiber variables must vanish at the fiber origin (every term of
 *  positive fiber degree). Substituting fiber variables across tags requires
 *  all of them to be assigned. The odd block of each source term passes
 *  through unchanged. */
inline GradedSeries substitute(const GradedSeries& a,
                               const std::map<VarId, GradedSeries>& images) {
    if (images.empty()) return a;
    const VariableProfile img_p = images.begin()->second.profile();
    if (img_p.n != a.profile().n)
        throw ContractError("substitute: image dimension differs from source");

    bool x_leak = false;
    int images_valid = kExactOrder;
    for (const auto& [v, s] : images) {
        if (s.profile() != img_p)
            throw ContractError("substitute: images live in different series classes");
        if (v.index < 1 || v.index > img_p.n)
            throw ContractError("substitute: variable index out of range");
        if (!s.form_free())
            throw ContractError("substitute: images must be free of odd factors");
        if (!s.constant_term().is_zero())
            throw ContractError("substitute: image has a constant term");
        images_valid = std::min(images_valid, s.valid_x_order());
        for (const auto& [k, c] : s.terms()) {
            if (v.cls == VarClass::Fiber && k.fiber_degree() == 0)
                throw ContractError("substitute: fiber image does not vanish at the fiber origin");
            if (v.cls == VarClass::X && k.x_degree() == 0) x_leak = true;
        }
    }

    bool cross_tag = img_p.tag != a.profile().tag;
    bool source_has_fiber = !a.fiber_free();
    if (source_has_fiber) {
        if (img_p.fiber_cap > a.profile().fiber_cap)
            throw ContractError("substitute: cannot raise the fiber order of a truncated series");
        if (cross_tag)
            for (int j = 1; j <= img_p.n; ++j)
                if (!images.count(fiber_var(j)))
                    throw ContractError(
                        "substitute: changing fiber tag requires assigning every fiber variable");
    }

    int valid = std::min(a.valid_x_order(), images_valid);
    if (valid < kExactOrder && x_leak)
        valid = std::max(0, valid - img_p.fiber_cap);

    // Per-variable power tables, built on demand.
    std::map<VarId, std::vector<GradedSeries>> powers;
    auto power = [&](VarId v, int e) -> const GradedSeries& {
        auto& tab = powers[v];
        if (tab.empty()) {
            auto it = images.find(v);
            tab.push_back(GradedSeries::one(img_p));
            tab.push_back(it != images.end() ? it->second
                                             : GradedSeries::variable(img_p, v));
        }
        while (static_cast<int>(tab.size()) <= e) tab.push_back(tab.back() * tab[1]);
        return tab[static_cast<std::size_t>(e)];
    };

    GradedSeries out(img_p, valid);
    for (const auto& [key, c] : a.terms()) {
        MonomialKey base;
        base.nu = key.nu;
        base.odd = key.odd;
        GradedSeries term = GradedSeries::monomial(img_p, base, c);
        for (int j = 0; j < img_p.n && !term.is_zero(); ++j) {
            if (key.x[j]) term = term * power(x_var(j + 1), key.x[j]);
            if (key.fib[j]) term = term * power(fiber_var(j + 1), key.fib[j]);
        }
        out += term;
    }
    // Re-declare the jet order computed above (products used image orders).
    return out.truncate_x(valid);
}

}  // namespace fedforge
