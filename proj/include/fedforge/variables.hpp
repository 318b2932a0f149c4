#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "fedforge/rational.hpp"

namespace fedforge {

/** Hard engine limit on the chart dimension. Keys are fixed-size arrays. */
inline constexpr int kMaxDim = 8;

/** Sentinel for series whose x-dependence is exact polynomial data
 *  rather than a jet of bounded trusted order. */
inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 2;

enum class FiberTag : std::uint8_t { Y, Xi, Zeta };

inline const char* fiber_prefix(FiberTag t) {
    switch (t) {
        case FiberTag::Y: return "y";
        case FiberTag::Xi: return "xi";
        default: return "zeta";
    }
}

enum class VarClass : std::uint8_t { X, Fiber };

struct VarId {
    VarClass cls;
    int index;  // 1-based, matches rendering x1..xn / y1..yn

    friend bool operator<(const VarId& a, const VarId& b) {
        if (a.cls != b.cls) return a.cls < b.cls;
        return a.index < b.index;
    }
    friend bool operator==(const VarId& a, const VarId& b) {
        return a.cls == b.cls && a.index == b.index;
    }
};

inline VarId x_var(int i) { return {VarClass::X, i}; }
inline VarId fiber_var(int i) { return {VarClass::Fiber, i}; }

/** Truncation profile of a series class. `x_cap` bounds stored x-degree for
 *  finite-validity jets, `fiber_cap` and `nu_cap` bound their classes always. */
struct VariableProfile {
    int n = 2;
    int x_cap = 10;
    int fiber_cap = 8;
    int nu_cap = 5;
    FiberTag tag = FiberTag::Y;

    friend bool operator==(const VariableProfile& a, const VariableProfile& b) {
        return a.n == b.n && a.x_cap == b.x_cap && a.fiber_cap == b.fiber_cap &&
               a.nu_cap == b.nu_cap && a.tag == b.tag;
    }
    friend bool operator!=(const VariableProfile& a, const VariableProfile& b) { return !(a == b); }

    void check() const {
        if (n < 2 || n % 2 != 0) throw ContractError("chart dimension must be even and >= 2");
        if (n > kMaxDim) throw ContractError("chart dimension exceeds engine limit 8");
        if (x_cap < 1 || fiber_cap < 1 || nu_cap < 1)
            throw ContractError("truncation orders must be >= 1");
    }
};

/** One monomial: x-exponents, fiber exponents, nu power, and an odd-variable
 *  mask. Odd bits [0,n) are dx^1..dx^n; bits [n,2n) are the second odd class
 *  dzeta_1..dzeta_n used only by the symplectic-form check. */
struct MonomialKey {
    std::array<std::uint8_t, kMaxDim> x{};
    std::array<std::uint8_t, kMaxDim> fib{};
    std::uint8_t nu = 0;
    std::uint16_t odd = 0;

    int x_degree() const { return std::accumulate(x.begin(), x.end(), 0); }
    int fiber_degree() const { return std::accumulate(fib.begin(), fib.end(), 0); }
    int form_degree() const { return std::popcount(odd); }
    int total_degree() const { return x_degree() + fiber_degree() + nu + form_degree(); }
    int big_degree() const { return 2 * nu + fiber_degree(); }

    bool is_unit() const { return nu == 0 && odd == 0 && x_degree() == 0 && fiber_degree() == 0; }

    friend bool operator==(const MonomialKey& a, const MonomialKey& b) {
        return a.nu == b.nu && a.odd == b.odd && a.x == b.x && a.fib == b.fib;
    }
};

/** Canonical term order: ascending nu power, then graded-lex on x (total degree
 *  first, then lexicographic with x1 heaviest), then graded-lex on the fiber
 *  block, then the odd mask by size and position. */
struct MonomialLess {
    static int lex_cmp(const std::array<std::uint8_t, kMaxDim>& a,
                       const std::array<std::uint8_t, kMaxDim>& b) {
        for (int j = 0; j < kMaxDim; ++j)
            if (a[j] != b[j]) return a[j] > b[j] ? -1 : 1;
        return 0;
    }

    static int cmp(const MonomialKey& a, const MonomialKey& b) {
        if (a.nu != b.nu) return a.nu < b.nu ? -1 : 1;
        int da = a.x_degree(), db = b.x_degree();
        if (da != db) return da < db ? -1 : 1;
        if (int c = lex_cmp(a.x, b.x)) return c;
        da = a.fiber_degree();
        db = b.fiber_degree();
        if (da != db) return da < db ? -1 : 1;
        if (int c = lex_cmp(a.fib, b.fib)) return c;
        int fa = std::popcount(a.odd), fb = std::popcount(b.odd);
        if (fa != fb) return fa < fb ? -1 : 1;
        if (a.odd != b.odd) return a.odd < b.odd ? -1 : 1;
        return 0;
    }

    bool operator()(const MonomialKey& a, const MonomialKey& b) const { return cmp(a, b) < 0; }
};

/** Koszul sign for multiplying odd blocks a then b: (-1)^inversions.
 *  Returns 0 when the blocks share a variable. */
inline int odd_product_sign(std::uint16_t a, std::uint16_t b) {
    if (a & b) return 0;
    int inv = 0;
    for (int j = 0; j < 2 * kMaxDim; ++j)
        if (b & (1u << j)) inv += std::popcount(static_cast<std::uint16_t>(a >> (j + 1)));
    return (inv % 2 == 0) ? 1 : -1;
}

enum class Grading { Nu, Fiber, Form, Big };

inline int grading_of(const MonomialKey& k, Grading g) {
    switch (g) {
        case Grading::Nu: return k.nu;
        case Grading::Fiber: return k.fiber_degree();
        case Grading::Form: return k.form_degree();
        default: return k.big_degree();
    }
}

}  // namespace fedforge
