#pragma once

#include <vector>

#include "fedforge/series.hpp"

namespace fedforge {

/** Inverts a formal fiber substitution u_p -> F_p(x, u) whose fiber-linear
 *  part is exactly the identity. Returns Z with F_p(x, Z(x, v)) = v_p through
 *  the fiber order of the profile; the output fiber variables carry out_tag.
 *
 *  Each F_p must be even, and every one of its terms must have positive fiber
 *  degree (the system fixes the fiber origin). */
inline std::vector<GradedSeries> reverse_fiber_system(const std::vector<GradedSeries>& F,
                                                      FiberTag out_tag) {
    if (F.empty()) throw ContractError("reverse_fiber_system: empty system");
    const VariableProfile in_p = F[0].profile();
    if (static_cast<int>(F.size()) != in_p.n)
        throw ContractError("reverse_fiber_system: need one component per fiber variable");

    VariableProfile out_p = in_p;
    out_p.tag = out_tag;

    std::vector<GradedSeries> H;
    H.reserve(F.size());
    for (int p = 1; p <= in_p.n; ++p) {
        const GradedSeries& f = F[p - 1];
        if (f.profile() != in_p)
            throw ContractError("reverse_fiber_system: components live in different classes");
        if (!f.form_free())
            throw ContractError("reverse_fiber_system: components must be free of odd factors");
        GradedSeries low = f.truncate(Grading::Fiber, 1);
        if (!equal_to_order(low, GradedSeries::variable(in_p, fiber_var(p))))
            throw ContractError(
                "reverse_fiber_system: fiber-linear part must be exactly the identity");
        H.push_back(f - low);
    }

    std::vector<GradedSeries> Z;
    for (int p = 1; p <= out_p.n; ++p) Z.push_back(GradedSeries::variable(out_p, fiber_var(p)));

    // Each pass extends correctness by one fiber order; H starts at order 2.
    for (int pass = 0; pass < in_p.fiber_cap; ++pass) {
        std::map<VarId, GradedSeries> images;
        for (int j = 1; j <= out_p.n; ++j) images[fiber_var(j)] = Z[j - 1];
        std::vector<GradedSeries> next;
        next.reserve(Z.size());
        for (int p = 1; p <= out_p.n; ++p)
            next.push_back(GradedSeries::variable(out_p, fiber_var(p)) -
                           substitute(H[p - 1], images));
        if (next == Z) break;
        Z = std::move(next);
    }

    std::map<VarId, GradedSeries> images;
    for (int j = 1; j <= out_p.n; ++j) images[fiber_var(j)] = Z[j - 1];
    for (int p = 1; p <= out_p.n; ++p) {
        GradedSeries round_trip = substitute(F[p - 1], images);
        if (!equal_to_order(round_trip, GradedSeries::variable(out_p, fiber_var(p))))
            throw InternalError("reverse_fiber_system: round-trip check failed");
    }
    return Z;
}

}  // namespace fedforge
