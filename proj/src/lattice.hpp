#pragma once

// Internal lattice utilities: integer echelon bases with box walks, and
// short-vector enumeration in the 8-dimensional pair lattice {(q, xi*q - p)}.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "hurwitz/core.hpp"

namespace hq::detail {

using Vec4 = std::array<int64_t, 4>;

/// Echelon basis of the integer lattice spanned by `rows`, with pivots taken in
/// column order `order`. Zero rows are dropped; pivots are positive.
std::vector<Vec4> echelon(std::vector<Vec4> rows, const std::array<int, 4>& order);

/// Lattice points x0 + sum c_k basis[k] inside lo <= x <= hi (coordinates listed
/// in `order`, which must match the echelon pivots). `dims` is the number of
/// basis vectors; coordinates outside order[0..dims) must already be fixed by x0.
struct BoxWalk {
    std::vector<Vec4> basis;
    std::array<int, 4> order{};
    int dims = 0;
    Vec4 lo{};
    Vec4 hi{};

    int64_t count(const Vec4& x0) const;
    void visit(const Vec4& x0, const std::function<void(const Vec4&)>& fn) const;
    double prefix_cost() const;
};

/// Calls fn(q, p) for pairs in H x H with 0 < |q| <= qmax and |xi q - p| <= err_max
/// (a superset: candidates must be re-verified). Returns true if fn returned true.
bool search_pairs(const RealQuaternion& xi, double qmax, double err_max,
                  const std::function<bool(const HurwitzInt&, const HurwitzInt&)>& fn);

}  // namespace hq::detail

namespace hq::detail {

/// Number of nonzero vectors v in the integer lattice spanned by `gens` with |v|^2 < bound
/// (exact integer test). The lattice must have full rank 4.
int64_t count_short_vectors(const std::vector<Vec4>& gens, i128 bound);

}  // namespace hq::detail
