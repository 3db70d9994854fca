#pragma once

#include "padic.hpp"
#include "rational.hpp"

// Coefficient-ring glue used by the generic series/matrix templates.
// A prototype element carries whatever construction state the ring needs
// (the p-adic context, the epsilon truncation order, ...).

namespace hypergeom {

inline Rat k_zero(const Rat&) { return Rat(0); }
inline Rat k_one(const Rat&) { return Rat(1); }
inline Rat k_from_rat(const Rat& v, const Rat&) { return v; }
inline Rat k_from_long(long v, const Rat&) { return Rat(v); }
inline bool k_is_zero(const Rat& x) { return x == 0; }
inline bool k_is_unit(const Rat& x) { return x != 0; }
inline Rat k_inv(const Rat& x) {
    if (x == 0) throw precision_error("division by zero rational");
    return 1 / x;
}
// Pivot preference for elimination; for exact fields any unit will do.
inline bool k_better_pivot(const Rat&, const Rat&) { return false; }

inline PadicNumber k_zero(const PadicNumber& proto) { return PadicNumber::zero(proto.context()); }
inline PadicNumber k_one(const PadicNumber& proto) { return PadicNumber::from_long(proto.context(), 1); }
inline PadicNumber k_from_rat(const Rat& v, const PadicNumber& proto) {
    return PadicNumber::from_rational(proto.context(), v);
}
inline PadicNumber k_from_long(long v, const PadicNumber& proto) {
    return PadicNumber::from_long(proto.context(), v);
}
inline bool k_is_zero(const PadicNumber& x) { return x.is_zero(); }
inline bool k_is_unit(const PadicNumber& x) { return !x.is_zero(); }
inline PadicNumber k_inv(const PadicNumber& x) { return x.inv(); }
inline bool k_better_pivot(const PadicNumber& cand, const PadicNumber& cur) {
    if (cand.is_zero()) return false;
    if (cur.is_zero()) return true;
    return cand.valuation() < cur.valuation();
}

} // namespace hypergeom
