#pragma once

#include <vector>

#include "ring.hpp"

namespace hypergeom {

// Truncated polynomial ring K[eps]/(eps^mu). This is the nilpotent formal
// variable used to extract the log-block solution columns; mu never exceeds
// the multiplicity of a repeated beta value.
template <class K>
class EpsPoly {
    std::vector<K> c_;

  public:
    EpsPoly() = default;
    EpsPoly(const K& proto, int mu) : c_(static_cast<std::size_t>(mu), k_zero(proto)) {
        if (mu < 1) throw validation_error("EpsPoly: order must be >= 1");
    }
    static EpsPoly constant(const K& value, int mu) {
        EpsPoly r(value, mu);
        r.c_[0] = value;
        return r;
    }

    int order() const { return static_cast<int>(c_.size()); }
    const K& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    K& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const K& proto() const { return c_[0]; }

    friend EpsPoly operator+(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r = a;
        for (int i = 0; i < r.order(); i++) r.c_[i] = r.c_[i] + b.c_[i];
        return r;
    }
    friend EpsPoly operator-(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r = a;
        for (int i = 0; i < r.order(); i++) r.c_[i] = r.c_[i] - b.c_[i];
        return r;
    }
    friend EpsPoly operator-(const EpsPoly& a) {
        EpsPoly r = a;
        for (int i = 0; i < r.order(); i++) r.c_[i] = -r.c_[i];
        return r;
    }
    friend EpsPoly operator*(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r(a.proto(), a.order());
        for (int i = 0; i < a.order(); i++) {
            if (k_is_zero(a.c_[i])) continue;
            for (int j = 0; i + j < a.order(); j++) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        }
        return r;
    }
    friend EpsPoly operator*(const EpsPoly& a, const K& s) {
        EpsPoly r = a;
        for (int i = 0; i < r.order(); i++) r.c_[i] = r.c_[i] * s;
        return r;
    }

    // Inverse; requires an invertible constant term.
    EpsPoly inv() const {
        EpsPoly r(proto(), order());
        K c0 = k_inv(c_[0]);
        r.c_[0] = c0;
        for (int k = 1; k < order(); k++) {
            K acc = k_zero(proto());
            for (int i = 1; i <= k; i++) acc = acc + c_[static_cast<std::size_t>(i)] * r.c_[static_cast<std::size_t>(k - i)];
            r.c_[k] = -(c0 * acc);
        }
        return r;
    }
};

template <class K>
EpsPoly<K> k_zero(const EpsPoly<K>& proto) {
    return EpsPoly<K>(proto.proto(), proto.order());
}
template <class K>
EpsPoly<K> k_one(const EpsPoly<K>& proto) {
    return EpsPoly<K>::constant(k_one(proto.proto()), proto.order());
}
template <class K>
EpsPoly<K> k_from_rat(const Rat& v, const EpsPoly<K>& proto) {
    return EpsPoly<K>::constant(k_from_rat(v, proto.proto()), proto.order());
}
template <class K>
EpsPoly<K> k_from_long(long v, const EpsPoly<K>& proto) {
    return EpsPoly<K>::constant(k_from_long(v, proto.proto()), proto.order());
}
template <class K>
bool k_is_zero(const EpsPoly<K>& x) {
    for (int i = 0; i < x.order(); i++)
        if (!k_is_zero(x[i])) return false;
    return true;
}
template <class K>
bool k_is_unit(const EpsPoly<K>& x) {
    return k_is_unit(x[0]);
}
template <class K>
EpsPoly<K> k_inv(const EpsPoly<K>& x) {
    return x.inv();
}
template <class K>
bool k_better_pivot(const EpsPoly<K>& cand, const EpsPoly<K>& cur) {
    return k_is_unit(cand) && !k_is_unit(cur);
}

} // namespace hypergeom
