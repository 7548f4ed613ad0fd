#pragma once

#include "tvr/bigrat.hpp"
#include "tvr/ratfunc.hpp"

namespace tvr {

/// Sum of products over S; RatFuncA defers reduction to the end.
template <class S>
class Accum {
public:
    void add(const S& x) { v_ += x; }
    void add_product(const S& x, const S& y) { v_ += x * y; }
    S value() const { return v_; }

private:
    S v_{0};
};

template <>
class Accum<RatFuncA> {
public:
    void add(const RatFuncA& x) { s_.add(x); }
    void add_product(const RatFuncA& x, const RatFuncA& y) { s_.add_product(x, y); }
    RatFuncA value() const { return s_.value(); }

private:
    RatFuncSum s_;
};

}  // namespace tvr
