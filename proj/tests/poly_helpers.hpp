#pragma once

#include <ostream>

#include "doctest.h"
#include "mtpoly/int_poly.hpp"

namespace doctest {
template <>
struct StringMaker<mtpoly::IntPoly> {
    static String convert(const mtpoly::IntPoly& p) { return mtpoly::to_string(p).c_str(); }
};
}  // namespace doctest
