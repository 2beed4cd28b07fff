#pragma once

// Shared gtest helpers.

#include <gtest/gtest.h>

#include "expr_gen.hpp"

namespace waring::testutil {

inline void expect_cx_near(Cx actual, Cx expected, double tol, const char* what = "") {
    EXPECT_NEAR(actual.real(), expected.real(), tol) << what;
    EXPECT_NEAR(actual.imag(), expected.imag(), tol) << what;
}

} // namespace waring::testutil
