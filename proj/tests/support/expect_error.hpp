#pragma once

#include <gtest/gtest.h>

#include "vgt/error.hpp"

// Asserts that `stmt` throws vgt::Error carrying `expected`.
#define EXPECT_VGT_ERROR(stmt, expected)                                              \
  do {                                                                                \
    try {                                                                             \
      stmt;                                                                           \
      ADD_FAILURE() << "expected " << vgt::to_string(expected) << ", nothing thrown"; \
    } catch (const vgt::Error& e_) {                                                  \
      EXPECT_EQ(e_.code(), expected) << e_.what();                                    \
    }                                                                                 \
  } while (0)
