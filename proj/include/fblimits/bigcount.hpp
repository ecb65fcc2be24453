/* Copyright 2026 The fblimits Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace fbl {

using BigCount = mpz_class;

// log2 of a positive integer of any size. Returns -inf for zero.
double log2_big(const BigCount& x);

// Number of bits in the binary expansion; 0 for zero.
std::uint64_t bit_length(const BigCount& x);

// ceil(log2 x) for x >= 1.
std::uint64_t ceil_log2(const BigCount& x);

bool is_power_of_two(const BigCount& x);

BigCount pow2(std::uint64_t k);

// x * 2^-e without overflow for huge x, as a double.
double scaled_to_double(const BigCount& x, double log2_scale);

std::string to_decimal(const BigCount& x);

}  // namespace fbl
