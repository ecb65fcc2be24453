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

#include "fblimits/bigcount.hpp"

#include <cmath>
#include <limits>

namespace fbl {

double log2_big(const BigCount& x) {
  if (sgn(x) <= 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return static_cast<double>(exp) + std::log2(mant);
}

std::uint64_t bit_length(const BigCount& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::uint64_t ceil_log2(const BigCount& x) {
  if (x <= 1) return 0;
  BigCount y = x - 1;
  return bit_length(y);
}

bool is_power_of_two(const BigCount& x) {
  return sgn(x) > 0 && mpz_popcount(x.get_mpz_t()) == 1;
}

BigCount pow2(std::uint64_t k) {
  BigCount r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

double scaled_to_double(const BigCount& x, double log2_scale) {
  if (sgn(x) == 0) return 0.0;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return mant * std::exp2(static_cast<double>(exp) - log2_scale);
}

std::string to_decimal(const BigCount& x) { return x.get_str(10); }

}  // namespace fbl
