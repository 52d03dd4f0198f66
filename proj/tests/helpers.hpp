#pragma once

#include "lolab/core.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace testing {

inline lolab::RationalVector rv(std::initializer_list<const char*> xs) {
  lolab::RationalVector v;
  for (const char* x : xs) v.push_back(lolab::parse_rational(x));
  return v;
}

inline lolab::VectorConfig cfg(std::size_t dim, std::initializer_list<std::initializer_list<const char*>> vs,
                               bool relaxed = false) {
  std::vector<lolab::RationalVector> out;
  for (auto v : vs) out.push_back(rv(v));
  return lolab::VectorConfig::make(dim, std::move(out), std::nullopt, relaxed);
}

inline lolab::VectorConfig repeat(std::size_t dim, std::vector<std::pair<lolab::RationalVector, int>> groups) {
  std::vector<lolab::RationalVector> out;
  for (auto& [v, k] : groups) {
    for (int i = 0; i < k; ++i) out.push_back(v);
  }
  return lolab::VectorConfig::make(dim, std::move(out));
}

inline lolab::ExactProb prob(long long num, unsigned log2_den) { return {lolab::BigInt(num), log2_den}; }

}  // namespace testing
