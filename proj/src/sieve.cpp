#include "quartic/sieve.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace quartic {

FactorSieve::FactorSieve(uint64_t limit) : limit_(std::max<uint64_t>(limit, 2)), spf_(limit_ + 1, 0) {
  for (uint64_t i = 2; i <= limit_; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<uint32_t>(i);
      primes_.push_back(static_cast<uint32_t>(i));
    }
    for (uint32_t p : primes_) {
      uint64_t m = p * i;
      if (p > spf_[i] || m > limit_) break;
      spf_[m] = p;
    }
  }
}

Factorization FactorSieve::factorize(uint64_t n) const {
  if (n == 0) throw std::out_of_range("factorize: zero");
  Factorization f;
  if (n > limit_) {
    if (n / limit_ > limit_) throw std::out_of_range("factorize: " + std::to_string(n) + " beyond sieve reach");
    for (uint64_t p : primes_) {
      if (p * p > n) break;
      if (n % p) continue;
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      f.emplace_back(p, e);
      if (n <= limit_) break;
    }
    if (n > limit_) {
      f.emplace_back(n, 1);
      return f;
    }
  }
  while (n > 1) {
    uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    f.emplace_back(p, e);
  }
  std::sort(f.begin(), f.end());
  return f;
}

void FactorSieve::distinct_primes(uint64_t n, std::vector<uint64_t>& out) const {
  while (n > 1) {
    uint64_t p = spf_[n];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
}

std::vector<uint64_t> divisors(const Factorization& f, bool sorted) {
  std::vector<uint64_t> d{1};
  for (auto [p, e] : f) {
    size_t n = d.size();
    uint64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < n; ++i) d.push_back(d[i] * pk);
    }
  }
  if (sorted) std::sort(d.begin(), d.end());
  return d;
}

}  // namespace quartic
