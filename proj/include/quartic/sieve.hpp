#pragma once
#include <cstdint>
#include <utility>
#include <vector>

namespace quartic {

using Factorization = std::vector<std::pair<uint64_t, int>>;

/// Smallest-prime-factor table for 2..limit.
class FactorSieve {
 public:
  explicit FactorSieve(uint64_t limit);

  uint64_t limit() const { return limit_; }
  uint32_t spf(uint64_t n) const { return spf_[n]; }
  const std::vector<uint32_t>& primes() const { return primes_; }
  bool is_prime(uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

  /// Throws std::out_of_range for n == 0 or n beyond limit^2.
  Factorization factorize(uint64_t n) const;
  /// Appends the distinct primes of n (n ≤ limit) to out.
  void distinct_primes(uint64_t n, std::vector<uint64_t>& out) const;

 private:
  uint64_t limit_;
  std::vector<uint32_t> spf_;
  std::vector<uint32_t> primes_;
};

std::vector<uint64_t> divisors(const Factorization& f, bool sorted = false);

}  // namespace quartic
