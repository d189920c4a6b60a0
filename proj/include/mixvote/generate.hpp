#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mixvote/io.hpp"
#include "mixvote/model.hpp"
#include "mixvote/rules.hpp"

namespace mixvote {

// Parameters of a named construction. Each construction reads only the
// fields it needs and reports missing or out-of-range ones with
// ConstructionError.
//
//   fig1      -
//   prop1     beta, beta_prime, n          (alpha = beta_prime * n integral)
//   prop4     beta (positive integer)
//   thm4      t, n, delta, [eps]
//   thm6      t, n, [eps]
//   appendix  t, gamma, q, [eps]
//   random    see RandomSpec
struct ConstructionSpec {
  std::string name;
  std::optional<Rational> t;
  std::optional<Rational> eps;
  std::optional<Rational> delta;
  std::optional<Rational> gamma;
  std::optional<Rational> beta;
  std::optional<Rational> beta_prime;
  std::optional<long> n;
  std::optional<long> q;
};

struct Construction {
  Instance instance;
  // Designated target group, the expected bound(s), and construction-local
  // structure (partition sets, special allocations).
  io::Json metadata;
  // thm6 only: the tie-breaking script that serves the target group as unevenly as EJR-M allows.
  std::optional<GreedyScript> script;
};

Construction gen_construction(const ConstructionSpec& spec);

struct RandomSpec {
  std::size_t n = 4;
  std::size_t m = 3;
  std::size_t cake_atoms = 2;            // cake length is cake_atoms / 2
  std::optional<Rational> alpha;         // default: half the resource
  double density = 0.5;
  std::uint64_t seed = 0;
};

// Reproducible from the seed: every draw is a pure function of (seed,
// counter), so batches can be generated in parallel.
Instance gen_random(const RandomSpec& spec);

// Stateless SplitMix64 stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t at(std::uint64_t counter) const;
  std::uint64_t next() { return at(counter_++); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace mixvote
