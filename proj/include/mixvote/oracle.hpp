#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "mixvote/harmonic.hpp"
#include "mixvote/model.hpp"
#include "mixvote/verify.hpp"

namespace mixvote {

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 24;

// Cake is discretized by cutting every atom (agent breakpoints plus 0 and c)
// into `grid` equal cells, so every cell is approved entirely or not at all.
struct EnumerationConfig {
  std::size_t grid = 1;
  std::size_t limit = kDefaultEnumerationLimit;
};

// Calls f for every good subset of size <= floor(alpha) combined with every
// set of cells fitting the remaining budget. Throws CapacityError as soon as
// more than cfg.limit candidates would be produced. Returns the count.
std::size_t for_each_allocation(const Instance& inst, const EnumerationConfig& cfg,
                                const std::function<void(const Bundle&)>& f);

std::vector<Bundle> enumerate_allocations(const Instance& inst, const EnumerationConfig& cfg = {});

// True iff no enumerated allocation satisfies EJR-beta in the given mode.
bool oracle_no_ejr_beta(const Instance& inst, const Rational& beta, Strictness mode,
                        const EnumerationConfig& cfg = {});

// max over allocations of min over t-cohesive groups of average satisfaction;
// nullopt (read: +infinity) when there is no t-cohesive group.
std::optional<Rational> oracle_min_max_avg(const Instance& inst, const Rational& t,
                                           const EnumerationConfig& cfg = {});

enum class Objective { Gpav, Nash };

struct OracleOptimum {
  Bundle allocation;
  HarmonicValue gpav;               // GPAV score of the allocation
  std::size_t nash_positive = 0;    // agents with positive utility
  Rational nash_product;            // product of their utilities
  std::size_t candidates = 0;
};

// Best enumerated bundle. GPAV compares scores with a 1e-12 tie tolerance,
// Nash compares (positive count, product) exactly; the first candidate wins
// ties.
OracleOptimum oracle_discretized_opt(const Instance& inst, Objective objective,
                                     const EnumerationConfig& cfg = {},
                                     double harmonic_tol = kDefaultHarmonicTol);

}  // namespace mixvote
