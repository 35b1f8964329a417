#pragma once

#include "splitinf/common.hpp"
#include "splitinf/kernels.hpp"
#include "splitinf/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splitinf::simlab {

/// Raised when a replication keeps failing after max_attempts fresh draws.
class ResampleBudgetExceeded : public Error {
 public:
  using Error::Error;
};

template <class T>
struct Replicated {
  std::vector<T> results;  // by replication index
  long resamples = 0;
};

struct ReplicationPlan {
  std::uint64_t seed = 0;
  std::uint64_t cell = 0;  // distinguishes grid cells and experiments
  std::uint64_t first = 0;  // index of the first replication
  int max_attempts = 50;
};

namespace detail {

template <class T>
struct Attempted {
  T value;
  long failures = 0;
};

template <class T, class F>
Attempted<T> attempt(const ReplicationPlan& plan, std::uint64_t rep, F& fn) {
  for (int a = 0; a < plan.max_attempts; ++a) {
    Rng rng = make_stream(plan.seed, {plan.cell, rep, static_cast<std::uint64_t>(a)});
    try {
      return {fn(rng), a};
    } catch (const Error& e) {
      if (a + 1 == plan.max_attempts) {
        throw ResampleBudgetExceeded("replication " + std::to_string(rep) + " failed " +
                                     std::to_string(plan.max_attempts) + " times: " + e.what());
      }
    }
  }
  throw ResampleBudgetExceeded("replication failed");
}

template <class T>
Replicated<T> collect(std::vector<Attempted<T>>&& parts) {
  Replicated<T> out;
  out.results.reserve(parts.size());
  for (auto& p : parts) {
    out.resamples += p.failures;
    out.results.push_back(std::move(p.value));
  }
  return out;
}

}  // namespace detail

/// Runs fn(rng) for replications first..first+n-1. Replication r, attempt a
/// draws from the stream hash(seed, cell, r, a); a numerical failure
/// (splitinf::Error) discards the attempt and retries with a + 1. The result
/// depends only on the plan, not on how replications are scheduled.
template <class T, class F>
Replicated<T> run_replications(long n, const ReplicationPlan& plan, F fn, int workers = 0) {
  auto parts = kernels::map_indexed<detail::Attempted<T>>(
      static_cast<Index>(n),
      [&](Index i) { return detail::attempt<T>(plan, plan.first + static_cast<std::uint64_t>(i), fn); },
      workers);
  return detail::collect(std::move(parts));
}

template <class T, class F>
Replicated<T> run_replications_serial(long n, const ReplicationPlan& plan, F fn) {
  auto parts = kernels::map_indexed_serial<detail::Attempted<T>>(
      static_cast<Index>(n),
      [&](Index i) { return detail::attempt<T>(plan, plan.first + static_cast<std::uint64_t>(i), fn); });
  return detail::collect(std::move(parts));
}

}  // namespace splitinf::simlab
