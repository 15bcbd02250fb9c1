#pragma once

#include "config.hpp"

#include <atomic>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <thread>

namespace resint {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int invalid_config = 2;
inline constexpr int oracle_nonconvergence = 3;
} // namespace exit_code

struct RunOptions
{
  std::string out;                // overrides config output
  std::optional<int> workers;     // overrides config workers
  bool dimensionless = false;     // summary reports the dimensionless energy
};

struct SweepRow
{
  double r = 0;
  double omega0_r = 0;
  double steady_energy = 0;
  double dimensionless_energy = 0;
  double q = 0;
  double l1 = 0;
  double concurrence = 0;
};

struct LineFit
{
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

/// 17-significant-digit rendering used for every CSV float.
std::string format_double(double v);

/// Least-squares fit of log|y| against log x; points with y == 0 are skipped.
LineFit fit_log_log(std::vector<double> const &x, std::vector<double> const &y);

std::vector<SweepRow> sweep(RunConfig const &cfg, int workers = 1);

/// Runs one CLI mode; CSV goes to the output path, a summary to `summary`.
int run(RunConfig const &cfg, RunOptions const &opts, std::ostream &summary, std::ostream &diagnostics);

/// Evaluates fn(i) for i in [0, count) on up to `workers` threads; results stay in index order.
template <class F>
auto parallel_map(std::size_t count, int workers, F fn) -> std::vector<decltype(fn(std::size_t{}))>
{
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(count);
  std::size_t const threads = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  pool.clear();
  if (error) std::rethrow_exception(error);
  return out;
}

} // namespace resint
