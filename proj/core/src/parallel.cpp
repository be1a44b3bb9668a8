#include "coxfine/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>

namespace coxfine {

int default_thread_count() {
  if (const char* env = std::getenv("COXFINE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void run_partitioned(std::uint64_t begin, std::uint64_t end, int parts,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  parts = std::max(1, parts);
  const std::uint64_t span = end > begin ? end - begin : 0;
  if (parts == 1 || span < 2) {
    fn(0, begin, end);
    return;
  }
  parts = static_cast<int>(std::min<std::uint64_t>(parts, span));
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(parts);
  for (int p = 0; p < parts; ++p) {
    const std::uint64_t lo = begin + span * p / parts;
    const std::uint64_t hi = begin + span * (p + 1) / parts;
    threads.emplace_back([&, p, lo, hi] {
      try {
        fn(p, lo, hi);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace coxfine
