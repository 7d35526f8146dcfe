#include "oscint/genericity.hpp"

#include <algorithm>
#include <thread>

#include "oscint/cubic22.hpp"
#include "oscint/error.hpp"
#include "oscint/random.hpp"

namespace oscint {

namespace {

struct Trial {
  bool rank_one = false;
  bool hormander = false;
  bool thm14 = false;
  std::vector<GenericityFailure> failures;
};

Trial run_trial(const GenericityOptions& opt, int k, bool cubic22) {
  Trial t;
  auto rng = make_stream(opt.seed, static_cast<std::uint64_t>(k));
  PhasePoly s = random_phase(opt.nx, opt.nz, opt.m, rng);
  CheckStatus r1 = check_rank_one(s, opt.check);
  t.rank_one = r1.holds();
  if (!t.rank_one) t.failures.push_back({k, "rank_one", r1.detail});
  t.hormander = check_hormander(s, opt.check).holds();
  if (cubic22) {
    Thm14Report rep = check_thm14(s);
    t.thm14 = rep.all_pass();
    if (!t.thm14) {
      std::string d;
      for (const auto& n : rep.notes) d += (d.empty() ? "" : "; ") + n;
      t.failures.push_back({k, "thm14", d});
    }
  }
  return t;
}

}  // namespace

GenericityResult run_genericity(const GenericityOptions& opt) {
  if (opt.trials < 1) throw DomainError("genericity needs at least one trial");
  if (opt.nx < 1 || opt.nz < 1 || opt.m < 2) throw DomainError("need nx, nz >= 1 and m >= 2");
  const bool cubic22 = opt.nx == 2 && opt.nz == 2 && opt.m == 3;
  std::vector<Trial> trials(opt.trials);
  int threads = opt.threads > 0 ? opt.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, opt.trials);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int k = w; k < opt.trials; k += threads) trials[k] = run_trial(opt, k, cubic22);
    });
  for (auto& th : pool) th.join();

  GenericityResult res;
  res.options = opt;
  res.trials = opt.trials;
  res.thm14_counted = cubic22;
  for (const auto& t : trials) {
    res.rank_one_pass += t.rank_one;
    res.hormander_pass += t.hormander;
    res.thm14_pass += t.thm14;
    res.failures.insert(res.failures.end(), t.failures.begin(), t.failures.end());
  }
  return res;
}

}  // namespace oscint
