#include "safesynth/portfolio.hpp"

#include "safesynth/verify.hpp"

#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace safesynth {

namespace {

/// Append-only clause log; every reader keeps its own cursor.
class ClauseBus {
public:
  void publish(unsigned from, const Clause &c) {
    std::lock_guard lock(mu_);
    log_.emplace_back(from, c);
  }
  std::vector<Clause> fetch(unsigned me, size_t &cursor) {
    std::lock_guard lock(mu_);
    std::vector<Clause> out;
    for (; cursor < log_.size(); ++cursor)
      if (log_[cursor].first != me)
        out.push_back(log_[cursor].second);
    return out;
  }

private:
  std::mutex mu_;
  std::vector<std::pair<unsigned, Clause>> log_;
};

/// Budget that inherits the caller's deadline and stops with `src` or with
/// the caller's own stop token.
struct LinkedBudget {
  std::stop_source src;
  Budget budget;
  std::optional<std::stop_callback<std::function<void()>>> link;

  explicit LinkedBudget(const Budget *parent) : budget(parent ? parent->sub(-1) : Budget()) {
    budget.set_stop(src.get_token());
    if (parent)
      link.emplace(parent->stop(), std::function<void()>([this] { src.request_stop(); }));
  }
};

WinningOutcome template_alternating(const SafetySpec &spec, TemplateKind kind, int64_t slice_ms, uint64_t seed,
                                    const Budget &parent) {
  WinningOutcome out;
  out.origin = std::string("templ-") + to_string(kind) + "-alt";
  out.kind = AreaKind::WinningArea;
  const size_t nx = spec.x.size();
  const size_t full = nx >= 63 ? SIZE_MAX : (size_t{1} << nx) + (kind == TemplateKind::Aig ? 1 : 0);
  for (size_t n = 1;; n = templ_next_n(n)) {
    Template t;
    try {
      t = build_template(spec, kind, n);
    } catch (const TriviallyUnrealizable &) {
      out.verdict = Realizability::Unrealizable;
      return out;
    }
    ++out.stats.refinements;
    std::optional<std::optional<CnfFormula>> answer;
    for (int64_t slice = std::max<int64_t>(slice_ms, 1); !answer; slice *= 2)
      for (WinBackend be : {WinBackend::Sat1, WinBackend::Qbf}) {
        Budget b = parent.sub(slice);
        TemplConfig tc;
        tc.backend = be;
        tc.seed = seed;
        tc.budget = &b;
        try {
          answer = be == WinBackend::Qbf ? templ_win_qbf(spec, t, tc) : templ_win_sat(spec, t, tc);
          break;
        } catch (const BudgetExceeded &) {
          parent.check("template");
        }
      }
    if (*answer) {
      out.verdict = Realizability::Realizable;
      out.w = std::move(**answer);
      return out;
    }
    if (n >= full) {
      out.verdict = Realizability::Unrealizable;
      return out;
    }
  }
}

} // namespace

PortfolioWinResult run_portfolio_win(const SafetySpec &spec, const PortfolioConfig &cfg) {
  if (cfg.threads == 0)
    throw std::invalid_argument("portfolio needs at least one thread");
  Budget clock;
  LinkedBudget lb(cfg.budget);
  ClauseBus bus;
  std::mutex mu;
  PortfolioWinResult res;
  res.engines.resize(cfg.threads);
  std::optional<WinningOutcome> winner;
  std::string first_error;

  auto offer = [&](unsigned k, WinningOutcome o) {
    bool accept = o.verdict != Realizability::Unknown;
    if (o.verdict == Realizability::Realizable && !check_winning_area(spec, o.w).ok())
      accept = false;
    std::lock_guard lock(mu);
    res.engines[k] = {o.origin, accept ? o.verdict : Realizability::Unknown};
    if (accept && !winner) {
      winner = std::move(o);
      lb.src.request_stop();
    }
  };

  auto engine = [&](unsigned k) {
    WinConfig wc;
    wc.seed = cfg.seed + k;
    wc.budget = &lb.budget;
    size_t cursor = 0;
    if (cfg.share_clauses && cfg.threads > 1) {
      wc.on_clause = [&bus, k](const Clause &c) { bus.publish(k, c); };
      wc.poll_clauses = [&bus, k, &cursor] { return bus.fetch(k, cursor); };
    }
    std::string origin;
    try {
      if (k == 1) {
        origin = "templ";
        offer(k, template_alternating(spec, cfg.template_kind, cfg.template_slice_ms, wc.seed, lb.budget));
        return;
      }
      if (k == 0) {
        wc.opt_rg = true;
        wc.expand_gen = true;
        origin = "sat1-rge";
      } else {
        origin = "sat1";
      }
      WinningOutcome o = sat_win1(spec, wc);
      o.origin = origin;
      offer(k, std::move(o));
    } catch (const BudgetExceeded &) {
      std::lock_guard lock(mu);
      res.engines[k] = {origin, Realizability::Unknown};
    } catch (const Cancelled &) {
      std::lock_guard lock(mu);
      res.engines[k] = {origin, Realizability::Unknown};
    } catch (const std::exception &e) {
      std::lock_guard lock(mu);
      res.engines[k] = {origin, Realizability::Unknown};
      if (first_error.empty())
        first_error = origin + ": " + e.what();
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < cfg.threads; ++k)
      pool.emplace_back(engine, k);
  }
  if (winner) {
    res.outcome = std::move(*winner);
    res.outcome.origin = "portfolio:" + res.outcome.origin;
  } else {
    if (!first_error.empty())
      throw std::runtime_error("portfolio: " + first_error);
    res.outcome.origin = "portfolio";
  }
  res.outcome.stats.time_ms = clock.elapsed_ms();
  return res;
}

PortfolioExtractResult run_portfolio_extract(const SafetySpec &spec, const CnfFormula &w, const PortfolioConfig &cfg) {
  if (cfg.threads == 0)
    throw std::invalid_argument("portfolio needs at least one thread");
  {
    VerifyReport r = check_winning_area(spec, w);
    if (!r.ok())
      throw CertificateError("not a winning area:\n" + r.to_text());
  }
  Budget clock;
  const auto start = std::chrono::steady_clock::now();
  LinkedBudget lb(cfg.budget);
  std::mutex mu;
  std::condition_variable cv;
  PortfolioExtractResult res;
  res.candidates.resize(cfg.threads);
  std::vector<std::optional<ExtractResult>> results(cfg.threads);
  unsigned done = 0;
  std::optional<int64_t> first_ms;

  auto engine = [&](unsigned k) {
    ExtractConfig ec;
    ec.check_w = false;
    ec.seed = cfg.seed + k;
    ec.budget = &lb.budget;
    ec.dep_opt = k != 2;
    ExtractCandidate cand;
    cand.origin = k == 1 ? "qbf-learn" : ec.dep_opt ? "sat-learn-dep" : "sat-learn";
    std::optional<ExtractResult> r;
    try {
      r = k == 1 ? extract_qbf_learn(spec, w, ec) : extract_sat_learn(spec, w, ec);
      cand.finished = true;
      cand.gates = r->stats.gates;
      cand.verified = verify_controller(spec, r->circuit, w, cfg.sim_steps, cfg.seed + 1).ok();
      if (!cand.verified)
        cand.error = "verification failed";
    } catch (const Cancelled &) {
      cand.error = "cancelled";
    } catch (const std::exception &e) {
      cand.error = e.what();
    }
    std::lock_guard lock(mu);
    res.candidates[k] = cand;
    if (cand.verified) {
      results[k] = std::move(r);
      if (!first_ms)
        first_ms = clock.elapsed_ms();
    }
    ++done;
    cv.notify_all();
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < cfg.threads; ++k)
      pool.emplace_back(engine, k);
    std::unique_lock lock(mu);
    for (;;) {
      if (done == cfg.threads)
        break;
      if (first_ms) {
        auto until = start + std::chrono::milliseconds(static_cast<int64_t>(*first_ms * (1 + cfg.wait_ratio)));
        if (cv.wait_until(lock, until, [&] { return done == cfg.threads; }) ||
            std::chrono::steady_clock::now() >= until)
          break;
      } else {
        cv.wait(lock);
      }
    }
    lock.unlock();
    lb.src.request_stop();
  }
  std::optional<size_t> best;
  for (size_t k = 0; k < results.size(); ++k)
    if (results[k] && (!best || results[k]->stats.gates < results[*best]->stats.gates))
      best = k;
  if (!best) {
    std::string why;
    for (const auto &c : res.candidates)
      why += " " + c.origin + ": " + (c.error.empty() ? "unfinished" : c.error) + ";";
    throw std::runtime_error("portfolio: no verified controller;" + why);
  }
  res.best = std::move(*results[*best]);
  res.best.origin = "portfolio:" + res.best.origin;
  return res;
}

} // namespace safesynth
