#pragma once

#include "safesynth/extract.hpp"
#include "safesynth/template.hpp"
#include "safesynth/win.hpp"

#include <string>
#include <vector>

namespace safesynth {

struct PortfolioConfig {
  /// 1: sat1 with RG and input expansion; 2: adds the template engine;
  /// 3: adds plain sat1. Further threads run sat1 with other seeds.
  unsigned threads = 1;
  uint64_t seed = 0;
  /// Template thread: time slice before switching between CEGIS and QBF.
  /// Slices double after each full round.
  int64_t template_slice_ms = 500;
  TemplateKind template_kind = TemplateKind::Cnf;
  /// Broadcast F clauses between the sat1 threads.
  bool share_clauses = true;
  /// Extraction: after the first verified controller at time t, keep
  /// waiting for smaller ones until t * (1 + wait_ratio).
  double wait_ratio = 0.25;
  uint64_t sim_steps = 10000;
  const Budget *budget = nullptr;
};

struct PortfolioWinResult {
  WinningOutcome outcome;
  /// Origin and verdict of every engine, in thread order.
  std::vector<std::pair<std::string, Realizability>> engines;
};

/// Races the engines; the first definitive verdict wins. A realizable
/// verdict is accepted only if its W passes check_winning_area.
PortfolioWinResult run_portfolio_win(const SafetySpec &spec, const PortfolioConfig &cfg = {});

struct ExtractCandidate {
  std::string origin;
  bool finished = false;
  bool verified = false;
  size_t gates = 0;
  std::string error;
};

struct PortfolioExtractResult {
  ExtractResult best;
  std::vector<ExtractCandidate> candidates;
};

/// 1: sat-learn with dependencies; 2: adds qbf-learn; 3: adds sat-learn
/// without dependencies. Returns the verified controller with the fewest
/// gates among those finished in time. Throws std::runtime_error if none
/// verifies.
PortfolioExtractResult run_portfolio_extract(const SafetySpec &spec, const CnfFormula &w,
                                             const PortfolioConfig &cfg = {});

} // namespace safesynth
