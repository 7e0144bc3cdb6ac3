#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "relog/analysis.hpp"
#include "relog/options.hpp"
#include "relog/relational.hpp"
#include "relog/tfol.hpp"

namespace relog {

struct TransResult {
  tfol::Theory theory;
  int helper_count = 0;  // number of _h* declarations
  std::map<std::string, std::vector<std::string>> split_map;
  TypeEnv env;
  std::set<int> consumed;  // top-level conjuncts skipped (functions mode)
};

// Declares sorts and relation copies per the options, then translates the
// residual conjunction bottom-up, introducing one helper relation per
// compound set expression instance.
TransResult translate(const RelModel& m, const Options& opts);

}  // namespace relog
