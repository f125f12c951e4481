#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sugam/model.hpp"
#include "sugam/sampler.hpp"
#include "sugam/table.hpp"
#include "sugam/types.hpp"

namespace sugam {

// One historical earthquake as a per-SU PGA vector. pga_std is pga_g pushed
// through the calibration column's standardization, so it drops straight
// into the design's PGA column without changing the coefficient scale.
struct ScenarioField {
  std::string name;
  std::vector<int> su_ids;
  Vector pga_g;
  Vector pga_std;
};

ScenarioField make_scenario_field(const std::string& name,
                                  const std::vector<int>& su_ids, const Vector& pga_g,
                                  const Standardization& calibration);

// scenario CSV: header su_id,pga_g. Must cover exactly the expected SU set;
// missing ids are listed in the error.
ScenarioField parse_scenario_csv(std::string_view text, const std::string& name,
                                 const std::vector<int>& expected_ids,
                                 const Standardization& calibration);

struct ScenarioSimulation {
  std::string name;
  std::vector<int> su_ids;
  Matrix susceptibility;  // draws x SUs, every entry in (0,1)
};

// Per-draw susceptibility with the calibration design as-is (the reference,
// i.e. the 2017 field the model was fit with).
ScenarioSimulation simulate_reference(const PosteriorSamples& samples,
                                      const DesignMatrix& design,
                                      const std::vector<int>& su_ids);

// Scenario swap: replace the PGA column with the scenario's standardized
// values and rerun the full linear predictor per draw. Algebraically this
// equals subtracting beta_PGA * pga_2017 and adding beta_PGA * pga_scenario
// draw by draw; recomputing through the one pinned evaluation order is what
// makes the identity hold bit for bit.
ScenarioSimulation swap_scenario(const PosteriorSamples& samples,
                                 const DesignMatrix& design,
                                 const ScenarioField& scenario,
                                 const std::string& pga_column);

struct SusceptibilitySummary {
  std::string name;
  std::vector<int> su_ids;
  Vector mean;
  Vector q025;
  Vector q975;
  Vector ci_width;
};

// Per-SU mean and central 95% interval over draws. Draw values are sorted
// first, so summaries are invariant to draw order.
SusceptibilitySummary summarize_scenario(const ScenarioSimulation& sim);

struct CombinedSummary {
  std::vector<int> su_ids;
  Vector mean;
  Vector q025;
  Vector q975;
  Vector ci_width;
};

// Mean and 95% interval per SU across the per-scenario mean maps (the
// scenarios' order does not matter).
CombinedSummary combine_scenarios(const std::vector<SusceptibilitySummary>& summaries);

// su_id,mean,q025,q975,ci_width
std::string serialize_summary_csv(const SusceptibilitySummary& summary);
std::string serialize_combined_csv(const CombinedSummary& combined);
SusceptibilitySummary parse_summary_csv(std::string_view text, const std::string& name);

}  // namespace sugam
