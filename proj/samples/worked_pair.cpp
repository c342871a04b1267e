// Copyright 2026 The qoverlap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bell state against the maximally mixed state, three ways.

#include <iostream>

#include "qoverlap/qoverlap.hpp"

int main() {
  using namespace qoverlap;
  const auto bell = bell_phi_plus();
  const auto mixed = maximally_mixed(4);

  const auto d = distance_set(bell, mixed);
  std::cout << "oracle:   F=" << d.fidelity << " T=" << d.trace_distance
            << " H=" << d.hilbert_schmidt << " E=" << d.subfidelity << " G=" << d.superfidelity
            << "\n";

  const auto o = distances_from_overlaps(bell, mixed);
  std::cout << "overlaps: T=" << o.trace_distance << " H=" << o.hilbert_schmidt
            << " E=" << o.subfidelity << " G=" << o.superfidelity << "\n";

  WorkflowNeeds needs;
  needs.t = false;
  const auto fits = derive_workflows(build_basis(4), 1, 1, needs);
  const auto wf = to_workflow(fits);
  const auto plan = plan_configurations(wf.required_graphs());
  const auto rep = estimate_distances(plan, wf, bell, mixed, 1000000, 7);
  std::cout << "simulated (" << plan.configurations.size() << " configurations, "
            << plan.photon_pairs() << " photon pairs):";
  for (const auto& m : rep.measures) std::cout << " " << m.name << "=" << m.estimate << "+-" << m.std_err;
  std::cout << "\n";
}
