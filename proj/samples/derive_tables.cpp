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

// Fits Pi2 on the two-copy basis and prints its coefficient table.

#include <iostream>

#include "qoverlap/qoverlap.hpp"

int main() {
  using namespace qoverlap;
  const auto basis = build_basis(2);
  FitOptions opt;
  opt.prune = Prune::none;
  const auto pi2 = fit_coefficients(Target::pi2, basis, opt);
  write_table(std::cout, pi2);
  std::cout << "# distinct graphs: " << pi2.graphs().size() << "\n";
}
