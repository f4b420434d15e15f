// Copyright 2026 The tslot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Builds the sequential and parallel schedules for a 4-hop task, runs the
// parallel one through the slotted simulator, and prints what happened.

#include "tslot/scheduler.hpp"
#include "tslot/simulator.hpp"

#include <iostream>

int main() {
    using namespace tslot;
    Task task(1, 5);
    Graph g0 = line_network(6);  // node 6 is the receiver's outer neighbor

    for (auto tq : {Rational(1), Rational(5)}) {
        SlotModel model{tq};
        auto seq = sequential_schedule(task, g0, model);
        auto par = parallel_schedule(task, g0, model);
        std::cout << "t_q=" << to_string(tq) << "  sequential T*=" << seq.t_star << "  parallel T*=" << par.t_star
                  << "\n";
    }

    SlotModel model{Rational(5)};
    auto par = parallel_schedule(task, g0, model);
    std::cout << schedule_to_string(ScheduleFile{task, model, par.schedule});

    auto trace = run_slotted(par.schedule, task, g0, model, SimProfile{}, /*seed=*/7);
    for (const auto *e : trace.of_kind(EventKind::MeasureEnd)) {
        std::cout << "t=" << to_string(e->time) << "  node " << e->at << " measured " << basis_name(e->physical)
                  << " -> " << to_int(*e->outcome) << "\n";
    }
    std::cout << "verdict: " << verdict_name(trace.verdict.kind) << "\n";
}
