// Runs every acceptance criterion, prints the summary and checks runtime budgets.
#include <iostream>

#include "hmmlab/acceptance.hpp"

int main() {
    using namespace hmmlab::acceptance;
    const auto results = run(Options{});
    std::cout << summary(results);
    std::cout << "-- timing (id,seconds,budget)\n" << timing_report(results);
    bool ok = all_pass(results);
    for (const auto &r : results) {
        if (r.budget_seconds > 0.0 && r.seconds > r.budget_seconds) {
            std::cout << "criterion " << r.id << " exceeded its budget\n";
            ok = false;
        }
    }
    return ok ? 0 : 1;
}
