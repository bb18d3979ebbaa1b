#include "hmmlab/fixtures.hpp"

#include "hmmlab/errors.hpp"

namespace hmmlab::fixtures {

HmmModel m1() {
    return make_model(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}},
                      ObservationChannel::finite({{0.8, 0.2}, {0.2, 0.8}}), "M1");
}

HmmModel m2() {
    return make_model(TransitionKernel::cycle(4),
                      ObservationChannel::finite({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}),
                      "M2");
}

HmmModel m3() {
    return make_model(TransitionKernel::identity(3),
                      ObservationChannel::finite({{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}}),
                      "M3", Distribution::uniform(3));
}

HmmModel m4_transient(double stay) {
    const double leave = 0.5 * (1.0 - stay);
    return make_model(TransitionKernel{{0.9, 0.1, 0.0}, {0.1, 0.9, 0.0}, {leave, leave, stay}},
                      ObservationChannel::finite({{0.8, 0.2}, {0.2, 0.8}, {0.5, 0.5}}), "M4",
                      Distribution{0.5, 0.5, 0.0});
}

HmmModel by_label(const std::string &label) {
    if (label == "M1") return m1();
    if (label == "M2") return m2();
    if (label == "M3") return m3();
    if (label == "M4") return m4_transient();
    throw ConfigError("unknown model fixture '" + label + "'");
}

std::vector<std::string> labels() { return {"M1", "M2", "M3", "M4"}; }

} // namespace hmmlab::fixtures
