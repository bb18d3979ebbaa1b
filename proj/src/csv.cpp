#include "hmmlab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace hmmlab::csv {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

namespace {

std::string format_observation(const Observation &o) {
    return o.is_discrete() ? std::to_string(o.symbol()) : format_double(o.value());
}

} // namespace

void write_simulation(std::ostream &os, const SimulatedPath &path) {
    os << "n,x,y\n";
    for (std::size_t k = 0; k < path.states.size(); ++k)
        os << k << ',' << path.states[k] << ',' << format_observation(path.observations[k]) << '\n';
}

void write_trajectory(std::ostream &os, const FilterTrajectory &trajectory) {
    const std::size_t d = trajectory.prior.size();
    os << "n";
    for (std::size_t x = 0; x < d; ++x) os << ",Pi_" << x;
    os << ",log_Z\n";
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        os << k;
        for (std::size_t x = 0; x < d; ++x) os << ',' << format_double(trajectory.states[k][x]);
        os << ',' << format_double(trajectory.log_normalizers[k]) << '\n';
    }
}

void write_beta_curve(std::ostream &os, const BetaCurve &curve) {
    os << "n,beta\n";
    for (std::size_t n = 1; n <= curve.values.size(); ++n) os << n << ',' << format_double(curve.at(n)) << '\n';
}

void write_series(std::ostream &os, const std::vector<double> &values, const std::string &column) {
    os << "n," << column << '\n';
    for (std::size_t n = 0; n < values.size(); ++n) os << n << ',' << format_double(values[n]) << '\n';
}

void write_kernels(std::ostream &os, const EnvironmentKernelSequence &kernels) {
    os << "n,from,to,p\n";
    for (std::size_t n = 1; n <= kernels.horizon(); ++n)
        for (std::size_t x = 0; x < kernels.dim; ++x) {
            if (!kernels.row_reachable(n, x)) continue;
            for (std::size_t to = 0; to < kernels.dim; ++to)
                os << n << ',' << x << ',' << to << ',' << format_double(kernels.at(n)(x, to)) << '\n';
        }
}

} // namespace hmmlab::csv
