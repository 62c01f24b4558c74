// Simulates busy cycles at a few parameter points and compares the empirical
// distribution against the closed forms: mean, zero-length fraction, and
// Kolmogorov-Smirnov distance.

#include <cmath>
#include <iostream>

#include <mginf/busy_period.hpp>
#include <mginf/busy_cycle.hpp>
#include <mginf/simulator.hpp>
#include <mginf/text_io.hpp>

int main() {
    using namespace mginf;
    const std::size_t n = 50000;
    std::cout << csv_row({"lambda", "rho", "eta", "mean_B", "model_mean_B", "atom_frac", "model_atom", "ks_B",
                          "dkw_99"});
    const double dkw = std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(n)));
    for (const auto& [lambda, rho, eta] : {std::tuple{1.0, 1.0, 0.0}, {0.7, 1.3, 0.2}, {1.0, 1.0, -0.5}}) {
        const ServiceLaw law = ServiceLaw::canonicalize({lambda, rho, 0.0, ConstantBeta{eta}});
        const BusyPeriodLaw bp(law);
        SimConfig config;
        config.law = law;
        config.seed = 42;
        config.n_cycles = n;
        const SimResult sim = run_busy_cycles(config);
        double mean = 0;
        std::size_t zeros = 0;
        for (double b : sim.busy_samples) {
            mean += b;
            if (b == 0) ++zeros;
        }
        mean /= static_cast<double>(n);
        const double ks = ks_distance(EmpiricalCdf(sim.busy_samples), [&bp](double t) { return bp.cdf_closed(t); });
        std::cout << csv_row({format_double(lambda), format_double(rho), format_double(eta), format_double(mean),
                              format_double(std::expm1(rho) / lambda),
                              format_double(static_cast<double>(zeros) / static_cast<double>(n)),
                              format_double(law.atom()), format_double(ks), format_double(dkw)});
    }
    return 0;
}
