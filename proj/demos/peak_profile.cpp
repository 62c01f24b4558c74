// Sweeps the traffic intensity and prints the peak parameters of the busy
// period and busy cycle, together with the distribution-free mean identity.

#include <iostream>

#include <mginf/busy_cycle.hpp>
#include <mginf/busy_period.hpp>
#include <mginf/text_io.hpp>

int main() {
    using namespace mginf;
    const double lambda = 1.0;
    std::cout << csv_row({"rho", "eta", "atom", "pi", "qi", "pi_prime", "qi_prime", "mean_busy"});
    for (double rho = 0.25; rho <= 3.0 + 1e-9; rho += 0.25) {
        for (double eta : {-0.5, 0.0, 0.5}) {
            if (eta > lambda / std::expm1(rho)) continue;  // outside the admissible band
            const ServiceLaw law = ServiceLaw::canonicalize({lambda, rho, 0.0, ConstantBeta{eta}});
            const BusyPeriodLaw bp(law);
            const BusyCycleLaw bc(law);
            const PeakPair b = bp.peak();
            const PeakPair z = bc.peak();
            std::cout << csv_row({format_double(rho), format_double(eta), format_double(law.atom()),
                                  format_double(b.pi), format_double(b.qi), format_double(z.pi),
                                  format_double(z.qi), format_double(std::expm1(rho) / lambda)});
        }
    }
    return 0;
}
