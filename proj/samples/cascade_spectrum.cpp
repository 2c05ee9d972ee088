// MF-DFA of a binomial cascade next to its closed-form exponents.
//
//   cascade_spectrum [levels] [b1]

#include <cstdio>
#include <cstdlib>

#include "smfdfa/mfdfa.hpp"

int main(int argc, char** argv) {
    const int levels = argc > 1 ? std::atoi(argv[1]) : 14;
    const double b1 = argc > 2 ? std::atof(argv[2]) : 0.75;
    const double b2 = 1.0 - b1;

    const auto mass = smfdfa::generate_cascade(b1, b2, levels);
    smfdfa::MfdfaConfig config;
    config.q_grid = smfdfa::default_q_grid();
    const auto a = smfdfa::analyze_segment(mass, config, "cascade");

    std::printf("%6s %10s %10s %10s %10s\n", "q", "rho", "analytic", "alpha", "f");
    for (std::size_t i = 0; i < a.curve.q.size(); ++i) {
        const double q = a.curve.q[i];
        std::printf("%6.1f %10.4f %10.4f %10.4f %10.4f\n", q, a.curve.rho[i],
                    smfdfa::analytic_rho(b1, b2, q), a.spectrum.alpha[i], a.spectrum.f[i]);
    }
    std::printf("delta alpha %.4f\n", a.spectrum.delta_alpha);
    return 0;
}
