// Compares the OpenMP trial runner against the serial reference on the
// default scenario and checks the outcome sequences match bit for bit.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bttn/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_seconds(Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool same_outcomes(const std::vector<bttn::TrialOutcome>& a,
                   const std::vector<bttn::TrialOutcome>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i].score, &b[i].score, sizeof(double)) != 0) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_trials = 20000;
    if (argc > 1) n_trials = std::strtoull(argv[1], nullptr, 10);

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    bttn::TrialConfig cfg = bttn::default_trial_config();
    cfg.geometry.n_elements = 100;
    cfg.ris_mode = bttn::RisMode::OptimalForLegit;
    cfg.attack = bttn::AttackSpec{};
    cfg.n_trials = n_trials;

    bttn::TrialConfig legit_cfg = cfg;
    legit_cfg.attack.reset();

    std::vector<bttn::TrialOutcome> serial_legit, parallel_legit;
    std::vector<bttn::TrialOutcome> serial_attack, parallel_attack;

    const double t_serial_legit =
        time_seconds([&] { serial_legit = bttn::run_legit_trials_serial(legit_cfg); });
    const double t_parallel_legit =
        time_seconds([&] { parallel_legit = bttn::run_legit_trials(legit_cfg); });
    const double t_serial_attack =
        time_seconds([&] { serial_attack = bttn::run_attack_trials_serial(cfg); });
    const double t_parallel_attack =
        time_seconds([&] { parallel_attack = bttn::run_attack_trials(cfg); });

    std::printf("legit  trials: serial %.3f s (%.0f/s)  parallel %.3f s (%.0f/s)  speedup %.2fx\n",
                t_serial_legit, n_trials / t_serial_legit, t_parallel_legit,
                n_trials / t_parallel_legit, t_serial_legit / t_parallel_legit);
    std::printf("attack trials: serial %.3f s (%.0f/s)  parallel %.3f s (%.0f/s)  speedup %.2fx\n",
                t_serial_attack, n_trials / t_serial_attack, t_parallel_attack,
                n_trials / t_parallel_attack, t_serial_attack / t_parallel_attack);

    if (!same_outcomes(serial_legit, parallel_legit) ||
        !same_outcomes(serial_attack, parallel_attack)) {
        std::printf("MISMATCH: parallel and serial outcomes differ\n");
        return 1;
    }
    std::printf("parallel outcomes bit-identical to serial reference\n");
    return 0;
}
