// Prints the frozen constants in include/afrac/calibration.hpp.
#include <chrono>
#include <cstdio>
#include <thread>

#include "afrac/geometry.hpp"
#include "afrac/holder.hpp"
#include "afrac/lemma_lab.hpp"

using namespace afrac;

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
    const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const double svals[] = {0.1, 0.25, 0.5, 0.75, 0.9};
    auto t0 = std::chrono::steady_clock::now();

    for (double s : svals) {
        const auto a1 = at1_battery(s, 200, 7, threads);
        const auto a2 = at2_battery(s, s + 0.5, 200, 3, threads);
        const auto d = dist_battery(s, 200, 5, threads);
        std::printf("s=%.2f at1=%.17g at2=%.17g dist=%.17g  (%.1fs)\n", s, a1.max_ratio, a2.max_ratio, d.max_ratio,
                    elapsed(t0));
    }

    const auto stadium = Domain::stadium(-1.0, 1.0, 0.0, 1.0);
    for (double s : svals) {
        BisOptions opt;
        opt.threads = threads;
        const auto b1 = bis_integral(stadium, BisMode::at1, {0, 0}, {0, 0}, 0.5, 0.0, s, 0.05, opt);
        const auto b2 = bis_integral(stadium, BisMode::at2_simple, {0, 0}, {0, 0}, 0.5, s + 0.5, s, 0.0, opt);
        const auto b3 = bis_integral(stadium, BisMode::at2, {0.2, 0}, {-0.1, 0.1}, 0.5, s + 0.5, s, 0.0, opt);
        const auto b5 = bis_integral(stadium, BisMode::dist, {0, 0}, {0, 0}, 1.0, 0.0, s, 0.0, opt);
        std::printf("s=%.2f bis at1=%.17g at2s=%.17g at2=%.17g dist=%.17g  (%.1fs)\n", s, b1.ratio, b2.ratio, b3.ratio,
                    b5.ratio, elapsed(t0));
    }

    const auto b4 = Domain::ball({0, 0}, 4.0);
    for (double s : svals) {
        const auto c = cutoff_w1_check(b4, 1.5, s, 200, 50, 1, threads);
        double loss = 0.0;
        for (const auto& v : loss_2s_family(0.45, s)) loss = std::max(loss, loss_2s_check(v, 0.45, s).ratio);
        std::printf("s=%.2f cutoff=%.17g loss=%.17g  (%.1fs)\n", s, c.max_ratio, loss, elapsed(t0));
    }

    const auto fam = norm_family_ratio(Domain::ball({0, 0}, 1.0), 1.0 / 16, 0.3, 0.9, -0.25);
    std::printf("norm_family=%.17g  (%.1fs)\n", fam.max_ratio, elapsed(t0));

    std::printf("band=%.17g  (%.1fs)\n", band_battery_ratio(200000, 11), elapsed(t0));

    double annulus = 0.0;
    const auto ce = Domain::counterexample();
    for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) annulus = std::max(annulus, annulus_boundary_area(ce, R) / R);
    std::printf("annulus=%.17g  (%.1fs)\n", annulus, elapsed(t0));
}
