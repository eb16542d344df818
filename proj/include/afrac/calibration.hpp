#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Frozen maxima from tools/calibrate.cpp. Regenerate with `afrac_calibrate` after an intentional change.
namespace afrac::calibration {

constexpr double kRegressionTol = 1e-3;

constexpr std::array<double, 5> kS = {0.1, 0.25, 0.5, 0.75, 0.9};

// 1D batteries: 200 trials; at1 seed 7, at2 seed 3 with alpha = s + 0.5, dist seed 5.
constexpr std::array<double, 5> kAt1Battery = {1.0884036404875925, 1.0397746705060178, 0.96496393789464108,
                                               0.89722404952111734, 0.85965775315979187};
constexpr std::array<double, 5> kAt2Battery = {2.8139825452120073, 1.7941058316009795, 1.0934662098107564,
                                               0.89179193665443857, 0.80589402289621137};
constexpr std::array<double, 5> kDistBattery = {10.154413488582856, 4.3623988852444837, 2.6796938509202062,
                                                2.3316113173125057, 2.3149549875676869};

// stadium(-1,1,0,1). at1: p=0, R=0.5, r=0.05. at2_simple: p=0, R=0.5. at2: p=(0.2,0), q=(-0.1,0.1), R=0.5.
// Both at2 modes use alpha = s + 0.5. dist: p=0, R=1.
constexpr std::array<double, 5> kBisAt1 = {2.1811654067906665, 1.6477457675110483, 1.0443651795659261,
                                           0.67079004342638382, 0.51733617167984436};
constexpr std::array<double, 5> kBisAt2Simple = {7.8433024165505794, 6.514714520207229, 4.9046798624687122,
                                                 3.8056611193352943, 3.31271879470895};
constexpr std::array<double, 5> kBisAt2 = {7.8169658069518579, 6.5532545931408945, 4.998958304986882,
                                           3.9195546127463854, 3.4292835770041621};
constexpr std::array<double, 5> kBisDist = {61.578889810912365, 22.678987495778507, 9.180800948532573,
                                            4.7447596413607487, 3.3627533607219267};

// Ball(0,4), R = 1.5, 200 trials, 50 probes, seed 1.
constexpr int kCutoffTrials = 200;
constexpr std::uint64_t kCutoffSeed = 1;
constexpr std::array<double, 5> kCutoff = {0.10419343183936908, 0.17411275463489959, 0.18537312265356251,
                                           0.11459154855434181, 0.047093300994737436};
// loss_2s_family(0.45, s)
constexpr std::array<double, 5> kLoss = {2.1953310547516032, 2.1456086121976168, 1.4275144137164004,
                                         1.5888098906345034, 1.2279303262049566};

// smooth_family(20) on Ball(0,1), h = 1/16, (alpha1, alpha2, sigma) = (0.3, 0.9, -0.25).
constexpr double kNormFamily = 1.1941371869751838;

// band_volume / (mu * boundary_area) over the band battery; 200000 samples, seed 11.
constexpr double kBand = 1.0147082551766879;
// annulus_boundary_area(counterexample, R) / R for R = 0.5 .. 8.
constexpr double kAnnulus = 39.368260267904937;

inline bool within(double value, double frozen) {
    return std::abs(value - frozen) <= kRegressionTol * std::abs(frozen);
}
inline bool below(double value, double frozen) { return value <= frozen * (1.0 + kRegressionTol); }

}  // namespace afrac::calibration
