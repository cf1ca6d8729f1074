// Copyright 2026 The MobiScout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mobiscout/common/error.hpp"
#include "mobiscout/model/validation.hpp"
#include "mobiscout/sim/dongle.hpp"
#include "mobiscout/sim/emitters.hpp"
#include "mobiscout/sim/truth.hpp"

namespace mobiscout::sim {
namespace {

constexpr double kG = 9.80665;

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::kIo;
}

Scenario city() {
  Scenario s;
  s.seed = 42;
  s.duration = 120;
  s.speed_profile = {{0, 10, 0, 50}, {10, 40, 50, 50}, {40, 50, 50, 20}, {50, 90, 20, 70},
                     {90, 120, 70, 0}};
  s.route = {41.99, -93.62, 37};
  s.dead_zones = {{30, 45}, {80, 95}};
  return s;
}

Scenario noiseless(Scenario s) {
  s.noise = NoiseTable::none();
  return s;
}

TEST(ScenarioValidation, RejectsBrokenProfiles) {
  Scenario gap = Scenario::constant(30, 20);
  gap.speed_profile = {{0, 10, 30, 30}, {11, 20, 30, 30}};
  EXPECT_EQ(error_of([&] { gap.validate(); }), Errc::kInvalidArgument);

  Scenario short_cover = Scenario::constant(30, 20);
  short_cover.duration = 25;
  EXPECT_EQ(error_of([&] { short_cover.validate(); }), Errc::kInvalidArgument);

  Scenario negative = Scenario::constant(30, 20);
  negative.speed_profile[0].end_speed = -1;
  EXPECT_EQ(error_of([&] { negative.validate(); }), Errc::kInvalidArgument);

  Scenario overlap = Scenario::constant(30, 20);
  overlap.dead_zones = {{2, 8}, {5, 10}};
  EXPECT_EQ(error_of([&] { overlap.validate(); }), Errc::kInvalidArgument);

  Scenario outside = Scenario::constant(30, 20);
  outside.dead_zones = {{15, 25}};
  EXPECT_EQ(error_of([&] { outside.validate(); }), Errc::kInvalidArgument);

  EXPECT_NO_THROW(city().validate());
}

TEST(ScenarioFile, JsonRoundTripAndLoad) {
  const Scenario original = city();
  const Scenario parsed = Scenario::from_json(original.to_json());
  EXPECT_EQ(parsed.to_json(), original.to_json());

  const auto path = std::filesystem::temp_directory_path() / "mobiscout_scenario_test.json";
  std::ofstream(path) << R"({"seed": 3, "duration": 20,
    "speedProfile": [[0, 10, 0, 36], {"tStart": 10, "tEnd": 20, "startSpeed": 36, "endSpeed": 36}],
    "route": {"latitude": 10, "longitude": 20, "heading": 90},
    "deadZones": [[5, 8]], "noise": "none"})";
  const Scenario loaded = Scenario::load(path);
  EXPECT_EQ(loaded.seed, 3u);
  EXPECT_EQ(loaded.speed_profile.size(), 2u);
  EXPECT_EQ(loaded.dead_zones.size(), 1u);
  EXPECT_EQ(loaded.noise.acceleration, 0);
  std::filesystem::remove(path);

  EXPECT_EQ(error_of([] { Scenario::from_json(nlohmann::json{{"duration", 5}}); }),
            Errc::kInvalidArgument);
}

TEST(Truth, ConstantSpeedHasZeroAccel) {
  const Scenario s = Scenario::constant(72, 30);
  for (int64_t t = 0; t <= 30000; t += 777) EXPECT_EQ(sample_truth(s, t).longitudinal_accel, 0);
}

TEST(Truth, AccelerationSegment) {
  Scenario s = Scenario::constant(0, 10);
  s.speed_profile = {{0, 10, 0, 100}};
  const auto truth = sample_truth(s, 5000);
  EXPECT_NEAR(truth.speed, 50, 1e-12);
  EXPECT_NEAR(truth.longitudinal_accel, 0.283, 5e-4);
  EXPECT_NEAR(truth.longitudinal_accel, (100 / 3.6) / 10 / kG, 1e-12);
}

TEST(Truth, StartsAtRouteOrigin) {
  const Scenario s = city();
  const auto truth = sample_truth(s, 0);
  EXPECT_EQ(truth.latitude, s.route.latitude);
  EXPECT_EQ(truth.longitude, s.route.longitude);
}

TEST(Truth, OutOfRange) {
  const Scenario s = city();
  EXPECT_EQ(error_of([&] { sample_truth(s, -1); }), Errc::kOutOfRange);
  EXPECT_EQ(error_of([&] { sample_truth(s, 120001); }), Errc::kOutOfRange);
}

TEST(Truth, SpeedContinuousAtSegmentBoundaries) {
  const Scenario s = city();
  for (const auto& seg : s.speed_profile) {
    const auto t = static_cast<int64_t>(seg.t_start * 1000);
    if (t == 0) continue;
    EXPECT_NEAR(sample_truth(s, t - 1).speed, sample_truth(s, t).speed, 0.01);
  }
}

TEST(Kinematics, IntegratedAccelMatchesSpeedChange) {
  const Scenario s = noiseless(city());
  const MotionEmitter motion(s, 100);
  const auto samples = motion.all();
  for (const auto& seg : s.speed_profile) {
    const int64_t a = s.start_time + static_cast<int64_t>(seg.t_start * 1000);
    const int64_t b = s.start_time + static_cast<int64_t>(seg.t_end * 1000);
    double dv_kmh = 0;
    for (size_t i = 1; i < samples.size(); ++i) {
      if (samples[i - 1].t < a || samples[i].t > b) continue;
      const double dt = (samples[i].t - samples[i - 1].t) / 1000.0;
      dv_kmh += 0.5 * (samples[i - 1].acceleration_x + samples[i].acceleration_x) * kG * dt * 3.6;
    }
    EXPECT_LE(std::abs(dv_kmh - (seg.end_speed - seg.start_speed)), 0.1);
  }
}

TEST(Kinematics, FixSpacingMatchesDistanceTravelled) {
  const Scenario s = noiseless(city());
  const LocationEmitter location(s, 10);
  const auto fixes = location.all();
  ASSERT_EQ(fixes.size(), 120u);
  for (size_t i = 1; i < fixes.size(); ++i) {
    const int64_t t0 = fixes[i - 1].t - s.start_time, t1 = fixes[i].t - s.start_time;
    // Trapezoid on piecewise-linear speed with knots on whole seconds is exact.
    const double expected =
        0.5 * (sample_truth(s, t0).speed + sample_truth(s, t1).speed) / 3.6 * (t1 - t0) / 1000.0;
    const double got =
        great_circle_m(fixes[i - 1].latitude, fixes[i - 1].longitude, fixes[i].latitude,
                       fixes[i].longitude);
    if (expected < 1e-9) {
      EXPECT_LT(got, 1e-6);
    } else {
      EXPECT_LE(std::abs(got - expected), 0.01 * expected) << "fix " << i;
    }
  }
}

TEST(Motion, OneHertzSixtySeconds) {
  const Scenario s = Scenario::constant(40, 60);
  const auto samples = MotionEmitter(s, 1).all();
  EXPECT_EQ(samples.size(), 60u);
  for (size_t i = 1; i < samples.size(); ++i) {
    EXPECT_GT(samples[i].t, samples[i - 1].t);
    EXPECT_EQ(samples[i].t - samples[i - 1].t, 1000);
  }
}

TEST(Motion, ZeroNoiseCarriesTruthExactly) {
  const Scenario s = noiseless(city());
  const MotionEmitter motion(s, 10);
  for (uint64_t k = 1; k <= motion.count(); ++k) {
    const auto sample = motion.sample(k);
    EXPECT_EQ(sample.acceleration_x,
              sample_truth(s, sample.t - s.start_time).longitudinal_accel);
  }
}

TEST(Motion, AllSamplesValidate) {
  const Scenario s = city();
  for (double hz : {0.1, 1.0, 10.0, 100.0}) {
    for (const auto& sample : MotionEmitter(s, hz).all()) {
      const auto report = model::validate_sample(sample, model::ConsentProfile::all_granted());
      ASSERT_TRUE(report.ok()) << report.errors.front().code;
    }
  }
}

TEST(Motion, FrequencyBounds) {
  const Scenario s = city();
  EXPECT_EQ(error_of([&] { MotionEmitter(s, 0.05); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { MotionEmitter(s, 101); }), Errc::kInvalidArgument);
}

TEST(Determinism, IdenticalScenariosGiveIdenticalStreams) {
  const Scenario a = city(), b = city();
  EXPECT_EQ(MotionEmitter(a, 10).all(), MotionEmitter(b, 10).all());
  EXPECT_EQ(HeartEmitter(a).all(), HeartEmitter(b).all());
  EXPECT_EQ(LocationEmitter(a, 10).all(), LocationEmitter(b, 10).all());
  EXPECT_EQ(VideoEmitter(a, 30, Camera::kFront).sample(77),
            VideoEmitter(b, 30, Camera::kFront).sample(77));
  Scenario c = city();
  c.seed = 43;
  EXPECT_NE(MotionEmitter(a, 10).all(), MotionEmitter(c, 10).all());
}

TEST(Heart, TwelveReadingsPerMinute) {
  const auto readings = HeartEmitter(Scenario::constant(30, 60)).all();
  ASSERT_EQ(readings.size(), 12u);
  for (size_t i = 0; i < readings.size(); ++i)
    EXPECT_EQ(readings[i].t, Scenario().start_time + 5000 * static_cast<int64_t>(i + 1));
}

TEST(Heart, NoReadingBeforeFiveSeconds) {
  EXPECT_TRUE(HeartEmitter(Scenario::constant(30, 4)).all().empty());
}

TEST(Heart, AffineInSpeed) {
  Scenario s = noiseless(Scenario::constant(50, 30));
  s.heart_baseline = 60;
  for (const auto& r : HeartEmitter(s).all()) EXPECT_DOUBLE_EQ(r.bpm, 70);
}

TEST(Location, FixesWithinTenSigma) {
  const Scenario s = city();
  for (const auto& fix : LocationEmitter(s, 5).all()) {
    const auto truth = sample_truth(s, fix.t - s.start_time);
    EXPECT_LE(great_circle_m(fix.latitude, fix.longitude, truth.latitude, truth.longitude), 50);
    EXPECT_EQ(fix.accuracy, 5);
  }
}

TEST(Location, AccuracyBounds) {
  const Scenario s = city();
  EXPECT_EQ(error_of([&] { LocationEmitter(s, 4); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_of([&] { LocationEmitter(s, 51); }), Errc::kInvalidArgument);
  EXPECT_NO_THROW(LocationEmitter(s, 50));
}

TEST(Location, StraightLineSpacing) {
  Scenario s = noiseless(Scenario::constant(36, 30));
  s.route.heading = 90;
  const auto fixes = LocationEmitter(s, 5).all();
  for (size_t i = 1; i < fixes.size(); ++i) {
    const double d = great_circle_m(fixes[i - 1].latitude, fixes[i - 1].longitude,
                                    fixes[i].latitude, fixes[i].longitude);
    EXPECT_NEAR(d, 10.0, 1e-6);
  }
}

TEST(Video, FrameCountAndSize) {
  const VideoEmitter front(Scenario::constant(30, 60), 30, Camera::kFront);
  EXPECT_EQ(front.count(), 1800u);
  const auto f = front.sample(1);
  EXPECT_EQ(f.data.size(), kFrameBytes);
  EXPECT_NE(f.data, VideoEmitter(Scenario::constant(30, 60), 30, Camera::kBack).sample(1).data);
}

TEST(Connectivity, NoDeadZones) {
  EXPECT_EQ(connectivity_signal(Scenario::constant(30, 60)),
            (std::vector<ConnectivityChange>{{0, true}}));
}

TEST(Connectivity, OneZone) {
  Scenario s = Scenario::constant(30, 60);
  s.dead_zones = {{10, 20}};
  EXPECT_EQ(connectivity_signal(s),
            (std::vector<ConnectivityChange>{{0, true}, {10000, false}, {20000, true}}));
  EXPECT_TRUE(online_at(s, 9999));
  EXPECT_FALSE(online_at(s, 10000));
  EXPECT_FALSE(online_at(s, 19999));
  EXPECT_TRUE(online_at(s, 20000));
}

TEST(Connectivity, ZoneAtStart) {
  Scenario s = Scenario::constant(30, 60);
  s.dead_zones = {{0, 5}};
  EXPECT_EQ(connectivity_signal(s),
            (std::vector<ConnectivityChange>{{0, false}, {5000, true}}));
}

TEST(Dongle, RepliesEncodeTruth) {
  const Scenario s = Scenario::constant(60, 60);
  ManualClock clock(s.start_time + 10'000);
  DongleEmulator dongle(s, clock);
  EXPECT_NE(dongle.respond("ATZ").find("ELM327"), std::string::npos);
  EXPECT_EQ(dongle.respond("ATE0"), "ATE0\rOK\r>");
  EXPECT_EQ(dongle.respond("010D"), "41 0D 3C\r>");
  EXPECT_EQ(dongle.respond("010C"), "41 0C 38 40\r>");
  EXPECT_EQ(dongle.respond("01FF"), "NO DATA\r>");
  EXPECT_EQ(dongle.respond("XYZ"), "?\r>");
}

TEST(Dongle, IdleRpmFloor) {
  const Scenario s = Scenario::constant(0, 60);
  ManualClock clock(s.start_time);
  DongleEmulator dongle(s, clock);
  dongle.respond("ATE0");
  EXPECT_EQ(dongle.respond("010C"), "41 0C 0C 80\r>");
}

TEST(DongleServer, BindFailure) {
  const Scenario s = Scenario::constant(0, 60);
  ManualClock clock(s.start_time);
  auto dongle = std::make_shared<DongleEmulator>(s, clock);
  DongleServer first(dongle, "127.0.0.1", 0);
  EXPECT_EQ(error_of([&] { DongleServer second(dongle, "127.0.0.1", first.port()); }),
            Errc::kBindFailure);
}

}  // namespace
}  // namespace mobiscout::sim
