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

#include "mobiscout/app/sim_devices.hpp"

#include <cmath>

#include "mobiscout/common/error.hpp"
#include "mobiscout/obd/pid.hpp"
#include "mobiscout/sim/emitters.hpp"

namespace mobiscout::app {

using model::RecordPayload;
using model::Stream;
using recorder::StreamSource;

namespace {

// Adapts a scenario emitter: tick k of the session is tick k of the
// scenario, shifted to the session start.
template <typename Emitter>
class EmitterSource final : public StreamSource {
 public:
  EmitterSource(std::shared_ptr<const sim::Scenario> scenario, Stream stream, int64_t base,
                auto&&... args)
      : scenario_(std::move(scenario)),
        emitter_(*scenario_, std::forward<decltype(args)>(args)...),
        stream_(stream),
        base_(base),
        count_(emitter_.count()) {}

  Stream stream() const override { return stream_; }

  std::optional<int64_t> tick_time(uint64_t k) const override {
    if (k > count_) return std::nullopt;
    return base_ + emitter_.tick_time(k);
  }

  std::vector<RecordPayload> produce(uint64_t k, int64_t t) override {
    auto sample = emitter_.sample(k);
    sample.t = t;
    return {std::move(sample)};
  }

 private:
  std::shared_ptr<const sim::Scenario> scenario_;
  Emitter emitter_;
  Stream stream_;
  int64_t base_;
  uint64_t count_;
};

// 1 Hz synchronous OBD reads of speed and engine rpm, stamped with the tick.
class VehicleSource final : public StreamSource {
 public:
  VehicleSource(std::shared_ptr<obd::ObdClient> client, int64_t base, int64_t duration_ms)
      : client_(std::move(client)), base_(base), duration_ms_(duration_ms) {}

  Stream stream() const override { return Stream::kVehicle; }

  std::optional<int64_t> tick_time(uint64_t k) const override {
    const int64_t offset = static_cast<int64_t>(k) * 1000;
    if (offset > duration_ms_) return std::nullopt;
    return base_ + offset;
  }

  std::vector<RecordPayload> produce(uint64_t, int64_t t) override {
    std::vector<RecordPayload> out;
    for (const auto* spec : {&obd::pids::kVehicleSpeed, &obd::pids::kEngineRpm}) {
      if (client_->session().state != obd::AdapterState::kConnected) break;
      try {
        auto reading = client_->query(*spec);
        reading.t = t;
        out.push_back(std::move(reading));
      } catch (const Error&) {
      }
    }
    return out;
  }

 private:
  std::shared_ptr<obd::ObdClient> client_;
  int64_t base_;
  int64_t duration_ms_;
};

}  // namespace

model::RawHealth synthetic_health(uint64_t seed, int64_t reference_time) {
  model::RawHealth raw;
  auto rng = sim::tick_rng(seed, 99, 0);
  std::normal_distribution<double> jitter(0, 1);
  constexpr int64_t kHour = 3'600'000;
  for (int64_t h = 6 * 24; h >= 1; --h) {
    const int64_t t = reference_time - h * kHour;
    const double hour_of_day = static_cast<double>((h % 24));
    const double activity = 0.5 + 0.5 * std::sin(hour_of_day / 24.0 * 2 * 3.141592653589793);
    raw.heart_rate.push_back({t, 62 + 25 * activity + 3 * jitter(rng)});
    raw.headphone_audio_exposure.push_back({t, std::max(0.0, 55 + 10 * jitter(rng))});
    raw.distance_walking_running.push_back({t, std::max(0.0, 400 * activity + 50 * jitter(rng))});
    raw.step_count.push_back({t, std::round(std::max(0.0, 600 * activity + 80 * jitter(rng)))});
  }
  return raw;
}

SimDeviceHub::SimDeviceHub(sim::Scenario scenario, Clock& clock, TransportFactory obd,
                           obd::ObdOptions obd_options)
    : scenario_(std::make_shared<const sim::Scenario>(std::move(scenario))),
      clock_(clock),
      obd_(std::move(obd)),
      obd_options_(obd_options) {}

recorder::SessionSources SimDeviceHub::open(const model::UserSettings& settings,
                                            const std::vector<Stream>& streams,
                                            int64_t start_ms) {
  recorder::SessionSources out;
  auto wants = [&](Stream s) { return std::find(streams.begin(), streams.end(), s) != streams.end(); };

  if (wants(Stream::kMotion))
    out.streams.push_back(std::make_unique<EmitterSource<sim::MotionEmitter>>(
        scenario_, Stream::kMotion, start_ms, settings.frequency));
  if (wants(Stream::kLocation))
    out.streams.push_back(std::make_unique<EmitterSource<sim::LocationEmitter>>(
        scenario_, Stream::kLocation, start_ms, scenario_->location_accuracy));
  if (wants(Stream::kHeart)) {
    out.streams.push_back(
        std::make_unique<EmitterSource<sim::HeartEmitter>>(scenario_, Stream::kHeart, start_ms));
    out.health = synthetic_health(scenario_->seed, start_ms);
  }
  if (wants(Stream::kVideoFront))
    out.streams.push_back(std::make_unique<EmitterSource<sim::VideoEmitter>>(
        scenario_, Stream::kVideoFront, start_ms, settings.frame_rate, sim::Camera::kFront));
  if (wants(Stream::kVideoBack))
    out.streams.push_back(std::make_unique<EmitterSource<sim::VideoEmitter>>(
        scenario_, Stream::kVideoBack, start_ms, settings.frame_rate, sim::Camera::kBack));

  if (wants(Stream::kVehicle)) {
    std::shared_ptr<obd::ObdClient> client;
    try {
      if (obd_) client = std::make_shared<obd::ObdClient>(obd_(), clock_, obd_options_);
    } catch (const Error&) {
    }
    if (client && client->handshake().state == obd::AdapterState::kConnected) {
      try {
        out.vehicle = client->read_vin();
      } catch (const Error&) {
      }
      out.streams.push_back(
          std::make_unique<VehicleSource>(client, start_ms, scenario_->duration_ms()));
      out.obd_state = [client] { return client->session().state; };
    } else {
      out.warnings.push_back("OBD_UNAVAILABLE");
      out.obd_state = [] { return obd::AdapterState::kFailed; };
    }
  }
  return out;
}

}  // namespace mobiscout::app
