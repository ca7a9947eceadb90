// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <variant>
#include <vector>

#include "nanoscout/cell_index.hpp"
#include "nanoscout/common.hpp"
#include "nanoscout/detection.hpp"
#include "nanoscout/flow.hpp"
#include "nanoscout/kinetics.hpp"
#include "nanoscout/random.hpp"
#include "nanoscout/release.hpp"
#include "nanoscout/vessel.hpp"

namespace nanoscout {

enum class DetectionIndex { automatic, brute_force, grid };

struct TrialConfig {
    VesselSpec vessel = preset(VesselKind::capillary);
    FlowModel flow = LaminarFlow{vessel.v_max, vessel.radius()};
    SpeciesSpec biomarker = make_biomarker();
    SpeciesSpec nanomachine = make_nanomachine(default_nanomachine_radius, 0.025);
    std::size_t biomarkers = 3;
    std::size_t nanomachines = 100;
    ReleasePlan release{};
    double dt = 1e-4;          // s
    double t_max = 0.0;        // s
    double detection_range = 0.0; // m
    std::uint64_t seed = 0;
    DetectionIndex index = DetectionIndex::automatic;

    void validate() const {
        vessel.validate();
        biomarker.validate();
        nanomachine.validate();
        if (biomarker.role != Role::biomarker || nanomachine.role != Role::nanomachine) {
            throw ConfigError("species: roles are swapped");
        }
        if (biomarkers < 1) throw ConfigError("sim.biomarkers: at least one biomarker is required");
        if (nanomachines < 1) throw ConfigError("sim.nanomachines: at least one nanomachine is required");
        if (!(dt > 0.0)) throw ConfigError("kinetics.dt: must be positive");
        if (!(t_max >= dt)) throw ConfigError("sim.t_max: must be at least one time step");
        if (!(detection_range > 0.0)) throw ConfigError("detection.d_det: must be positive");
        release.validate(vessel);
    }

    std::size_t step_budget() const {
        return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    }
};

struct DetectionEvent {
    std::size_t step;
    double time;
    std::size_t nanomachine;
    std::size_t biomarker;
    Vec3 position;
    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

struct TrialOutcome {
    std::size_t detected = 0;
    std::size_t total_biomarkers = 0;
    std::vector<double> detection_times;
    std::size_t exited_biomarkers = 0;
    std::size_t steps_run = 0;
    std::vector<DetectionEvent> events;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// One trial, advanced step by step. `move()` and `detect()` are exposed
/// separately so a caller can observe positions between them.
class TrialRunner {
public:
    explicit TrialRunner(const TrialConfig& config)
        : config_((config.validate(), config)),
          domain_(Domain::from(config.vessel)),
          budget_(config.step_budget()),
          bio_motion_(make_stream(config.seed, Stream::biomarker_motion)),
          nano_motion_(make_stream(config.seed, Stream::nanomachine_motion)),
          index_(std::max(config.detection_range, 1e-9)) {
        auto bio_release = make_stream(config.seed, Stream::biomarker_release);
        auto nano_release = make_stream(config.seed, Stream::nanomachine_release);
        bio_pos_ = sample_initial_positions(config.release, config.biomarker, config.biomarkers, config.vessel,
                                            bio_release);
        nano_pos_ = sample_initial_positions(config.release, config.nanomachine, config.nanomachines,
                                             config.vessel, nano_release);
        bio_status_.assign(bio_pos_.size(), ParticleStatus::active);
        nano_status_.assign(nano_pos_.size(), ParticleStatus::active);
        bio_active_.resize(bio_pos_.size());
        nano_active_.resize(nano_pos_.size());
        for (std::uint32_t i = 0; i < bio_active_.size(); ++i) bio_active_[i] = i;
        for (std::uint32_t i = 0; i < nano_active_.size(); ++i) nano_active_[i] = i;
        outcome_.total_biomarkers = bio_pos_.size();
    }

    bool finished() const { return step_ >= budget_ || bio_active_.empty(); }
    std::size_t step_index() const { return step_; }
    double time() const { return static_cast<double>(step_) * config_.dt; }

    const std::vector<Vec3>& biomarker_positions() const { return bio_pos_; }
    const std::vector<Vec3>& nanomachine_positions() const { return nano_pos_; }
    const std::vector<ParticleStatus>& biomarker_status() const { return bio_status_; }
    const std::vector<ParticleStatus>& nanomachine_status() const { return nano_status_; }
    const TrialOutcome& outcome() const { return outcome_; }

    void set_recording(bool on) { record_ = on; }

    /// Advances every active particle by one step and applies the boundaries.
    void move() {
        ++step_;
        KineticParams params{config_.dt};
        std::visit(
            [&](const auto& flow) {
                Mover bio(flow, config_.biomarker, params);
                Mover nano(flow, config_.nanomachine, params);
                if (advance<true>(bio, bio_pos_, bio_status_, bio_active_, bio_motion_)) {
                    outcome_.exited_biomarkers = count_status(bio_status_, ParticleStatus::exited);
                }
                advance<false>(nano, nano_pos_, nano_status_, nano_active_, nano_motion_);
            },
            config_.flow);
        outcome_.steps_run = step_;
    }

    /// Registers detections among active particles at the current step.
    /// Returns the events of this step, ordered by biomarker id.
    std::vector<DetectionEvent> detect() {
        std::vector<DetectionEvent> events;
        if (bio_active_.empty() || nano_active_.empty()) return events;
        const bool use_grid = config_.index == DetectionIndex::grid ||
                              (config_.index == DetectionIndex::automatic && bio_active_.size() >= 16 &&
                               config_.detection_range >= 1e-9);
        if (use_grid) index_.build(nano_pos_, nano_active_);
        const double r2 = config_.detection_range * config_.detection_range;
        for (auto b : bio_active_) {
            std::uint32_t hit = CellIndex::npos;
            if (use_grid) {
                hit = index_.lowest_within(nano_pos_, bio_pos_[b], config_.detection_range);
            } else {
                for (auto n : nano_active_) {
                    if (squared_distance(nano_pos_[n], bio_pos_[b]) <= r2) {
                        hit = n;
                        break;
                    }
                }
            }
            if (hit == CellIndex::npos) continue;
            bio_status_[b] = ParticleStatus::detected;
            events.push_back({step_, time(), hit, b, bio_pos_[b]});
        }
        if (!events.empty()) {
            std::erase_if(bio_active_, [&](std::uint32_t b) { return bio_status_[b] != ParticleStatus::active; });
            for (const auto& e : events) outcome_.detection_times.push_back(e.time);
            outcome_.detected += events.size();
            if (record_) outcome_.events.insert(outcome_.events.end(), events.begin(), events.end());
        }
        return events;
    }

    TrialOutcome run() {
        while (!finished()) {
            move();
            detect();
        }
        return outcome_;
    }

private:
    // With kDrawForAll, inactive particles still consume their noise draws,
    // so every particle's path depends only on the seed and never on when
    // others were detected. Biomarkers use it: a larger detection range can
    // then only detect earlier, never change who else is detected.
    template <bool kDrawForAll, class M>
    bool advance(M& mover, std::vector<Vec3>& pos, std::vector<ParticleStatus>& status,
                 std::vector<std::uint32_t>& active, RandomStream& rng) {
        bool exited = false;
        const auto step_one = [&](std::uint32_t i) {
            const Vec3 before = pos[i];
            const Vec3 raw = mover(before, rng);
            if (raw.x >= 0.0 && raw.x <= domain_.length && std::abs(raw.y) <= domain_.half_height() &&
                std::abs(raw.z) <= domain_.half_width()) {
                pos[i] = raw;
                return;
            }
            const BoundaryResult r = apply_boundaries(before, raw, domain_);
            pos[i] = r.position;
            if (r.status == ParticleStatus::exited) {
                status[i] = ParticleStatus::exited;
                exited = true;
            }
        };
        if constexpr (kDrawForAll) {
            for (std::uint32_t i = 0; i < pos.size(); ++i) {
                if (status[i] == ParticleStatus::active) step_one(i);
                else (void)mover(pos[i], rng);
            }
        } else {
            for (auto i : active) step_one(i);
        }
        if (exited) std::erase_if(active, [&](std::uint32_t i) { return status[i] != ParticleStatus::active; });
        return exited;
    }

    static std::size_t count_status(const std::vector<ParticleStatus>& s, ParticleStatus which) {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), which));
    }

    TrialConfig config_;
    Domain domain_;
    std::size_t budget_;
    std::size_t step_ = 0;
    RandomStream bio_motion_;
    RandomStream nano_motion_;
    CellIndex index_;
    bool record_ = false;

    std::vector<Vec3> bio_pos_;
    std::vector<Vec3> nano_pos_;
    std::vector<ParticleStatus> bio_status_;
    std::vector<ParticleStatus> nano_status_;
    std::vector<std::uint32_t> bio_active_;
    std::vector<std::uint32_t> nano_active_;
    TrialOutcome outcome_;
};

inline TrialOutcome run_trial(const TrialConfig& config, bool record_events = false) {
    TrialRunner runner(config);
    runner.set_recording(record_events);
    return runner.run();
}

/// Calls `body(i)` for i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

struct BatchResult {
    BatchEstimate estimate;
    std::vector<TrialOutcome> outcomes; // indexed by trial, kept only when requested
};

/// Runs `trials` independent trials seeded by trial_seed(master_seed, i) and
/// pools them. Results do not depend on the worker count.
inline BatchResult run_batch_detailed(const TrialConfig& config, std::size_t trials, std::uint64_t master_seed,
                                      unsigned threads = 0, bool keep_outcomes = false, bool record_events = false) {
    if (trials == 0) throw ConfigError("sim.trials: at least one trial is required");
    config.validate();
    std::vector<TrialOutcome> outcomes(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        TrialConfig c = config;
        c.seed = trial_seed(master_seed, i);
        outcomes[i] = run_trial(c, record_events);
    });
    std::size_t detected = 0;
    std::size_t total = 0;
    for (const auto& o : outcomes) {
        detected += o.detected;
        total += o.total_biomarkers;
    }
    BatchResult result{wilson_estimate(detected, total, trials), {}};
    if (keep_outcomes) result.outcomes = std::move(outcomes);
    return result;
}

inline BatchEstimate run_batch(const TrialConfig& config, std::size_t trials, std::uint64_t master_seed,
                               unsigned threads = 0) {
    return run_batch_detailed(config, trials, master_seed, threads).estimate;
}

} // namespace nanoscout
