#pragma once

#include <string>
#include <vector>

#include "circ/diagnostics.hpp"
#include "circ/timestepper.hpp"

namespace circ {

enum class RunMode { evolve, steady_check, sweep, convergence, residual };

/// Initial condition: either identically zero or a compact bump.
struct IcSpec {
    bool zero = false;
    BumpSpec bump;
};

struct OutputSpec {
    std::string directory = "out";
    int snapshot_every = 0;  // steps between snapshots; 0 disables
    int diag_every = 10;     // diagnostic cadence in steps
    double contamination_threshold = 1e-6;

    void validate() const {
        if (directory.empty()) throw std::invalid_argument("outputs: directory required");
        if (snapshot_every < 0 || diag_every <= 0)
            throw std::invalid_argument("outputs: cadences must be positive");
        if (!(contamination_threshold > 0.0))
            throw std::invalid_argument("outputs: contamination_threshold > 0 required");
    }
};

struct RunConfig {
    FlowParams params;
    GridSpec grid;
    StepControl control;
    IcSpec ic;
    OutputSpec outputs;
    RunMode mode = RunMode::evolve;
    std::vector<double> epsilons = {1e-2, 1e-3, 1e-4};  // sweep amplitudes

    void validate() const;
};

/// Strict JSON parsing: unknown keys are an error, all defaults documented in
/// the README. Throws std::invalid_argument naming the offending key/field.
RunConfig parse_config(const std::string& text);

/// Reserialization; parse_config(dump_config(c)) == c field-wise.
std::string dump_config(const RunConfig& cfg);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

/// Write-to-temp-then-rename so interrupted runs never leave torn files.
void write_text_atomic(const std::string& path, const std::string& content);

/// CSV with one row per sample: step,t,dt, every EnergyReport field, then the
/// running integrals.
void write_timeseries(const TimeSeries& series, const std::string& path);
TimeSeries read_timeseries(const std::string& path);

/// Binary little-endian float64 dump of the four fields in (phi, v_r,
/// v_theta, v_z) row-major order plus a JSON sidecar (same basename, ".json")
/// holding GridSpec, FlowParams, t and an FNV-1a checksum of the payload.
void write_snapshot(const State& state, double t, const FlowParams& params,
                    const std::string& path);

struct SnapshotData {
    State state;
    double t = 0.0;
    FlowParams params;
};

/// Refuses to load on checksum mismatch or when the sidecar grid differs
/// from `grid` (error names both shapes).
SnapshotData read_snapshot(const std::string& path, const Grid& grid);

}  // namespace circ
