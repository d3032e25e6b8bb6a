// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/admission.hpp"
#include "udcran/channels.hpp"
#include "udcran/feedback.hpp"
#include "udcran/harness.hpp"
#include "udcran/pilots.hpp"
#include "udcran/solver.hpp"
#include "udcran/statistics.hpp"
#include "udcran/topology.hpp"

#include <string>
#include <vector>

// JSON documents exchanged with other tools. Complex matrices are stored as
// {"rows", "cols", "data"} with data row-major and real/imaginary parts
// interleaved; complex vectors as flat interleaved arrays.
namespace udcran::io {

std::string to_json(const Topology& topo);
/// Throws ConfigError on malformed documents or out-of-range cluster indices.
Topology topology_from_json(const std::string& text);

std::string to_json(const PilotAssignment& pa);
PilotAssignment pilots_from_json(const std::string& text);

std::string to_json(const ChannelDraw& draw);
/// Feedback indices and the realised (a, phi, phi_hat) of every intra-cluster pair.
std::string to_json(const FeedbackState& fb);
std::string to_json(const StatSet& stats);
std::string to_json(const SolveReport& report);
std::string to_json(const AdmissionResult& result);
/// One row per candidate UE: ue,admitted,slack followed by a solve-count row.
std::string admission_to_csv(const AdmissionResult& result, int num_ue);

std::string to_json(const ExperimentConfig& cfg);
/// Fields absent from the document keep their defaults. Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);

/// Sidecar of a sweep: every record with its full solve report.
std::string records_to_json(const std::vector<TrialRecord>& records);

std::string to_string(DualMethod m);
DualMethod dual_method_from_string(const std::string& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace udcran::io
