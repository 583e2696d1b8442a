// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "neimkit/run_config.hpp"

namespace neimkit {

/// Solve the high-fidelity problem at every training parameter and write
/// <out>/snapshots.csv.
void cmd_snapshots(const RunConfig& config);

/// Read the snapshot file, build POD + DEIM + NEIM (and the exact-mode twin
/// when configured), write <out>/model.json and <out>/training_log.csv.
void cmd_train(const RunConfig& config);

/// Read the model file and emit the error tables over the test sweep:
/// <out>/errors.csv (method, mode_count, avg_abs_error) and
/// <out>/per_parameter_errors.csv (method, mode_count, mu, abs_error).
void cmd_report(const RunConfig& config);

}  // namespace neimkit
