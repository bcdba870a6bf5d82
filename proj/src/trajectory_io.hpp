#pragma once

#include <string>

#include "inference.hpp"
#include "mc.hpp"
#include "modes.hpp"

namespace wavemle {

// Trajectory CSV: header "t,k,u,v", one row per grid point per mode, modes in
// ascending k, full 17-significant-digit decimals so doubles round-trip
// bit-exactly.  The JSON sidecar carries params, grid, seed and scheme.
void write_field_csv(const FieldTrajectory& field, const std::string& csv_path);
void write_field_sidecar(const FieldTrajectory& field, const std::string& json_path);
FieldTrajectory read_field(const std::string& csv_path, const std::string& sidecar_path);

// Study CSV: "N,rep,theta1_hat,theta2_hat,z1,z2,D_N,failed".
void write_study_csv(const StudyResult& result, const std::string& path);

// Summary document: config echo, per-N aggregates, slopes; the timestamp (the
// only non-reproducible field) lives in "metadata" so comparisons can drop it.
std::string summary_json(const StudyResult& result, bool with_timestamp = true);
void write_summary_json(const StudyResult& result, const std::string& path,
                        bool with_timestamp = true);

std::string estimate_json(const Estimate& estimate, const SufficientStats& stats);

const char* scheme_name(Scheme scheme);
const char* j12_route_name(J12Route route);
const char* b2_route_name(B2Route route);
const char* normalization_name(Normalization normalization);

}  // namespace wavemle
