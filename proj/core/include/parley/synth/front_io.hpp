#pragma once

#include <iosfwd>
#include <string>

#include "parley/synth/front.hpp"

namespace parley::synth {

/// CSV `policy_id,<objective names...>` with one row per point.
void write_front_csv(const ParetoFront& front, std::ostream& out);
/// JSON sidecar: objectives (name, property, sense) and policy_id -> parameters.
void write_front_json(const ParetoFront& front, std::ostream& out);

/// Writes `path` and `<path without .csv>.json`.
void save_front(const ParetoFront& front, const std::string& csv_path);
std::string sidecar_path(const std::string& csv_path);

/// Reads a CSV; policies come from the sidecar when it exists. Objectives
/// named `success` are maximised, all others minimised, unless the sidecar
/// says otherwise. Throws InputError on malformed input.
ParetoFront load_front(const std::string& csv_path);
ParetoFront read_front_csv(std::istream& csv, std::istream* sidecar = nullptr);

} // namespace parley::synth
