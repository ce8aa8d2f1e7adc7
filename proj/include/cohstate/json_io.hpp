// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_JSON_IO_HPP
#define COHSTATE_JSON_IO_HPP

#include <json.hpp>

#include "cohstate/families.hpp"
#include "cohstate/fock.hpp"
#include "cohstate/photostats.hpp"
#include "cohstate/quadrature.hpp"

// JSON schemas used by the CLI and the file formats:
//   FamilySpec            {"family": <name>, "params": {...}}
//   XSequence             {"kind": "closed_form", "name": ..., ...} or
//                         {"kind": "table", "values": [...]}
//   VerificationReport    {"target", "residual", "threshold", "passed",
//                          "evaluations"}
//   FockOperator          {"rows", "cols", "data": [[re, im], ...]} row-major
//   complex amplitudes    "a+bi" strings

namespace cohstate::json_io {

using nlohmann::json;

json to_json(const families::FamilySpec& spec);
families::FamilySpec family_from_json(const json& j);

json to_json(const families::XSequence& xs);
families::XSequence xseq_from_json(const json& j);

json to_json(const quadrature::VerificationReport& report);
json to_json(const fock::FockOperator& op);
json to_json(const photostats::PhotonStatistics& stats);

// "a+bi" (also accepts "a", "bi", "i", "-i").
fock::complexd parse_complex(const std::string& text);
std::string format_complex(fock::complexd z);

}  // namespace cohstate::json_io

#endif  // COHSTATE_JSON_IO_HPP
