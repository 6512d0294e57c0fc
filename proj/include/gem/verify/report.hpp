// SPDX-FileCopyrightText: © 2026 The GEM Activations Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "gem/csv.hpp"

namespace gem::verify {

struct CheckRow {
  std::string check_id;
  std::string inputs;
  double expected = 0;
  double got = 0;
  double abs_err = 0;
  double rel_err = 0;
  bool pass = false;
};

/// Passes when |got - expected| ≤ abs_tol, or ≤ rel_tol·scale. `scale`
/// defaults to |expected|; callers comparing values that may vanish pass the
/// natural magnitude of the quantity instead.
inline CheckRow make_check(std::string id, std::string inputs, double expected, double got, double abs_tol,
                           double rel_tol, double scale = -1.0) {
  CheckRow row{std::move(id), std::move(inputs), expected, got, 0, 0, false};
  row.abs_err = std::abs(got - expected);
  const double s = scale >= 0 ? scale : std::abs(expected);
  row.rel_err = s > 0 ? row.abs_err / s : (row.abs_err == 0 ? 0.0 : INFINITY);
  row.pass = std::isfinite(got) && (row.abs_err <= abs_tol || row.abs_err <= rel_tol * s);
  return row;
}

/// A check that is true or false, eg an expected error being raised.
inline CheckRow make_flag(std::string id, std::string inputs, bool ok) {
  return CheckRow{std::move(id), std::move(inputs), 1.0, ok ? 1.0 : 0.0, ok ? 0.0 : 1.0, ok ? 0.0 : 1.0, ok};
}

inline std::string report_header() { return "check_id,inputs,expected,got,abs_err,rel_err,pass"; }

inline std::string to_csv_row(const CheckRow& r) {
  return csv::field(r.check_id) + ',' + csv::field(r.inputs) + ',' + csv::number(r.expected) + ',' +
         csv::number(r.got) + ',' + csv::number(r.abs_err) + ',' + csv::number(r.rel_err) + ',' +
         (r.pass ? "pass" : "fail");
}

inline void write_report(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << report_header() << '\n';
  for (const auto& r : rows) out << to_csv_row(r) << '\n';
}

inline bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

}  // namespace gem::verify
