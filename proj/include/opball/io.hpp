#pragma once

// File formats: JSON matrices {"rows":R,"cols":C,"data":[[re,im],...]}, conjugation
// pair files {"fwd": <matrix>, "bwd": <matrix>}, profile CSV and ensemble report JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "opball/cmat.hpp"
#include "opball/density.hpp"
#include "opball/error.hpp"
#include "opball/symmetry.hpp"

namespace opball::io {

using nlohmann::json;

inline json matrix_to_json(const CMat& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back(json::array({z.real(), z.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw Error(ErrorKind::Parse, "matrix needs rows, cols and data");
  }
  const json& jr = j.at("rows");
  const json& jc = j.at("cols");
  if (!jr.is_number_integer() || !jc.is_number_integer() || jr.get<long long>() < 1 ||
      jc.get<long long>() < 1) {
    throw Error(ErrorKind::Parse, "rows and cols must be positive integers");
  }
  const auto rows = jr.get<std::size_t>();
  const auto cols = jc.get<std::size_t>();
  const json& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw Error(ErrorKind::Parse, "data must hold rows*cols = " + std::to_string(rows * cols) +
                                      " entries");
  }
  std::vector<cplx> entries;
  entries.reserve(data.size());
  for (const json& e : data) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw Error(ErrorKind::Parse, "each entry must be [re, im]");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::Parse, "non-finite entry");
    entries.emplace_back(re, im);
  }
  return CMat(rows, cols, std::move(entries));
}

inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

inline CMat read_matrix(const std::string& path) { return matrix_from_json(parse_json_file(path)); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << text;
}

inline void write_matrix(const std::string& path, const CMat& m) {
  write_text(path, matrix_to_json(m).dump() + "\n");
}

/// Pair file; the side is whichever composition is the identity (source side first).
inline ConjugationPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("fwd") || !j.contains("bwd")) {
    throw Error(ErrorKind::Parse, "pair needs fwd and bwd matrices");
  }
  CMat fwd = matrix_from_json(j.at("fwd"));
  CMat bwd = matrix_from_json(j.at("bwd"));
  try {
    return ConjugationPair(fwd, bwd, PairSide::BwdFwdIsId);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidPair) throw;
  }
  return ConjugationPair(std::move(fwd), std::move(bwd), PairSide::FwdBwdIsId);
}

inline json pair_to_json(const ConjugationPair& pair) {
  return json{{"fwd", matrix_to_json(pair.jfwd())}, {"bwd", matrix_to_json(pair.jbwd())}};
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Column order n,dist,sym_residual,margin is fixed.
inline std::string profile_csv(const ApproxProfile& profile) {
  std::ostringstream out;
  out << "n,dist,sym_residual,margin\n";
  for (const ProfileRow& r : profile.rows) {
    out << r.n << ',' << format_double(r.dist) << ',' << format_double(r.sym_residual) << ','
        << format_double(r.margin) << '\n';
  }
  return out.str();
}

inline json report_to_json(const EnsembleReport& report) {
  json profiles = json::array();
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const TrialResult& t = report.trials[i];
    json rows = json::array();
    for (const ProfileRow& r : t.profile.rows) {
      rows.push_back({{"n", r.n}, {"dist", r.dist}, {"sym_residual", r.sym_residual},
                      {"margin", r.margin}});
    }
    profiles.push_back({{"trial", i},
                        {"seed", t.seed},
                        {"entry_scale", t.entry_scale},
                        {"valid", t.profile.valid()},
                        {"min_at_full_depth", t.profile.min_at_full_depth()},
                        {"violations", t.profile.violations()},
                        {"rows", std::move(rows)}});
  }
  json aggregate = {
      {"trials", report.trials.size()},
      {"valid_trials", report.valid_trials()},
      {"min_at_full_depth_trials", report.min_at_full_depth_trials()},
      {"max_sym_residual", report.max_sym_residual()},
      {"median_dist", report.median_dist()},
      {"median_nonincreasing", report.median_nonincreasing()},
      {"all_valid", report.all_valid()},
  };
  return json{{"dim_h", report.dim_h},
              {"dim_k", report.dim_k},
              {"seed", report.seed},
              {"aggregate", std::move(aggregate)},
              {"profiles", std::move(profiles)}};
}

}  // namespace opball::io
