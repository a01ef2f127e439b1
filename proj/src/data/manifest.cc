// msvoc/data/manifest.cc

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "msvoc/data/manifest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace msvoc {
namespace data {

void validate_manifest(const Manifest& manifest) {
  std::set<std::string> seen;
  for (const auto& r : manifest.records) {
    if (r.utterance_id.empty())
      throw std::runtime_error("manifest: empty utterance id");
    if (!seen.insert(r.utterance_id).second)
      throw std::runtime_error("manifest: duplicate utterance id " +
                               r.utterance_id);
    if (r.path.empty())
      throw std::runtime_error("manifest: empty path for " + r.utterance_id);
    if (r.singer_id.empty())
      throw std::runtime_error("manifest: empty singer id for " +
                               r.utterance_id);
  }
}

Manifest load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("manifest: cannot open " + path);
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() < 3 || fields.size() > 4)
      throw std::runtime_error("manifest: line " + std::to_string(lineno) +
                               " has " + std::to_string(fields.size()) +
                               " fields, want 3 or 4");
    ManifestRecord r;
    r.utterance_id = fields[0];
    r.path = fields[1];
    r.singer_id = fields[2];
    if (fields.size() == 4) r.transcript = fields[3];
    m.records.push_back(std::move(r));
  }
  validate_manifest(m);
  return m;
}

void save_manifest(const std::string& path, const Manifest& manifest) {
  validate_manifest(manifest);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("manifest: cannot write " + path);
  for (const auto& r : manifest.records) {
    os << r.utterance_id << '\t' << r.path << '\t' << r.singer_id;
    if (!r.transcript.empty()) os << '\t' << r.transcript;
    os << '\n';
  }
}

}  // namespace data
}  // namespace msvoc
