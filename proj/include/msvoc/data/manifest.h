// msvoc/data/manifest.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#ifndef MSVOC_DATA_MANIFEST_H_
#define MSVOC_DATA_MANIFEST_H_

#include <string>
#include <vector>

namespace msvoc {
namespace data {

struct ManifestRecord {
  std::string utterance_id;
  std::string path;
  std::string singer_id;
  std::string transcript;  // optional fourth column
};

// Line-delimited UTF-8, tab-separated: utterance_id, path, singer_id and an
// optional transcript. Utterance ids must be unique, singer ids nonempty.
struct Manifest {
  std::vector<ManifestRecord> records;
};

Manifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const Manifest& manifest);

// Uniqueness / nonemptiness checks shared by load and save.
void validate_manifest(const Manifest& manifest);

}  // namespace data
}  // namespace msvoc

#endif  // MSVOC_DATA_MANIFEST_H_
