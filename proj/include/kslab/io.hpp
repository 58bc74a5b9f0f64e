#pragma once

#include <string>

#include "json.hpp"

#include "kslab/bv.hpp"
#include "kslab/covers.hpp"
#include "kslab/energy.hpp"
#include "kslab/field.hpp"
#include "kslab/space.hpp"

namespace kslab {

using json = nlohmann::json;

// Space files: CSV `id,c0[,c1,...],weight` for coordinate spaces. A JSON
// sidecar at `<path>.json` may declare `{ "metric": "torus", "period": [...] }`.
// Explicit tables load from JSON `{ "metric": "table", "d": [[...]], "w": [...] }`.
PointCloudSpace load_space(const std::string& path);
void save_space_csv(const PointCloudSpace& space, const std::string& path);

// Field files: CSV `id,value`.
ScalarField load_field(const PointCloudSpace& space, const std::string& path);
void save_field_csv(const ScalarField& field, const std::string& path);

// Net export: { "eps": e, "centers": [...] }.
json net_to_json(const EpsNet& net);
// Partition export: sparse CSV `center_id,point_id,value`.
void save_partition_csv(const PartitionOfUnity& pou, const std::string& path);

json sweep_to_json(const EnergySweep& sweep);

// Parses "circle:N", "interval:N", "torus2:NXxNY", "random:N:seed[:sampler]",
// or falls through to load_space(path).
PointCloudSpace make_space(const std::string& spec);

void write_text_file(const std::string& path, const std::string& content);

} // namespace kslab
