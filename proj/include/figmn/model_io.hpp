#pragma once

#include <string>

#include "figmn/mixture.hpp"

namespace figmn {

/// ModelFile serialization. UTF-8 JSON, version-tagged; reals keep their
/// shortest round-trip-exact decimal representation.
std::string model_to_json(const MixtureModel& model);
MixtureModel model_from_json(const std::string& text);

void save_model(const MixtureModel& model, const std::string& path);
MixtureModel load_model(const std::string& path);

} // namespace figmn
