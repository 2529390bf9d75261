#ifndef MOMSEC_MODEL_IO_HPP
#define MOMSEC_MODEL_IO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "momsec/gallery.hpp"

namespace momsec {

/// Input error (schema violation, expression parse error, shape mismatch).
/// `path` points into the document.
struct ModelError : std::runtime_error {
  std::string path;
  ModelError(std::string msg, std::string p)
      : std::runtime_error(std::move(msg)), path(std::move(p)) {}
};

struct RunConfig {
  double tolerance = 1e-9;
  int sample_points = 32;
  std::uint64_t seed = 42;
};

/// Validated in-memory form of a model file: every expression parsed
/// eagerly, every declared degree checked against the array shapes.
struct ModelDocument {
  LieAlgebroidModel model;
  ConnectionData conn;
  std::optional<LieAlgebraData> algebra;
  std::optional<PrePlecticForm> plectic;
  std::optional<MomentumData> mu;
  std::optional<SigmaTargetData> sigma;
  std::vector<std::string> checks;
  RunConfig config;
};

ModelDocument load_model(const std::string& path);
ModelDocument load_model_text(const std::string& json_text);

/// Serialization of a gallery instance into the model-file schema;
/// loading the result reproduces the same checks and report.
std::string to_model_json(const GalleryInstance& g, const RunConfig& cfg);

ModelDocument document_of(const GalleryInstance& g, const RunConfig& cfg);

}  // namespace momsec

#endif
