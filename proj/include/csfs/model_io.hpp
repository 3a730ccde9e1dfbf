#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "csfs/types.hpp"

namespace csfs {

struct ModelMetadata {
  double lambda = 0.0;
  double r = 0.0;
  double beta = 1.0;
  double zeta = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double objective = 0.0;
  bool has_bias_row = false;
};

struct Model {
  Matrix W;
  ModelMetadata meta;
};

/// Text layout:
///   d m
///   d lines of m reals
///   key value      (lambda, r, beta, zeta, seed, iterations, objective, bias)
void write_model(std::ostream& out, const Model& model);
void write_model(const std::filesystem::path& path, const Model& model);
Model read_model(std::istream& in);
Model read_model(const std::filesystem::path& path);

}  // namespace csfs
