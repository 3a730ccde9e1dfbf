#include "csfs/model_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "csfs/error.hpp"
#include "csfs/text_format.hpp"

namespace csfs {

void write_model(std::ostream& out, const Model& model) {
  const auto& W = model.W;
  out << W.rows() << ' ' << W.cols() << '\n';
  for (Index j = 0; j < W.rows(); ++j) {
    for (Index k = 0; k < W.cols(); ++k) out << (k ? " " : "") << format_real(W(j, k));
    out << '\n';
  }
  const auto& m = model.meta;
  out << "lambda " << format_real(m.lambda) << '\n'
      << "r " << format_real(m.r) << '\n'
      << "beta " << format_real(m.beta) << '\n'
      << "zeta " << format_real(m.zeta) << '\n'
      << "seed " << m.seed << '\n'
      << "iterations " << m.iterations << '\n'
      << "objective " << format_real(m.objective) << '\n'
      << "bias " << (m.has_bias_row ? 1 : 0) << '\n';
}

void write_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_model(out, model);
}

Model read_model(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(line_no, "empty model file");
  const auto dims = split_fields(trim(line), ' ');
  if (dims.size() != 2) throw ParseError(line_no, "expected header 'd m'");
  const auto d = parse_integer(dims[0]);
  const auto m = parse_integer(dims[1]);
  if (!d || !m || *d < 1 || *m < 1) throw ParseError(line_no, "bad model dimensions");

  Model model;
  model.W.resize(*d, *m);
  for (Index j = 0; j < *d; ++j) {
    if (!next_line()) throw ParseError(line_no, "model ends before row " + std::to_string(j + 1));
    const auto fields = split_fields(trim(line), ' ');
    if (static_cast<long long>(fields.size()) != *m)
      throw ParseError(line_no, "expected " + std::to_string(*m) + " values");
    for (Index k = 0; k < *m; ++k) {
      const auto v = parse_real(fields[static_cast<std::size_t>(k)]);
      if (!v) throw ParseError(line_no, "bad value '" + std::string(fields[static_cast<std::size_t>(k)]) + "'");
      model.W(j, k) = *v;
    }
  }

  auto& meta = model.meta;
  while (next_line()) {
    const auto fields = split_fields(trim(line), ' ');
    if (fields.size() != 2) throw ParseError(line_no, "expected 'key value'");
    const auto key = fields[0];
    const auto value = fields[1];
    auto real = [&]() {
      const auto v = parse_real(value);
      if (!v) throw ParseError(line_no, "bad value for " + std::string(key));
      return *v;
    };
    auto integer = [&]() {
      const auto v = parse_integer(value);
      if (!v) throw ParseError(line_no, "bad value for " + std::string(key));
      return *v;
    };
    if (key == "lambda") meta.lambda = real();
    else if (key == "r") meta.r = real();
    else if (key == "beta") meta.beta = real();
    else if (key == "zeta") meta.zeta = real();
    else if (key == "seed") {
      const auto v = parse_unsigned(value);
      if (!v) throw ParseError(line_no, "bad value for seed");
      meta.seed = *v;
    }
    else if (key == "iterations") meta.iterations = static_cast<int>(integer());
    else if (key == "objective") meta.objective = real();
    else if (key == "bias") meta.has_bias_row = integer() != 0;
    else throw ParseError(line_no, "unknown metadata key '" + std::string(key) + "'");
  }
  return model;
}

Model read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace csfs
