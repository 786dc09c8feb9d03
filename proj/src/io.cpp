#include "gr2/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gr2 {

CmDocument read_cm_document(std::istream& in) {
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("cm document: invalid JSON: ") +
                             e.what());
  }
  if (!root.is_object()) {
    throw std::runtime_error("cm document: top level must be an object");
  }
  CmDocument doc;
  if (!root.contains("modes") || !root["modes"].is_number_integer()) {
    throw std::runtime_error("cm document: missing integer field 'modes'");
  }
  doc.modes = root["modes"].get<int>();
  if (doc.modes < 1) {
    throw std::runtime_error("cm document: 'modes' must be >= 1");
  }
  if (!root.contains("ordering") || !root["ordering"].is_string()) {
    throw std::runtime_error("cm document: missing string field 'ordering'");
  }
  doc.ordering = root["ordering"].get<std::string>();
  if (doc.ordering != "q1p1") {
    throw std::runtime_error(
        "cm document: unsupported ordering '" + doc.ordering +
        "' (this format stores interleaved quadratures, ordering \"q1p1\")");
  }
  if (!root.contains("matrix") || !root["matrix"].is_array()) {
    throw std::runtime_error("cm document: missing array field 'matrix'");
  }
  const int dim = 2 * doc.modes;
  const auto& rows = root["matrix"];
  if (static_cast<int>(rows.size()) != dim) {
    throw std::runtime_error("cm document: matrix must have 2*modes rows");
  }
  doc.matrix.resize(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw std::runtime_error(
          "cm document: every matrix row must have 2*modes entries");
    }
    for (int c = 0; c < dim; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw std::runtime_error("cm document: matrix entries must be "
                                 "numbers");
      }
      doc.matrix(r, c) = cell.get<double>();
    }
  }
  if (root.contains("label")) {
    if (!root["label"].is_string()) {
      throw std::runtime_error("cm document: 'label' must be a string");
    }
    doc.label = root["label"].get<std::string>();
  }
  return doc;
}

CmDocument read_cm_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cm document: cannot open '" + path + "'");
  }
  return read_cm_document(in);
}

void write_cm_document(std::ostream& out, const CmDocument& doc) {
  nlohmann::ordered_json root;
  root["modes"] = doc.modes;
  root["ordering"] = doc.ordering;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < doc.matrix.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < doc.matrix.cols(); ++c) {
      row.push_back(doc.matrix(r, c));
    }
    rows.push_back(std::move(row));
  }
  root["matrix"] = std::move(rows);
  if (!doc.label.empty()) {
    root["label"] = doc.label;
  }
  out << root.dump(2) << "\n";
}

void write_cm_document_file(const std::string& path, const CmDocument& doc) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cm document: cannot open '" + path +
                             "' for writing");
  }
  write_cm_document(out, doc);
}

}  // namespace gr2
