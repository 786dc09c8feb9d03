#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace gr2 {

/// On-disk covariance-matrix document. The ordering field is mandatory and
/// must be "q1p1" (interleaved quadratures), so files produced with the
/// blocked (q..q, p..p) convention fail loudly instead of parsing into a
/// permuted state.
struct CmDocument {
  int modes = 0;
  std::string ordering = "q1p1";
  Eigen::MatrixXd matrix;
  std::string label;  // optional
};

/// Parses a document; throws std::runtime_error with a descriptive message
/// on malformed input (bad JSON, wrong ordering, inconsistent dimensions).
CmDocument read_cm_document(std::istream& in);
CmDocument read_cm_document_file(const std::string& path);

/// Serializes with a fixed key order so identical documents are
/// byte-identical.
void write_cm_document(std::ostream& out, const CmDocument& doc);
void write_cm_document_file(const std::string& path, const CmDocument& doc);

}  // namespace gr2
