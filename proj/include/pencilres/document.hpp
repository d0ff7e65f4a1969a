#pragma once

#include "pencilres/zoo.hpp"

namespace pencilres {

/// Parsed form of the single-document CLI input.  Complex scalars are always
/// [re, im] pairs in the JSON; bare reals are rejected.
struct PencilDocument {
  std::optional<std::pair<Mat, Mat>> inline_pencil;  // {a0, a1}
  std::optional<FamilySpec> family;
  Tolerances tolerances;
  std::optional<Annulus> annulus_hint;
  std::vector<Complex> samples;

  bool has_pencil() const { return inline_pencil.has_value() || family.has_value(); }
};

PencilDocument parse_document(const std::string& json_text);
std::string write_document(const PencilDocument& doc);

/// Document wrapping a dense pencil verbatim (round-trips bit-exactly).
PencilDocument document_from_pencil(const OperatorPencil& p);

/// Builds the operator pencil the document describes.
OperatorPencil realize(const PencilDocument& doc);

}  // namespace pencilres
