#pragma once

/// @file io.hpp
/// @brief JSON, CSV and DOT formats shared by the command-line tool and tests.

#include "donaldson/cabling.hpp"
#include "donaldson/classify.hpp"
#include "donaldson/lattice.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace donaldson::io {

/// Malformed input document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"vertices":[{"id":int,"weight":int}],"edges":[[int,int]]}
std::string tree_to_json(const plumbing::WeightedTree& t, int indent = -1);
plumbing::WeightedTree tree_from_json(const std::string& text);

/// {"pairs":[[p1,a1],[p2,a2]],"n":int}
std::string spec_to_json(const cabling::SurgerySpec& s, int indent = -1);
cabling::SurgerySpec spec_from_json(const std::string& text);

/// {"rank":r,"vectors":[[...],...]}
std::string witness_to_json(const lattice::EmbeddingMatrix& m, int indent = -1);
lattice::EmbeddingMatrix witness_from_json(const std::string& text);

/// Graphviz rendering with weights as labels and, when given, centipede roles.
std::string to_dot(const plumbing::WeightedTree& t, const std::map<plumbing::VertexId, cabling::Role>& roles = {});

std::string csv_header();
/// One CSV line (no newline).  `ms` is left empty unless `timing` is set.
std::string csv_row(const classify::SweepRow& row, const std::string& witness_file, bool timing);

std::string audit_to_json(const classify::AuditReport& r, int indent = 2);

/// File-name stem used for a spec's witness, e.g. "witness_2_3_2_17_36".
std::string witness_stem(const cabling::SurgerySpec& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace donaldson::io
