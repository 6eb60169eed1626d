#pragma once

#include <string>

#include "cbp/collapse.hpp"

namespace cbp {

// Shortest round-trip decimal representation.
std::string format_double(double v);

// "source,target,multiplicity" rows, 1-based vertex ids, LF line endings.
std::string edges_csv(const Multigraph& graph);
void write_edges_csv(const Multigraph& graph, const std::string& path);

// "k,count,fraction" rows over k = 0..max observed.
std::string degrees_csv(const std::vector<std::uint64_t>& histogram);
void write_degrees_csv(const std::vector<std::uint64_t>& histogram,
                       const std::string& path);

// "id,parent_id,birth_time" rows, one per individual; the root's parent field
// is empty.
std::string birth_log_csv(const BirthLog& log);
void write_birth_log_csv(const BirthLog& log, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cbp
