#include "cbp/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cbp {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string edges_csv(const Multigraph& graph) {
    std::string out = "source,target,multiplicity\n";
    for (const auto& e : graph.edges) {
        out += std::to_string(e.source);
        out += ',';
        out += std::to_string(e.target);
        out += ',';
        out += std::to_string(e.multiplicity);
        out += '\n';
    }
    return out;
}

void write_edges_csv(const Multigraph& graph, const std::string& path) {
    write_text_file(path, edges_csv(graph));
}

std::string degrees_csv(const std::vector<std::uint64_t>& histogram) {
    std::uint64_t total = 0;
    for (std::uint64_t c : histogram) total += c;
    std::string out = "k,count,fraction\n";
    for (std::size_t k = 0; k < histogram.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += std::to_string(histogram[k]);
        out += ',';
        out += format_double(total == 0 ? 0.0
                                        : static_cast<double>(histogram[k]) /
                                              static_cast<double>(total));
        out += '\n';
    }
    return out;
}

void write_degrees_csv(const std::vector<std::uint64_t>& histogram,
                       const std::string& path) {
    write_text_file(path, degrees_csv(histogram));
}

std::string birth_log_csv(const BirthLog& log) {
    std::string out = "id,parent_id,birth_time\n";
    for (const auto& ind : log.individuals) {
        out += std::to_string(ind.id);
        out += ',';
        if (ind.parent_id != 0) out += std::to_string(ind.parent_id);
        out += ',';
        out += format_double(ind.birth_time);
        out += '\n';
    }
    return out;
}

void write_birth_log_csv(const BirthLog& log, const std::string& path) {
    write_text_file(path, birth_log_csv(log));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write to " + path);
}

}  // namespace cbp
