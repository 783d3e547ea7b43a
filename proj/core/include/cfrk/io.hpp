#ifndef CFRK_IO_HPP
#define CFRK_IO_HPP

#include <optional>
#include <string>

#include "cfrk/generators.hpp"
#include "cfrk/instance.hpp"

namespace cfrk {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Instance document: {k, objective, points:[{id, kind, weight?, capacity?}],
// groups:[{members, lower, upper}], metric:{type, nodes, data|edges, root}}.
// Serialization is canonical (sorted keys, rationals as "p" / "p/q" strings),
// so parse/serialize round-trips are byte-stable.
std::string serialize_instance(const Instance& inst);
Instance parse_instance(const std::string& text);

std::string serialize_solution(const Instance& inst, const Solution& sol);
Solution parse_solution(const Instance& inst, const std::string& text);

// Reduction provenance document written next to generated instances.
std::string serialize_provenance(const ReductionArtifact& art);

// FNV-1a over the canonical serialization; used as the instance digest in
// run reports.
std::uint64_t instance_digest(const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cfrk

#endif  // CFRK_IO_HPP
