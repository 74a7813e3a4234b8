#pragma once

#include <string>
#include <string_view>

#include "dualkern/skeleton.hpp"

namespace dualkern {

// Skeleton description language (.skel), one directive per line, '#' starts
// a comment:
//
//   inputs n=<int> dim=<int>                       required, first
//   bias beta=<float in [0,1]>                     optional, before layers
//   conv width=<int> stride=<int> activation=<act> [delta=<float>]
//   fc activation=<act> [delta=<float>]            last layer must be fc
//
// <act> is identity | relu | step | exp(a=<float>) | sin(a=<float>) | hermite(n=<int>).

/// Parses the layer list without building the DAG. Throws ParseError.
LayeredSpec parse_layered(std::string_view text);

/// Parses and builds a validated skeleton. Structural problems (tiling,
/// multiple sinks) are reported as ParseError on the offending line.
Skeleton parse_skeleton(std::string_view text);

/// Canonical DSL text; parse_layered(to_dsl(s)) == s.
std::string to_dsl(const LayeredSpec& spec);

/// DSL text of a skeleton built from layers; throws InvalidArgument otherwise.
std::string serialize(const Skeleton& skeleton);

Skeleton load_skeleton(const std::string& path);

/// Parses one activation token such as "relu" or "exp(a=0.5)" into the normalized member.
Activation parse_activation_token(std::string_view token);

}  // namespace dualkern
