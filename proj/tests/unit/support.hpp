#pragma once

#include "valueramp/gridworld.hpp"
#include "valueramp/task.hpp"
#include "valueramp/task_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace test {

inline std::string data_path(const std::string& relative) {
    return std::string(VALUERAMP_DATA_DIR) + "/" + relative;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline valueramp::TaskModel load_task(const std::string& name) {
    return valueramp::load_graph_task(slurp(data_path("tasks/" + name)));
}

inline valueramp::GridMap load_map(const std::string& name) {
    return valueramp::parse_map(slurp(data_path("maps/" + name)));
}

inline valueramp::TaskModel compile_map(const valueramp::GridMap& map) {
    valueramp::GridSemantics semantics;
    semantics.variant = map.declared_variant().value_or(valueramp::GridVariant::dc);
    return valueramp::compile(map, semantics);
}

inline valueramp::StateId S(std::size_t i) { return valueramp::StateId(i); }
inline valueramp::ActionId A(std::size_t i) { return valueramp::ActionId(i); }

}  // namespace test
