#ifndef CAUSAL_STRIPS_INSTANCE_IO_H
#define CAUSAL_STRIPS_INSTANCE_IO_H

#include "model.h"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace causal_strips {

/*
  Instance files are JSON objects:
    {"variables": [names], "init": {name: 0|1}, "goal": {name: 0|1},
     "operators": [{"name", "var", "pre", "post"?, "prv": {name: 0|1}}]}
  Unknown keys are rejected. `post`, when present, must be 1 - pre.
*/
class ParseError : public std::runtime_error {
public:
    // JSON path of the offending field ("operators[2].prv.x") or
    // "line N" for syntax and plan-file errors.
    std::string where;
    ParseError(std::string where, const std::string &message)
        : std::runtime_error(where + ": " + message), where(std::move(where)) {
    }
};

Instance parse_instance(const std::string &text);
Instance read_instance_file(const std::filesystem::path &path);
std::string serialize_instance(const Instance &inst);

// One operator name per line; blank lines and '#' comments are ignored.
Plan parse_plan(const std::string &text, const Instance &inst);
Plan read_plan_file(const std::filesystem::path &path, const Instance &inst);
std::string serialize_plan(const Instance &inst, const Plan &plan);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path,
                     const std::string &text);

} // namespace causal_strips

#endif
