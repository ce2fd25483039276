#include "causal_strips/instance_io.h"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace std;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace causal_strips {

namespace {
size_t line_of(const string &text, size_t byte) {
    byte = min(byte, text.size());
    return 1 + count(text.begin(), text.begin() + byte, '\n');
}

void expect_keys(const json &obj, const string &where,
                 const set<string> &required, const set<string> &optional) {
    if (!obj.is_object())
        throw ParseError(where, "expected an object");
    for (const auto &[key, value] : obj.items())
        if (!required.count(key) && !optional.count(key))
            throw ParseError(where.empty() ? key : where + "." + key,
                             "unknown key");
    for (const string &key : required)
        if (!obj.contains(key))
            throw ParseError(where.empty() ? key : where + "." + key,
                             "missing key");
}

Value bit_value(const json &j, const string &where) {
    if (j.is_number_integer()) {
        auto x = j.get<long long>();
        if (x == 0 || x == 1)
            return value_from_bool(x == 1);
    }
    throw ParseError(where, "expected 0 or 1");
}

string name_value(const json &j, const string &where) {
    if (!j.is_string())
        throw ParseError(where, "expected a string");
    return j.get<string>();
}

VarId lookup(const Instance &inst, const string &name, const string &where) {
    auto v = inst.find_variable(name);
    if (!v)
        throw ParseError(where, "unknown variable '" + name + "'");
    return *v;
}

vector<pair<VarId, Value>> assignment(const Instance &inst, const json &obj,
                                      const string &where) {
    if (!obj.is_object())
        throw ParseError(where, "expected an object mapping names to 0/1");
    vector<pair<VarId, Value>> result;
    for (const auto &[key, value] : obj.items()) {
        string path = where + "." + key;
        result.emplace_back(lookup(inst, key, path), bit_value(value, path));
    }
    return result;
}
} // namespace

Instance parse_instance(const string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError("line " + to_string(line_of(text, e.byte)),
                         "malformed JSON");
    }
    expect_keys(doc, "", {"variables", "init", "operators"}, {"goal"});

    Instance inst;
    const json &vars = doc["variables"];
    if (!vars.is_array())
        throw ParseError("variables", "expected an array of names");
    set<string> seen;
    for (size_t i = 0; i < vars.size(); ++i) {
        string where = "variables[" + to_string(i) + "]";
        string name = name_value(vars[i], where);
        if (name.empty())
            throw ParseError(where, "empty variable name");
        if (!seen.insert(name).second)
            throw ParseError(where, "duplicate variable '" + name + "'");
        inst.variables.push_back(name);
    }
    const size_t n = inst.num_variables();

    inst.init.assign(n, Value::unspecified);
    for (auto [v, value] : assignment(inst, doc["init"], "init"))
        inst.init[v.index] = value;
    for (size_t v = 0; v < n; ++v)
        if (!is_specified(inst.init[v]))
            throw ParseError("init." + inst.variables[v], "missing value");

    inst.goal.assign(n, Value::unspecified);
    if (doc.contains("goal"))
        for (auto [v, value] : assignment(inst, doc["goal"], "goal"))
            inst.goal[v.index] = value;

    const json &ops = doc["operators"];
    if (!ops.is_array())
        throw ParseError("operators", "expected an array");
    set<string> op_names;
    for (size_t i = 0; i < ops.size(); ++i) {
        const string where = "operators[" + to_string(i) + "]";
        const json &o = ops[i];
        expect_keys(o, where, {"name", "var", "pre", "prv"}, {"post"});
        Operator op;
        op.name = name_value(o["name"], where + ".name");
        if (op.name.empty())
            throw ParseError(where + ".name", "empty operator name");
        if (!op_names.insert(op.name).second)
            throw ParseError(where + ".name",
                             "duplicate operator '" + op.name + "'");
        op.var = lookup(inst, name_value(o["var"], where + ".var"),
                        where + ".var");
        op.pre = bit_value(o["pre"], where + ".pre");
        op.post = complement(op.pre);
        if (o.contains("post") && bit_value(o["post"], where + ".post") != op.post)
            throw ParseError(where + ".post", "must equal 1 - pre");
        for (auto [v, value] : assignment(inst, o["prv"], where + ".prv")) {
            if (v == op.var)
                throw ParseError(where + ".prv." + inst.variables[v.index],
                                 "prevail on the affected variable");
            op.prv.push_back({v, value});
        }
        sort(op.prv.begin(), op.prv.end());
        inst.operators.push_back(move(op));
    }
    return inst;
}

Instance read_instance_file(const filesystem::path &path) {
    return parse_instance(read_text_file(path));
}

string serialize_instance(const Instance &inst) {
    ordered_json doc;
    doc["variables"] = inst.variables;
    ordered_json init = ordered_json::object();
    ordered_json goal = ordered_json::object();
    for (size_t v = 0; v < inst.num_variables(); ++v) {
        init[inst.variables[v]] = inst.init[v] == Value::one ? 1 : 0;
        if (is_specified(inst.goal[v]))
            goal[inst.variables[v]] = inst.goal[v] == Value::one ? 1 : 0;
    }
    doc["init"] = init;
    doc["goal"] = goal;
    ordered_json ops = ordered_json::array();
    for (const Operator &op : inst.operators) {
        ordered_json o;
        o["name"] = op.name;
        o["var"] = inst.variables[op.var.index];
        o["pre"] = op.pre == Value::one ? 1 : 0;
        o["post"] = op.post == Value::one ? 1 : 0;
        ordered_json prv = ordered_json::object();
        for (const Condition &c : op.prv)
            prv[inst.variables[c.var.index]] = c.value == Value::one ? 1 : 0;
        o["prv"] = prv;
        ops.push_back(o);
    }
    doc["operators"] = ops;
    return doc.dump(2) + "\n";
}

Plan parse_plan(const string &text, const Instance &inst) {
    Plan plan;
    istringstream in(text);
    string line;
    size_t line_no = 0;
    while (getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        string name = line.substr(first, last - first + 1);
        auto op = inst.find_operator(name);
        if (!op)
            throw ParseError("line " + to_string(line_no),
                             "unknown operator '" + name + "'");
        plan.push_back(*op);
    }
    return plan;
}

Plan read_plan_file(const filesystem::path &path, const Instance &inst) {
    return parse_plan(read_text_file(path), inst);
}

string serialize_plan(const Instance &inst, const Plan &plan) {
    string text;
    for (OpIndex i : plan)
        text += inst.operators.at(i).name + "\n";
    return text;
}

string read_text_file(const filesystem::path &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw ParseError(path.string(), "cannot open file");
    ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const filesystem::path &path, const string &text) {
    ofstream out(path, ios::binary);
    if (!out || !(out << text))
        throw runtime_error("cannot write " + path.string());
}

} // namespace causal_strips
