// Copyright 2026 The tslot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// tslot: build, check and simulate time-slotted measurement schedules on a
// line network, and sweep T* over distance and slot length.
//
// Exit codes: 0 ok, 1 invalid schedule, 2 verification failed (ambiguity,
// missing feedback, wrong state), 3 bad configuration.

#include "tslot/scheduler.hpp"
#include "tslot/simulator.hpp"
#include "tslot/sweep.hpp"
#include "tslot/temporal.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace tslot;

constexpr int EXIT_INVALID_SCHEDULE = 1;
constexpr int EXIT_VERIFY_FAILED = 2;
constexpr int EXIT_CONFIG = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a subcommand may read. Flags land here first; a --config file
// only fills fields that are still empty.
struct RunConfig {
    std::optional<std::string> config_path;
    std::optional<std::string> task;
    std::optional<std::size_t> n;
    std::optional<std::string> tq;
    std::optional<std::string> mode;
    std::optional<std::string> distances;
    std::optional<std::string> tqs;
    std::optional<std::string> extra_tq;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::string> profile;
    std::optional<std::string> schedule;
    std::optional<std::string> gnuplot;
    std::optional<unsigned> threads;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::optional<std::string> &path, const std::string &text) {
    if (!path || *path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(*path);
    if (!out) {
        throw ConfigError("cannot write '" + *path + "'");
    }
    out << text;
}

// JSON values may be strings or the natural JSON type; flags are strings.
std::string as_flag_text(const nlohmann::json &v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_array()) {
        std::string out;
        for (const auto &x : v) {
            if (!out.empty()) {
                out += ',';
            }
            out += as_flag_text(x);
        }
        return out;
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<std::int64_t>());
    }
    throw ConfigError("unsupported config value " + v.dump());
}

void merge_config_file(RunConfig &cfg) {
    if (!cfg.config_path) {
        return;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(*cfg.config_path));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    auto fill = [](auto &field, const nlohmann::json &v) {
        if (!field) {
            field = as_flag_text(v);
        }
    };
    for (const auto &[key, v] : j.items()) {
        if (key == "task") {
            fill(cfg.task, v);
        } else if (key == "n") {
            if (!cfg.n) {
                cfg.n = v.get<std::size_t>();
            }
        } else if (key == "t_q" || key == "tq") {
            fill(cfg.tq, v);
        } else if (key == "mode") {
            fill(cfg.mode, v);
        } else if (key == "distances") {
            fill(cfg.distances, v);
        } else if (key == "tqs") {
            fill(cfg.tqs, v);
        } else if (key == "extra_tq") {
            fill(cfg.extra_tq, v);
        } else if (key == "seed") {
            if (!cfg.seed) {
                cfg.seed = v.get<std::uint64_t>();
            }
        } else if (key == "output") {
            fill(cfg.output, v);
        } else if (key == "format") {
            fill(cfg.format, v);
        } else if (key == "profile") {
            fill(cfg.profile, v);
        } else if (key == "schedule") {
            fill(cfg.schedule, v);
        } else if (key == "gnuplot") {
            fill(cfg.gnuplot, v);
        } else if (key == "threads") {
            if (!cfg.threads) {
                cfg.threads = v.get<unsigned>();
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

template <typename T>
const T &require(const std::optional<T> &v, const char *flag) {
    if (!v) {
        throw ConfigError(std::string("missing required option ") + flag);
    }
    return *v;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    return out;
}

std::int64_t parse_int_strict(const std::string &s) {
    try {
        std::size_t used = 0;
        auto v = std::stoll(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception &) {
        throw ConfigError("expected an integer, got '" + s + "'");
    }
}

Task parse_task(const std::string &text) {
    auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw ConfigError("--task expects s,r");
    }
    auto s = parse_int_strict(parts[0]), r = parse_int_strict(parts[1]);
    if (s < 1 || r < 1) {
        throw ConfigError("node ids start at 1");
    }
    try {
        return Task(NodeId(s), NodeId(r));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

Rational parse_tq(const std::string &text) {
    Rational q;
    try {
        q = parse_rational(text);
    } catch (const std::exception &) {
        throw ConfigError("t_q must be p or p/q, got '" + text + "'");
    }
    if (q <= Rational(0)) {
        throw ConfigError("t_q must be positive");
    }
    return q;
}

// "2..12", "2,3,5" or a mix such as "2..4,8".
std::vector<std::int64_t> parse_distances(const std::string &text) {
    std::vector<std::int64_t> out;
    for (const auto &part : split(text, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int_strict(part));
        } else {
            auto lo = parse_int_strict(part.substr(0, dots)), hi = parse_int_strict(part.substr(dots + 2));
            if (hi < lo) {
                throw ConfigError("empty distance range '" + part + "'");
            }
            for (auto d = lo; d <= hi; d++) {
                out.push_back(d);
            }
        }
    }
    if (out.empty()) {
        throw ConfigError("empty distance list");
    }
    for (auto d : out) {
        if (d < 1) {
            throw ConfigError("distances must be >= 1");
        }
    }
    return out;
}

std::vector<Rational> parse_tq_list(const std::string &text) {
    std::vector<Rational> out;
    for (const auto &part : split(text, ',')) {
        out.push_back(parse_tq(part));
    }
    return out;
}

SweepMode parse_sweep_mode(const std::optional<std::string> &m) {
    if (!m || *m == "parallel") {
        return SweepMode::Parallel;
    }
    if (*m == "sequential") {
        return SweepMode::Sequential;
    }
    throw ConfigError("sweep mode must be sequential or parallel");
}

std::string format_of(const RunConfig &cfg) {
    auto f = cfg.format.value_or("csv");
    if (f != "csv" && f != "json") {
        throw ConfigError("format must be csv or json");
    }
    return f;
}

Graph network_for(const RunConfig &cfg, const Task &task) {
    auto n = cfg.n.value_or(std::max(task.source, task.receiver));
    if (n < std::max(task.source, task.receiver)) {
        throw ConfigError("task endpoints exceed network size " + std::to_string(n));
    }
    if (n + 1 > MAX_QUBITS) {
        throw ConfigError("network too large for the stabilizer oracle (n <= " + std::to_string(MAX_QUBITS - 1) + ")");
    }
    return line_network(n);
}

ScheduleResult build_schedule(const std::string &mode, const Task &task, const Graph &g0, const SlotModel &model) {
    if (mode == "sequential") {
        return sequential_schedule(task, g0, model);
    }
    if (model.t_q < Rational(1)) {
        throw ConfigError("t_q must be >= 1 for " + mode + " scheduling");
    }
    if (mode == "parallel") {
        return parallel_schedule(task, g0, model);
    }
    if (mode == "brute") {
        auto bf = brute_force_min_slots(task, g0, model);
        ScheduleResult res;
        res.schedule = bf.witness;
        res.t_star = bf.t_star;
        auto layout = task_layout(task, g0);
        for (auto a : layout.inner) {
            res.inner_slots = std::max(res.inner_slots, bf.witness.assignments.at(a).slot);
        }
        for (auto a : layout.outer) {
            res.outer_slots = std::max(res.outer_slots.value_or(0), bf.witness.assignments.at(a).slot);
        }
        return res;
    }
    throw ConfigError("mode must be sequential, parallel or brute");
}

void print_summary(const ScheduleResult &res) {
    if (res.schedule.measuring_nodes().empty()) {
        std::cerr << "warning: no measuring nodes\n";
    }
    std::cerr << "T*=" << res.t_star << " inner=" << res.inner_slots;
    if (res.outer_slots) {
        std::cerr << " outer=" << *res.outer_slots;
    }
    std::cerr << "\n";
}

int cmd_schedule(const RunConfig &cfg) {
    auto task = parse_task(require(cfg.task, "--task"));
    auto g0 = network_for(cfg, task);
    SlotModel model{parse_tq(cfg.tq.value_or("1"))};
    auto res = build_schedule(cfg.mode.value_or("parallel"), task, g0, model);
    auto violations = validate(res.schedule, task, g0, model);
    write_output(cfg.output, schedule_to_string(ScheduleFile{task, model, res.schedule}));
    print_summary(res);
    for (const auto &v : violations) {
        std::cerr << "violation: " << v << "\n";
    }
    return violations.empty() ? 0 : EXIT_INVALID_SCHEDULE;
}

int cmd_validate(const RunConfig &cfg) {
    ScheduleFile file;
    try {
        file = schedule_from_string(read_file(require(cfg.schedule, "--schedule")));
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(std::string("bad schedule file: ") + e.what());
    }
    auto g0 = network_for(cfg, file.task);
    std::vector<Violation> violations;
    try {
        violations = validate(file.schedule, file.task, g0, file.model);
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return EXIT_INVALID_SCHEDULE;
    }
    for (const auto &v : violations) {
        std::cout << "violation: " << v << "\n";
    }
    if (violations.empty()) {
        std::cout << "ok: T*=" << file.schedule.last_slot() << "\n";
        return 0;
    }
    return EXIT_INVALID_SCHEDULE;
}

int cmd_simulate(const RunConfig &cfg) {
    auto seed = require(cfg.seed, "--seed");
    SimProfile profile;
    if (cfg.profile) {
        try {
            profile = profile_from_json(nlohmann::json::parse(read_file(*cfg.profile)));
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw ConfigError(std::string("bad profile: ") + e.what());
        }
    }
    auto mode = cfg.mode.value_or("parallel");
    SimTrace trace;
    if (mode == "async") {
        auto task = parse_task(require(cfg.task, "--task"));
        trace = run_async(task, network_for(cfg, task), profile, seed);
    } else {
        ScheduleFile file;
        if (cfg.schedule) {
            try {
                file = schedule_from_string(read_file(*cfg.schedule));
            } catch (const ConfigError &) {
                throw;
            } catch (const std::exception &e) {
                throw ConfigError(std::string("bad schedule file: ") + e.what());
            }
        } else {
            file.task = parse_task(require(cfg.task, "--task"));
            file.model = SlotModel{parse_tq(cfg.tq.value_or("1"))};
        }
        auto g0 = network_for(cfg, file.task);
        if (!cfg.schedule) {
            file.schedule = build_schedule(mode, file.task, g0, file.model).schedule;
        }
        std::vector<Violation> violations;
        try {
            violations = validate(file.schedule, file.task, g0, file.model);
        } catch (const std::invalid_argument &e) {
            std::cerr << "invalid: " << e.what() << "\n";
            return EXIT_INVALID_SCHEDULE;
        }
        if (!violations.empty()) {
            for (const auto &v : violations) {
                std::cerr << "violation: " << v << "\n";
            }
            return EXIT_INVALID_SCHEDULE;
        }
        try {
            trace = run_slotted(file.schedule, file.task, g0, file.model, profile, seed);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }
    if (cfg.output) {
        write_output(cfg.output, trace_to_jsonl(trace));
    }
    std::cout << verdict_name(trace.verdict.kind);
    if (!trace.verdict.reason.empty()) {
        std::cout << ": " << trace.verdict.reason;
    }
    std::cout << "\n";
    for (const auto &p : trace.verdict.ambiguity) {
        std::cout << "  nodes " << p.first << " and " << p.second << " measured concurrently (starts "
                  << to_string(p.first_start) << ", " << to_string(p.second_start) << ")\n";
    }
    if (trace.mode == SimMode::Async) {
        for (auto end : {trace.task.source, trace.task.receiver}) {
            std::cout << "  order at " << end << ":";
            for (const auto &[node, _] : infer_order(trace, end)) {
                std::cout << " M" << node;
            }
            std::cout << "\n";
        }
    }
    return trace.verdict.kind == VerdictKind::Verified ? 0 : EXIT_VERIFY_FAILED;
}

void emit_sweep(const RunConfig &cfg, const std::vector<SweepRow> &rows, bool by_distance) {
    auto fmt = format_of(cfg);
    write_output(cfg.output, fmt == "csv" ? sweep_to_csv(rows) : sweep_to_json(rows));
    if (cfg.gnuplot) {
        if (fmt != "csv" || !cfg.output) {
            throw ConfigError("--gnuplot needs --format csv and an --output file");
        }
        std::ofstream out(*cfg.gnuplot);
        if (!out) {
            throw ConfigError("cannot write '" + *cfg.gnuplot + "'");
        }
        out << gnuplot_script(*cfg.output, by_distance);
    }
}

int cmd_sweep_distance(const RunConfig &cfg) {
    auto distances = parse_distances(cfg.distances.value_or("2..12"));
    std::vector<Breakpoint> tqs;
    auto spec = cfg.tqs.value_or("breakpoints");
    if (spec == "breakpoints") {
        for (auto d : distances) {
            for (const auto &b : sweep_breakpoints(d)) {
                tqs.push_back(b);
            }
        }
        std::sort(tqs.begin(), tqs.end());
        tqs.erase(std::unique(tqs.begin(), tqs.end()), tqs.end());
    } else {
        for (const auto &part : split(spec, ',')) {
            tqs.push_back(part == "inf" ? Breakpoint{Rational(0), true} : Breakpoint{parse_tq(part), false});
        }
    }
    auto mode = parse_sweep_mode(cfg.mode);
    for (const auto &b : tqs) {
        if (!b.infinite && b.value < Rational(1)) {
            throw ConfigError("sweeps need t_q >= 1");
        }
    }
    emit_sweep(cfg, sweep_distance(distances, tqs, mode, cfg.threads.value_or(0)), true);
    return 0;
}

int cmd_sweep_tq(const RunConfig &cfg) {
    auto distances = parse_distances(cfg.distances.value_or("2..12"));
    std::vector<Rational> extra;
    if (cfg.extra_tq) {
        extra = parse_tq_list(*cfg.extra_tq);
    }
    for (const auto &x : extra) {
        if (x < Rational(1)) {
            throw ConfigError("sweeps need t_q >= 1");
        }
    }
    auto mode = parse_sweep_mode(cfg.mode);
    emit_sweep(cfg, sweep_tq(distances, extra, mode, cfg.threads.value_or(0)), false);
    return 0;
}

template <typename T>
void optional_flag(CLI::App *app, const std::string &name, std::optional<T> &field, const std::string &help) {
    app->add_option_function<T>(name, [&field](const T &v) { field = v; }, help);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Time-slotted measurement scheduling on 1D cluster-state networks"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App *sub) {
        optional_flag(sub, "--config", cfg.config_path, "JSON file with defaults for any option");
        optional_flag(sub, "--output,-o", cfg.output, "Write the main output here instead of stdout");
    };
    auto task_flags = [&](CLI::App *sub) {
        optional_flag(sub, "--task", cfg.task, "Source and receiver node ids, s,r");
        optional_flag(sub, "--n", cfg.n, "Number of line nodes (ids 1..n)");
        optional_flag(sub, "--tq", cfg.tq, "Quantum slot length, p or p/q, in classical slots");
    };

    auto *schedule = app.add_subcommand("schedule", "Build a schedule and print it as JSON");
    common(schedule);
    task_flags(schedule);
    optional_flag(schedule, "--mode", cfg.mode, "sequential | parallel | brute");

    auto *validate_cmd = app.add_subcommand("validate", "Check a schedule file");
    common(validate_cmd);
    optional_flag(validate_cmd, "--schedule", cfg.schedule, "Schedule JSON file");
    optional_flag(validate_cmd, "--n", cfg.n, "Number of line nodes (ids 1..n)");

    auto *simulate = app.add_subcommand("simulate", "Run a schedule through the event simulator");
    common(simulate);
    task_flags(simulate);
    optional_flag(simulate, "--mode", cfg.mode, "sequential | parallel | brute | async");
    optional_flag(simulate, "--seed", cfg.seed, "Seed for measurement outcomes (required)");
    optional_flag(simulate, "--profile", cfg.profile, "Timing profile JSON");
    optional_flag(simulate, "--schedule", cfg.schedule, "Simulate this schedule file instead of building one");

    auto sweep_flags = [&](CLI::App *sub) {
        common(sub);
        optional_flag(sub, "--distances", cfg.distances, "Distances, e.g. 2..12 or 2,4,8");
        optional_flag(sub, "--mode", cfg.mode, "sequential | parallel");
        optional_flag(sub, "--format", cfg.format, "csv | json");
        optional_flag(sub, "--gnuplot", cfg.gnuplot, "Also write a gnuplot script for the CSV output");
        optional_flag(sub, "--threads", cfg.threads, "Worker threads (default: hardware)");
    };
    auto *sweep_d = app.add_subcommand("sweep-distance", "T* against D, one curve per T_q");
    sweep_flags(sweep_d);
    optional_flag(sweep_d, "--tqs", cfg.tqs, "T_q values (p/q or inf), or 'breakpoints'");
    auto *sweep_t = app.add_subcommand("sweep-tq", "T* against T_q at every breakpoint, one curve per D");
    sweep_flags(sweep_t);
    optional_flag(sweep_t, "--extra-tq", cfg.extra_tq, "Additional T_q values to evaluate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return EXIT_CONFIG;
    }

    try {
        merge_config_file(cfg);
        if (schedule->parsed()) {
            return cmd_schedule(cfg);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(cfg);
        }
        if (simulate->parsed()) {
            return cmd_simulate(cfg);
        }
        if (sweep_d->parsed()) {
            return cmd_sweep_distance(cfg);
        }
        return cmd_sweep_tq(cfg);
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CONFIG;
    }
}
