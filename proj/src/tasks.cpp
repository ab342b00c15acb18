#include "qrsim/tasks.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qrsim {

LookupTable::LookupTable(int register_dim, std::vector<int> values)
    : register_dim_(register_dim), values_(std::move(values)) {
    if (register_dim_ < 1) {
        throw std::invalid_argument("lookup table register dimension must be >= 1");
    }
    const std::size_t expected = static_cast<std::size_t>(register_dim_) *
                                 static_cast<std::size_t>(register_dim_) * 2;
    if (values_.size() != expected) {
        throw std::invalid_argument("lookup table must be total: expected " +
                                    std::to_string(expected) + " entries, got " +
                                    std::to_string(values_.size()));
    }
    for (int v : values_) {
        if (v < 0 || v >= register_dim_) {
            throw std::invalid_argument("lookup table value " + std::to_string(v) +
                                        " outside [0, " + std::to_string(register_dim_) + ")");
        }
    }
}

LookupTable LookupTable::from_function(int register_dim,
                                       const std::function<int(int, int, int)>& f) {
    std::vector<int> values(static_cast<std::size_t>(register_dim) *
                            static_cast<std::size_t>(register_dim) * 2);
    for (int l2 = 0; l2 < register_dim; ++l2) {
        for (int l1 = 0; l1 < register_dim; ++l1) {
            for (int s = 0; s < 2; ++s) {
                values[static_cast<std::size_t>((l2 * register_dim + l1) * 2 + s)] = f(l2, l1, s);
            }
        }
    }
    return LookupTable(register_dim, std::move(values));
}

int LookupTable::at(int l2, int l1, int s) const {
    if (l2 < 0 || l2 >= register_dim_ || l1 < 0 || l1 >= register_dim_ || s < 0 || s > 1) {
        throw std::out_of_range("lookup table index out of range");
    }
    return values_[static_cast<std::size_t>((l2 * register_dim_ + l1) * 2 + s)];
}

RuleSet compile_lookup_computation(const LookupTable& table, const LatticeGeometry& g) {
    g.validate();
    if (g.register_dim != table.register_dim()) {
        throw std::invalid_argument("lookup table register dimension " +
                                    std::to_string(table.register_dim()) +
                                    " does not match the geometry's " +
                                    std::to_string(g.register_dim));
    }
    if (g.head_states < 3) {
        throw std::invalid_argument("the lookup sweep needs at least three head states");
    }
    RuleSet set{Phase::computation, {}};
    auto rule = [&](RuleMatch m, RuleOutcome o) {
        set.rules.push_back(LocalRule{Phase::computation, m, o, cplx(1.0)});
    };
    // Mark the start cell and leave the resting state immediately. Keeping
    // every mid-sweep head state away from 0 lets action rules key on head
    // state 0, which keeps rule images disjoint across the whole rule set.
    rule({.head_state = 0, .tape_bit = 0}, {.head_state = 1, .tape_bit = 1, .head_move = 1});
    // Walk the ring over unmarked cells.
    rule({.head_state = 1, .tape_bit = 0}, {.head_move = 1});
    // The mark means the lap is complete: erase it and enter the terminal
    // state, whose sole rule performs the register update and the flip.
    rule({.head_state = 1, .tape_bit = 1}, {.head_state = 2, .tape_bit = 0});
    for (int l2 = 0; l2 < g.register_dim; ++l2) {
        for (int l1 = 0; l1 < g.register_dim; ++l1) {
            for (int s = 0; s < 2; ++s) {
                rule({.head_state = 2, .tape_bit = 0, .memory = l1, .output = l2, .env_bit = s},
                     {.head_state = 0,
                      .flip_control = true,
                      .next_output = table.at(l2, l1, s)});
            }
        }
    }
    return set;
}

StepOperator task_operator(const TaskSpec& task, CompileOptions options) {
    return StepOperator(task.computation, task.action, task.geometry, options);
}

Configuration task_initial_with_env(const TaskSpec& task, const Bits& env) {
    Configuration c = task.initial;
    if (static_cast<int>(env.size()) != task.geometry.env_size) {
        throw std::invalid_argument("environment override has wrong length");
    }
    c.env = env;
    return c;
}

// ---------------------------------------------------------------------------
// Register-machine task construction

namespace {

int wrap(int value, int size) {
    return ((value % size) + size) % size;
}

std::string mask_key(const std::string& base, int mask, int width) {
    std::string key = base;
    key.push_back('/');
    for (int i = 0; i < width; ++i) {
        key.push_back(((mask >> i) & 1) ? '1' : '0');
    }
    return key;
}

// Collects codes, their single-step actions, the on-path lookup transitions
// and the completion flags of one task, then lowers them to rule sets.
class TaskBuilder {
public:
    TaskBuilder(std::string name, int env_size, bool injective)
        : name_(std::move(name)), env_size_(env_size), injective_(injective) {}

    // Off-path table cells route to `key` instead of filling a bijection.
    // Keeps adjoint closures narrow for tasks whose orbits merge; never
    // combined with injective mode.
    int route_off_path_to(const std::string& key) {
        if (injective_) {
            throw std::logic_error("task '" + name_ + "': sink routing breaks reversibility");
        }
        sink_ = code(key);
        return sink_;
    }

    int code(const std::string& key) {
        auto it = ids_.find(key);
        if (it != ids_.end()) {
            return it->second;
        }
        int id = static_cast<int>(keys_.size());
        ids_.emplace(key, id);
        keys_.push_back(key);
        actions_.push_back(Action{});
        return id;
    }

    // Exclusive-or write plus a move; every program action flips the control.
    void set_action(int code_id, int xor_value, int move) {
        Action& a = actions_.at(static_cast<std::size_t>(code_id));
        if (a.set && (a.xor_value != xor_value || a.move != move)) {
            throw std::logic_error("task '" + name_ + "': conflicting actions for code " +
                                   keys_[static_cast<std::size_t>(code_id)]);
        }
        a = Action{true, false, xor_value, move};
    }

    void set_custom_action(int code_id, std::vector<LocalRule> rules) {
        Action& a = actions_.at(static_cast<std::size_t>(code_id));
        a.set = true;
        a.custom = true;
        for (LocalRule& r : rules) {
            r.match.output = code_id;
            r.match.head_state = 0; // actions fire only on the resting frame
            custom_rules_.push_back(std::move(r));
        }
    }

    void add_anchor(int l2, int l1, int s, int l3) {
        auto key = std::make_tuple(l2, l1, s);
        auto [it, inserted] = anchors_.emplace(key, l3);
        if (!inserted && it->second != l3) {
            throw std::logic_error("task '" + name_ + "': conflicting transitions from (" +
                                   keys_[static_cast<std::size_t>(l2)] + ", " +
                                   keys_[static_cast<std::size_t>(l1)] + ", s=" +
                                   std::to_string(s) + ")");
        }
    }

    void flag(int code_id) { flags_.insert(code_id); }

    TaskSpec build(int init_output, int init_memory, const Bits& initial_env, int start_pos) {
        const int dim = static_cast<int>(keys_.size());
        LatticeGeometry g{env_size_, Boundary::cyclic, 3, 3, dim};
        g.validate();
        LookupTable table = finalize_table(dim);
        RuleSet action{Phase::action, {}};
        for (int c = 0; c < dim; ++c) {
            const Action& a = actions_[static_cast<std::size_t>(c)];
            if (a.custom) {
                continue;
            }
            const int move = a.set ? a.move : 1; // codes without a program action drift right
            const int xv = a.set ? a.xor_value : 0;
            if (xv == 0) {
                action.rules.push_back(LocalRule{Phase::action,
                                                 {.head_state = 0, .output = c},
                                                 {.robot_move = move, .flip_control = true},
                                                 cplx(1.0)});
            } else {
                action.rules.push_back(LocalRule{
                    Phase::action,
                    {.head_state = 0, .output = c, .env_bit = 0},
                    {.env_bit = 1, .robot_move = move, .flip_control = true},
                    cplx(1.0)});
                action.rules.push_back(LocalRule{
                    Phase::action,
                    {.head_state = 0, .output = c, .env_bit = 1},
                    {.env_bit = 0, .robot_move = move, .flip_control = true},
                    cplx(1.0)});
            }
        }
        for (const LocalRule& r : custom_rules_) {
            action.rules.push_back(r);
        }
        TaskSpec task;
        task.name = name_;
        task.geometry = g;
        task.computation = compile_lookup_computation(table, g);
        task.action = std::move(action);
        task.initial = make_configuration(g, 0, 0, Bits(3, 0), init_memory, init_output, 0,
                                          start_pos, initial_env);
        task.final_outputs = flags_;
        return task;
    }

private:
    struct Action {
        bool set = false;
        bool custom = false;
        int xor_value = 0;
        int move = 1;
    };

    LookupTable finalize_table(int dim) const {
        std::vector<int> values(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) * 2,
                                -1);
        auto slot = [dim](int l2, int l1, int s) {
            return static_cast<std::size_t>((l2 * dim + l1) * 2 + s);
        };
        for (const auto& [key, l3] : anchors_) {
            values[slot(std::get<0>(key), std::get<1>(key), std::get<2>(key))] = l3;
        }
        // Fill each (output, env bit) column to a total map while reusing as
        // few values as possible, so adjoint closures stay narrow. Injective
        // tasks require every column to come out a bijection in the memory
        // argument; that keeps the register update reversible.
        for (int l2 = 0; l2 < dim; ++l2) {
            for (int s = 0; s < 2; ++s) {
                std::vector<bool> used(static_cast<std::size_t>(dim), false);
                int anchor_count = 0;
                for (int l1 = 0; l1 < dim; ++l1) {
                    int v = values[slot(l2, l1, s)];
                    if (v >= 0) {
                        if (injective_ && used[static_cast<std::size_t>(v)]) {
                            throw std::logic_error("task '" + name_ +
                                                   "': transitions merge inside column (" +
                                                   keys_[static_cast<std::size_t>(l2)] + ", s=" +
                                                   std::to_string(s) + ")");
                        }
                        used[static_cast<std::size_t>(v)] = true;
                        ++anchor_count;
                    }
                }
                (void)anchor_count;
                for (int l1 = 0; l1 < dim; ++l1) {
                    if (values[slot(l2, l1, s)] >= 0) {
                        continue;
                    }
                    if (sink_ >= 0) {
                        values[slot(l2, l1, s)] = sink_;
                        continue;
                    }
                    int pick = -1;
                    if (!used[static_cast<std::size_t>(l1)]) {
                        pick = l1;
                    } else {
                        for (int v = 0; v < dim; ++v) {
                            if (!used[static_cast<std::size_t>(v)]) {
                                pick = v;
                                break;
                            }
                        }
                    }
                    if (pick < 0) {
                        throw std::logic_error("task '" + name_ + "': column exhausted");
                    }
                    used[static_cast<std::size_t>(pick)] = true;
                    values[slot(l2, l1, s)] = pick;
                }
            }
        }
        return LookupTable(dim, std::move(values));
    }

    std::string name_;
    int env_size_;
    bool injective_;
    int sink_ = -1;
    std::map<std::string, int> ids_;
    std::vector<std::string> keys_;
    std::vector<Action> actions_;
    std::map<std::tuple<int, int, int>, int> anchors_;
    std::set<int> flags_;
    std::vector<LocalRule> custom_rules_;
};

// Replays one program walk, recording the lookup transition and the action of
// every phase against the simulated environment.
struct Walker {
    TaskBuilder& builder;
    int env_size;
    Bits env;
    int pos;
    int prev;
    int cur;

    void step(const std::string& key, int xor_value, int move) {
        int next = builder.code(key);
        builder.set_action(next, xor_value, move);
        builder.add_anchor(cur, prev, env[static_cast<std::size_t>(pos)], next);
        env[static_cast<std::size_t>(pos)] ^= static_cast<std::uint8_t>(xor_value);
        pos = wrap(pos + move, env_size);
        prev = cur;
        cur = next;
    }
};

void check_ranges(const SiteRange& r, int env_size, const char* what) {
    if (r.lo < 0 || r.hi >= env_size || r.lo > r.hi) {
        throw std::invalid_argument(std::string(what) + " [" + std::to_string(r.lo) + ", " +
                                    std::to_string(r.hi) + "] does not fit a lattice of size " +
                                    std::to_string(env_size));
    }
}

} // namespace

namespace {

std::vector<LocalRule> rotation_rules(double phi) {
    const double c = std::cos(phi / 2.0);
    const double sn = std::sin(phi / 2.0);
    std::vector<LocalRule> rules;
    auto add = [&](int from, int to, double amp) {
        if (std::abs(amp) < kAmplitudeEpsilon) {
            return;
        }
        rules.push_back(LocalRule{Phase::action,
                                  {.env_bit = from},
                                  {.env_bit = to, .flip_control = true},
                                  cplx(amp)});
    };
    add(0, 0, c);
    add(0, 1, sn);
    add(1, 0, -sn);
    add(1, 1, c);
    return rules;
}

} // namespace

TaskSpec make_rotate_task(double phi, int env_size) {
    // One rotation, a flagged drift lap, then the inverse rotation and another
    // lap. The orbit is a closed cycle, so the compiled step operator permutes
    // its reachable basis (up to the unitary 2x2 rotation block).
    if (env_size < 2) {
        throw std::invalid_argument("rotate needs env_size >= 2 for the completion drift");
    }
    TaskBuilder b("rotate", env_size, true);
    const int m = env_size;
    const int init_memory = b.code("driftB" + std::to_string(m - 1));
    const int init_output = b.code("driftB" + std::to_string(m));
    const int rot = b.code("rotate");
    const int unrot = b.code("unrotate");
    b.set_custom_action(rot, rotation_rules(phi));
    b.set_custom_action(unrot, rotation_rules(-phi));
    auto drift = [&](const std::string& base, int k) { return b.code(base + std::to_string(k)); };
    for (int k = 1; k <= m; ++k) {
        b.set_action(drift("driftA", k), 0, 1);
        b.set_action(drift("driftB", k), 0, 1);
        b.flag(drift("driftA", k));
    }
    for (int s = 0; s < 2; ++s) {
        b.add_anchor(init_output, init_memory, s, rot);
        b.add_anchor(rot, init_output, s, drift("driftA", 1));
        for (int k = 1; k < m; ++k) {
            b.add_anchor(drift("driftA", k), k == 1 ? rot : drift("driftA", k - 1), s,
                         drift("driftA", k + 1));
        }
        b.add_anchor(drift("driftA", m), m == 1 ? rot : drift("driftA", m - 1), s, unrot);
        b.add_anchor(unrot, drift("driftA", m), s, drift("driftB", 1));
        for (int k = 1; k < m; ++k) {
            b.add_anchor(drift("driftB", k), k == 1 ? unrot : drift("driftB", k - 1), s,
                         drift("driftB", k + 1));
        }
    }
    return b.build(init_output, init_memory, Bits(static_cast<std::size_t>(env_size), 0), 0);
}

TaskSpec make_search_zeros_task(cplx a, cplx b_amp, const Bits& env, int env_size) {
    if (env_size == 0) {
        env_size = static_cast<int>(env.size());
    }
    if (static_cast<int>(env.size()) != env_size || env_size < 1) {
        throw std::invalid_argument("search task needs a nonempty environment pattern");
    }
    if (std::abs(std::norm(a) + std::norm(b_amp) - 1.0) > 1e-10) {
        throw std::invalid_argument("search amplitudes must satisfy |a|^2 + |b|^2 = 1");
    }
    TaskBuilder b("search_zeros", env_size, false);
    const int idle = b.code("idle");
    const int spare = b.route_off_path_to("spare");
    const int search = b.code("search");
    const int done = b.code("done");
    b.set_action(idle, 0, 1);
    b.set_action(spare, 0, 1);
    b.set_action(done, 0, 1);
    b.flag(done);
    for (int s = 0; s < 2; ++s) {
        b.add_anchor(idle, idle, s, search);
        b.add_anchor(search, idle, s, done);
        b.add_anchor(done, search, s, done);
        b.add_anchor(done, done, s, done);
    }
    std::vector<LocalRule> rules;
    if (std::abs(a) >= kAmplitudeEpsilon) {
        rules.push_back(LocalRule{
            Phase::action, {.env_bit = 0}, {.env_bit = 0, .robot_move = 1}, a});
    }
    if (std::abs(b_amp) >= kAmplitudeEpsilon) {
        rules.push_back(LocalRule{
            Phase::action, {.env_bit = 0}, {.env_bit = 1, .robot_move = 1}, b_amp});
    }
    rules.push_back(LocalRule{Phase::action, {.env_bit = 1}, {.flip_control = true}, cplx(1.0)});
    b.set_custom_action(search, std::move(rules));
    return b.build(idle, idle, env, 0);
}

TaskSpec make_copy_task(SiteRange region, SiteRange copy_region, int env_size) {
    check_ranges(region, env_size, "region");
    check_ranges(copy_region, env_size, "copy region");
    const int n = region.length();
    if (n != copy_region.length()) {
        throw std::invalid_argument("region and copy region must have equal length");
    }
    if (region.hi >= copy_region.lo) {
        throw std::invalid_argument("copy region must lie strictly right of the region "
                                    "(the itinerary sweeps left to right)");
    }
    TaskBuilder b("copy", env_size, true);
    // The cycle's final two codes double as the initial registers, so the
    // start configuration sits on the closed orbit.
    const int m = env_size;
    const int init_memory = b.code(m >= 3 ? "drift" + std::to_string(m - 2) : "ds0/");
    const int init_output = b.code("drift" + std::to_string(m - 1));

    auto lap = [&](Walker& w, int mask) {
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("rd" + std::to_string(i), mask & ((1 << (i + 1)) - 1), i + 1), 0, 1);
        }
        for (int x = region.hi + 1; x < copy_region.lo; ++x) {
            w.step(mask_key("tr" + std::to_string(x), mask, n), 0, 1);
        }
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("wr" + std::to_string(i), mask, n), (mask >> i) & 1,
                   i + 1 == n ? -1 : 1);
        }
        for (int x = copy_region.hi - 1; x > region.hi; --x) {
            w.step(mask_key("bk" + std::to_string(x), mask, n), 0, -1);
        }
        for (int i = n - 1; i >= 0; --i) {
            w.step(mask_key("da" + std::to_string(i), mask & ((1 << i) - 1), i), 0, 0);
            w.step(mask_key("ds" + std::to_string(i), mask & ((1 << i) - 1), i), 0,
                   i == 0 ? 1 : -1);
        }
        for (int k = 1; k < m; ++k) {
            w.step("drift" + std::to_string(k), 0, 1);
        }
    };
    for (int mask = 0; mask < (1 << n); ++mask) {
        Bits env(static_cast<std::size_t>(env_size), 0);
        for (int i = 0; i < n; ++i) {
            env[static_cast<std::size_t>(region.lo + i)] = static_cast<std::uint8_t>((mask >> i) & 1);
        }
        Walker w{b, env_size, env, region.lo, init_memory, init_output};
        lap(w, mask); // copies the region into the copy region
        lap(w, mask); // exclusive-or writes undo themselves on the second lap
        if (w.cur != init_output || w.prev != init_memory || w.pos != region.lo || w.env != env) {
            throw std::logic_error("copy program is not a closed cycle");
        }
    }
    for (int k = 1; k < m; ++k) {
        b.flag(b.code("drift" + std::to_string(k)));
    }
    return b.build(init_output, init_memory, Bits(static_cast<std::size_t>(env_size), 0),
                   region.lo);
}

TaskSpec make_cleanup_task(SiteRange region, SiteRange copy_region, const Bits& target_pattern,
                           int env_size) {
    check_ranges(region, env_size, "region");
    check_ranges(copy_region, env_size, "copy region");
    const int n = region.length();
    if (n != copy_region.length() ||
        static_cast<int>(target_pattern.size()) != n) {
        throw std::invalid_argument("region, copy region and target pattern must have equal length");
    }
    if (region.hi >= copy_region.lo) {
        throw std::invalid_argument("copy region must lie strictly right of the region "
                                    "(the itinerary sweeps left to right)");
    }
    for (auto bit : target_pattern) {
        if (bit > 1) {
            throw std::invalid_argument("target pattern bits must be 0 or 1");
        }
    }
    TaskBuilder b("cleanup", env_size, true);
    const int m = env_size;
    const int drift2_count = m - n;
    if (drift2_count < 2) {
        throw std::invalid_argument("cleanup needs env_size >= region length + 2");
    }
    if (m - (copy_region.hi - region.lo) - 1 < 1) {
        throw std::invalid_argument("cleanup needs at least one free site right of the copy "
                                    "region for the completion drift");
    }
    const int init_memory = b.code("drB" + std::to_string(drift2_count - 2));
    const int init_output = b.code("drB" + std::to_string(drift2_count - 1));

    // Lap one: store the region in the copy region, overwrite the region with
    // the target pattern, drop the carried bits against the stored copy.
    auto lap1 = [&](Walker& w, int mask) {
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("rd" + std::to_string(i), mask & ((1 << (i + 1)) - 1), i + 1), 0, 1);
        }
        for (int x = region.hi + 1; x < copy_region.lo; ++x) {
            w.step(mask_key("trA" + std::to_string(x), mask, n), 0, 1);
        }
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("wr" + std::to_string(i), mask, n), (mask >> i) & 1,
                   i + 1 == n ? -1 : 1);
        }
        for (int x = copy_region.hi - 1; x > region.hi; --x) {
            w.step(mask_key("bkA" + std::to_string(x), mask, n), 0, -1);
        }
        for (int i = n - 1; i >= 0; --i) { // overwrite region sites with the target
            w.step(mask_key("ov" + std::to_string(i), mask, n),
                   ((mask >> i) & 1) ^ target_pattern[static_cast<std::size_t>(i)],
                   i == 0 ? 1 : -1);
        }
        for (int x = region.lo + 1; x < copy_region.lo; ++x) {
            w.step(mask_key("fwA" + std::to_string(x), mask, n), 0, 1);
        }
        for (int i = 0; i < n; ++i) { // drop carried bits over the stored copy
            w.step(mask_key("daA" + std::to_string(i), mask >> (i + 1), n - 1 - i), 0, 0);
            w.step(mask_key("dsA" + std::to_string(i), mask >> (i + 1), n - 1 - i), 0, 1);
        }
        const int drift1_count = m - (copy_region.hi - region.lo) - 1;
        for (int k = 0; k < drift1_count; ++k) {
            w.step("drA" + std::to_string(k), 0, 1);
        }
    };
    // Lap two: read the copy back, restore the region, clear the copy, drop
    // the carried bits against the restored region.
    auto lap2 = [&](Walker& w, int mask) {
        for (int x = region.lo; x < copy_region.lo; ++x) {
            w.step("fwB" + std::to_string(x), 0, 1);
        }
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("rc" + std::to_string(i), mask & ((1 << (i + 1)) - 1), i + 1),
                   (mask >> i) & 1, i + 1 == n ? -1 : 1);
        }
        for (int x = copy_region.hi - 1; x > region.hi; --x) {
            w.step(mask_key("bkB" + std::to_string(x), mask, n), 0, -1);
        }
        for (int i = n - 1; i >= 0; --i) {
            w.step(mask_key("rv" + std::to_string(i), mask, n),
                   ((mask >> i) & 1) ^ target_pattern[static_cast<std::size_t>(i)],
                   i == 0 ? 0 : -1);
        }
        for (int i = 0; i < n; ++i) {
            w.step(mask_key("daB" + std::to_string(i), mask >> (i + 1), n - 1 - i), 0, 0);
            w.step(mask_key("dsB" + std::to_string(i), mask >> (i + 1), n - 1 - i), 0, 1);
        }
        for (int k = 0; k < drift2_count; ++k) {
            w.step("drB" + std::to_string(k), 0, 1);
        }
    };
    for (int mask = 0; mask < (1 << n); ++mask) {
        Bits env(static_cast<std::size_t>(env_size), 0);
        for (int i = 0; i < n; ++i) {
            env[static_cast<std::size_t>(region.lo + i)] = static_cast<std::uint8_t>((mask >> i) & 1);
        }
        Walker w{b, env_size, env, region.lo, init_memory, init_output};
        lap1(w, mask);
        lap2(w, mask);
        if (w.cur != init_output || w.prev != init_memory || w.pos != region.lo || w.env != env) {
            throw std::logic_error("cleanup program is not a closed cycle");
        }
    }
    const int drift1_count = m - (copy_region.hi - region.lo) - 1;
    for (int k = 0; k < drift1_count; ++k) {
        b.flag(b.code("drA" + std::to_string(k)));
    }
    return b.build(init_output, init_memory, Bits(static_cast<std::size_t>(env_size), 0),
                   region.lo);
}

TaskSpec make_shift_task(SiteRange region, int offset, int env_size) {
    check_ranges(region, env_size, "region");
    const int n = region.length();
    if (offset < n) {
        throw std::invalid_argument("shift offset must be at least the region length so the "
                                    "destination window is disjoint");
    }
    SiteRange dest{region.lo + offset, region.hi + offset};
    check_ranges(dest, env_size, "destination window");
    TaskBuilder b("shift", env_size, false);
    const int zero = b.code("zero"); // initial memory; never produced as an output
    const int init = b.code("init");
    b.route_off_path_to("sink");
    b.set_action(zero, 0, 1);
    b.set_action(init, 0, 1);
    b.flag(b.code("done"));
    b.flag(b.code("occupied"));

    // Drop the bit `bit` carried under `tag` with a stay step followed by the
    // erasing step, both over a site whose qubit holds the bit.
    auto drop = [&](Walker& w, const std::string& tag, int keep_mask, int keep_width, int move) {
        w.step(mask_key("da" + tag, keep_mask, keep_width), 0, 0);
        w.step(mask_key("ds" + tag, keep_mask, keep_width), 0, move);
    };

    for (int mask = 0; mask < (1 << n); ++mask) {
        for (int dest_mask = 0; dest_mask < (1 << n); ++dest_mask) {
            Bits env(static_cast<std::size_t>(env_size), 0);
            for (int i = 0; i < n; ++i) {
                env[static_cast<std::size_t>(region.lo + i)] =
                    static_cast<std::uint8_t>((mask >> i) & 1);
                env[static_cast<std::size_t>(dest.lo + i)] =
                    static_cast<std::uint8_t>((dest_mask >> i) & 1);
            }
            Walker w{b, env_size, env, region.lo, zero, init};
            for (int i = 0; i < n; ++i) {
                w.step(mask_key("rd" + std::to_string(i), mask & ((1 << (i + 1)) - 1), i + 1), 0,
                       1);
            }
            for (int x = region.hi + 1; x < dest.lo; ++x) {
                w.step(mask_key("tr" + std::to_string(x), mask, n), 0, 1);
            }
            // Scan the destination window, carrying the scanned prefix.
            for (int i = 0; i + 1 < n; ++i) {
                const int prefix = dest_mask & ((1 << (i + 1)) - 1);
                w.step(mask_key("sc" + std::to_string(i), mask | (prefix << n), n + i + 1), 0, 1);
            }
            if (dest_mask != 0) {
                // Occupied: walk back dropping the scanned bits against the
                // untouched window, then the region bits, and drift.
                for (int i = n - 1; i >= 0; --i) {
                    const int keep = mask | ((dest_mask & ((1 << i) - 1)) << n);
                    drop(w, "o" + std::to_string(i), keep, n + i, i == 0 ? -1 : -1);
                }
                for (int x = dest.lo - 1; x > region.hi; --x) {
                    w.step(mask_key("ob" + std::to_string(x), mask, n), 0, -1);
                }
                for (int i = n - 1; i >= 0; --i) {
                    drop(w, "r" + std::to_string(i), mask & ((1 << i) - 1), i, i == 0 ? 1 : -1);
                }
                w.step("occupied", 0, 1);
                for (int k = 0; k < env_size + 2; ++k) {
                    w.step("occupied", 0, 1);
                }
            } else {
                for (int i = n - 1; i >= 0; --i) { // write the pattern, right to left
                    w.step(mask_key("wd" + std::to_string(i), mask, n), (mask >> i) & 1, -1);
                }
                for (int x = dest.lo - 1; x > region.hi; --x) {
                    w.step(mask_key("bk" + std::to_string(x), mask, n), 0, -1);
                }
                for (int i = n - 1; i >= 0; --i) { // clear the source pattern
                    w.step(mask_key("cl" + std::to_string(i), mask, n), (mask >> i) & 1,
                           i == 0 ? 1 : -1);
                }
                for (int x = region.lo + 1; x < dest.lo; ++x) { // walk to the written copy
                    w.step(mask_key("ft" + std::to_string(x), mask, n), 0, 1);
                }
                for (int i = 0; i < n; ++i) { // drop the carried bits against it
                    drop(w, "w" + std::to_string(i), mask >> (i + 1), n - 1 - i, 1);
                }
                w.step("done", 0, 1);
                for (int k = 0; k < env_size + 2; ++k) {
                    w.step("done", 0, 1);
                }
            }
        }
    }
    Bits env(static_cast<std::size_t>(env_size), 0);
    return b.build(init, zero, env, region.lo);
}

// ---------------------------------------------------------------------------
// Classical trace interpreter

ClassicalTrace classical_trace(const TaskSpec& task, const Configuration& initial, int max_steps) {
    if (max_steps < 0) {
        throw std::invalid_argument("max_steps must be >= 0");
    }
    StepOperator op = task_operator(task);
    ClassicalTrace trace;
    trace.steps.push_back(initial);
    Configuration current = initial;
    for (int step = 0; step < max_steps; ++step) {
        auto images = op.transitions_from(current);
        if (images.empty()) {
            return trace; // no rule fires; not a completion
        }
        if (images.size() > 1) {
            throw std::runtime_error("rule application branches on configuration " +
                                     format_configuration(current) +
                                     "; the classical trace needs deterministic rule sets");
        }
        const Configuration& next = images.begin()->first;
        trace.steps.push_back(next);
        trace.step_count += 1;
        const bool flipped_up = current.control == 0 && next.control == 1;
        current = next;
        if (flipped_up && task.final_outputs.contains(next.output)) {
            trace.terminated = true;
            return trace;
        }
    }
    return trace; // max_steps exhausted without completion
}

std::string trace_to_json_lines(const ClassicalTrace& trace) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        nlohmann::json j{{"step", i}, {"configuration", format_configuration(trace.steps[i])}};
        out << j.dump() << "\n";
    }
    nlohmann::json summary{{"terminated", trace.terminated},
                           {"steps", trace.step_count},
                           {"non_halting", !trace.terminated}};
    out << summary.dump() << "\n";
    return out.str();
}

} // namespace qrsim
