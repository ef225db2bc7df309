#include "cmbp/bench.hpp"

#include <algorithm>
#include <sstream>

#include "cmbp/lang.hpp"

namespace cmbp::bench {

namespace {

std::string idx(const std::string& base, int i) {
    return base + "_" + std::to_string(i);
}

std::string idx2(const std::string& base, int i, int j) {
    return base + "_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out;
}

std::string exactly_one(const std::vector<std::string>& names) {
    std::string out = "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += " | ";
        out += names[i];
    }
    out += ")";
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            out += " & !(" + names[i] + " & " + names[j] + ")";
    return out;
}

std::string conjoin_all(const std::vector<std::string>& lits) {
    std::string out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i) out += " & ";
        out += lits[i];
    }
    return out;
}

// --- binary counters (omelette) ----------------------------------------------

int bits_for(int max_value) {
    int b = 1;
    while ((1 << b) <= max_value) ++b;
    return b;
}

std::vector<std::string> counter_bits(const std::string& base, int nbits) {
    std::vector<std::string> out;
    for (int k = 0; k < nbits; ++k) out.push_back(idx(base, k));
    return out;
}

std::string eq_const(const std::vector<std::string>& bits, int value) {
    std::vector<std::string> lits;
    for (std::size_t k = 0; k < bits.size(); ++k)
        lits.push_back(((value >> k) & 1) ? bits[k] : "!" + bits[k]);
    return "(" + conjoin_all(lits) + ")";
}

std::string le_const(const std::vector<std::string>& bits, int value) {
    std::string out = "(";
    for (int v = 0; v <= value; ++v) {
        if (v) out += " | ";
        out += eq_const(bits, v);
    }
    return out + ")";
}

std::string lt_const(const std::vector<std::string>& bits, int value) {
    return le_const(bits, value - 1);
}

// --- family generators ---------------------------------------------------------

void require(bool ok, const std::string& message) {
    if (!ok) throw usage_error(message);
}

/// Shared skeleton of the bomb-in-the-toilet variants: one-hot bomb position
/// plus a defused flag; toilets and clogging behaviour differ per family.
void emit_bomb_family(std::ostringstream& os, const std::string& name, int p,
                      int toilets, bool clogging, bool uncertain_clog,
                      const std::string& initially) {
    std::vector<std::string> in_fluents;
    for (int i = 1; i <= p; ++i) in_fluents.push_back(idx("In", i));

    std::vector<std::string> dunks;
    std::vector<std::string> flushes;
    std::vector<std::string> clogs;
    for (int j = 1; j <= toilets; ++j) {
        flushes.push_back(toilets == 1 ? "Flush" : idx("Flush", j));
        clogs.push_back(toilets == 1 ? "Clogged" : idx("Clogged", j));
    }
    for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= toilets; ++j)
            dunks.push_back(toilets == 1 ? idx("Dunk", i) : idx2("Dunk", i, j));

    os << "DOMAIN " << name << "\n\n";
    std::vector<std::string> actions = dunks;
    if (clogging) actions.insert(actions.end(), flushes.begin(), flushes.end());
    os << "ACTIONS " << join(actions) << ";\n";

    std::vector<std::string> fluents = in_fluents;
    fluents.push_back("Defused");
    if (clogging) fluents.insert(fluents.end(), clogs.begin(), clogs.end());
    os << "FLUENTS " << join(fluents) << " : boolean;\n";
    os << "INERTIAL " << join(fluents) << ";\n";
    os << "ALWAYS " << exactly_one(in_fluents) << ";\n\n";

    for (int i = 1; i <= p; ++i) {
        for (int j = 1; j <= toilets; ++j) {
            const std::string& dunk = dunks[static_cast<std::size_t>((i - 1) * toilets + j - 1)];
            if (clogging) {
                os << dunk << " HAS PRECONDITIONS !" << clogs[j - 1] << ";\n";
                if (uncertain_clog)
                    os << dunk << " POSSIBLY CHANGES " << clogs[j - 1] << ";\n";
                else
                    os << dunk << " CAUSES " << clogs[j - 1] << ";\n";
            }
            os << dunk << " CAUSES Defused IF " << in_fluents[i - 1] << ";\n";
        }
    }
    if (clogging)
        for (int j = 1; j <= toilets; ++j)
            os << flushes[j - 1] << " CAUSES !" << clogs[j - 1] << ";\n";

    os << "\nINITIALLY " << initially << ";\n";
    os << "CONFORMANT Defused;\n";
}

std::string generate_bomb(const instance_spec& spec, const std::string& name) {
    int p = spec.a;
    require(p >= 1, "bomb families need at least one package");
    std::ostringstream os;
    switch (spec.fam) {
    case family::bt:
        emit_bomb_family(os, name, p, 1, false, false, "!Defused");
        break;
    case family::btc:
        emit_bomb_family(os, name, p, 1, true, false, "!Defused & !Clogged");
        break;
    case family::btuc:
        emit_bomb_family(os, name, p, 1, true, true, "!Defused & !Clogged");
        break;
    case family::bmtc: {
        int t = spec.b;
        require(t >= 1, "bmtc needs at least one toilet");
        std::string init = "!Defused";
        for (int j = 1; j <= t; ++j) {
            bool known;
            switch (spec.var) {
            case variant::low: known = true; break;
            case variant::mid: known = j % 2 == 0; break; // odd toilets unknown
            case variant::high: known = false; break;
            default: throw usage_error("bmtc variants are low, mid, high");
            }
            if (known) init += " & !" + (t == 1 ? std::string("Clogged") : idx("Clogged", j));
        }
        emit_bomb_family(os, name, p, t, true, false, init);
        break;
    }
    default:
        throw internal_error("generate_bomb: wrong family");
    }
    return os.str();
}

std::string generate_ring(const instance_spec& spec, const std::string& name) {
    int r = spec.a;
    require(r >= 2, "ring families need at least two rooms");
    int noise = spec.fam == family::ndring ? spec.b : 0;
    require(noise >= 0, "noise fluent count must not be negative");
    bool uncertain = spec.fam == family::uring;

    std::vector<std::string> pos, closed, locked, noises;
    for (int i = 1; i <= r; ++i) {
        pos.push_back(idx("Pos", i));
        closed.push_back(idx("Closed", i));
        locked.push_back(idx("Locked", i));
    }
    for (int i = 1; i <= noise; ++i) noises.push_back(idx("Noise", i));

    std::ostringstream os;
    os << "DOMAIN " << name << "\n\n";
    os << "ACTIONS move_cw, move_ccw, close, lock;\n";
    std::vector<std::string> fluents = pos;
    fluents.insert(fluents.end(), closed.begin(), closed.end());
    fluents.insert(fluents.end(), locked.begin(), locked.end());
    fluents.insert(fluents.end(), noises.begin(), noises.end());
    os << "FLUENTS " << join(fluents) << " : boolean;\n";
    // noise fluents are deliberately not inertial: they may flip at any step
    std::vector<std::string> inertial = pos;
    inertial.insert(inertial.end(), closed.begin(), closed.end());
    inertial.insert(inertial.end(), locked.begin(), locked.end());
    os << "INERTIAL " << join(inertial) << ";\n";
    os << "ALWAYS " << exactly_one(pos) << ";\n";
    for (int i = 0; i < r; ++i)
        os << "ALWAYS " << locked[i] << " -> " << closed[i] << ";\n";
    os << "\n";

    for (int i = 0; i < r; ++i) {
        int cw = (i + 1) % r;
        os << "move_cw CAUSES " << pos[cw] << " IF " << pos[i] << ";\n";
        os << "move_cw CAUSES !" << pos[i] << " IF " << pos[i] << ";\n";
    }
    for (int i = 0; i < r; ++i) {
        int ccw = (i + r - 1) % r;
        os << "move_ccw CAUSES " << pos[ccw] << " IF " << pos[i] << ";\n";
        os << "move_ccw CAUSES !" << pos[i] << " IF " << pos[i] << ";\n";
    }
    for (int i = 0; i < r; ++i)
        os << "close CAUSES " << closed[i] << " IF " << pos[i] << ";\n";
    std::vector<std::string> lockable;
    for (int i = 0; i < r; ++i)
        lockable.push_back("(" + pos[i] + " -> " + closed[i] + ")");
    os << "lock HAS PRECONDITIONS " << conjoin_all(lockable) << ";\n";
    for (int i = 0; i < r; ++i)
        os << "lock CAUSES " << locked[i] << " IF " << pos[i] << ";\n";

    if (uncertain) {
        // any action may open or close any window; locked windows are kept
        // shut by the ALWAYS constraints
        os << "\n";
        for (const char* act : {"move_cw", "move_ccw", "close", "lock"})
            for (int i = 0; i < r; ++i)
                os << act << " POSSIBLY CHANGES " << closed[i] << ";\n";
    }

    os << "\nINITIALLY TRUE;\n";
    std::vector<std::string> goal = locked;
    os << "CONFORMANT " << conjoin_all(goal) << ";\n";
    return os.str();
}

void emit_axis_moves(std::ostringstream& os, const std::vector<std::string>& axis,
                     const std::string& inc_action, const std::string& dec_action) {
    int n = static_cast<int>(axis.size());
    for (int k = 0; k + 1 < n; ++k) {
        os << inc_action << " CAUSES " << axis[k + 1] << " IF " << axis[k] << ";\n";
        os << inc_action << " CAUSES !" << axis[k] << " IF " << axis[k] << ";\n";
    }
    for (int k = 1; k < n; ++k) {
        os << dec_action << " CAUSES " << axis[k - 1] << " IF " << axis[k] << ";\n";
        os << dec_action << " CAUSES !" << axis[k] << " IF " << axis[k] << ";\n";
    }
}

std::string generate_grid(const instance_spec& spec, const std::string& name) {
    int n = spec.a;
    require(n >= 2, "grid families need side length at least two");
    int dims = spec.fam == family::cube ? 3 : 2;
    int mid = (n + 1) / 2; // central cell, 1-based

    static const char* axis_names[3] = {"X", "Y", "Z"};
    static const char* inc_names[3] = {"move_right", "move_up", "move_front"};
    static const char* dec_names[3] = {"move_left", "move_down", "move_back"};

    std::vector<std::vector<std::string>> axes;
    for (int d = 0; d < dims; ++d) {
        std::vector<std::string> axis;
        for (int k = 1; k <= n; ++k) axis.push_back(idx(axis_names[d], k));
        axes.push_back(std::move(axis));
    }

    std::ostringstream os;
    os << "DOMAIN " << name << "\n\n";
    std::vector<std::string> actions;
    for (int d = 0; d < dims; ++d) {
        actions.push_back(inc_names[d]);
        actions.push_back(dec_names[d]);
    }
    os << "ACTIONS " << join(actions) << ";\n";
    std::vector<std::string> fluents;
    for (const auto& axis : axes) fluents.insert(fluents.end(), axis.begin(), axis.end());
    os << "FLUENTS " << join(fluents) << " : boolean;\n";
    os << "INERTIAL " << join(fluents) << ";\n";
    for (const auto& axis : axes) os << "ALWAYS " << exactly_one(axis) << ";\n";
    os << "\n";
    // moves off the edge leave the position unchanged: no rule fires there
    for (int d = 0; d < dims; ++d)
        emit_axis_moves(os, axes[d], inc_names[d], dec_names[d]);

    os << "\nINITIALLY TRUE;\n";
    std::vector<std::string> goal;
    switch (spec.var) {
    case variant::corner:
        for (int d = 0; d < dims; ++d) goal.push_back(axes[d][n - 1]);
        break;
    case variant::face:
        // central cell of the far side
        for (int d = 0; d + 1 < dims; ++d) goal.push_back(axes[d][mid - 1]);
        goal.push_back(axes[dims - 1][n - 1]);
        break;
    case variant::center:
        for (int d = 0; d < dims; ++d) goal.push_back(axes[d][mid - 1]);
        break;
    default:
        throw usage_error("grid variants are corner, face, center");
    }
    os << "CONFORMANT " << conjoin_all(goal) << ";\n";
    return os.str();
}

std::string generate_omelette(const instance_spec& spec, const std::string& name) {
    int target = spec.a;
    require(target >= 1, "omelette needs a positive egg count");
    int nbits = bits_for(target);
    auto cnt_a = counter_bits("CntA", nbits);
    auto cnt_b = counter_bits("CntB", nbits);

    std::ostringstream os;
    os << "DOMAIN " << name << "\n\n";
    os << "ACTIONS Break_A, Break_B, Pour_A_B, Pour_B_A, Discard_A, Discard_B;\n";
    std::vector<std::string> fluents = cnt_a;
    fluents.insert(fluents.end(), cnt_b.begin(), cnt_b.end());
    fluents.push_back("Spoiled_A");
    fluents.push_back("Spoiled_B");
    os << "FLUENTS " << join(fluents) << " : boolean;\n";
    os << "INERTIAL " << join(fluents) << ";\n";
    os << "ALWAYS " << le_const(cnt_a, target) << ";\n";
    os << "ALWAYS " << le_const(cnt_b, target) << ";\n\n";

    auto emit_break = [&](const std::string& act, const std::vector<std::string>& cnt,
                          const std::string& spoiled) {
        os << act << " HAS PRECONDITIONS " << lt_const(cnt, target) << ";\n";
        // binary increment: bit k flips when all lower bits carry
        for (std::size_t k = 0; k < cnt.size(); ++k) {
            std::string carry;
            for (std::size_t m = 0; m < k; ++m) carry += " & " + cnt[m];
            os << act << " CAUSES " << cnt[k] << " IF !" << cnt[k] << carry << ";\n";
            os << act << " CAUSES !" << cnt[k] << " IF " << cnt[k] << carry << ";\n";
        }
        // the egg may be rotten: the bowl may spoil, and stays spoiled once it is
        os << act << " CAUSES " << spoiled << " IF " << spoiled << ";\n";
        os << act << " POSSIBLY CHANGES " << spoiled << ";\n";
    };
    emit_break("Break_A", cnt_a, "Spoiled_A");
    emit_break("Break_B", cnt_b, "Spoiled_B");

    auto emit_pour = [&](const std::string& act, const std::vector<std::string>& src,
                         const std::vector<std::string>& dst,
                         const std::string& s_src, const std::string& s_dst) {
        os << act << " HAS PRECONDITIONS " << eq_const(dst, 0) << ";\n";
        for (std::size_t k = 0; k < src.size(); ++k) {
            os << act << " CAUSES " << dst[k] << " IF " << src[k] << ";\n";
            os << act << " CAUSES !" << dst[k] << " IF !" << src[k] << ";\n";
            os << act << " CAUSES !" << src[k] << ";\n";
        }
        os << act << " CAUSES " << s_dst << " IF " << s_src << ";\n";
        os << act << " CAUSES !" << s_dst << " IF !" << s_src << ";\n";
        os << act << " CAUSES !" << s_src << ";\n";
    };
    emit_pour("Pour_A_B", cnt_a, cnt_b, "Spoiled_A", "Spoiled_B");
    emit_pour("Pour_B_A", cnt_b, cnt_a, "Spoiled_B", "Spoiled_A");

    for (const char* bowl : {"A", "B"}) {
        std::string act = std::string("Discard_") + bowl;
        const auto& cnt = *bowl == 'A' ? cnt_a : cnt_b;
        for (const auto& bit : cnt) os << act << " CAUSES !" << bit << ";\n";
        os << act << " CAUSES !Spoiled_" << bowl << ";\n";
    }

    os << "\nINITIALLY " << eq_const(cnt_a, 0) << " & " << eq_const(cnt_b, 0)
       << " & !Spoiled_A & !Spoiled_B;\n";
    os << "CONFORMANT " << eq_const(cnt_b, target) << " & !Spoiled_B;\n";
    return os.str();
}

instance_spec canonical(instance_spec spec) {
    if (spec.var == variant::none) {
        if (spec.fam == family::square || spec.fam == family::cube)
            spec.var = variant::corner;
        else if (spec.fam == family::bmtc)
            spec.var = variant::low;
    }
    return spec;
}

} // namespace

std::string family_name(family f) {
    switch (f) {
    case family::bt: return "bt";
    case family::btc: return "btc";
    case family::btuc: return "btuc";
    case family::bmtc: return "bmtc";
    case family::ring: return "ring";
    case family::uring: return "uring";
    case family::ndring: return "ndring";
    case family::square: return "square";
    case family::cube: return "cube";
    case family::omelette: return "omelette";
    }
    throw internal_error("family_name: bad family");
}

std::optional<family> family_from_name(const std::string& name) {
    for (family f : {family::bt, family::btc, family::btuc, family::bmtc,
                     family::ring, family::uring, family::ndring, family::square,
                     family::cube, family::omelette})
        if (family_name(f) == name) return f;
    return std::nullopt;
}

std::string variant_name(variant v) {
    switch (v) {
    case variant::none: return "none";
    case variant::corner: return "corner";
    case variant::face: return "face";
    case variant::center: return "center";
    case variant::low: return "low";
    case variant::mid: return "mid";
    case variant::high: return "high";
    }
    throw internal_error("variant_name: bad variant");
}

std::optional<variant> variant_from_name(const std::string& name) {
    for (variant v : {variant::none, variant::corner, variant::face, variant::center,
                      variant::low, variant::mid, variant::high})
        if (variant_name(v) == name) return v;
    return std::nullopt;
}

std::string instance_name(const instance_spec& raw) {
    instance_spec spec = canonical(raw);
    std::string out = family_name(spec.fam) + "_" + std::to_string(spec.a);
    if (spec.fam == family::bmtc || spec.fam == family::ndring)
        out += "_" + std::to_string(spec.b);
    if (spec.var != variant::none) out += "_" + variant_name(spec.var);
    return out;
}

std::string generate(const instance_spec& raw) {
    instance_spec spec = canonical(raw);
    std::string name = instance_name(spec);
    switch (spec.fam) {
    case family::bt:
    case family::btc:
    case family::btuc:
    case family::bmtc:
        return generate_bomb(spec, name);
    case family::ring:
    case family::uring:
    case family::ndring:
        return generate_ring(spec, name);
    case family::square:
    case family::cube:
        return generate_grid(spec, name);
    case family::omelette:
        return generate_omelette(spec, name);
    }
    throw internal_error("generate: bad family");
}

namespace {

std::vector<registry_row> build_registry() {
    std::vector<registry_row> rows;
    auto plan_row = [&](family f, int a, int b, variant v, std::size_t len,
                        const char* src) {
        rows.push_back({{f, a, b, v}, expectation::plan, len, src});
    };
    for (int p = 1; p <= 10; ++p)
        plan_row(family::bt, p, 0, variant::none, static_cast<std::size_t>(p),
                 "bt series");
    for (int p = 1; p <= 10; ++p)
        plan_row(family::btc, p, 0, variant::none, static_cast<std::size_t>(2 * p - 1),
                 "btc series");
    for (int p = 1; p <= 10; ++p)
        plan_row(family::btuc, p, 0, variant::none, static_cast<std::size_t>(2 * p - 1),
                 "btuc series");
    const int bmtc_spots[][3] = {{2, 2, 2}, {4, 2, 6}, {10, 2, 18}, {4, 4, 4}, {6, 6, 6}};
    for (const auto& s : bmtc_spots)
        plan_row(family::bmtc, s[0], s[1], variant::low,
                 static_cast<std::size_t>(s[2]), "bmtc series");
    for (int r = 2; r <= 8; ++r)
        plan_row(family::ring, r, 0, variant::none, static_cast<std::size_t>(3 * r - 1),
                 "ring series");
    for (int r = 2; r <= 8; ++r)
        plan_row(family::uring, r, 0, variant::none, static_cast<std::size_t>(3 * r - 1),
                 "uring series");
    for (int r = 2; r <= 6; ++r)
        for (int i = 1; i <= 5; ++i)
            plan_row(family::ndring, r, i, variant::none,
                     static_cast<std::size_t>(3 * r - 1), "ndring series");
    for (int n = 2; n <= 20; n += 2)
        plan_row(family::square, n, 0, variant::corner,
                 static_cast<std::size_t>(2 * (n - 1)), "square series");
    for (int n = 2; n <= 8; ++n)
        plan_row(family::cube, n, 0, variant::corner,
                 static_cast<std::size_t>(3 * (n - 1)), "cube series");
    for (int i = 3; i <= 8; ++i)
        rows.push_back(
            {{family::omelette, i, 0, variant::none}, expectation::fail, 0,
             "omelette series"});
    return rows;
}

} // namespace

std::span<const registry_row> registry() {
    static const std::vector<registry_row> rows = build_registry();
    return rows;
}

const registry_row* find_registry(const instance_spec& raw) {
    instance_spec spec = canonical(raw);
    for (const auto& row : registry())
        if (canonical(row.spec) == spec) return &row;
    return nullptr;
}

std::vector<registry_row> select(family f, int min_a, int max_a,
                                 std::optional<variant> var) {
    std::vector<registry_row> out;
    for (const auto& row : registry()) {
        if (row.spec.fam != f || row.spec.a < min_a || row.spec.a > max_a) continue;
        if (var && canonical(row.spec).var != *var) continue;
        out.push_back(row);
    }
    return out;
}

std::vector<suite_row> run_suite(std::span<const registry_row> rows,
                                 const suite_options& opts) {
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    std::vector<suite_row> out;
    for (const auto& row : rows) {
        suite_row res;
        res.spec = canonical(row.spec);
        if (clock::now() - start > opts.budget) {
            res.skipped = true;
            out.push_back(res);
            continue;
        }
        auto t0 = clock::now();
        lang::domain d = lang::load(generate(row.spec));
        dd::node_store store(opts.store);
        sym::symbolic_domain sd = sym::compile(d, store);
        planner::options popts;
        popts.max_depth = opts.max_depth;
        popts.prune = opts.prune;
        planner::search_report report = planner::conformant_plan(sd, popts);
        auto t1 = clock::now();
        res.got = report.verdict;
        res.length = report.length;
        res.beliefs_inserted = report.beliefs_inserted;
        res.belief_hits = report.belief_hits;
        res.elapsed_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        res.pass = row.expected == expectation::plan
                       ? report.verdict == planner::outcome::plan &&
                             report.length == row.length
                       : report.verdict == planner::outcome::fail;
        out.push_back(res);
    }
    return out;
}

} // namespace cmbp::bench
