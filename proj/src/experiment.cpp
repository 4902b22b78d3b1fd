#include "cno/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "cno/evolution.hpp"
#include "cno/witness.hpp"

namespace cno {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw InvalidArgument("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& prefix,
                    const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            field_error(prefix + key, "unknown key");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& field,
                  double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        field_error(field, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        field_error(field, "must be finite");
    }
    return d;
}

int get_int(const json& obj, const std::string& key, const std::string& field, int fallback,
            int min_value) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        field_error(field, "expected an integer");
    }
    const auto i = v.get<long long>();
    if (i < min_value || i > 1'000'000'000LL) {
        field_error(field, "must be an integer >= " + std::to_string(min_value));
    }
    return static_cast<int>(i);
}

bool get_bool(const json& obj, const std::string& key, const std::string& field, bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_boolean()) {
        field_error(field, "expected true or false");
    }
    return obj.at(key).get<bool>();
}

std::vector<int> get_int_list(const json& obj, const std::string& key, const std::string& field,
                              std::vector<int> fallback, int min_value) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_array() || v.empty()) {
        field_error(field, "expected a non-empty list of integers");
    }
    std::vector<int> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number_integer() || v[k].get<long long>() < min_value) {
            field_error(field + "[" + std::to_string(k) + "]",
                        "expected an integer >= " + std::to_string(min_value));
        }
        out.push_back(v[k].get<int>());
    }
    return out;
}

struct Label {
    int flavor;
    bool anti;
};

Label parse_label(const std::string& s, int nf, const std::string& field) {
    std::string base = s;
    bool anti = false;
    if (base.size() > 3 && base.compare(base.size() - 3, 3, "bar") == 0) {
        anti = true;
        base.resize(base.size() - 3);
    }
    int f = -1;
    if (base == "e") {
        f = 0;
    } else if (base == "mu") {
        f = 1;
    } else if (base == "tau") {
        f = 2;
    }
    if (f < 0 || f >= nf) {
        field_error(field, "unknown flavor '" + s + "' for nf=" + std::to_string(nf) +
                               " (use e, mu" + (nf == 3 ? ", tau" : "") + ", optionally with 'bar')");
    }
    return {f, anti};
}

const char* flavor_name(int f) {
    static const char* names[] = {"e", "mu", "tau"};
    return names[f];
}

json species_json(const SystemSpec& spec) {
    json out = json::array();
    for (auto s : spec.species) {
        out.push_back(s == Species::Neutrino ? "nu" : "nubar");
    }
    return out;
}

json matrix_json(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        out.push_back(row);
    }
    return out;
}

json resolved_json(const ExperimentConfig& c) {
    const auto& s = c.spec;
    json j;
    j["nf"] = s.nf;
    j["n_modes"] = s.n_modes;
    j["energy_ev"] = s.energies;
    j["delta_m2_ev2"] = s.delta_m2;
    j["big_delta_m2_ev2"] = s.big_delta_m2;
    j["theta12"] = s.pmns.theta12;
    j["theta13"] = s.pmns.theta13;
    j["theta23"] = s.pmns.theta23;
    j["delta_cp"] = s.pmns.delta_cp;
    j["k_ev"] = s.coupling_k;
    j["angles"] = matrix_json(s.angles);
    j["species"] = species_json(s);
    j["statistics"] = s.statistics == Statistics::Dirac ? "dirac" : "majorana";
    j["b_vector_choice"] = to_string(s.b_choice);
    if (s.b_override) {
        j["b_vector"] = std::vector<double>(s.b_override->data(),
                                            s.b_override->data() + s.b_override->size());
    }
    j["interaction_only"] = s.interaction_only;
    json init = json::array();
    for (std::size_t p = 0; p < c.initial.size(); ++p) {
        std::string name = flavor_name(c.initial[p]);
        if (s.species[p] == Species::Antineutrino) {
            name += "bar";
        }
        init.push_back(name);
    }
    j["initial"] = init;
    j["times"] = c.times;
    j["seed"] = c.seed;
    const auto& a = c.aqae;
    json aq;
    aq["K"] = a.bits;
    aq["max_zoom"] = a.max_zoom;
    aq["reads"] = a.reads;
    aq["sweeps"] = a.sweeps;
    if (a.beta_start) aq["beta_start"] = *a.beta_start;
    if (a.beta_end) aq["beta_end"] = *a.beta_end;
    aq["convergence_window"] = a.convergence_window;
    aq["convergence_pct"] = a.convergence_pct;
    aq["rewind"] = a.rewind_enabled;
    aq["max_rewinds"] = a.max_rewinds;
    aq["reverse"] = a.reverse_enabled;
    aq["freeze_initial"] = a.freeze_initial;
    aq["energy_tolerance"] = a.energy_tolerance;
    aq["steps"] = a.steps;
    if (a.penalty_weight) aq["penalty_weight"] = *a.penalty_weight;
    aq["max_block_size"] = a.max_block_size;
    j["aqae"] = aq;
    const auto& b = c.bench;
    j["bench"] = {{"time", b.time},           {"max_zoom", b.max_zoom},
                  {"K", b.bits},              {"sweeps", b.sweeps},
                  {"reads", b.reads},         {"base_K", b.base_bits},
                  {"base_sweeps", b.base_sweeps}, {"base_reads", b.base_reads}};
    j["qubo"] = {{"time", c.qubo.time},
                 {"zoom", c.qubo.zoom},
                 {"direction", to_string(c.qubo.direction)},
                 {"block", c.qubo.block}};
    return j;
}

std::string provenance_header(const std::string& command, const ExperimentConfig& cfg) {
    std::string out = "# cno " + command + "\n";
    out += "# seed: " + std::to_string(cfg.seed) + "\n";
    out += "# config: " + cfg.resolved.dump() + "\n";
    return out;
}

}  // namespace

StateVector ExperimentConfig::initial_state() const {
    return StateVector::product(initial, Basis::Flavor, spec.nf);
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidArgument("config must be a JSON object");
    }
    reject_unknown(j, "",
                   {"nf", "n_modes", "energy_ev", "delta_m2_ev2", "big_delta_m2_ev2", "theta12",
                    "theta13", "theta23", "delta_cp", "k_ev", "xi", "theta_pair", "angles",
                    "species", "statistics", "b_vector_choice", "b_vector", "interaction_only",
                    "initial", "times", "seed", "aqae", "bench", "qubo"});

    ExperimentConfig cfg;
    const int nf = get_int(j, "nf", "nf", 3, 2);
    if (nf != 2 && nf != 3) {
        field_error("nf", "must be 2 or 3");
    }
    const int n = get_int(j, "n_modes", "n_modes", 2, 1);
    try {
        hilbert_dim(nf, n);
    } catch (const InvalidArgument& e) {
        field_error("n_modes", e.what());
    }
    SystemSpec spec = table1_spec(n, nf);

    if (j.contains("energy_ev")) {
        const auto& e = j.at("energy_ev");
        if (e.is_number()) {
            spec.energies.assign(static_cast<std::size_t>(n), get_number(j, "energy_ev", "energy_ev", 0));
        } else if (e.is_array() && e.size() == static_cast<std::size_t>(n)) {
            for (std::size_t p = 0; p < e.size(); ++p) {
                if (!e[p].is_number()) {
                    field_error("energy_ev[" + std::to_string(p) + "]", "expected a number");
                }
                spec.energies[p] = e[p].get<double>();
            }
        } else {
            field_error("energy_ev", "expected a number or one number per mode");
        }
        for (double v : spec.energies) {
            if (!(v > 0.0)) {
                field_error("energy_ev", "energies must be positive");
            }
        }
    }
    spec.delta_m2 = get_number(j, "delta_m2_ev2", "delta_m2_ev2", spec.delta_m2);
    spec.big_delta_m2 = get_number(j, "big_delta_m2_ev2", "big_delta_m2_ev2", spec.big_delta_m2);
    spec.pmns.theta12 = get_number(j, "theta12", "theta12", spec.pmns.theta12);
    spec.pmns.theta13 = get_number(j, "theta13", "theta13", spec.pmns.theta13);
    spec.pmns.theta23 = get_number(j, "theta23", "theta23", spec.pmns.theta23);
    spec.pmns.delta_cp = get_number(j, "delta_cp", "delta_cp", spec.pmns.delta_cp);
    spec.coupling_k = get_number(j, "k_ev", "k_ev", spec.coupling_k);
    if (spec.coupling_k < 0.0) {
        field_error("k_ev", "must be nonnegative");
    }

    const int angle_keys = static_cast<int>(j.contains("xi")) + static_cast<int>(j.contains("theta_pair")) +
                           static_cast<int>(j.contains("angles"));
    if (angle_keys > 1) {
        field_error("angles", "give at most one of xi, theta_pair, angles");
    }
    if (j.contains("xi")) {
        if (n < 2) {
            field_error("xi", "needs at least two modes");
        }
        const double xi = get_number(j, "xi", "xi", 0.9);
        if (std::abs(xi) > 1.0) {
            field_error("xi", "must satisfy |xi| <= 1");
        }
        spec.angles = anisotropic_angles(xi, n);
    } else if (j.contains("theta_pair")) {
        const double th = get_number(j, "theta_pair", "theta_pair", std::numbers::pi / 4);
        spec.angles = RMatrix::Constant(n, n, th);
        spec.angles.diagonal().setZero();
    } else if (j.contains("angles")) {
        const auto& a = j.at("angles");
        if (!a.is_array() || a.size() != static_cast<std::size_t>(n)) {
            field_error("angles", "expected an N x N list of lists");
        }
        for (int r = 0; r < n; ++r) {
            const auto& row = a[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
                field_error("angles[" + std::to_string(r) + "]", "expected " + std::to_string(n) + " numbers");
            }
            for (int c = 0; c < n; ++c) {
                if (!row[static_cast<std::size_t>(c)].is_number()) {
                    field_error("angles[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                                "expected a number");
                }
                spec.angles(r, c) = row[static_cast<std::size_t>(c)].get<double>();
            }
        }
    }

    if (j.contains("statistics")) {
        const auto& s = j.at("statistics");
        if (s == "dirac") {
            spec.statistics = Statistics::Dirac;
        } else if (s == "majorana") {
            spec.statistics = Statistics::Majorana;
        } else {
            field_error("statistics", "expected \"dirac\" or \"majorana\"");
        }
    }
    if (j.contains("b_vector_choice")) {
        if (!j.at("b_vector_choice").is_string()) {
            field_error("b_vector_choice", "expected a string");
        }
        try {
            spec.b_choice = parse_b_vector_choice(j.at("b_vector_choice").get<std::string>());
        } catch (const InvalidArgument& e) {
            field_error("b_vector_choice", e.what());
        }
    }
    if (j.contains("b_vector")) {
        const auto& b = j.at("b_vector");
        const std::size_t want = generators(nf).size();
        if (!b.is_array() || b.size() != want) {
            field_error("b_vector", "expected " + std::to_string(want) + " numbers");
        }
        RVector v(static_cast<Eigen::Index>(want));
        for (std::size_t k = 0; k < want; ++k) {
            if (!b[k].is_number()) {
                field_error("b_vector[" + std::to_string(k) + "]", "expected a number");
            }
            v(static_cast<Eigen::Index>(k)) = b[k].get<double>();
        }
        spec.b_override = v;
    }
    spec.interaction_only = get_bool(j, "interaction_only", "interaction_only", false);

    // Initial flavors; a "bar" suffix marks an antineutrino mode.
    std::vector<Label> labels;
    if (j.contains("initial")) {
        const auto& init = j.at("initial");
        if (!init.is_array() || init.size() != static_cast<std::size_t>(n)) {
            field_error("initial", "expected one flavor label per mode");
        }
        for (std::size_t p = 0; p < init.size(); ++p) {
            const std::string f = "initial[" + std::to_string(p) + "]";
            if (!init[p].is_string()) {
                field_error(f, "expected a flavor name");
            }
            labels.push_back(parse_label(init[p].get<std::string>(), nf, f));
        }
    } else {
        for (int p = 0; p < n; ++p) {
            labels.push_back({0, false});
        }
    }
    for (std::size_t p = 0; p < labels.size(); ++p) {
        spec.species[p] = labels[p].anti ? Species::Antineutrino : Species::Neutrino;
        cfg.initial.push_back(labels[p].flavor);
    }
    if (j.contains("species")) {
        const auto& sp = j.at("species");
        if (!sp.is_array() || sp.size() != static_cast<std::size_t>(n)) {
            field_error("species", "expected one of \"nu\"/\"nubar\" per mode");
        }
        for (std::size_t p = 0; p < sp.size(); ++p) {
            const std::string f = "species[" + std::to_string(p) + "]";
            Species s;
            if (sp[p] == "nu") {
                s = Species::Neutrino;
            } else if (sp[p] == "nubar") {
                s = Species::Antineutrino;
            } else {
                field_error(f, "expected \"nu\" or \"nubar\"");
            }
            if (j.contains("initial") && s != spec.species[p]) {
                field_error(f, "disagrees with the 'bar' marking of initial[" + std::to_string(p) + "]");
            }
            spec.species[p] = s;
        }
    }
    try {
        spec.validate();
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    cfg.spec = spec;

    if (j.contains("times")) {
        const auto& t = j.at("times");
        if (t.is_array()) {
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (!t[k].is_number() || !(t[k].get<double>() >= 0.0)) {
                    field_error("times[" + std::to_string(k) + "]", "expected a nonnegative number");
                }
                cfg.times.push_back(t[k].get<double>());
            }
        } else if (t.is_object()) {
            reject_unknown(t, "times.", {"start", "step", "count"});
            const double start = get_number(t, "start", "times.start", 0.0);
            const double step = get_number(t, "step", "times.step", 0.0);
            const int count = get_int(t, "count", "times.count", 0, 0);
            if (start < 0.0 || (count > 1 && !(step > 0.0))) {
                field_error("times", "start must be >= 0 and step > 0");
            }
            for (int k = 0; k < count; ++k) {
                cfg.times.push_back(start + step * k);
            }
        } else {
            field_error("times", "expected a list or {start, step, count}");
        }
    } else {
        for (int k = 1; k <= 9; ++k) {
            cfg.times.push_back(1.1e12 * k);
        }
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0)) {
            field_error("seed", "expected a nonnegative integer");
        }
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("aqae")) {
        const auto& a = j.at("aqae");
        if (!a.is_object()) {
            field_error("aqae", "expected an object");
        }
        reject_unknown(a, "aqae.",
                       {"K", "max_zoom", "reads", "sweeps", "beta_start", "beta_end",
                        "convergence_window", "convergence_pct", "rewind", "max_rewinds",
                        "reverse", "freeze_initial", "energy_tolerance", "steps",
                        "penalty_weight", "max_block_size"});
        auto& q = cfg.aqae;
        q.bits = get_int(a, "K", "aqae.K", q.bits, 1);
        q.max_zoom = get_int(a, "max_zoom", "aqae.max_zoom", q.max_zoom, 1);
        q.reads = get_int(a, "reads", "aqae.reads", q.reads, 1);
        q.sweeps = get_int(a, "sweeps", "aqae.sweeps", q.sweeps, 0);
        if (a.contains("beta_start")) q.beta_start = get_number(a, "beta_start", "aqae.beta_start", 1.0);
        if (a.contains("beta_end")) q.beta_end = get_number(a, "beta_end", "aqae.beta_end", 1.0);
        q.convergence_window = get_int(a, "convergence_window", "aqae.convergence_window", q.convergence_window, 1);
        q.convergence_pct = get_number(a, "convergence_pct", "aqae.convergence_pct", q.convergence_pct);
        q.rewind_enabled = get_bool(a, "rewind", "aqae.rewind", q.rewind_enabled);
        q.max_rewinds = get_int(a, "max_rewinds", "aqae.max_rewinds", q.max_rewinds, 0);
        q.reverse_enabled = get_bool(a, "reverse", "aqae.reverse", q.reverse_enabled);
        q.freeze_initial = get_bool(a, "freeze_initial", "aqae.freeze_initial", q.freeze_initial);
        q.energy_tolerance = get_number(a, "energy_tolerance", "aqae.energy_tolerance", q.energy_tolerance);
        q.steps = get_int(a, "steps", "aqae.steps", q.steps, 1);
        if (a.contains("penalty_weight")) q.penalty_weight = get_number(a, "penalty_weight", "aqae.penalty_weight", 0.0);
        q.max_block_size = static_cast<std::size_t>(get_int(a, "max_block_size", "aqae.max_block_size", 0, 0));
        try {
            q.validate();
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(std::string("config field 'aqae': ") + e.what());
        }
    }
    cfg.aqae.seed = cfg.seed;

    if (j.contains("bench")) {
        const auto& b = j.at("bench");
        if (!b.is_object()) {
            field_error("bench", "expected an object");
        }
        reject_unknown(b, "bench.", {"time", "max_zoom", "K", "sweeps", "reads", "base_K",
                                     "base_sweeps", "base_reads"});
        auto& c = cfg.bench;
        c.time = get_number(b, "time", "bench.time", c.time);
        c.max_zoom = get_int(b, "max_zoom", "bench.max_zoom", c.max_zoom, 0);
        c.bits = get_int_list(b, "K", "bench.K", c.bits, 1);
        c.sweeps = get_int_list(b, "sweeps", "bench.sweeps", c.sweeps, 0);
        c.reads = get_int_list(b, "reads", "bench.reads", c.reads, 1);
        c.base_bits = get_int(b, "base_K", "bench.base_K", c.base_bits, 1);
        c.base_sweeps = get_int(b, "base_sweeps", "bench.base_sweeps", c.base_sweeps, 0);
        c.base_reads = get_int(b, "base_reads", "bench.base_reads", c.base_reads, 1);
    }

    if (j.contains("qubo")) {
        const auto& q = j.at("qubo");
        if (!q.is_object()) {
            field_error("qubo", "expected an object");
        }
        reject_unknown(q, "qubo.", {"time", "zoom", "direction", "block"});
        cfg.qubo.time = get_number(q, "time", "qubo.time", cfg.qubo.time);
        cfg.qubo.zoom = get_int(q, "zoom", "qubo.zoom", 0, 0);
        cfg.qubo.block = get_int(q, "block", "qubo.block", -1, -1);
        if (q.contains("direction")) {
            if (q.at("direction") == "forward") {
                cfg.qubo.direction = Direction::Forward;
            } else if (q.at("direction") == "reverse") {
                cfg.qubo.direction = Direction::Reverse;
            } else {
                field_error("qubo.direction", "expected \"forward\" or \"reverse\"");
            }
        }
    }

    cfg.resolved = resolved_json(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(source + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(source + ": " + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void set_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.aqae.seed = seed;
    cfg.resolved = resolved_json(cfg);
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string witness_csv_header(int n_modes) {
    std::string out = "time_ev_inv";
    for (int p = 1; p <= n_modes; ++p) {
        out += ",S_" + std::to_string(p);
    }
    for (int i = 1; i <= n_modes; ++i) {
        for (int j = i + 1; j <= n_modes; ++j) {
            out += ",N_" + std::to_string(i) + std::to_string(j);
        }
    }
    return out + "\n";
}

std::string witness_csv_row(const WitnessReport& r) {
    std::string out = format_number(r.time);
    for (double s : r.entropies) {
        out += "," + format_number(s);
    }
    for (const auto& n : r.negativities) {
        out += "," + format_number(n.value);
    }
    return out + "\n";
}

std::string run_evolve(const ExperimentConfig& cfg) {
    const auto states = evolve_series(cfg.spec, cfg.initial_state(), cfg.times);
    std::string out = provenance_header("evolve", cfg);
    out += witness_csv_header(cfg.spec.n_modes);
    for (std::size_t k = 0; k < states.size(); ++k) {
        out += witness_csv_row(witness_report(states[k], cfg.times[k]));
    }
    return out;
}

StateVector evolve_final_state(const ExperimentConfig& cfg) {
    if (cfg.times.empty()) {
        return cfg.initial_state();
    }
    const double t = cfg.times.back();
    return evolve_series(cfg.spec, cfg.initial_state(), std::span<const double>(&t, 1)).front();
}

AqaeExperiment run_aqae_experiment(const ExperimentConfig& cfg, bool oracle) {
    AqaeConfig aq = cfg.aqae;
    aq.track_overlap = oracle;
    const auto results = run_aqae_blocked(cfg.spec, cfg.initial_state(), cfg.times, aq, oracle);

    AqaeExperiment out;
    out.witness_csv = provenance_header("aqae", cfg) + witness_csv_header(cfg.spec.n_modes);
    json times = json::array();
    double min_overlap = 1.0;
    for (const auto& r : results) {
        out.witness_csv += witness_csv_row(r.witnesses);
        json blocks = json::array();
        for (const auto& b : r.blocks) {
            json jb = {{"block", b.block},
                       {"occupation", b.occupation},
                       {"size", b.size},
                       {"weight", b.weight},
                       {"skipped", b.skipped},
                       {"converged", b.converged},
                       {"zoom_steps", b.zoom_steps},
                       {"rewinds", b.rewinds},
                       {"final_energy", b.final_energy},
                       {"status", b.status}};
            if (b.overlap) {
                jb["overlap"] = *b.overlap;
                min_overlap = std::min(min_overlap, *b.overlap);
            }
            json iters = json::array();
            for (const auto& it : b.iterations) {
                json ji = {{"zoom", it.zoom},
                           {"direction", to_string(it.direction)},
                           {"clock_energy", it.clock_energy}};
                if (it.overlap) {
                    ji["overlap"] = *it.overlap;
                }
                if (it.rewound) {
                    ji["rewound"] = true;
                }
                iters.push_back(ji);
            }
            jb["iterations"] = iters;
            out.all_converged = out.all_converged && b.converged;
            blocks.push_back(jb);
        }
        json neg = json::array();
        for (const auto& n : r.witnesses.negativities) {
            neg.push_back({{"i", n.i + 1}, {"j", n.j + 1}, {"value", n.value}});
        }
        times.push_back({{"time", r.time},
                         {"blocks", blocks},
                         {"entropies", r.witnesses.entropies},
                         {"negativities", neg}});
    }
    out.report = {{"command", "aqae"},
                  {"seed", cfg.seed},
                  {"config", cfg.resolved},
                  {"oracle", oracle},
                  {"all_converged", out.all_converged},
                  {"times", times}};
    if (oracle) {
        out.report["min_block_overlap"] = min_overlap;
    }
    return out;
}

std::string run_bench(const ExperimentConfig& cfg) {
    const auto& b = cfg.bench;
    const StateVector init = cfg.initial_state();
    const CMatrix h = build_hamiltonian(cfg.spec, Basis::Flavor).matrix;

    std::string out = provenance_header("bench", cfg);
    out += "axis,value,zoom,infidelity,clock_energy\n";
    auto run_cell = [&](const std::string& axis, int value, int bits, int sweeps, int reads) {
        AqaeConfig aq = cfg.aqae;
        aq.bits = bits;
        aq.sweeps = sweeps;
        aq.reads = reads;
        aq.max_zoom = b.max_zoom + 1;
        aq.energy_tolerance = 0.0;
        aq.rewind_enabled = false;
        aq.track_overlap = true;
        const AqaeResult r = run_aqae(h, init.amplitudes(), b.time, aq);
        // One row per zoom level: the state after its last (lowest-energy) anneal.
        for (std::size_t k = 0; k < r.iterations.size(); ++k) {
            const bool last_of_zoom =
                k + 1 == r.iterations.size() || r.iterations[k + 1].zoom != r.iterations[k].zoom;
            if (!last_of_zoom) {
                continue;
            }
            const auto& it = r.iterations[k];
            out += axis + "," + std::to_string(value) + "," + std::to_string(it.zoom) + "," +
                   format_number(1.0 - it.overlap.value_or(0.0)) + "," +
                   format_number(it.clock_energy) + "\n";
        }
    };
    for (int k : b.bits) {
        run_cell("K", k, k, b.base_sweeps, b.base_reads);
    }
    for (int s : b.sweeps) {
        run_cell("sweeps", s, b.base_bits, s, b.base_reads);
    }
    for (int r : b.reads) {
        run_cell("reads", r, b.base_bits, b.base_sweeps, r);
    }
    return out;
}

std::string block_census(int nf, int n_modes) {
    const auto blocks = mass_blocks(nf, n_modes);
    std::ostringstream out;
    out << "# nf=" << nf << " n_modes=" << n_modes << " blocks=" << blocks.size()
        << " states=" << hilbert_dim(nf, n_modes) << "\n";
    out << "block,occupation,size\n";
    std::map<std::size_t, int> by_size;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        out << k << ",";
        for (std::size_t m = 0; m < blocks[k].occupation.size(); ++m) {
            out << (m ? "-" : "") << blocks[k].occupation[m];
        }
        out << "," << blocks[k].indices.size() << "\n";
        ++by_size[blocks[k].indices.size()];
    }
    out << "# sizes:";
    for (const auto& [size, count] : by_size) {
        out << " " << count << "x" << size;
    }
    out << "\n";
    return out.str();
}

DigitizedQubo export_clock_qubo(const ExperimentConfig& cfg) {
    StateVector init = cfg.initial_state();
    CMatrix h;
    CVector psi;
    if (cfg.qubo.block < 0) {
        h = build_hamiltonian(cfg.spec, Basis::Flavor).matrix;
        psi = init.amplitudes();
    } else {
        const auto blocks = mass_blocks(cfg.spec.nf, cfg.spec.n_modes);
        if (static_cast<std::size_t>(cfg.qubo.block) >= blocks.size()) {
            field_error("qubo.block", "index out of range (" + std::to_string(blocks.size()) + " blocks)");
        }
        const auto& block = blocks[static_cast<std::size_t>(cfg.qubo.block)];
        const StateVector mass = change_basis(init, Basis::Mass, cfg.spec.pmns);
        h = restrict_to_block(build_dirac_hamiltonian(cfg.spec, Basis::Mass), block);
        psi = CVector(static_cast<Eigen::Index>(block.indices.size()));
        for (std::size_t k = 0; k < block.indices.size(); ++k) {
            psi(static_cast<Eigen::Index>(k)) = mass.amplitudes()(static_cast<Eigen::Index>(block.indices[k]));
        }
        const double w = psi.norm();
        if (w <= 1e-12) {
            field_error("qubo.block", "the initial state has no weight in this block");
        }
        psi /= w;
    }
    const ClockMatrix clock = build_clock(h, psi, cfg.qubo.time, cfg.aqae.steps, cfg.aqae.penalty_weight);
    const RMatrix real_c = real_embed(clock.matrix);
    const Eigen::Index d = h.rows();
    const Eigen::Index m = d * clock.registers();
    RVector prior = RVector::Zero(2 * m);
    prior.segment(0, d) = psi.real();
    prior.segment(m, d) = psi.imag();
    std::vector<bool> active(static_cast<std::size_t>(2 * m), true);
    if (cfg.aqae.freeze_initial) {
        for (Eigen::Index a = 0; a < d; ++a) {
            active[static_cast<std::size_t>(a)] = false;
            active[static_cast<std::size_t>(m + a)] = false;
        }
    }
    return build_qubo(real_c, {cfg.aqae.bits, cfg.qubo.zoom, cfg.qubo.direction}, prior, active);
}

void write_state(std::ostream& out, const StateVector& s) {
    const auto old = out.precision(17);
    out << "state " << s.nf() << ' ' << s.n_modes() << ' ' << to_string(s.basis()) << '\n';
    for (Eigen::Index k = 0; k < s.amplitudes().size(); ++k) {
        out << s.amplitudes()(k).real() << ' ' << s.amplitudes()(k).imag() << '\n';
    }
    out.precision(old);
}

StateVector read_state(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    int nf = 0, n = 0;
    std::string basis;
    std::vector<Complex> amps;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        if (!header) {
            std::string tag;
            if (!(ss >> tag >> nf >> n >> basis) || tag != "state" ||
                (basis != "flavor" && basis != "mass")) {
                throw InvalidArgument("line " + std::to_string(line_no) +
                                      ": expected header 'state <nf> <n_modes> <flavor|mass>'");
            }
            header = true;
            continue;
        }
        double re = 0.0, im = 0.0;
        if (!(ss >> re >> im)) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected 're im'");
        }
        amps.emplace_back(re, im);
    }
    if (!header) {
        throw InvalidArgument("state stream has no header");
    }
    CVector psi(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) {
        psi(static_cast<Eigen::Index>(k)) = amps[k];
    }
    StateVector s(std::move(psi), basis == "flavor" ? Basis::Flavor : Basis::Mass, nf, n);
    if (std::abs(s.norm() - 1.0) > 1e-8) {
        throw InvalidArgument("state is not normalized (norm " + std::to_string(s.norm()) + ")");
    }
    return s;
}

json anneal_result_json(const AnnealResult& r) {
    std::string bits;
    for (auto b : r.best_bits) {
        bits.push_back(b ? '1' : '0');
    }
    return {{"best_bits", bits},
            {"best_energy", r.best_energy},
            {"beta_start", r.beta_start},
            {"beta_end", r.beta_end},
            {"read_energies", r.read_energies}};
}

}  // namespace cno
