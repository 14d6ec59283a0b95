#include "steerqkd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "steerqkd/errors.hpp"
#include "steerqkd/families.hpp"
#include "steerqkd/protocol.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/steering.hpp"

namespace steerqkd::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string line_col(const std::string &text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] void field_error(const std::string &source, const std::string &field,
                              const std::string &what) {
    throw ParseError(source + ": field '" + field + "': " + what);
}

double number_at(const Json &node, const std::string &source,
                 const std::string &field) {
    if (!node.is_number()) {
        field_error(source, field, "expected a number");
    }
    return node.get<double>();
}

Matrix4c parse_matrix(const Json &node, const std::string &source) {
    if (!node.is_array() || node.size() != 4) {
        field_error(source, "matrix", "expected 4 rows");
    }
    Matrix4c m;
    for (int r = 0; r < 4; ++r) {
        const std::string row_field = "matrix[" + std::to_string(r) + "]";
        const Json &row = node[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != 4) {
            field_error(source, row_field, "expected 4 entries");
        }
        for (int c = 0; c < 4; ++c) {
            const std::string field = row_field + "[" + std::to_string(c) + "]";
            const Json &z = row[static_cast<std::size_t>(c)];
            if (!z.is_array() || z.size() != 2) {
                field_error(source, field, "expected an [re, im] pair");
            }
            m(r, c) = Complex(number_at(z[0], source, field + "[0]"),
                              number_at(z[1], source, field + "[1]"));
        }
    }
    return m;
}

// Reads exactly the expected parameter names from "params".
std::vector<double> family_params(const Json &params, const std::string &source,
                                  const std::vector<std::string> &names) {
    if (!params.is_object()) {
        field_error(source, "params", "expected an object");
    }
    for (const auto &item : params.items()) {
        if (std::find(names.begin(), names.end(), item.key()) == names.end()) {
            field_error(source, "params." + item.key(), "unknown parameter");
        }
    }
    std::vector<double> out;
    for (const auto &name : names) {
        if (!params.contains(name)) {
            field_error(source, "params." + name, "missing");
        }
        out.push_back(number_at(params[name], source, "params." + name));
    }
    return out;
}

DensityMatrix build_family(const Json &doc, const std::string &source) {
    if (!doc["family"].is_string()) {
        field_error(source, "family", "expected a string");
    }
    const std::string family = doc["family"].get<std::string>();
    const Json params = doc.contains("params") ? doc["params"] : Json::object();
    if (family == "bell_diagonal") {
        const auto w = family_params(params, source, {"w1", "w2", "w3", "w4"});
        return make_bell_diagonal({w[0], w[1], w[2], w[3]});
    }
    if (family == "werner") {
        return make_werner({family_params(params, source, {"omega"})[0]});
    }
    if (family == "gamma") {
        const auto g = family_params(params, source, {"q", "alpha"});
        return make_gamma({g[0], g[1]});
    }
    field_error(source, "family",
                "unknown family '" + family + "' (bell_diagonal, werner, gamma)");
}

Json vec_json(const Vec3 &v) { return Json::array({v[0], v[1], v[2]}); }

Json mat_json(const Mat3 &m) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back(vec_json(m.row(r).transpose()));
    }
    return rows;
}

Json triad_json(const MeasurementTriad &t) {
    return Json::array({vec_json(t[0]), vec_json(t[1]), vec_json(t[2])});
}

Json array_json(const std::array<double, 3> &a) {
    return Json::array({a[0], a[1], a[2]});
}

std::string bits(const std::vector<std::uint8_t> &key) {
    std::string s;
    s.reserve(key.size());
    for (auto b : key) {
        s.push_back(b != 0 ? '1' : '0');
    }
    return s;
}

FilterPair parse_filter(const std::string &text) {
    const auto v = parse_number_list(text);
    if (v.size() != 2) {
        throw ParseError("--filter expects e1,e2, got '" + text + "'");
    }
    return {v[0], v[1]};
}

} // namespace

DensityMatrix parse_state(const std::string &text, const std::string &source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw ParseError(source + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                         ": malformed JSON");
    }
    if (!doc.is_object()) {
        throw ParseError(source + ": top level must be an object");
    }
    const bool has_matrix = doc.contains("matrix");
    const bool has_family = doc.contains("family");
    if (has_matrix == has_family) {
        throw ParseError(source + ": exactly one of 'matrix' or 'family' is required");
    }
    if (has_matrix) {
        const Matrix4c m = parse_matrix(doc["matrix"], source);
        try {
            return DensityMatrix::from_matrix(m);
        } catch (const InvalidState &e) {
            throw InvalidState(source + ": field 'matrix': " + e.what());
        }
    }
    return build_family(doc, source);
}

DensityMatrix load_state(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot read state file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_state(buf.str(), path);
}

std::string cmd_analyze(const DensityMatrix &rho) {
    const BlochForm bf = bloch_decompose(rho);
    const TensorSpectrum spec = tensor_spectrum(bf);
    const SteeringVerdict steer = steering_verdict(spec);
    const UsefulnessVerdict use = classify_usefulness(spec);
    Json out;
    out["bloch"] = {{"a", vec_json(bf.a)}, {"b", vec_json(bf.b)}, {"W", mat_json(bf.W)}};
    out["spectrum"] = {{"sigma", array_json(spec.sigma)},
                       {"signed", array_json(spec.signed_values)}};
    out["f3_bound"] = steer.f3_bound;
    out["steerable"] = steer.steerable;
    out["chsh_bound"] = steer.chsh_bound;
    out["chsh_violating"] = steer.chsh_violating;
    out["q_min"] = use.q_min;
    out["q_min_two_settings"] = qber_min_two_settings(spec);
    out["critical_qber"] = use.critical_rate;
    out["useful"] = use.useful;
    out["margin"] = use.margin;
    out["key_rate_at_q_min"] = min_secure_key_rate(use.q_min);
    return out.dump(2) + "\n";
}

ScanResult cmd_scan(const std::string &family, const std::vector<std::string> &ranges,
                    const std::string &out_path) {
    std::vector<ScanRange> parsed;
    for (const auto &r : ranges) {
        parsed.push_back(parse_range(r));
    }
    ScanResult res = scan_family(family, parsed);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write '" + out_path + "'");
    }
    write_csv(res, out);
    return res;
}

std::string cmd_simulate(const DensityMatrix &rho, const std::string &source,
                         const SimulateOptions &opts) {
    ProtocolConfig cfg;
    cfg.rounds = opts.rounds;
    cfg.seed = opts.seed;
    cfg.test_fraction = opts.test_fraction;
    cfg.filter = opts.filter;
    validate(cfg);
    const DensityMatrix measured =
        opts.filter ? apply_local_filters(rho, *opts.filter).filtered_state : rho;
    const auto [alice, bob] = optimal_triads(measured);
    cfg.alice_triad = alice;
    cfg.bob_triad = bob;
    const SimulationReport rep = run_protocol(rho, cfg);

    Json config;
    config["state"] = source;
    config["rounds"] = cfg.rounds;
    config["seed"] = cfg.seed;
    config["test_fraction"] = cfg.test_fraction;
    config["filter"] = opts.filter ? Json::array({opts.filter->eps1, opts.filter->eps2})
                                   : Json(nullptr);
    config["alice_triad"] = triad_json(alice);
    config["bob_triad"] = triad_json(bob);
    config["rng"] = "mt19937_64";

    Json report;
    report["rounds"] = rep.rounds;
    report["kept_count"] = rep.kept_count;
    report["sifted_count"] = rep.sifted_count;
    report["disclosed_count"] = rep.disclosed_count;
    report["disclosed_mismatches"] = rep.disclosed_mismatches;
    report["empirical_qber"] = rep.empirical_qber;
    report["expected_qber"] =
        qber_three_settings(bloch_decompose(measured), alice, bob);
    report["empirical_cjwr"] = rep.empirical_cjwr;
    report["correlators"] = array_json(rep.correlators);
    report["correlator_counts"] = rep.correlator_counts;
    report["p_succ_empirical"] =
        rep.p_succ_empirical ? Json(*rep.p_succ_empirical) : Json(nullptr);
    report["raw_key_length"] = rep.raw_key_alice.size();
    if (opts.emit_keys) {
        report["raw_key_alice"] = bits(rep.raw_key_alice);
        report["raw_key_bob"] = bits(rep.raw_key_bob);
    }
    Json out;
    out["config"] = config;
    out["report"] = report;
    return out.dump(2) + "\n";
}

std::string cmd_table1(double eps1, double eps2, const std::vector<double> &alphas,
                       double q_step) {
    std::ostringstream out;
    write_csv(table1_result(table1({eps1, eps2}, alphas, q_step)), out);
    return out.str();
}

std::vector<double> parse_number_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw ParseError("bad number '" + item + "' in list '" + text + "'");
        }
        out.push_back(v);
    }
    if (out.empty() || (!text.empty() && text.back() == ',')) {
        throw ParseError("bad number list '" + text + "'");
    }
    return out;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Steering-based QKD usefulness toolkit", "steerqkd"};
    app.require_subcommand(1);

    std::string analyze_file;
    auto *analyze = app.add_subcommand("analyze", "Analyze a two-qubit state file");
    analyze->add_option("file", analyze_file, "State file (JSON)")->required();

    std::string family;
    std::vector<std::string> ranges;
    std::string scan_out;
    auto *scan = app.add_subcommand("scan", "Grid scan over a state family");
    scan->add_option("--family", family, "bell_diagonal, werner or gamma")->required();
    scan->add_option("--range", ranges, "name=lo:hi:step, outermost first")
        ->required()
        ->take_all();
    scan->add_option("--out", scan_out, "CSV output path")->required();

    std::string sim_file;
    SimulateOptions sim;
    std::string sim_filter;
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo protocol run");
    simulate->add_option("file", sim_file, "State file (JSON)")->required();
    simulate->add_option("--rounds", sim.rounds, "Number of rounds")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->required();
    simulate->add_option("--test-fraction", sim.test_fraction,
                         "Fraction of sifted rounds disclosed")
        ->capture_default_str();
    simulate->add_option("--filter", sim_filter, "Local filters e1,e2");
    simulate->add_flag("--emit-keys", sim.emit_keys, "Include raw key bit strings");

    double eps1 = 0.0;
    double eps2 = 0.0;
    std::string alphas;
    double q_step = 0.0;
    auto *t1 = app.add_subcommand("table1", "Useful q-range of filtered gamma states");
    t1->add_option("--eps1", eps1, "Alice's filter strength")->required();
    t1->add_option("--eps2", eps2, "Bob's filter strength")->required();
    t1->add_option("--alphas", alphas, "Comma-separated alpha values")->required();
    t1->add_option("--qstep", q_step, "Grid step in q")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (*analyze) {
            out << cmd_analyze(load_state(analyze_file));
        } else if (*scan) {
            cmd_scan(family, ranges, scan_out);
        } else if (*simulate) {
            if (!sim_filter.empty()) {
                sim.filter = parse_filter(sim_filter);
            }
            out << cmd_simulate(load_state(sim_file), sim_file, sim);
        } else if (*t1) {
            out << cmd_table1(eps1, eps2, parse_number_list(alphas), q_step);
        }
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError &e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace steerqkd::cli
