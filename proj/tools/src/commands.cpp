#include <cwl/commands.hpp>

#include <complex>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include <cwl/delay.hpp>
#include <cwl/errors.hpp>
#include <cwl/io.hpp>
#include <cwl/model.hpp>
#include <cwl/observability.hpp>
#include <cwl/quadruple.hpp>
#include <cwl/rng.hpp>
#include <cwl/transfer.hpp>
#include <cwl/transform.hpp>

namespace cwl {

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir + ": " +
                      ec.message());
    }
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
}

ModelConfig parse_model(const json& j) {
    if (!j.contains("model")) throw ParseError("config: missing 'model'");
    return model_config_from_json(j.at("model").dump());
}

json model_json(const ModelConfig& cfg) {
    return json::parse(model_config_to_json(cfg));
}

DelayParams parse_delay(const json& j) {
    if (!j.contains("delay")) throw ParseError("config: missing 'delay'");
    const json& d = j.at("delay");
    DelayParams p;
    p.alpha1 = d.at("alpha1").get<double>();
    p.alpha2 = d.at("alpha2").get<double>();
    p.tau = d.at("tau").get<double>();
    p.mu = d.at("mu").get<double>();
    return p;
}

json delay_json(const DelayParams& p) {
    return json{{"alpha1", p.alpha1}, {"alpha2", p.alpha2}, {"tau", p.tau},
                {"mu", p.mu}};
}

std::vector<std::complex<double>> parse_lambda_grid(const json& arr) {
    if (!arr.is_array() || arr.empty()) {
        throw ParseError("config: 'lambda' must be a nonempty array of [re, im]");
    }
    std::vector<std::complex<double>> grid;
    grid.reserve(arr.size());
    for (const json& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number()) {
            throw ParseError("config: lambda entries must be [re, im] pairs");
        }
        grid.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return grid;
}

// Modal amplitude list [[n, amp], ...] scattered into the field's slots.
void scatter_modes(const json& arr, const ModalModel& model, bool first_field,
                   Eigen::VectorXd& target, const char* field_name) {
    if (!arr.is_array()) {
        throw ParseError(std::string("config: '") + field_name +
                         "' must be an array of [mode, amplitude] pairs");
    }
    const int n1 = model.quad.dims.n1;
    const int N = model.cfg.N;
    const bool has_constant_mode =
        first_field && model.cfg.kind == ModelKind::NeumannDirichlet;
    for (const json& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number()) {
            throw ParseError(std::string("config: '") + field_name +
                             "' entries must be [mode, amplitude] pairs");
        }
        const int n = e[0].get<int>();
        const double amp = e[1].get<double>();
        const int lo = has_constant_mode ? 0 : 1;
        if (n < lo || n > N) {
            throw InvalidParams(std::string(field_name) + " mode " +
                                std::to_string(n) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(N) +
                                "]");
        }
        const int slot = first_field ? (has_constant_mode ? n : n - 1)
                                     : n1 + (n - 1);
        target(slot) += amp;
    }
}

struct SimSetup {
    ModalModel model;
    DelayParams params;
    SimInit init;
    double dt = 0.0;
    double T = 0.0;
    json resolved;
};

SimSetup parse_sim(const json& j) {
    SimSetup s;
    const ModelConfig cfg = parse_model(j);
    s.model = assemble_model(cfg);
    s.params = parse_delay(j);
    s.dt = j.at("dt").get<double>();
    s.T = j.at("T").get<double>();

    const int n = s.model.quad.dims.n1 + s.model.quad.dims.n2;
    s.init.w0 = Eigen::VectorXd::Zero(n);
    s.init.v0 = Eigen::VectorXd::Zero(n);
    const json init = j.value("init", json::object());
    if (!init.is_object()) throw ParseError("config: 'init' must be an object");
    if (init.contains("position1"))
        scatter_modes(init.at("position1"), s.model, true, s.init.w0, "position1");
    if (init.contains("position2"))
        scatter_modes(init.at("position2"), s.model, false, s.init.w0, "position2");
    if (init.contains("velocity1"))
        scatter_modes(init.at("velocity1"), s.model, true, s.init.v0, "velocity1");
    if (init.contains("velocity2"))
        scatter_modes(init.at("velocity2"), s.model, false, s.init.v0, "velocity2");

    s.resolved = json{{"model", model_json(cfg)},
                      {"delay", delay_json(s.params)},
                      {"dt", s.dt},
                      {"T", s.T},
                      {"init", init}};
    return s;
}

int cmd_validate(const json& j, const std::string& out_dir) {
    OperatorQuadruple q;
    json resolved;
    if (j.contains("quadruple")) {
        q = quadruple_from_json(j.at("quadruple").dump());
        resolved["quadruple"] = j.at("quadruple");
    } else if (j.contains("model")) {
        const ModelConfig cfg = parse_model(j);
        q = assemble_model(cfg).quad;
        resolved["model"] = model_json(cfg);
    } else {
        throw ParseError("validate config needs 'quadruple' or 'model'");
    }

    const ValidationReport rep = validate_quadruple(q);
    json out;
    out["config"] = resolved;
    out["checks"] = json::array();
    for (const ValidationCheck& c : rep.checks) {
        out["checks"].push_back(json{{"name", c.name},
                                     {"pass", c.pass},
                                     {"margin", c.margin},
                                     {"detail", c.detail}});
    }
    out["all_pass"] = rep.all_pass();
    out["norm_C_A2_invsqrt"] = rep.norm_C_A2_invsqrt;
    out["norm_Ct_A1_invsqrt"] = rep.norm_Ct_A1_invsqrt;
    if (rep.all_pass()) {
        const DeltaEstimate d = estimate_delta(q);
        out["delta"] = json{{"delta_min", d.delta_min},
                            {"admissible", d.admissible}};
    }
    write_output(out_dir, "validate.json", out.dump(2) + "\n");
    if (!rep.all_pass()) {
        std::cerr << "validate: quadruple failed structural checks\n";
        return 2;
    }
    return 0;
}

int cmd_simulate(const json& j, const std::string& out_dir) {
    SimSetup s = parse_sim(j);
    const SimResult res = simulate(s.model, s.params, s.init, s.dt, s.T);
    const std::string content =
        "# config: " + s.resolved.dump() + "\n" + trace_to_csv(res.trace);
    write_output(out_dir, "trace.csv", content);
    return 0;
}

int cmd_decay(const json& j, const std::string& out_dir) {
    SimSetup s = parse_sim(j);
    const json& w = j.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
        throw ParseError("config: 'window' must be [t_start, t_end]");
    }
    s.resolved["window"] = w;

    const SimResult res = simulate(s.model, s.params, s.init, s.dt, s.T);
    const DecayFit fit =
        fit_decay_rate(res.trace, w[0].get<double>(), w[1].get<double>());

    json out;
    out["config"] = s.resolved;
    out["omega"] = fit.omega;
    out["C"] = fit.C;
    out["residual"] = fit.residual;
    out["window"] = json::array({fit.window.first, fit.window.second});
    out["E_initial"] = res.trace.Ed.front();
    out["E_final"] = res.trace.Ed.back();
    write_output(out_dir, "decay.json", out.dump(2) + "\n");
    return 0;
}

int cmd_transfer(const json& j, const std::string& out_dir) {
    const ModelConfig cfg = parse_model(j);
    validate(cfg);
    const bool has_grid = j.contains("lambda");
    const bool has_line = j.contains("line");
    if (has_grid == has_line) {
        throw ParseError("transfer config needs exactly one of 'lambda' or 'line'");
    }

    if (has_grid) {
        const auto grid = parse_lambda_grid(j.at("lambda"));
        std::vector<TransferSample> samples;
        samples.reserve(2 * grid.size());
        for (const auto& lambda : grid) {
            samples.push_back(transfer_closed_form(cfg, lambda));
            samples.push_back(transfer_numeric_bvp(cfg, lambda, 1.0));
        }
        const json resolved{{"model", model_json(cfg)}, {"lambda", j.at("lambda")}};
        write_output(out_dir, "transfer.csv",
                     "# config: " + resolved.dump() + "\n" + scan_to_csv(samples));
        return 0;
    }

    const json& line = j.at("line");
    const double gamma = line.at("gamma").get<double>();
    const double omega_max = line.at("omega_max").get<double>();
    const int count = line.value("count", 2001);
    const VerticalLineScan scan = vertical_line_sup(cfg, gamma, omega_max, count);

    const json resolved{{"model", model_json(cfg)},
                        {"line", json{{"gamma", gamma},
                                      {"omega_max", omega_max},
                                      {"count", count}}}};
    write_output(out_dir, "transfer.csv",
                 "# config: " + resolved.dump() + "\n" + scan_to_csv(scan.samples));
    json out;
    out["config"] = resolved;
    out["gamma"] = scan.gamma;
    out["sup_H"] = scan.sup_H;
    out["sup_H1"] = scan.sup_H1;
    out["sup_H2"] = scan.sup_H2;
    out["argmax_lambda"] =
        json::array({scan.argmax_lambda.real(), scan.argmax_lambda.imag()});
    out["bound_H1"] = scan.bound_H1;
    write_output(out_dir, "transfer_line.json", out.dump(2) + "\n");
    return 0;
}

int cmd_observability(const json& j, const std::string& out_dir) {
    const ModelConfig cfg = parse_model(j);
    const double threshold = ingham_threshold(cfg);
    const double T =
        j.contains("T") ? j.at("T").get<double>() : 1.5 * threshold;
    const int states = j.value("states", 50);
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    const int n_scan = j.value("n_scan", 100);
    if (states < 1) throw InvalidParams("states must be at least 1");

    SeededRng rng(seed);
    ModalState st = adjoint_frequencies(cfg);

    json results = json::array();
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    double rsum = 0.0;
    for (int s = 0; s < states; ++s) {
        for (Eigen::Index i = 0; i < st.a.size(); ++i) {
            st.a(i) = std::complex<double>(rng.normal(), rng.normal());
        }
        const InghamResult r = ingham_ratio(cfg, st, T);
        results.push_back(json{{"integral", r.integral},
                               {"modal_sum", r.modal_sum},
                               {"ratio", r.ratio}});
        rmin = std::min(rmin, r.ratio);
        rmax = std::max(rmax, r.ratio);
        rsum += r.ratio;
    }
    const ModalInfimum inf = modal_infimum(cfg, n_scan);

    json out;
    out["config"] = json{{"model", model_json(cfg)},
                         {"T", T},
                         {"states", states},
                         {"seed", seed},
                         {"n_scan", n_scan}};
    out["threshold"] = threshold;
    out["ratio_min"] = rmin;
    out["ratio_max"] = rmax;
    out["ratio_mean"] = rsum / static_cast<double>(states);
    out["results"] = results;
    out["modal_infimum"] =
        json{{"value", inf.value}, {"argmin_n", inf.argmin_n}};
    write_output(out_dir, "observability.json", out.dump(2) + "\n");
    return 0;
}

int cmd_criterion(const json& j, const std::string& out_dir) {
    const double xi = j.at("xi").get<double>();
    const std::int64_t denom_cap = j.value("denom_cap", std::int64_t{10000});
    const double tol = j.value("tol", 1e-9);
    const CriterionVerdict v = stability_criterion(xi, denom_cap, tol);

    json out = json::parse(verdict_to_json(v));
    out["config"] = json{{"xi", xi}, {"denom_cap", denom_cap}, {"tol", tol}};
    write_output(out_dir, "criterion.json", out.dump(2) + "\n");
    return 0;
}

int cmd_conjugacy(const json& j, const std::string& out_dir) {
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    const json rnd = j.value("random", json::object());
    const int count = rnd.value("count", 5);
    const int n_max = rnd.value("n_max", 6);
    const int m_max = rnd.value("m_max", 2);
    if (count < 1 || n_max < 2 || m_max < 1) {
        throw InvalidParams("random draws need count >= 1, n_max >= 2, m_max >= 1");
    }
    std::vector<std::complex<double>> grid{{1.0, 0.0}, {0.8, 2.0}};
    if (j.contains("lambda")) grid = parse_lambda_grid(j.at("lambda"));

    auto rel = [](const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
        return (X - Y).norm() / std::max(X.norm(), 1e-300);
    };

    SeededRng rng(seed);
    json residuals = json::array();
    double max_res = 0.0;
    double max_g1_g2 = 0.0;
    double max_g1_gamma = 0.0;
    for (int i = 0; i < count; ++i) {
        const int n1 = static_cast<int>(rng.uniform_int(2, n_max));
        const int n2 = static_cast<int>(rng.uniform_int(2, n_max));
        const int m = static_cast<int>(rng.uniform_int(1, m_max));
        const OperatorQuadruple q = random_quadruple(rng, n1, n2, m);
        const double res = conjugation_residual(q);
        residuals.push_back(res);
        max_res = std::max(max_res, res);
        for (const auto& lambda : grid) {
            const TransferTriple t = transfer_resolvent_pair(q, lambda);
            max_g1_g2 = std::max(max_g1_g2, rel(t.G1, t.G2));
            max_g1_gamma = std::max(max_g1_gamma, rel(t.G1, t.Gamma_form));
        }
    }

    json out;
    json lambda_json = json::array();
    for (const auto& l : grid) {
        lambda_json.push_back(json::array({l.real(), l.imag()}));
    }
    out["config"] = json{{"seed", seed},
                         {"random", json{{"count", count},
                                         {"n_max", n_max},
                                         {"m_max", m_max}}},
                         {"lambda", lambda_json}};
    out["residuals"] = residuals;
    out["max_residual"] = max_res;
    out["max_rel_G1_G2"] = max_g1_g2;
    out["max_rel_G1_Gamma"] = max_g1_gamma;
    if (j.contains("model")) {
        const ModelConfig cfg = parse_model(j);
        out["config"]["model"] = model_json(cfg);
        out["model_residual"] = conjugation_residual(assemble_model(cfg).quad);
    }
    write_output(out_dir, "conjugacy.json", out.dump(2) + "\n");
    return 0;
}

}  // namespace

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir) {
    try {
        const json cfg = load_config(config_path);
        if (command == "validate") return cmd_validate(cfg, out_dir);
        if (command == "simulate") return cmd_simulate(cfg, out_dir);
        if (command == "decay") return cmd_decay(cfg, out_dir);
        if (command == "transfer") return cmd_transfer(cfg, out_dir);
        if (command == "observability") return cmd_observability(cfg, out_dir);
        if (command == "criterion") return cmd_criterion(cfg, out_dir);
        if (command == "conjugacy") return cmd_conjugacy(cfg, out_dir);
        throw InvalidParams("unknown command '" + command + "'");
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.category()) {
            case ErrorCategory::Validation:
                return 2;
            case ErrorCategory::Numerical:
                return 3;
            case ErrorCategory::Io:
                return 1;
        }
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

}  // namespace cwl
