#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include <cwl/commands.hpp>
#include <cwl/io.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Fresh scratch directory under the system temp root; wiped on reuse so
// stale files from earlier runs cannot leak into comparisons.
std::string scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "cwl_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string write_config(const std::string& name, const json& doc) {
    const std::string dir = scratch_dir(name + "_cfg");
    const std::string path = dir + "/config.json";
    cwl::write_text_file(path, doc.dump(2) + "\n");
    return path;
}

json read_json(const std::string& dir, const std::string& file) {
    return json::parse(cwl::read_text_file(dir + "/" + file));
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<double> csv_column(const std::string& text, int col, int skip_rows) {
    std::vector<double> values;
    const auto lines = split_lines(text);
    for (std::size_t i = static_cast<std::size_t>(skip_rows); i < lines.size();
         ++i) {
        if (lines[i].empty()) continue;
        std::size_t start = 0;
        for (int c = 0; c < col; ++c) start = lines[i].find(',', start) + 1;
        std::size_t end = lines[i].find(',', start);
        values.push_back(std::stod(lines[i].substr(start, end - start)));
    }
    return values;
}

json base_sim_config() {
    return json{
        {"model",
         {{"kind", "mixed"}, {"beta", 0.4}, {"xi", 0.21}, {"N", 6}}},
        {"delay",
         {{"alpha1", 0.4}, {"alpha2", 0.2}, {"tau", 0.5}, {"mu", 0.2}}},
        {"dt", 1.0 / 64.0},
        {"T", 1.0},
        {"init", {{"position1", json::array({{1, 1.0}, {2, 0.5}})}}}};
}

}  // namespace

TEST_CASE("validate command reports checks and the coupling estimate") {
    const std::string out = scratch_dir("validate_model");
    const std::string cfg = write_config(
        "validate_model",
        json{{"model",
              {{"kind", "mixed"}, {"beta", 0.4}, {"xi", 0.37}, {"N", 6}}}});
    REQUIRE(cwl::run_command("validate", cfg, out) == 0);
    const json doc = read_json(out, "validate.json");
    CHECK(doc.at("all_pass").get<bool>());
    CHECK(doc.at("checks").is_array());
    CHECK(doc.at("norm_C_A2_invsqrt").get<double>() > 0.0);
    CHECK(doc.at("delta").at("admissible").get<bool>());
    CHECK(doc.at("config").contains("model"));
}

TEST_CASE("validate command exits 2 on a structurally broken quadruple") {
    const std::string out = scratch_dir("validate_broken");
    const std::string cfg = write_config(
        "validate_broken",
        json{{"quadruple",
              {{"n1", 2},
               {"n2", 2},
               {"m", 1},
               {"A1", json::array({{1.0, 0.5}, {0.0, 1.0}})},
               {"A2", json::array({{1.0, 0.0}, {0.0, 1.0}})},
               {"B", json::array({{1.0}, {0.0}})},
               {"C", json::array({{0.1, 0.0}, {0.0, 0.1}})}}}});
    CHECK(cwl::run_command("validate", cfg, out) == 2);
    const json doc = read_json(out, "validate.json");
    CHECK_FALSE(doc.at("all_pass").get<bool>());
    CHECK_FALSE(doc.contains("delta"));
}

TEST_CASE("simulate command writes a config-stamped trace") {
    const std::string out = scratch_dir("simulate_damped");
    const std::string cfg = write_config("simulate_damped", base_sim_config());
    REQUIRE(cwl::run_command("simulate", cfg, out) == 0);
    const std::string csv = cwl::read_text_file(out + "/trace.csv");
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0].rfind("# config: ", 0) == 0);
    CHECK(json::parse(lines[0].substr(10)).contains("model"));
    CHECK(lines[1] == "t,Ed,Etilde");
    const auto Ed = csv_column(csv, 1, 2);
    REQUIRE(Ed.size() == 65);  // T/dt + 1 samples
    CHECK(Ed.back() < Ed.front());
}

TEST_CASE("simulate command: undamped run has a constant energy column") {
    json cfg_doc = base_sim_config();
    cfg_doc["delay"] = {{"alpha1", 0.0}, {"alpha2", 0.0}, {"tau", 0.5}, {"mu", 0.0}};
    const std::string out = scratch_dir("simulate_conservative");
    const std::string cfg = write_config("simulate_conservative", cfg_doc);
    REQUIRE(cwl::run_command("simulate", cfg, out) == 0);
    const auto Ed = csv_column(cwl::read_text_file(out + "/trace.csv"), 1, 2);
    REQUIRE(!Ed.empty());
    for (double e : Ed) CHECK(std::abs(e - Ed.front()) <= 1e-8 * Ed.front());
}

TEST_CASE("simulate command maps mode scatter errors to exit codes") {
    SUBCASE("mode outside truncation -> validation exit") {
        json cfg_doc = base_sim_config();
        cfg_doc["init"]["position1"] = json::array({{99, 1.0}});
        const std::string out = scratch_dir("simulate_badmode");
        CHECK(cwl::run_command("simulate",
                               write_config("simulate_badmode", cfg_doc),
                               out) == 2);
    }
    SUBCASE("malformed mode entry -> parse exit") {
        json cfg_doc = base_sim_config();
        cfg_doc["init"]["position1"] = json::array({{1}});
        const std::string out = scratch_dir("simulate_badshape");
        CHECK(cwl::run_command("simulate",
                               write_config("simulate_badshape", cfg_doc),
                               out) == 1);
    }
    SUBCASE("non-finite energy -> numerical exit") {
        json cfg_doc = base_sim_config();
        cfg_doc["init"]["position1"] = json::array({{1, 1e200}});
        const std::string out = scratch_dir("simulate_blowup");
        CHECK(cwl::run_command("simulate",
                               write_config("simulate_blowup", cfg_doc),
                               out) == 3);
    }
}

TEST_CASE("decay command fits the windowed rate") {
    json cfg_doc = base_sim_config();
    cfg_doc["T"] = 2.0;
    cfg_doc["window"] = json::array({0.25, 1.75});
    const std::string out = scratch_dir("decay");
    REQUIRE(cwl::run_command("decay", write_config("decay", cfg_doc), out) == 0);
    const json doc = read_json(out, "decay.json");
    CHECK(doc.at("omega").is_number());
    CHECK(doc.at("C").get<double>() > 0.0);
    CHECK(doc.at("residual").get<double>() >= 0.0);
    CHECK(doc.at("window").size() == 2);
    CHECK(doc.at("E_initial").get<double>() > doc.at("E_final").get<double>());
    CHECK(doc.at("config").contains("window"));
}

TEST_CASE("transfer command: lambda grid emits both methods per point") {
    json cfg_doc{
        {"model",
         {{"kind", "dirichlet"}, {"beta", 0.3}, {"xi", 0.4}, {"N", 4}}},
        {"lambda", json::array({{1.0, 2.0}, {2.0, -1.0}})}};
    const std::string out = scratch_dir("transfer_grid");
    REQUIRE(cwl::run_command("transfer", write_config("transfer_grid", cfg_doc),
                             out) == 0);
    const std::string csv = cwl::read_text_file(out + "/transfer.csv");
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0].rfind("# config: ", 0) == 0);
    CHECK(lines[1] == "re_lambda,im_lambda,abs_H,abs_H1,abs_H2,method");
    CHECK(csv.find("ClosedForm") != std::string::npos);
    CHECK(csv.find("NumericBVP") != std::string::npos);
    // The two methods agree where they share a lambda.
    const auto absH = csv_column(csv, 2, 2);
    REQUIRE(absH.size() == 4);
    CHECK(absH[0] == doctest::Approx(absH[1]).epsilon(1e-8));
    CHECK(absH[2] == doctest::Approx(absH[3]).epsilon(1e-8));
}

TEST_CASE("transfer command: line scan reports suprema against the bound") {
    json cfg_doc{
        {"model",
         {{"kind", "dirichlet"}, {"beta", 0.0}, {"xi", 0.5}, {"N", 4}}},
        {"line", {{"gamma", 1.0}, {"omega_max", 5.0}, {"count", 101}}}};
    const std::string out = scratch_dir("transfer_line");
    REQUIRE(cwl::run_command("transfer", write_config("transfer_line", cfg_doc),
                             out) == 0);
    const json doc = read_json(out, "transfer_line.json");
    CHECK(doc.at("gamma").get<double>() == 1.0);
    CHECK(doc.at("sup_H1").get<double>() <=
          doc.at("bound_H1").get<double>() * (1.0 + 1e-9));
    CHECK(doc.at("sup_H").get<double>() >= doc.at("sup_H1").get<double>() * 0.5);
    CHECK(doc.at("argmax_lambda").size() == 2);
    CHECK(fs::exists(fs::path(out) / "transfer.csv"));
}

TEST_CASE("transfer command rejects ambiguous mode selection") {
    json cfg_doc{
        {"model",
         {{"kind", "dirichlet"}, {"beta", 0.0}, {"xi", 0.5}, {"N", 4}}},
        {"lambda", json::array({{1.0, 0.0}})},
        {"line", {{"gamma", 1.0}, {"omega_max", 5.0}}}};
    const std::string out = scratch_dir("transfer_ambiguous");
    CHECK(cwl::run_command("transfer",
                           write_config("transfer_ambiguous", cfg_doc),
                           out) == 1);
}

TEST_CASE("observability command summarizes ratio batches") {
    json cfg_doc{{"model",
                  {{"kind", "mixed"}, {"beta", 0.5}, {"xi", 0.3}, {"N", 5}}},
                 {"states", 3},
                 {"seed", 7},
                 {"n_scan", 20}};
    const std::string out = scratch_dir("observability");
    REQUIRE(cwl::run_command("observability",
                             write_config("observability", cfg_doc), out) == 0);
    const json doc = read_json(out, "observability.json");
    CHECK(doc.at("threshold").get<double>() ==
          doctest::Approx(1.6591498636093822).epsilon(1e-12));
    CHECK(doc.at("results").size() == 3);
    const double rmin = doc.at("ratio_min").get<double>();
    const double rmax = doc.at("ratio_max").get<double>();
    const double rmean = doc.at("ratio_mean").get<double>();
    CHECK(rmin > 0.0);
    CHECK(rmin <= rmean);
    CHECK(rmean <= rmax);
    CHECK(doc.at("modal_infimum").is_object());
}

TEST_CASE("criterion command emits the verdict document") {
    json cfg_doc{{"xi", 0.3333333333}};
    const std::string out = scratch_dir("criterion");
    REQUIRE(cwl::run_command("criterion", write_config("criterion", cfg_doc),
                             out) == 0);
    const json doc = read_json(out, "criterion.json");
    CHECK(doc.at("rational").get<bool>());
    CHECK(doc.at("p").get<int>() == 1);
    CHECK(doc.at("q").get<int>() == 3);
    CHECK(doc.at("paper_rule").get<bool>());
    CHECK(doc.at("config").at("xi").get<double>() == 0.3333333333);
}

TEST_CASE("conjugacy command reports residuals for draws and the model") {
    json cfg_doc{{"seed", 3},
                 {"random", {{"count", 2}, {"n_max", 4}, {"m_max", 2}}},
                 {"lambda", json::array({{1.0, 0.0}})},
                 {"model",
                  {{"kind", "mixed"}, {"beta", 0.4}, {"xi", 0.37}, {"N", 5}}}};
    const std::string out = scratch_dir("conjugacy");
    REQUIRE(cwl::run_command("conjugacy", write_config("conjugacy", cfg_doc),
                             out) == 0);
    const json doc = read_json(out, "conjugacy.json");
    CHECK(doc.at("residuals").size() == 2);
    CHECK(doc.at("max_residual").get<double>() <= 1e-10);
    CHECK(doc.at("max_rel_G1_G2").get<double>() <= 1e-8);
    CHECK(doc.at("max_rel_G1_Gamma").get<double>() <= 1e-8);
    CHECK(doc.at("model_residual").get<double>() <= 1e-10);
}

TEST_CASE("I/O failures and unknown commands map to documented exit codes") {
    const std::string out = scratch_dir("errors");
    CHECK(cwl::run_command("simulate", out + "/does_not_exist.json", out) == 1);

    const std::string garbled = out + "/garbled.json";
    cwl::write_text_file(garbled, "{ this is not json");
    CHECK(cwl::run_command("simulate", garbled, out) == 1);

    const std::string cfg = write_config("errors_unknown", json{{"xi", 0.5}});
    CHECK(cwl::run_command("frobnicate", cfg, out) == 2);

    // Missing required key -> parse failure.
    const std::string empty_cfg = write_config("errors_empty", json::object());
    CHECK(cwl::run_command("criterion", empty_cfg, out) == 1);

    // Out-of-range model parameter -> validation failure.
    const std::string bad_beta = write_config(
        "errors_beta",
        json{{"model",
              {{"kind", "mixed"}, {"beta", 1.5}, {"xi", 0.37}, {"N", 6}}}});
    CHECK(cwl::run_command("validate", bad_beta, out) == 2);
}

TEST_CASE("every command is byte-deterministic across repeated runs") {
    const std::vector<std::pair<std::string, json>> runs = {
        {"validate",
         json{{"model",
               {{"kind", "dirichlet"}, {"beta", 0.3}, {"xi", 0.37}, {"N", 5}}}}},
        {"simulate", base_sim_config()},
        {"decay",
         [] {
             json d = base_sim_config();
             d["T"] = 2.0;
             d["window"] = json::array({0.25, 1.75});
             return d;
         }()},
        {"transfer",
         json{{"model",
               {{"kind", "mixed"}, {"beta", 0.4}, {"xi", 0.3}, {"N", 4}}},
              {"lambda", json::array({{1.3, 2.7}})}}},
        {"observability",
         json{{"model",
               {{"kind", "mixed"}, {"beta", 0.5}, {"xi", 0.3}, {"N", 4}}},
              {"states", 2},
              {"seed", 11},
              {"n_scan", 15}}},
        {"criterion", json{{"xi", 0.75}}},
        {"conjugacy",
         json{{"seed", 5}, {"random", {{"count", 2}, {"n_max", 4}, {"m_max", 1}}}}},
    };

    for (const auto& [command, cfg_doc] : runs) {
        CAPTURE(command);
        const std::string cfg = write_config("det_" + command, cfg_doc);
        const std::string out_a = scratch_dir("det_" + command + "_a");
        const std::string out_b = scratch_dir("det_" + command + "_b");
        REQUIRE(cwl::run_command(command, cfg, out_a) == 0);
        REQUIRE(cwl::run_command(command, cfg, out_b) == 0);

        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(out_a)) {
            names.push_back(entry.path().filename().string());
        }
        std::sort(names.begin(), names.end());
        REQUIRE(!names.empty());
        for (const std::string& name : names) {
            CAPTURE(name);
            CHECK(cwl::read_text_file(out_a + "/" + name) ==
                  cwl::read_text_file(out_b + "/" + name));
        }
    }
}
