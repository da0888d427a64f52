#include "cli.hpp"

#include "manifest.hpp"

#include "csrkit/data.hpp"
#include "csrkit/errors.hpp"
#include "csrkit/evaluation.hpp"
#include "csrkit/io.hpp"
#include "csrkit/trainers.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

namespace csrkit::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_output(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_text_file_atomic(p, content);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

template <class T>
T field(const json& config, const char* key) {
    try {
        return config.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("configuration field '") + key + "': " + e.what());
    }
}

Bounds2D bounds_from(const std::vector<double>& v) {
    if (v.size() != 4) throw InputError("--bounds: expected x1_min,x1_max,x2_min,x2_max");
    return {v[0], v[1], v[2], v[3]};
}

CommandResult run_generate_gaussians(const json& c) {
    GaussianSpec spec;
    spec.mean_safe = field<FeatureVector>(c, "mean_safe");
    spec.mean_unsafe = field<FeatureVector>(c, "mean_unsafe");
    spec.cov_scale_safe = field<double>(c, "cov_safe");
    spec.cov_scale_unsafe = field<double>(c, "cov_unsafe");
    spec.outlier_prob = field<double>(c, "outlier_prob");
    spec.seed = field<std::uint64_t>(c, "seed");
    const auto out = field<std::string>(c, "out");
    write_output(out, format_csv(gen_two_gaussians(field<std::size_t>(c, "n"), spec)));
    return {{}, {out}, out + ".manifest.json"};
}

CommandResult run_generate_dns(const json& c) {
    DnsSurrogateSpec spec;
    spec.n_windows = field<std::size_t>(c, "windows");
    spec.tunnel_fraction = field<double>(c, "tunnel_fraction");
    spec.packets_per_window = field<std::size_t>(c, "packets");
    spec.intensity = field<double>(c, "intensity");
    spec.seed = field<std::uint64_t>(c, "seed");
    const auto out = field<std::string>(c, "out");
    write_output(out, format_csv(gen_dns_surrogate(spec)));
    return {{}, {out}, out + ".manifest.json"};
}

CommandResult run_split(const json& c) {
    const auto data_path = field<std::string>(c, "data");
    const SplitSpec spec{field<double>(c, "train"), field<double>(c, "calib"), field<double>(c, "test"),
                         field<std::uint64_t>(c, "seed")};
    const auto parts = split(load_csv(data_path), spec);
    const auto prefix = field<std::string>(c, "prefix");
    CommandResult result{{data_path}, {prefix + "_train.csv", prefix + "_calib.csv", prefix + "_test.csv"},
                         prefix + ".manifest.json"};
    write_output(result.outputs[0], format_csv(parts.train));
    write_output(result.outputs[1], format_csv(parts.calib));
    write_output(result.outputs[2], format_csv(parts.test));
    return result;
}

CommandResult run_train(const json& c) {
    const auto data_path = field<std::string>(c, "data");
    const TrainConfig config = config_from_json(c.at("train_config"));
    const auto model = train(load_csv(data_path), config);
    const auto out = field<std::string>(c, "out");
    write_output(out, json_text(model_to_json(model)));
    return {{data_path}, {out}, out + ".manifest.json"};
}

ScalableModel load_model(const std::string& path) {
    try {
        return model_from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

CalibrationProfile load_profile(const std::string& path) {
    try {
        return profile_from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

CommandResult run_calibrate(const json& c) {
    const auto model_path = field<std::string>(c, "model");
    const auto data_path = field<std::string>(c, "data");
    const auto profile = calibrate(load_model(model_path), load_csv(data_path));
    const auto out = field<std::string>(c, "out");
    write_output(out, json_text(profile_to_json(profile)));
    return {{model_path, data_path}, {out}, out + ".manifest.json"};
}

std::string format_reports(const std::vector<CoverageReport>& reports, const std::string& format) {
    if (format == "csv") return reports_to_csv(reports);
    if (format == "json") return json_text(reports_to_json(reports));
    throw InputError("--format: expected csv or json, got '" + format + "'");
}

CommandResult run_evaluate(const json& c, bool is_sweep) {
    const auto model_path = field<std::string>(c, "model");
    const auto profile_path = field<std::string>(c, "profile");
    const auto data_path = field<std::string>(c, "data");
    const auto model = load_model(model_path);
    const auto profile = load_profile(profile_path);
    const auto test = load_csv(data_path);
    const auto reports = is_sweep ? sweep(model, profile, field<std::vector<double>>(c, "eps_grid"), test)
                                  : std::vector<CoverageReport>{evaluate(model, profile, field<double>(c, "epsilon"), test)};
    const auto out = field<std::string>(c, "out");
    write_output(out, format_reports(reports, field<std::string>(c, "format")));
    return {{model_path, profile_path, data_path}, {out}, out + ".manifest.json"};
}

CommandResult run_region(const json& c) {
    const auto model_path = field<std::string>(c, "model");
    const auto profile_path = field<std::string>(c, "profile");
    const auto cells = region_grid(load_model(model_path), load_profile(profile_path), field<double>(c, "epsilon"),
                                   bounds_from(field<std::vector<double>>(c, "bounds")),
                                   field<std::size_t>(c, "resolution"));
    const auto out = field<std::string>(c, "out");
    write_output(out, grid_to_csv(cells));
    return {{model_path, profile_path}, {out}, out + ".manifest.json"};
}

json seeds_of(const json& config) {
    json seeds = json::object();
    if (config.contains("seed")) seeds["seed"] = config["seed"];
    if (config.contains("train_config")) seeds["seed"] = config["train_config"].at("seed");
    return seeds;
}

std::vector<FileRecord> checksums(const std::vector<std::string>& paths) {
    std::vector<FileRecord> out;
    for (const auto& p : paths) out.push_back({p, file_sha256(p)});
    return out;
}

void write_manifest(const std::string& command, const std::vector<std::string>& argv, const json& config,
                    const CommandResult& result) {
    Manifest m;
    m.command = command;
    m.argv = argv;
    m.config = config;
    m.seeds = seeds_of(config);
    m.inputs = checksums(result.inputs);
    m.outputs = checksums(result.outputs);
    write_output(result.manifest_path, json_text(manifest_to_json(m)));
}

void check_fraction(const char* flag, double value, bool allow_zero) {
    const bool ok = allow_zero ? (value >= 0.0 && value < 1.0) : (value > 0.0 && value < 1.0);
    if (!ok) {
        throw InputError(std::string(flag) + ": must lie in " + (allow_zero ? "[0, 1)" : "(0, 1)") + ", got " +
                         format_double(value));
    }
}

json redirect_outputs(json config, const std::string& command, const fs::path& dir) {
    const char* key = command == "split" ? "prefix" : "out";
    config[key] = (dir / fs::path(config.at(key).get<std::string>()).filename()).string();
    return config;
}

int replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    json doc;
    try {
        doc = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw InputError(manifest_path + ": " + e.what());
    }
    const Manifest m = manifest_from_json(doc);
    for (const auto& input : m.inputs) {
        if (file_sha256(input.path) != input.sha256) throw InputError("input changed since the run: " + input.path);
    }
    const json config = out_dir.empty() ? m.config : redirect_outputs(m.config, m.command, out_dir);
    const auto result = execute(m.command, config);
    write_manifest(m.command, m.argv, config, result);
    if (result.outputs.size() != m.outputs.size()) {
        err << "replay: output count differs\n";
        return kExitFailure;
    }
    bool same = true;
    for (std::size_t i = 0; i < result.outputs.size(); ++i) {
        if (file_sha256(result.outputs[i]) != m.outputs[i].sha256) {
            err << "replay: " << result.outputs[i] << " differs from " << m.outputs[i].path << "\n";
            same = false;
        }
    }
    if (!same) return kExitFailure;
    out << "replay: " << result.outputs.size() << " output(s) identical\n";
    return kExitOk;
}

}  // namespace

CommandResult execute(const std::string& command, const json& config) {
    if (command == "generate two-gaussians") return run_generate_gaussians(config);
    if (command == "generate dns-surrogate") return run_generate_dns(config);
    if (command == "split") return run_split(config);
    if (command == "train") return run_train(config);
    if (command == "calibrate") return run_calibrate(config);
    if (command == "evaluate") return run_evaluate(config, false);
    if (command == "sweep") return run_evaluate(config, true);
    if (command == "region") return run_region(config);
    throw InputError("unknown command '" + command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scalable classifiers and conformal safety regions", "csrkit"};
    app.require_subcommand(1);

    std::string command;
    json config;
    std::string manifest_to_replay, replay_dir;

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic labelled dataset as CSV");
    generate->require_subcommand(1);

    std::size_t n = 0;
    double outlier_prob = 0.0;
    GaussianSpec gauss;
    std::uint64_t seed = 0;
    std::string out_path = "data.csv";
    auto* two = generate->add_subcommand("two-gaussians", "Two isotropic Gaussian classes");
    two->add_option("--n", n, "Number of samples")->required();
    two->add_option("--outlier-prob", outlier_prob, "Chance a sample comes from the other class")->capture_default_str();
    two->add_option("--mean-safe", gauss.mean_safe, "Mean of class +1")->delimiter(',')->capture_default_str();
    two->add_option("--mean-unsafe", gauss.mean_unsafe, "Mean of class -1")->delimiter(',')->capture_default_str();
    two->add_option("--cov-safe", gauss.cov_scale_safe, "Covariance scale of class +1")->capture_default_str();
    two->add_option("--cov-unsafe", gauss.cov_scale_unsafe, "Covariance scale of class -1")->capture_default_str();
    two->add_option("--seed", seed, "Random seed")->required();
    two->add_option("--out", out_path, "Output CSV")->capture_default_str();

    DnsSurrogateSpec dns;
    auto* surrogate = generate->add_subcommand("dns-surrogate", "DNS tunnelling window features");
    surrogate->add_option("--windows", dns.n_windows, "Number of windows")->capture_default_str();
    surrogate->add_option("--tunnel-fraction", dns.tunnel_fraction, "Share of tunnel windows")->capture_default_str();
    surrogate->add_option("--packets", dns.packets_per_window, "Packets per window")->capture_default_str();
    surrogate->add_option("--intensity", dns.intensity, "Tunnel anomaly intensity")->capture_default_str();
    surrogate->add_option("--seed", seed, "Random seed")->required();
    surrogate->add_option("--out", out_path, "Output CSV")->capture_default_str();

    // split
    std::string data_path;
    SplitSpec split_spec;
    std::string prefix = "split";
    auto* split_cmd = app.add_subcommand("split", "Shuffle and split a dataset into train/calib/test CSVs");
    split_cmd->add_option("data", data_path, "Input CSV")->required();
    split_cmd->add_option("--train", split_spec.train_fraction, "Train fraction")->capture_default_str();
    split_cmd->add_option("--calib", split_spec.calib_fraction, "Calibration fraction")->capture_default_str();
    split_cmd->add_option("--test", split_spec.test_fraction, "Test fraction")->capture_default_str();
    split_cmd->add_option("--seed", seed, "Random seed")->required();
    split_cmd->add_option("--prefix", prefix, "Outputs are <prefix>_{train,calib,test}.csv")->capture_default_str();

    // train
    std::string kind = "svm", kernel = "linear", lr_solver = "newton";
    std::optional<double> gamma;
    std::string gamma_heuristic = "default";
    PolynomialKernel poly;
    TrainConfig tc;
    std::string model_out = "model.json";
    auto* train_cmd = app.add_subcommand("train", "Train a scalable classifier");
    train_cmd->add_option("data", data_path, "Training CSV")->required();
    train_cmd->add_option("--kind", kind, "svm, svdd or lr")->capture_default_str();
    train_cmd->add_option("--kernel", kernel, "linear, polynomial or gaussian")->capture_default_str();
    auto* gamma_opt = train_cmd->add_option("--gamma", gamma, "Gaussian width (default 1/d)");
    train_cmd->add_option("--gamma-heuristic", gamma_heuristic, "default (1/d) or median")
        ->capture_default_str()
        ->excludes(gamma_opt);
    train_cmd->add_option("--degree", poly.degree, "Polynomial degree")->capture_default_str();
    train_cmd->add_option("--scale", poly.scale, "Polynomial scale")->capture_default_str();
    train_cmd->add_option("--offset", poly.offset, "Polynomial offset")->capture_default_str();
    train_cmd->add_option("--C", tc.C, "Regularisation constant")->capture_default_str();
    train_cmd->add_option("--tolerance", tc.tolerance, "Solver tolerance")->capture_default_str();
    train_cmd->add_option("--max-iterations", tc.max_iterations, "Solver iteration cap")->capture_default_str();
    train_cmd->add_option("--learning-rate", tc.learning_rate, "Initial step of the gradient solver")
        ->capture_default_str();
    train_cmd->add_option("--lr-solver", lr_solver, "newton or gradient")->capture_default_str();
    train_cmd->add_option("--seed", seed, "Random seed")->required();
    train_cmd->add_option("--out", model_out, "Output model JSON")->capture_default_str();

    // calibrate
    std::string model_path, profile_out = "profile.json";
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Compute the calibration profile of a model");
    calibrate_cmd->add_option("data", data_path, "Calibration CSV")->required();
    calibrate_cmd->add_option("--model", model_path, "Model JSON")->required();
    calibrate_cmd->add_option("--out", profile_out, "Output profile JSON")->capture_default_str();

    // evaluate / sweep
    std::string profile_path, format = "csv", report_out = "report.csv";
    double epsilon = 0.0;
    std::vector<double> eps_grid;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Coverage report at one epsilon");
    evaluate_cmd->add_option("data", data_path, "Test CSV")->required();
    evaluate_cmd->add_option("--model", model_path, "Model JSON")->required();
    evaluate_cmd->add_option("--profile", profile_path, "Profile JSON")->required();
    evaluate_cmd->add_option("--epsilon", epsilon, "Miscoverage level")->required();
    evaluate_cmd->add_option("--format", format, "csv or json")->capture_default_str();
    evaluate_cmd->add_option("--out", report_out, "Output report")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "Coverage reports along an epsilon grid");
    sweep_cmd->add_option("data", data_path, "Test CSV")->required();
    sweep_cmd->add_option("--model", model_path, "Model JSON")->required();
    sweep_cmd->add_option("--profile", profile_path, "Profile JSON")->required();
    sweep_cmd->add_option("--eps-grid", eps_grid, "Increasing epsilons, comma separated")->delimiter(',')->required();
    sweep_cmd->add_option("--format", format, "csv or json")->capture_default_str();
    sweep_cmd->add_option("--out", report_out, "Output report")->capture_default_str();

    // region
    std::vector<double> bounds;
    std::size_t resolution = 0;
    std::string grid_out = "grid.csv";
    auto* region_cmd = app.add_subcommand("region", "Classify a 2-D grid of points");
    region_cmd->add_option("--model", model_path, "Model JSON")->required();
    region_cmd->add_option("--profile", profile_path, "Profile JSON")->required();
    region_cmd->add_option("--epsilon", epsilon, "Miscoverage level")->required();
    region_cmd->add_option("--bounds", bounds, "x1_min,x1_max,x2_min,x2_max")->delimiter(',')->required();
    region_cmd->add_option("--resolution", resolution, "Cells per axis")->required();
    region_cmd->add_option("--out", grid_out, "Output grid CSV")->capture_default_str();

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest and verify its outputs");
    replay_cmd->add_option("manifest", manifest_to_replay, "Manifest JSON")->required();
    replay_cmd->add_option("--out-dir", replay_dir, "Write outputs here instead of their recorded paths");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*replay_cmd) return replay(manifest_to_replay, replay_dir, out, err);

        if (*two) {
            check_fraction("--outlier-prob", outlier_prob, true);
            command = "generate two-gaussians";
            config = {{"n", n},
                      {"outlier_prob", outlier_prob},
                      {"mean_safe", gauss.mean_safe},
                      {"mean_unsafe", gauss.mean_unsafe},
                      {"cov_safe", gauss.cov_scale_safe},
                      {"cov_unsafe", gauss.cov_scale_unsafe},
                      {"seed", seed},
                      {"out", out_path}};
        } else if (*surrogate) {
            check_fraction("--tunnel-fraction", dns.tunnel_fraction, false);
            command = "generate dns-surrogate";
            config = {{"windows", dns.n_windows},
                      {"tunnel_fraction", dns.tunnel_fraction},
                      {"packets", dns.packets_per_window},
                      {"intensity", dns.intensity},
                      {"seed", seed},
                      {"out", out_path}};
        } else if (*split_cmd) {
            check_fraction("--train", split_spec.train_fraction, false);
            check_fraction("--calib", split_spec.calib_fraction, false);
            check_fraction("--test", split_spec.test_fraction, false);
            const double total = split_spec.train_fraction + split_spec.calib_fraction + split_spec.test_fraction;
            if (std::abs(total - 1.0) > 1e-9) {
                throw InputError("--train + --calib + --test must sum to 1, got " + format_double(total));
            }
            command = "split";
            config = {{"data", data_path},
                      {"train", split_spec.train_fraction},
                      {"calib", split_spec.calib_fraction},
                      {"test", split_spec.test_fraction},
                      {"seed", seed},
                      {"prefix", prefix}};
        } else if (*train_cmd) {
            tc.kind = classifier_kind_from_string(kind);
            tc.lr_solver = lr_solver_from_string(lr_solver);
            tc.seed = seed;
            if (kernel == "linear") {
                tc.kernel = LinearKernel{};
            } else if (kernel == "polynomial") {
                tc.kernel = poly;
            } else if (kernel == "gaussian") {
                double g = 0.0;
                if (gamma) {
                    g = *gamma;
                } else {
                    const auto data = load_csv(data_path);
                    std::vector<FeatureVector> points;
                    points.reserve(data.size());
                    for (const auto& s : data) points.push_back(s.x);
                    if (gamma_heuristic == "median") {
                        g = median_heuristic_gamma(points);
                    } else if (gamma_heuristic == "default") {
                        g = default_gamma(points.front().size());
                    } else {
                        throw InputError("--gamma-heuristic: expected default or median, got '" + gamma_heuristic + "'");
                    }
                }
                tc.kernel = GaussianKernel{g};
            } else {
                throw InputError("--kernel: expected linear, polynomial or gaussian, got '" + kernel + "'");
            }
            validate(tc);
            command = "train";
            config = {{"data", data_path}, {"train_config", config_to_json(tc)}, {"out", model_out}};
        } else if (*calibrate_cmd) {
            command = "calibrate";
            config = {{"data", data_path}, {"model", model_path}, {"out", profile_out}};
        } else if (*evaluate_cmd) {
            command = "evaluate";
            config = {{"data", data_path}, {"model", model_path},   {"profile", profile_path},
                      {"epsilon", epsilon}, {"format", format},     {"out", report_out}};
        } else if (*sweep_cmd) {
            command = "sweep";
            config = {{"data", data_path}, {"model", model_path}, {"profile", profile_path},
                      {"eps_grid", eps_grid}, {"format", format},   {"out", report_out}};
        } else if (*region_cmd) {
            bounds_from(bounds);
            command = "region";
            config = {{"model", model_path},   {"profile", profile_path}, {"epsilon", epsilon},
                      {"bounds", bounds},      {"resolution", resolution}, {"out", grid_out}};
        }

        const auto result = execute(command, config);
        write_manifest(command, std::vector<std::string>(args.begin() + 1, args.end()), config, result);
        for (const auto& o : result.outputs) out << "wrote " << o << "\n";
        return kExitOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const TrainingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace csrkit::cli
