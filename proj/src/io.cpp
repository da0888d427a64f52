#include "csrkit/io.hpp"

#include "csrkit/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace csrkit {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

template <class T>
T get_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("JSON document lacks field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("JSON field '") + key + "' has the wrong type: " + e.what());
    }
}

void check_format(const json& j, const char* expected) {
    const auto format = get_field<std::string>(j, "format");
    if (format != expected) throw InputError("expected a " + std::string(expected) + " document, got " + format);
    if (get_field<int>(j, "version") != kFormatVersion) throw InputError("unsupported document version");
}

json metadata_to_json(const TrainingMetadata& meta) {
    return json{{"config", config_to_json(meta.config)},
                {"iterations", meta.iterations},
                {"residual", meta.residual},
                {"support_indices", meta.support_indices}};
}

TrainingMetadata metadata_from_json(const json& j) {
    TrainingMetadata meta;
    meta.config = config_from_json(j.at("config"));
    meta.iterations = get_field<std::size_t>(j, "iterations");
    meta.residual = get_field<double>(j, "residual");
    meta.support_indices = get_field<std::vector<std::size_t>>(j, "support_indices");
    return meta;
}

}  // namespace

json kernel_to_json(const KernelSpec& kernel) {
    if (const auto* p = std::get_if<PolynomialKernel>(&kernel)) {
        return json{{"type", "polynomial"}, {"degree", p->degree}, {"scale", p->scale}, {"offset", p->offset}};
    }
    if (const auto* g = std::get_if<GaussianKernel>(&kernel)) return json{{"type", "gaussian"}, {"gamma", g->gamma}};
    return json{{"type", "linear"}};
}

KernelSpec kernel_from_json(const json& j) {
    const auto type = get_field<std::string>(j, "type");
    KernelSpec kernel;
    if (type == "linear") kernel = LinearKernel{};
    else if (type == "polynomial")
        kernel = PolynomialKernel{get_field<int>(j, "degree"), get_field<double>(j, "scale"), get_field<double>(j, "offset")};
    else if (type == "gaussian") kernel = GaussianKernel{get_field<double>(j, "gamma")};
    else throw InputError("unknown kernel type '" + type + "'");
    validate(kernel);
    return kernel;
}

json config_to_json(const TrainConfig& c) {
    return json{{"kind", to_string(c.kind)},
                {"kernel", kernel_to_json(c.kernel)},
                {"C", c.C},
                {"tolerance", c.tolerance},
                {"max_iterations", c.max_iterations},
                {"learning_rate", c.learning_rate},
                {"lr_solver", to_string(c.lr_solver)},
                {"seed", c.seed}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.kind = classifier_kind_from_string(get_field<std::string>(j, "kind"));
    c.kernel = kernel_from_json(j.at("kernel"));
    c.C = get_field<double>(j, "C");
    c.tolerance = get_field<double>(j, "tolerance");
    c.max_iterations = get_field<std::size_t>(j, "max_iterations");
    c.learning_rate = get_field<double>(j, "learning_rate");
    c.lr_solver = lr_solver_from_string(get_field<std::string>(j, "lr_solver"));
    c.seed = get_field<std::uint64_t>(j, "seed");
    validate(c);
    return c;
}

json model_to_json(const ScalableModel& model) {
    json j{{"format", "csrkit-model"},
           {"version", kFormatVersion},
           {"variant", to_string(model.kind())},
           {"dimension", model.dimension()},
           {"kernel", kernel_to_json(model.kernel())},
           {"support_points", model.support_points()},
           {"dual_weights", model.dual_weights()}};
    if (model.kind() == ClassifierKind::Svdd) {
        j["radius_sq"] = model.radius_sq();
        j["center_norm_sq"] = model.center_norm_sq();
    } else {
        j["bias"] = model.bias();
    }
    j["metadata"] = model.metadata() ? metadata_to_json(*model.metadata()) : json(nullptr);
    return j;
}

ScalableModel model_from_json(const json& j) {
    check_format(j, "csrkit-model");
    const auto kind = classifier_kind_from_string(get_field<std::string>(j, "variant"));
    const auto kernel = kernel_from_json(j.at("kernel"));
    auto points = get_field<std::vector<FeatureVector>>(j, "support_points");
    auto weights = get_field<std::vector<double>>(j, "dual_weights");
    const auto dimension = get_field<std::size_t>(j, "dimension");
    for (const auto& p : points) require_dimension(p, dimension);

    std::optional<ScalableModel> model;
    switch (kind) {
        case ClassifierKind::Svm:
            model = ScalableModel::svm(kernel, std::move(points), std::move(weights), get_field<double>(j, "bias"));
            break;
        case ClassifierKind::Lr:
            model = ScalableModel::lr(kernel, std::move(points), std::move(weights), get_field<double>(j, "bias"));
            break;
        case ClassifierKind::Svdd:
            model = ScalableModel::svdd(kernel, std::move(points), std::move(weights), get_field<double>(j, "radius_sq"),
                                        get_field<double>(j, "center_norm_sq"));
            break;
    }
    if (j.contains("metadata") && !j.at("metadata").is_null()) {
        return model->with_metadata(metadata_from_json(j.at("metadata")));
    }
    return *model;
}

json profile_to_json(const CalibrationProfile& profile) {
    return json{{"format", "csrkit-profile"},
                {"version", kFormatVersion},
                {"n_c", profile.size()},
                {"sorted_scores", profile.sorted_scores()}};
}

CalibrationProfile profile_from_json(const json& j) {
    check_format(j, "csrkit-profile");
    auto scores = get_field<std::vector<double>>(j, "sorted_scores");
    if (scores.size() != get_field<std::size_t>(j, "n_c")) throw InputError("profile n_c does not match its scores");
    if (!std::is_sorted(scores.begin(), scores.end())) throw InputError("profile scores are not sorted");
    return CalibrationProfile(std::move(scores));
}

std::string format_double(double value) {
    if (value == std::numeric_limits<double>::infinity()) return "inf";
    if (value == -std::numeric_limits<double>::infinity()) return "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string reports_to_csv(const std::vector<CoverageReport>& reports) {
    std::string out = std::string(kReportCsvHeader) + "\n";
    for (const auto& r : reports) {
        const double fields[] = {r.err,         r.err_minus,         r.err_plus,         r.empty_rate,
                                 r.double_rate, r.single_rate,       r.single_minus_rate, r.single_plus_rate,
                                 r.csr_error_coverage, r.csr_mass};
        out += format_double(r.epsilon) + "," + format_double(r.s_eps.value) + "," + std::to_string(r.n_test);
        for (double f : fields) out += "," + format_double(f);
        out += "\n";
    }
    return out;
}

json reports_to_json(const std::vector<CoverageReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(json{{"epsilon", r.epsilon},
                           {"s_eps", r.s_eps.is_infinite() ? json("inf") : json(r.s_eps.value)},
                           {"n_test", r.n_test},
                           {"err", r.err},
                           {"err_minus", r.err_minus},
                           {"err_plus", r.err_plus},
                           {"empty_rate", r.empty_rate},
                           {"double_rate", r.double_rate},
                           {"single_rate", r.single_rate},
                           {"single_minus_rate", r.single_minus_rate},
                           {"single_plus_rate", r.single_plus_rate},
                           {"csr_error_coverage", r.csr_error_coverage},
                           {"csr_mass", r.csr_mass}});
    }
    return arr;
}

std::string grid_to_csv(const std::vector<GridCell>& cells) {
    std::string out = std::string(kGridCsvHeader) + "\n";
    for (const auto& c : cells) {
        out += format_double(c.x1) + "," + format_double(c.x2) + "," + to_string(c.category) + "," +
               (c.in_sigma ? "true" : "false") + "," + (c.in_safe_region ? "true" : "false") + "\n";
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InputError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InputError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace csrkit
