#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "gwsep/bounds.hpp"
#include "gwsep/core.hpp"
#include "gwsep/datagen.hpp"
#include "gwsep/errors.hpp"
#include "gwsep/io.hpp"
#include "gwsep/learner.hpp"
#include "gwsep/separating.hpp"

namespace gwsep::cli {

namespace fs = std::filesystem;

namespace {

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput("bad integer list '" + text + "'");
        }
    }
    return out;
}

Dataset load_dataset(const std::string& path)
{
    std::istringstream in(read_text_file(path));
    return read_dataset_csv(in);
}

std::string dataset_csv(const Dataset& data)
{
    std::ostringstream out;
    write_dataset_csv(out, data);
    return out.str();
}

std::string trace_csv(const MistakeTrace& trace)
{
    std::ostringstream out;
    write_trace_csv(out, trace);
    return out.str();
}

LearnerConfig learner_config(int classes, const std::string& kernel, const std::string& membership,
                             const std::string& tie_rule)
{
    LearnerConfig cfg;
    cfg.classes = classes;
    cfg.kernel = parse_kernel_kind(kernel);
    if (membership == "non-negative") cfg.membership = LearnerConfig::Membership::non_negative;
    else if (membership == "positive") cfg.membership = LearnerConfig::Membership::positive;
    else throw InvalidInput("unknown membership rule '" + membership + "'");
    if (tie_rule == "smallest-index") cfg.tie_rule = LearnerConfig::TieRule::smallest_index;
    else if (tie_rule == "uniform") cfg.tie_rule = LearnerConfig::TieRule::uniform;
    else throw InvalidInput("unknown tie rule '" + tie_rule + "'");
    return cfg;
}

Json run_summary(const MistakeTrace& trace, std::size_t horizon)
{
    std::size_t explore = 0;
    for (const auto& s : trace.steps) explore += s.explore ? 1 : 0;
    Json j;
    j["T"] = horizon;
    j["mistakes"] = trace.mistakes();
    j["rate"] = horizon == 0 ? Json(nullptr) : Json(static_cast<double>(trace.mistakes()) / static_cast<double>(horizon));
    j["explore_steps"] = explore;
    return j;
}

}  // namespace

int gen_data(const GenDataOptions& opt)
{
    GenSpec spec;
    if (!opt.spec_path.empty()) spec = gen_spec_from_json(read_json_file(opt.spec_path));
    if (opt.kind) spec.kind = parse_separability_kind(*opt.kind);
    if (opt.dim) spec.dim = *opt.dim;
    if (opt.groups) spec.group_sizes = parse_int_list(*opt.groups);
    if (opt.classes) {
        spec.classes = *opt.classes;
    } else if (opt.groups) {
        spec.classes = 0;
        for (int c : spec.group_sizes) spec.classes += c;
    }
    if (opt.gamma) spec.gamma = *opt.gamma;
    if (opt.samples) spec.samples_per_class = *opt.samples;
    if (opt.band_axis) spec.band_axis = parse_band_axis(*opt.band_axis);
    if (opt.seed) spec.seed = *opt.seed;

    const GeneratedData gen = generate(spec);
    const CertificateReport report = verify(gen.data, gen.certificate);
    Json cert = certificate_to_json(gen.certificate);
    cert["slack"] = report_to_json(report);

    const fs::path dir(opt.out_dir);
    write_text_file(dir / "dataset.csv", dataset_csv(gen.data));
    write_json_file(dir / "certificate.json", cert);
    std::cout << "wrote " << gen.data.size() << " examples to " << (dir / "dataset.csv").string() << '\n';
    if (!report.passed) {
        std::cerr << "generated data failed its own certificate\n";
        return internal_error;
    }
    return ok;
}

int run(const RunOptions& opt)
{
    const Dataset data = load_dataset(opt.data_path);
    const int classes = opt.classes.value_or(data.max_label());
    if (classes < 1) throw InvalidInput("cannot infer the number of classes from an empty dataset");
    const auto stream = make_stream(data, opt.horizon, opt.seed);

    Json summary;
    MistakeTrace trace;
    if (opt.algorithm == "perceptron") {
        trace = multiclass_perceptron(stream, classes);
        summary = run_summary(trace, opt.horizon);
        summary["algorithm"] = "perceptron";
    } else if (opt.algorithm == "bandit") {
        const LearnerConfig cfg = learner_config(classes, opt.kernel, opt.membership, opt.tie_rule);
        KernelBandit learner(cfg, 0);
        trace = run_protocol(stream, cfg, opt.seed, &learner);
        summary = run_summary(trace, opt.horizon);
        summary["algorithm"] = "bandit";
        summary["kernel"] = opt.kernel;
        std::size_t support = 0;
        for (const auto& list : learner.supports()) support += list.size();
        summary["support_size"] = support;
        if (!opt.state_path.empty()) write_json_file(opt.state_path, learner_to_json(learner));
    } else {
        throw InvalidInput("unknown algorithm '" + opt.algorithm + "'");
    }
    summary["K"] = classes;
    summary["seed"] = opt.seed;

    write_text_file(opt.trace_path, trace_csv(trace));
    write_json_file(opt.summary_path.empty() ? opt.trace_path + ".summary.json" : opt.summary_path, summary);
    std::cout << "mistakes " << trace.mistakes() << " / " << opt.horizon << '\n';
    return ok;
}

int contour(const ContourOptions& opt)
{
    const KernelBandit learner = learner_from_json(read_json_file(opt.state_path));
    if (opt.label < 1 || opt.label > learner.config().classes) {
        throw InvalidInput("class " + std::to_string(opt.label) + " outside [1, " +
                           std::to_string(learner.config().classes) + "]");
    }
    for (const auto& list : learner.supports()) {
        if (!list.empty() && list.front().x.size() != 2) throw InvalidInput("contour grids need a 2-d learner");
    }
    if (opt.grid < 1) throw InvalidInput("grid must have at least one point per axis");
    if (opt.bbox.size() != 4 || !(opt.bbox[0] < opt.bbox[1]) || !(opt.bbox[2] < opt.bbox[3])) {
        throw InvalidInput("bbox must be xmin,xmax,ymin,ymax with min < max");
    }
    const auto coord = [&](double lo, double hi, std::size_t k) {
        return opt.grid == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opt.grid - 1);
    };
    std::ostringstream out;
    out << "i,j,x,y,score\n";
    for (std::size_t i = 0; i < opt.grid; ++i) {
        for (std::size_t j = 0; j < opt.grid; ++j) {
            const Vector p{coord(opt.bbox[0], opt.bbox[1], i), coord(opt.bbox[2], opt.bbox[3], j)};
            out << i << ',' << j << ',' << format_double(p[0]) << ',' << format_double(p[1]) << ','
                << format_double(learner.score(opt.label, p)) << '\n';
        }
    }
    write_text_file(opt.out_path, out.str());
    return ok;
}

int certify(const CertifyOptions& opt)
{
    const Dataset data = load_dataset(opt.data_path);
    SeparabilityCertificate cert = certificate_from_json(read_json_file(opt.certificate_path));
    if (cert.kind != SeparabilityKind::group_weak) throw InvalidInput("certify needs a group-weak certificate");
    if (opt.gamma) cert.gamma = *opt.gamma;

    const CertificateReport report = verify(data, cert);
    ConstructionLimits limits;
    limits.max_degree = opt.max_degree;
    const auto separators = separate_all_classes(data, cert, limits);

    bool all_passed = report.passed;
    Json classes = Json::array();
    for (const auto& s : separators) {
        all_passed = all_passed && s.passed();
        classes.push_back({{"label", s.label},
                           {"group", s.group},
                           {"m", s.params.m},
                           {"r", s.params.r},
                           {"s", s.params.s},
                           {"degree", s.polynomial.degree()},
                           {"log_norm", s.polynomial.log_norm()},
                           {"log_norm_bound", s.params.log_norm_bound()},
                           {"lower", s.thresholds.lower},
                           {"upper", s.thresholds.upper},
                           {"thresholds_in_unit_ball", s.thresholds_in_unit_ball},
                           {"min_positive", s.positives ? Json(s.min_positive) : Json(nullptr)},
                           {"max_negative", s.negatives ? Json(s.max_negative) : Json(nullptr)},
                           {"passed", s.passed()},
                           {"polynomial", polynomial_to_json(s.polynomial)}});
    }
    Json out{{"gamma", cert.gamma}, {"passed", all_passed}, {"slack", report_to_json(report)}, {"classes", classes}};
    write_json_file(opt.out_path, out);
    for (const auto& s : separators) {
        std::cout << "class " << s.label << ": deg " << s.polynomial.degree() << ", min+ "
                  << format_double(s.min_positive) << ", max- " << format_double(s.max_negative)
                  << (s.passed() ? "" : "  FAILED") << '\n';
    }
    return all_passed ? ok : certification_failed;
}

int bounds(const BoundsOptions& opt)
{
    struct Row {
        double gamma;
        int L;
        int K;
    };
    std::vector<Row> rows;
    if (opt.default_grid) {
        for (double g : {0.5, 0.2, 0.1, 0.05, 0.02}) {
            for (auto [L, K] : {std::pair{2, 9}, std::pair{3, 9}, std::pair{3, 16}, std::pair{4, 32}}) {
                rows.push_back({g, L, K});
            }
        }
    } else {
        if (opt.gammas.empty() || opt.groups.empty() || opt.classes.empty()) {
            throw InvalidInput("bounds needs --gamma, --L and --K (or --grid)");
        }
        for (double g : opt.gammas) {
            for (int L : opt.groups) {
                for (int K : opt.classes) {
                    if (L > K) throw InvalidInput("L must not exceed K");
                    rows.push_back({g, L, K});
                }
            }
        }
    }

    std::ostringstream out;
    out << "gamma,L,K,log10_gamma_prime,log10_gamma1,log10_gamma2,log10_mistake_bound\n";
    for (const auto& row : rows) {
        const MarginReport ours = transformed_margin(row.gamma, row.L);
        out << format_double(row.gamma) << ',' << row.L << ',' << row.K << ','
            << format_double(ours.log10_gamma_prime()) << ',';
        if (row.K >= 2) {
            const ComparisonMargins theirs = bpstwz_margins(row.gamma, row.K);
            out << format_double(theirs.log_gamma1 / std::log(10.0)) << ','
                << format_double(theirs.log_gamma2 / std::log(10.0)) << ',';
        } else {
            out << ",,";
        }
        const MistakeBoundReport mb = mistake_bound_from_log(row.K, std::sqrt(2.0), ours.log_gamma_prime);
        out << (std::isfinite(mb.log10_value) ? format_double(mb.log10_value) : std::string("-inf")) << '\n';
    }
    if (opt.out_path.empty()) {
        std::cout << out.str();
    } else {
        write_text_file(opt.out_path, out.str());
    }
    return ok;
}

int sweep(const SweepOptions& opt)
{
    const Json config = read_json_file(opt.config_path);
    if (!config.contains("data") || !config.contains("run")) throw InvalidInput("sweep config needs 'data' and 'run'");
    const GenSpec spec = gen_spec_from_json(config.at("data"));
    const Json& run_cfg = config.at("run");

    std::vector<std::string> kernels;
    try {
        if (run_cfg.contains("kernels")) kernels = run_cfg.at("kernels").get<std::vector<std::string>>();
        else kernels.push_back(run_cfg.value("kernel", std::string("rational")));
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("bad kernel list: ") + e.what());
    }
    const auto horizon = run_cfg.value("T", std::size_t{1000});
    const auto seeds = run_cfg.value("seeds", std::vector<std::uint64_t>{0});

    const GeneratedData gen = generate(spec);
    const fs::path dir(opt.out_dir);
    write_text_file(dir / "dataset.csv", dataset_csv(gen.data));
    Json cert = certificate_to_json(gen.certificate);
    cert["slack"] = report_to_json(verify(gen.data, gen.certificate));
    write_json_file(dir / "certificate.json", cert);

    Json runs = Json::array();
    Json means = Json::object();
    for (const auto& kernel : kernels) {
        const LearnerConfig cfg = learner_config(spec.classes, kernel, "non-negative", "smallest-index");
        double total = 0.0;
        for (auto seed : seeds) {
            const auto stream = make_stream(gen.data, horizon, seed);
            const MistakeTrace trace = run_protocol(stream, cfg, seed);
            const std::string name = "trace_" + kernel + "_seed" + std::to_string(seed) + ".csv";
            write_text_file(dir / name, trace_csv(trace));
            Json summary = run_summary(trace, horizon);
            summary["kernel"] = kernel;
            summary["seed"] = seed;
            summary["trace"] = name;
            runs.push_back(summary);
            total += static_cast<double>(trace.mistakes());
        }
        means[kernel] = seeds.empty() ? Json(nullptr) : Json(total / static_cast<double>(seeds.size()));
    }
    write_json_file(dir / "sweep.json", {{"data", gen_spec_to_json(spec)}, {"runs", runs}, {"mean_mistakes", means}});
    std::cout << "wrote " << runs.size() << " runs to " << dir.string() << '\n';
    return ok;
}

}  // namespace gwsep::cli
