#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gwsep::cli {

enum ExitCode : int { ok = 0, internal_error = 1, invalid_input = 2, certification_failed = 3 };

struct GenDataOptions {
    std::string spec_path;  ///< optional; flags below override its fields
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> kind;
    std::optional<std::size_t> dim;
    std::optional<int> classes;
    std::optional<std::string> groups;  ///< comma-separated class counts, e.g. "3,4,1"
    std::optional<double> gamma;
    std::optional<std::size_t> samples;
    std::optional<std::string> band_axis;
};

struct RunOptions {
    std::string data_path;
    std::string kernel = "rational";
    std::string algorithm = "bandit";  ///< bandit | perceptron
    std::size_t horizon = 0;
    std::uint64_t seed = 0;
    std::optional<int> classes;
    std::string membership = "non-negative";
    std::string tie_rule = "smallest-index";
    std::string trace_path;
    std::string summary_path;
    std::string state_path;
};

struct ContourOptions {
    std::string state_path;
    std::size_t grid = 50;
    std::vector<double> bbox{-1.0, 1.0, -1.0, 1.0};  ///< xmin, xmax, ymin, ymax
    int label = 1;
    std::string out_path;
};

struct CertifyOptions {
    std::string data_path;
    std::string certificate_path;
    std::optional<double> gamma;
    int max_degree = 40;
    std::string out_path;
};

struct BoundsOptions {
    std::vector<double> gammas;
    std::vector<int> groups;
    std::vector<int> classes;
    bool default_grid = false;
    std::string out_path;  ///< stdout when empty
};

struct SweepOptions {
    std::string config_path;
    std::string out_dir;
};

int gen_data(const GenDataOptions& opt);
int run(const RunOptions& opt);
int contour(const ContourOptions& opt);
int certify(const CertifyOptions& opt);
int bounds(const BoundsOptions& opt);
int sweep(const SweepOptions& opt);

}  // namespace gwsep::cli
