#pragma once

// File formats.
//
//   dataset CSV      : header x_1..x_d,y[,group]; one example per row
//   trace CSV        : t,y,y_hat,z,explore,cum_mistakes
//   certificate JSON : {kind, gamma, weights, intra_weights?, groups?, slack?}
//   polynomial JSON  : {d, terms: [{alpha, coeff}]} in graded-lex order
//   learner JSON     : {K, kernel, tie_rule, membership, step, rng_state, supports}
//
// Floats in CSV are written with 17 significant digits in the C locale so
// they round-trip exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gwsep/core.hpp"
#include "gwsep/datagen.hpp"
#include "gwsep/kernel.hpp"
#include "gwsep/learner.hpp"
#include "gwsep/polynomial.hpp"

namespace gwsep {

using Json = nlohmann::json;

std::string format_double(double v);
double parse_double(std::string_view text);

void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

void write_trace_csv(std::ostream& out, const MistakeTrace& trace);

/// +inf (a vacuous slack) becomes null.
Json report_to_json(const CertificateReport& report);
Json certificate_to_json(const SeparabilityCertificate& certificate);
SeparabilityCertificate certificate_from_json(const Json& j);

Json polynomial_to_json(const SparsePolynomial& p);
SparsePolynomial polynomial_from_json(const Json& j);

/// Rows {alpha, value} in graded-lex order.
Json embedding_to_json(const TruncatedEmbedding& e);

Json learner_to_json(const KernelBandit& learner);
KernelBandit learner_from_json(const Json& j);

Json gen_spec_to_json(const GenSpec& spec);
GenSpec gen_spec_from_json(const Json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);
Json read_json_file(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace gwsep
