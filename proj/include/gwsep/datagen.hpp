#pragma once

// Synthetic datasets with a known separability certificate.
//
// strong     : K simplex directions tilted by a shared bias coordinate, points
//              near each class prototype. Needs d >= K (d >= 1 for K = 1).
// weak       : L = K singleton groups of the wedge construction below.
// group-weak : L angular wedges in the first two coordinates with
//              u_p = e(theta_p) / sqrt(L); classes of a group occupy bands along
//              the radial or tangential axis of the wedge.
//
// Every inequality is met with a 1% buffer on gamma, so the emitted pair
// passes its verifier without relying on the verification tolerance.

#include <cstdint>
#include <string_view>
#include <vector>

#include "gwsep/core.hpp"

namespace gwsep {

enum class BandAxis { radial, tangential };

std::string_view to_string(BandAxis axis);
BandAxis parse_band_axis(std::string_view text);

struct GenSpec {
    SeparabilityKind kind = SeparabilityKind::group_weak;
    std::size_t dim = 2;
    int classes = 0;                ///< K
    std::vector<int> group_sizes;   ///< classes per group; sums to K (group-weak only)
    double gamma = 0.1;
    std::size_t samples_per_class = 100;
    std::uint64_t seed = 0;
    BandAxis band_axis = BandAxis::radial;

    /// L: group_sizes.size() for group-weak, K for weak, unused for strong.
    int num_groups() const;
};

struct GeneratedData {
    Dataset data;
    SeparabilityCertificate certificate;
};

/// Throws InvalidInput for malformed specs and Infeasible (with the computed
/// deficit) when the requested margin does not fit.
GeneratedData generate(const GenSpec& spec);

}  // namespace gwsep
