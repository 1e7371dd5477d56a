#include "gwsep/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "gwsep/errors.hpp"
#include "gwsep/rng.hpp"

namespace gwsep {

std::string_view to_string(BandAxis axis)
{
    return axis == BandAxis::radial ? "radial" : "tangential";
}

BandAxis parse_band_axis(std::string_view text)
{
    if (text == "radial") return BandAxis::radial;
    if (text == "tangential") return BandAxis::tangential;
    throw InvalidInput("unknown band axis '" + std::string(text) + "' (expected radial or tangential)");
}

int GenSpec::num_groups() const
{
    switch (kind) {
    case SeparabilityKind::group_weak: return static_cast<int>(group_sizes.size());
    case SeparabilityKind::weak: return classes;
    case SeparabilityKind::strong: return 0;
    }
    return 0;
}

namespace {

/// Relative buffer on every margin so points sit strictly inside.
constexpr double kMarginBuffer = 0.01;
/// Fraction trimmed from each end of a group's usable projection span.
constexpr double kSpanTrim = 0.01;
/// Wedge points stay inside this radius in the first two coordinates.
constexpr double kWedgeRadius = 0.99;
constexpr std::size_t kMaxAttemptsPerPoint = 200'000;

double standard_normal(Rng& rng)
{
    const double u1 = 1.0 - rng.uniform01();
    const double u2 = rng.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform point in the d-ball of the given radius.
Vector uniform_in_ball(std::size_t dim, double radius, Rng& rng)
{
    Vector v(dim);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (auto& c : v) {
            c = standard_normal(rng);
            sq += c * c;
        }
    } while (sq == 0.0);
    const double scale = radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim)) / std::sqrt(sq);
    for (auto& c : v) c *= scale;
    return v;
}

Rng class_rng(std::uint64_t seed, int label)
{
    return Rng(derive_seed(derive_seed(seed, seed_tag::sampling), static_cast<std::uint64_t>(label)));
}

void validate(const GenSpec& spec)
{
    if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) throw InvalidInput("gamma must lie in (0, 1)");
    if (spec.classes < 1) throw InvalidInput("need at least one class");
    if (spec.dim < 1) throw InvalidInput("dimension must be positive");
    if (spec.kind == SeparabilityKind::group_weak) {
        if (spec.group_sizes.empty()) throw InvalidInput("group-weak spec needs group sizes");
        for (int c : spec.group_sizes) {
            if (c < 1) throw InvalidInput("every group needs at least one class");
        }
        const int total = std::accumulate(spec.group_sizes.begin(), spec.group_sizes.end(), 0);
        if (total != spec.classes) {
            throw InvalidInput("group sizes sum to " + std::to_string(total) + " but K = " +
                               std::to_string(spec.classes));
        }
    }
    if (spec.kind != SeparabilityKind::strong && spec.dim < 2) {
        throw InvalidInput("wedge construction needs d >= 2");
    }
}

Dataset shuffled_dataset(const GenSpec& spec, std::vector<LabeledExample> examples, std::vector<int> groups)
{
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(spec.seed, seed_tag::shuffle));
    shuffle(std::span<std::size_t>(order), rng);
    std::vector<LabeledExample> ex;
    std::vector<int> gr;
    ex.reserve(examples.size());
    for (auto i : order) {
        ex.push_back(std::move(examples[i]));
        if (!groups.empty()) gr.push_back(groups[i]);
    }
    return Dataset(spec.dim, std::move(ex), std::move(gr));
}

// ---------------------------------------------------------------------------
// strong

GeneratedData generate_strong(const GenSpec& spec)
{
    const int K = spec.classes;
    const std::size_t d = spec.dim;
    const double gamma = spec.gamma * (1.0 + kMarginBuffer);

    std::vector<Vector> weights(static_cast<std::size_t>(K), Vector(d, 0.0));
    std::vector<Vector> prototypes = weights;
    double m0 = 1.0;  // <prototype_y, w_y> * sqrt(K)
    if (K == 1) {
        weights[0][0] = 1.0;
        prototypes[0][0] = 1.0;
    } else {
        if (d < static_cast<std::size_t>(K)) {
            throw InvalidInput("strong construction needs d >= K (d = " + std::to_string(d) +
                               ", K = " + std::to_string(K) + ")");
        }
        // cos^2 A balances <p_y, w_y> against -<p_y, w_i>.
        const double k = K;
        const double cos2 = 2.0 * (k - 1.0) / (3.0 * k - 4.0);
        const double a = std::sqrt(cos2);
        const double b = std::sqrt(std::max(0.0, 1.0 - cos2));
        m0 = k / (3.0 * k - 4.0);
        const double vertex_norm = std::sqrt((k - 1.0) / k);
        const auto bias = static_cast<std::size_t>(K - 1);
        for (int i = 1; i <= K; ++i) {
            auto& w = weights[static_cast<std::size_t>(i - 1)];
            auto& p = prototypes[static_cast<std::size_t>(i - 1)];
            // Simplex vertex e_i - 1/K in the Helmert basis of the sum-zero subspace.
            for (int h = 1; h < K; ++h) {
                double c = 0.0;
                if (i <= h) c = 1.0;
                else if (i == h + 1) c = -static_cast<double>(h);
                c /= std::sqrt(static_cast<double>(h) * (h + 1)) * vertex_norm;
                w[static_cast<std::size_t>(h - 1)] = a * c / std::sqrt(k);
                p[static_cast<std::size_t>(h - 1)] = a * c;
            }
            w[bias] = -b / std::sqrt(k);
            p[bias] = b;
        }
    }
    const double needed = gamma * std::sqrt(static_cast<double>(K)) / 2.0;
    if (!(m0 > needed)) {
        throw Infeasible("strong margin " + std::to_string(spec.gamma) + " with K = " + std::to_string(K) +
                         " needs prototype margin " + std::to_string(needed) + " but only " +
                         std::to_string(m0) + " is attainable (deficit " + std::to_string(needed - m0) + ")");
    }
    const double rho = 0.5 * (m0 - needed) / (m0 + 1.0);

    std::vector<LabeledExample> examples;
    for (int y = 1; y <= K; ++y) {
        Rng rng = class_rng(spec.seed, y);
        const auto& proto = prototypes[static_cast<std::size_t>(y - 1)];
        for (std::size_t n = 0; n < spec.samples_per_class; ++n) {
            Vector x = uniform_in_ball(d, rho, rng);
            for (std::size_t i = 0; i < d; ++i) x[i] += (1.0 - rho) * proto[i];
            examples.push_back({std::move(x), y});
        }
    }

    GeneratedData out;
    out.data = shuffled_dataset(spec, std::move(examples), {});
    out.certificate.kind = SeparabilityKind::strong;
    out.certificate.gamma = spec.gamma;
    out.certificate.weights = std::move(weights);
    return out;
}

// ---------------------------------------------------------------------------
// weak / group-weak wedges

using Point = std::array<double, 2>;

struct HalfPlane {
    Point normal;  ///< feasible side: <normal, x> >= offset
    double offset = 0.0;
};

double dot2(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }

Point direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

bool feasible(const Point& x, const std::vector<HalfPlane>& planes, double radius, double slop)
{
    if (dot2(x, x) > radius * radius * (1.0 + slop)) return false;
    for (const auto& h : planes) {
        if (dot2(h.normal, x) < h.offset - slop) return false;
    }
    return true;
}

/// [min, max] of <axis, x> over the convex region, from the finitely many
/// candidate extreme points: pairwise line intersections, line/circle
/// intersections and the circle's extreme points along the axis.
std::optional<std::pair<double, double>> projection_span(const std::vector<HalfPlane>& planes, double radius,
                                                         const Point& axis)
{
    std::vector<Point> candidates{{radius * axis[0], radius * axis[1]}, {-radius * axis[0], -radius * axis[1]}};
    for (std::size_t i = 0; i < planes.size(); ++i) {
        const auto& a = planes[i];
        const double n2 = dot2(a.normal, a.normal);
        const Point foot{a.offset * a.normal[0] / n2, a.offset * a.normal[1] / n2};
        const double h2 = dot2(foot, foot);
        if (h2 <= radius * radius) {
            const double t = std::sqrt((radius * radius - h2) / n2);
            candidates.push_back({foot[0] - t * a.normal[1], foot[1] + t * a.normal[0]});
            candidates.push_back({foot[0] + t * a.normal[1], foot[1] - t * a.normal[0]});
        }
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            const auto& b = planes[j];
            const double det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
            if (std::abs(det) < 1e-14) continue;
            candidates.push_back({(a.offset * b.normal[1] - b.offset * a.normal[1]) / det,
                                  (a.normal[0] * b.offset - b.normal[0] * a.offset) / det});
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : candidates) {
        if (!feasible(c, planes, radius, 1e-12)) continue;
        const double v = dot2(axis, c);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
}

struct Wedge {
    Point inter;  ///< u_p restricted to the first two coordinates
    Point axis;   ///< unit band axis
    std::vector<HalfPlane> planes;
    double lo = 0.0;  ///< trimmed usable span along axis
    double hi = 0.0;
};

std::vector<Wedge> build_wedges(int L, BandAxis band_axis, double gamma)
{
    std::vector<double> theta(static_cast<std::size_t>(L));
    if (L == 2) {
        theta = {0.0, std::numbers::pi / 2.0};
    } else {
        for (int p = 0; p < L; ++p) theta[static_cast<std::size_t>(p)] = 2.0 * std::numbers::pi * p / L;
    }
    const double scale = L == 1 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(L));
    std::vector<Wedge> wedges(static_cast<std::size_t>(L));
    for (std::size_t p = 0; p < wedges.size(); ++p) {
        const Point e = direction(theta[p]);
        wedges[p].inter = {scale * e[0], scale * e[1]};
        wedges[p].axis = band_axis == BandAxis::radial ? e : direction(theta[p] + std::numbers::pi / 2.0);
    }
    for (std::size_t p = 0; p < wedges.size(); ++p) {
        for (std::size_t j = 0; j < wedges.size(); ++j) {
            if (j == p) continue;
            const Point n{wedges[p].inter[0] - wedges[j].inter[0], wedges[p].inter[1] - wedges[j].inter[1]};
            wedges[p].planes.push_back({n, gamma});
        }
        const auto span = projection_span(wedges[p].planes, kWedgeRadius, wedges[p].axis);
        if (!span) {
            throw Infeasible("group " + std::to_string(p + 1) + " has an empty region at margin " +
                             std::to_string(gamma));
        }
        const double trim = kSpanTrim * (span->second - span->first);
        wedges[p].lo = span->first + trim;
        wedges[p].hi = span->second - trim;
    }
    return wedges;
}

GeneratedData generate_wedges(const GenSpec& spec, const std::vector<int>& group_sizes)
{
    const int L = static_cast<int>(group_sizes.size());
    const std::size_t d = spec.dim;
    const double gamma = spec.gamma * (1.0 + kMarginBuffer);
    const std::vector<Wedge> wedges = build_wedges(L, spec.band_axis, gamma);

    // Intra norms: n_p proportional to the span fraction the 2 gamma gaps need.
    std::vector<double> need(static_cast<std::size_t>(L), 0.0);
    double need_norm = 0.0;
    for (std::size_t p = 0; p < need.size(); ++p) {
        const double span = wedges[p].hi - wedges[p].lo;
        need[p] = (group_sizes[p] - 1) * 2.0 * gamma / span;
        need_norm += need[p] * need[p];
    }
    need_norm = std::sqrt(need_norm);
    if (need_norm >= 1.0) {
        throw Infeasible("class bands do not fit: the 2*gamma gaps need an intra-group budget of " +
                         std::to_string(need_norm * need_norm) + " > 1 (deficit " +
                         std::to_string(need_norm * need_norm - 1.0) + ")");
    }

    SeparabilityCertificate cert;
    cert.kind = spec.kind;
    cert.gamma = spec.gamma;
    std::vector<LabeledExample> examples;
    std::vector<int> groups;
    int label = 0;
    for (std::size_t p = 0; p < wedges.size(); ++p) {
        const Wedge& w = wedges[p];
        Vector u(d, 0.0);
        u[0] = w.inter[0];
        u[1] = w.inter[1];
        cert.weights.push_back(u);

        const int c = group_sizes[p];
        const double n = need_norm > 0.0 ? need[p] / need_norm : 0.0;
        Vector intra(d, 0.0);
        if (c > 1) {
            intra[0] = n * w.axis[0];
            intra[1] = n * w.axis[1];
        }
        cert.intra_weights.push_back(intra);

        const double span = w.hi - w.lo;
        const double gap = c > 1 ? 2.0 * gamma / n : 0.0;
        const double width = (span - (c - 1) * gap) / c;
        const Point perp{-w.axis[1], w.axis[0]};
        for (int k = 0; k < c; ++k) {
            ++label;
            const double start = w.lo + k * (width + gap);
            Rng rng = class_rng(spec.seed, label);
            for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
                std::optional<Point> point;
                for (std::size_t attempt = 0; attempt < kMaxAttemptsPerPoint && !point; ++attempt) {
                    const double along = rng.uniform(start, start + width);
                    const double across = rng.uniform(-kWedgeRadius, kWedgeRadius);
                    const Point x{along * w.axis[0] + across * perp[0], along * w.axis[1] + across * perp[1]};
                    if (feasible(x, w.planes, kWedgeRadius, 0.0)) point = x;
                }
                if (!point) {
                    throw Infeasible("could not place a point of class " + std::to_string(label) + " after " +
                                     std::to_string(kMaxAttemptsPerPoint) + " attempts");
                }
                Vector x(d, 0.0);
                x[0] = (*point)[0];
                x[1] = (*point)[1];
                if (d > 2) {
                    const double room = 1.0 - ((*point)[0] * (*point)[0] + (*point)[1] * (*point)[1]);
                    const double extent = 0.5 * std::sqrt(std::max(0.0, room) / static_cast<double>(d - 2));
                    for (std::size_t i = 2; i < d; ++i) x[i] = rng.uniform(-extent, extent);
                }
                examples.push_back({std::move(x), label});
                groups.push_back(static_cast<int>(p) + 1);
            }
        }
    }

    if (spec.kind == SeparabilityKind::group_weak) {
        cert.groups = GroupStructure::from_assignment([&] {
            std::vector<int> assignment;
            for (std::size_t p = 0; p < group_sizes.size(); ++p) {
                assignment.insert(assignment.end(), static_cast<std::size_t>(group_sizes[p]), static_cast<int>(p) + 1);
            }
            return assignment;
        }());
    } else {
        cert.intra_weights.clear();
        groups.clear();
    }

    GeneratedData out;
    out.data = shuffled_dataset(spec, std::move(examples), std::move(groups));
    out.certificate = std::move(cert);
    return out;
}

}  // namespace

GeneratedData generate(const GenSpec& spec)
{
    validate(spec);
    switch (spec.kind) {
    case SeparabilityKind::strong: return generate_strong(spec);
    case SeparabilityKind::weak: return generate_wedges(spec, std::vector<int>(static_cast<std::size_t>(spec.classes), 1));
    case SeparabilityKind::group_weak: return generate_wedges(spec, spec.group_sizes);
    }
    throw InvalidInput("unknown separability kind");
}

}  // namespace gwsep
