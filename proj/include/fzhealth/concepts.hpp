#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fzhealth/errors.hpp"
#include "fzhealth/fcm.hpp"
#include "fzhealth/matrix.hpp"

namespace fzh {

/// A sub-bin that cannot be windowed with the requested settings.
class InsufficientData : public DataError {
public:
    using DataError::DataError;
};

/// (value, increment) pair in the concept space.
struct DeltaPoint {
    double z = 0.0;
    double dz = 0.0;

    bool operator==(const DeltaPoint&) const = default;
};

/// Rank 1 is the highest-power concept, rank C the lowest.
std::string rank_label(std::size_t rank, std::size_t concepts);

struct Concept {
    std::size_t rank = 0;          // 1..C
    std::size_t window_index = 0;  // 1..R
    DeltaPoint centroid;
};

struct WindowConcepts {
    std::size_t window_index = 0;  // 1..R
    std::size_t first_sample = 0;  // offset of the window in the sub-bin
    std::size_t sample_count = 0;
    std::vector<Concept> concepts;  // sorted by descending z
    Matrix memberships;             // (P-1) x C, column j = membership to rank j+1
    std::size_t iterations = 0;
    bool converged = false;
};

struct WindowRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const noexcept { return end - begin; }
};

/// R contiguous windows whose sizes differ by at most one; the earliest
/// windows take the remainder. Throws InsufficientData when a window would
/// hold fewer than `min_window` samples, std::invalid_argument for R == 0.
std::vector<WindowRange> split_windows(std::size_t samples, std::size_t windows, std::size_t min_window = 2);

/// Windows of at least `length` samples: R = samples / length, then split as above.
std::vector<WindowRange> split_windows_by_length(std::size_t samples, std::size_t length, std::size_t min_window = 2);

/// (z_i, z_i - z_{i-1}) for i = 2..P. Throws std::invalid_argument for P < 2.
std::vector<DeltaPoint> delta_transform(std::span<const double> values);

struct ConceptConfig {
    std::size_t windows = 20;                  // R
    std::optional<std::size_t> window_length;  // when set, R = samples / window_length
    std::size_t min_delta_points = 8;          // per window
    FcmParams fcm{};                           // fcm.seed is the base seed
};

/// Seed for one window's FCM, mixed from the base seed, sub-bin id and window index.
std::uint64_t window_seed(std::uint64_t base, std::uint64_t subbin_id, std::uint64_t window_index);

/// Sorts centroids by descending z (ties: dz descending, then original index)
/// and returns the permutation: result[rank-1] = original cluster index.
std::vector<std::size_t> rank_order(const Matrix& centroids);

/// Windows the time-ordered power values, transforms each window and
/// extracts C ranked concepts per window. Throws InsufficientData when the
/// series is too short for the requested windows.
std::vector<WindowConcepts> extract_concepts(std::span<const double> power, const ConceptConfig& config,
                                             std::uint64_t subbin_id = 0);

/// CSV rows "window_index,rank_label,z,dz" with round-trip precision.
void emit_concept_scatter(std::span<const WindowConcepts> windows, std::ostream& out);
void emit_concept_scatter(std::span<const WindowConcepts> windows, const std::filesystem::path& path);

struct ScatterRow {
    std::size_t window_index = 0;
    std::string rank_label;
    DeltaPoint centroid;
};
std::vector<ScatterRow> read_concept_scatter(std::istream& in);

}  // namespace fzh
