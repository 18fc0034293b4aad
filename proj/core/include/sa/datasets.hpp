#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sa/common.hpp"
#include "sa/lighting.hpp"
#include "sa/reflectance.hpp"
#include "sa/renderer.hpp"

namespace sa {

// Axis-aligned sampling of the homogeneous parameter space: diffuse and
// specular albedo uniform in [0.05, 1.0], roughness log-uniform in
// [0.02, 1.0].
struct ParameterGrid {
    std::vector<double> diffuse;
    std::vector<double> specular;
    std::vector<double> roughness;

    size_t total() const { return diffuse.size() * specular.size() * roughness.size(); }

    struct Index {
        int d = 0, s = 0, r = 0;
    };
    size_t flatten(Index i) const {
        return (static_cast<size_t>(i.d) * specular.size() + i.s) * roughness.size() + i.r;
    }
    Index unflatten(size_t flat) const {
        Index i;
        i.r = static_cast<int>(flat % roughness.size());
        i.s = static_cast<int>((flat / roughness.size()) % specular.size());
        i.d = static_cast<int>(flat / (roughness.size() * specular.size()));
        return i;
    }
    WardBrdf brdf_at(size_t flat) const {
        Index i = unflatten(flat);
        return WardBrdf::mono(diffuse[i.d], specular[i.s], roughness[i.r]);
    }
};

ParameterGrid build_grid(int nd, int ns, int nr);

// Per-axis midpoints between consecutive samples (log-space midpoints on
// the roughness axis) -- the points furthest from the training samples.
ParameterGrid midpoint_test_grid(const ParameterGrid& grid);

struct UniformScheme {
    int nd = 2, ns = 2, nr = 2;
};
struct RandomScheme {
    double fraction = 0.125;
    uint64_t seed = 0;
};
using SubsampleScheme = std::variant<UniformScheme, RandomScheme>;

// Labeled ids plus the complement, which becomes the unlabeled pool.
struct SubsampleResult {
    std::vector<size_t> labeled;
    std::vector<size_t> complement;
};
SubsampleResult subsample(const ParameterGrid& grid, const SubsampleScheme& scheme);

// Evenly spaced axis indices including both endpoints.
std::vector<int> uniform_axis_indices(int available, int wanted);

struct SvbrdfTexSpec {
    int size = 64;
    int octaves = 3;
    int base_cells = 4;       // lattice cells of the coarsest octave
    double normal_strength = 1.5;
    bool flat = false;        // constant diffuse, straight-up normals
};
SvbrdfMaps generate_procedural_svbrdf(uint64_t seed, const SvbrdfTexSpec& spec);

// Histogram-matched selection: 8 bins per channel over image mean colors;
// pool images are drawn with weight proportional to target-bin mass over
// pool-bin mass. Uniform draws fill any deficit (counted).
std::vector<size_t> select_unlabeled_subset(const std::vector<Image>& labeled,
                                            const std::vector<Image>& pool, size_t k,
                                            uint64_t seed, int* uniform_fallbacks = nullptr);

// Seeded axis-aligned crop plus rotation by a multiple of 90 degrees
// (counterclockwise in world xy). Quarter-turn rotations keep the
// render-commutation property exact up to float reassociation.
struct CropRotate {
    int y0 = 0, x0 = 0, size = 0;
    int quarter_turns = 0;
};
CropRotate draw_crop_rotate(int height, int width, int window, Rng& rng);
Image apply_crop_rotate(const Image& img, const CropRotate& cr);
// Normal maps additionally rotate the vectors: (nx, ny) -> (-ny, nx) per
// quarter turn.
Image apply_crop_rotate_normals(const Image& normals, const CropRotate& cr);
SvbrdfMaps apply_crop_rotate(const SvbrdfMaps& maps, const CropRotate& cr);

// ---------------------------------------------------------------------
// Rendered homogeneous-path dataset.

struct LabeledSample {
    Image image;          // finalized network input
    BrdfNetParams target;
    size_t grid_id = 0;
    int env_index = 0;
    int rotation = 0;
    uint64_t seed = 0;
};

struct UnlabeledSample {
    Image image;
    size_t grid_id = 0;  // provenance only; not visible to training
    int env_index = 0;
    int rotation = 0;
    uint64_t seed = 0;
};

struct BrdfDatasetConfig {
    int nd = 6, ns = 6, nr = 8;
    SubsampleScheme scheme = UniformScheme{2, 2, 2};
    ProbeSpec probe_spec;
    int num_probes = 20;
    int num_test_probes = 4;
    int labeled_lightings = 20;  // images per labeled exemplar
    int test_lightings = 1;      // images per test-grid point
    int rotations = 1;           // 1 = identity only, else random texel shifts
    int sphere_resolution = 32;
    bool gamma_encode = false;
    uint64_t seed = 1;
};

struct BrdfDataset {
    ParameterGrid grid;
    ParameterGrid test_grid;
    std::vector<size_t> labeled_ids;
    std::vector<size_t> unlabeled_ids;
    std::vector<EnvironmentMap> train_envs;
    std::vector<EnvironmentMap> test_envs;
    std::vector<LabeledSample> labeled;
    std::vector<UnlabeledSample> unlabeled;
    std::vector<LabeledSample> test;  // midpoint grid, grid_id indexes test_grid
    BrdfDatasetConfig config;
};

// Deterministic function of the config (per-sample derived seeds).
BrdfDataset build_brdf_dataset(const BrdfDatasetConfig& cfg);

void save_brdf_dataset(const BrdfDataset& ds, const std::filesystem::path& dir);
BrdfDataset load_brdf_dataset(const std::filesystem::path& dir);

nlohmann::json brdf_dataset_config_to_json(const BrdfDatasetConfig& cfg);
BrdfDatasetConfig brdf_dataset_config_from_json(const nlohmann::json& j);

}  // namespace sa
