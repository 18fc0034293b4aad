#include "sa/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sa/io.hpp"

namespace sa {

ParameterGrid build_grid(int nd, int ns, int nr) {
    if (nd < 2 || ns < 2 || nr < 2) throw std::invalid_argument("build_grid: counts must be >= 2");
    ParameterGrid g;
    for (int i = 0; i < nd; ++i)
        g.diffuse.push_back(kAlbedoMin + (kAlbedoMax - kAlbedoMin) * i / (nd - 1));
    for (int i = 0; i < ns; ++i)
        g.specular.push_back(kAlbedoMin + (kAlbedoMax - kAlbedoMin) * i / (ns - 1));
    double lmin = std::log(kAlphaMin), lmax = std::log(kAlphaMax);
    for (int i = 0; i < nr; ++i)
        g.roughness.push_back(std::exp(lmin + (lmax - lmin) * i / (nr - 1)));
    // Keep the endpoints exact.
    g.diffuse.front() = kAlbedoMin;
    g.diffuse.back() = kAlbedoMax;
    g.specular.front() = kAlbedoMin;
    g.specular.back() = kAlbedoMax;
    g.roughness.front() = kAlphaMin;
    g.roughness.back() = kAlphaMax;
    return g;
}

ParameterGrid midpoint_test_grid(const ParameterGrid& grid) {
    ParameterGrid m;
    for (size_t i = 0; i + 1 < grid.diffuse.size(); ++i)
        m.diffuse.push_back(0.5 * (grid.diffuse[i] + grid.diffuse[i + 1]));
    for (size_t i = 0; i + 1 < grid.specular.size(); ++i)
        m.specular.push_back(0.5 * (grid.specular[i] + grid.specular[i + 1]));
    for (size_t i = 0; i + 1 < grid.roughness.size(); ++i)
        m.roughness.push_back(
            std::exp(0.5 * (std::log(grid.roughness[i]) + std::log(grid.roughness[i + 1]))));
    return m;
}

std::vector<int> uniform_axis_indices(int available, int wanted) {
    if (wanted < 1 || wanted > available)
        throw std::invalid_argument("uniform_axis_indices: infeasible count");
    std::vector<int> idx;
    if (wanted == 1) {
        idx.push_back(0);
        return idx;
    }
    for (int i = 0; i < wanted; ++i) {
        double t = static_cast<double>(i) * (available - 1) / (wanted - 1);
        idx.push_back(static_cast<int>(std::lround(t)));
    }
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

SubsampleResult subsample(const ParameterGrid& grid, const SubsampleScheme& scheme) {
    std::vector<char> chosen(grid.total(), 0);

    if (std::holds_alternative<UniformScheme>(scheme)) {
        const auto& u = std::get<UniformScheme>(scheme);
        auto di = uniform_axis_indices(static_cast<int>(grid.diffuse.size()), u.nd);
        auto si = uniform_axis_indices(static_cast<int>(grid.specular.size()), u.ns);
        auto ri = uniform_axis_indices(static_cast<int>(grid.roughness.size()), u.nr);
        for (int d : di)
            for (int s : si)
                for (int r : ri) chosen[grid.flatten({d, s, r})] = 1;
    } else {
        const auto& rs = std::get<RandomScheme>(scheme);
        size_t count = static_cast<size_t>(std::floor(rs.fraction * grid.total()));
        if (count == 0) throw std::invalid_argument("subsample: fraction selects an empty set");
        std::vector<size_t> ids(grid.total());
        std::iota(ids.begin(), ids.end(), 0);
        Rng rng(rs.seed, 0x5a85u);
        rng.shuffle(ids);
        for (size_t i = 0; i < count; ++i) chosen[ids[i]] = 1;
    }

    SubsampleResult out;
    for (size_t i = 0; i < chosen.size(); ++i)
        (chosen[i] ? out.labeled : out.complement).push_back(i);
    return out;
}

namespace {

// Value noise on a wrapping lattice, smoothstep-interpolated.
double value_noise(uint64_t seed, int cells, double u, double v) {
    auto lattice = [&](int ix, int iy) {
        uint64_t h = splitmix64(seed ^ (static_cast<uint64_t>(ix % cells) * 0x9e3779b1ull) ^
                                (static_cast<uint64_t>(iy % cells) * 0x85ebca77ull));
        return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
    };
    double fx = u * cells, fy = v * cells;
    int x0 = static_cast<int>(fx) % cells, y0 = static_cast<int>(fy) % cells;
    double tx = fx - std::floor(fx), ty = fy - std::floor(fy);
    tx = tx * tx * (3.0 - 2.0 * tx);
    ty = ty * ty * (3.0 - 2.0 * ty);
    double a = lattice(x0, y0), b = lattice(x0 + 1, y0);
    double c = lattice(x0, y0 + 1), d = lattice(x0 + 1, y0 + 1);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

double fbm(uint64_t seed, int octaves, int base_cells, double u, double v) {
    double acc = 0.0, amp = 1.0, norm = 0.0;
    int cells = base_cells;
    for (int o = 0; o < octaves; ++o) {
        acc += amp * value_noise(splitmix64(seed + o * 0x51ed2701ull), cells, u, v);
        norm += amp;
        amp *= 0.5;
        cells *= 2;
    }
    return acc / norm;
}

}  // namespace

SvbrdfMaps generate_procedural_svbrdf(uint64_t seed, const SvbrdfTexSpec& spec) {
    if (spec.size < 4) throw std::invalid_argument("svbrdf spec: size too small");
    if (spec.octaves < 1 || spec.base_cells < 1)
        throw std::invalid_argument("svbrdf spec: octaves and base_cells must be >= 1");

    Rng rng(seed, 0x5bdfu);
    SvbrdfMaps maps;
    maps.id = "svbrdf-" + std::to_string(seed);
    maps.diffuse = Image(spec.size, spec.size, 3);
    maps.normals = Image(spec.size, spec.size, 3);

    std::array<double, 3> base{}, span{};
    for (int c = 0; c < 3; ++c) {
        base[c] = rng.uniform(0.15, 0.6);
        span[c] = rng.uniform(0.1, 0.35);
    }
    for (int c = 0; c < 3; ++c) {
        maps.rho_s[c] = rng.uniform(kAlbedoMin, kAlbedoMax);
        maps.alpha[c] = std::exp(rng.uniform(std::log(kAlphaMin), std::log(kAlphaMax)));
    }

    uint64_t color_seed = splitmix64(seed ^ 0xc01054ull);
    uint64_t height_seed = splitmix64(seed ^ 0x4e19447ull);

    if (spec.flat) {
        for (int y = 0; y < spec.size; ++y)
            for (int x = 0; x < spec.size; ++x) {
                for (int c = 0; c < 3; ++c)
                    maps.diffuse.at(y, x, c) = static_cast<float>(clamp(base[c], 0.05, 1.0));
                maps.normals.at(y, x, 2) = 1.0f;
            }
        return maps;
    }

    auto height = [&](double u, double v) {
        return fbm(height_seed, spec.octaves, spec.base_cells, u, v);
    };
    const double inv = 1.0 / spec.size;
    for (int y = 0; y < spec.size; ++y) {
        for (int x = 0; x < spec.size; ++x) {
            double u = (x + 0.5) * inv, v = (y + 0.5) * inv;
            for (int c = 0; c < 3; ++c) {
                double n = fbm(splitmix64(color_seed + c), spec.octaves, spec.base_cells, u, v);
                maps.diffuse.at(y, x, c) =
                    static_cast<float>(clamp(base[c] + span[c] * (2.0 * n - 1.0), 0.05, 1.0));
            }
            // Central-difference height gradient; world y points up (row down).
            double dhdx = (height(u + inv, v) - height(u - inv, v)) / (2.0 * inv);
            double dhdy = -(height(u, v + inv) - height(u, v - inv)) / (2.0 * inv);
            Vec3 n = normalized({-spec.normal_strength * dhdx, -spec.normal_strength * dhdy, 1.0});
            maps.normals.at(y, x, 0) = static_cast<float>(n.x);
            maps.normals.at(y, x, 1) = static_cast<float>(n.y);
            maps.normals.at(y, x, 2) = static_cast<float>(n.z);
        }
    }
    return maps;
}

namespace {

std::array<int, 3> mean_color_bins(const Image& img, int bins) {
    std::array<int, 3> out{};
    for (int c = 0; c < img.channels; ++c) {
        double m = channel_mean(img, c);
        out[c] = clamp(static_cast<int>(m * bins), 0, bins - 1);
    }
    if (img.channels == 1) out[1] = out[2] = 0;
    return out;
}

}  // namespace

std::vector<size_t> select_unlabeled_subset(const std::vector<Image>& labeled,
                                            const std::vector<Image>& pool, size_t k,
                                            uint64_t seed, int* uniform_fallbacks) {
    if (pool.size() < k) throw std::invalid_argument("select_unlabeled_subset: pool too small");
    if (labeled.empty()) throw std::invalid_argument("select_unlabeled_subset: no labeled images");
    constexpr int kBins = 8;
    int channels = labeled[0].channels;

    // Per-channel histograms of image mean colors.
    std::vector<std::array<double, kBins>> target(channels), pool_hist(channels);
    for (auto& h : target) h.fill(0.0);
    for (auto& h : pool_hist) h.fill(0.0);
    for (const Image& img : labeled) {
        auto b = mean_color_bins(img, kBins);
        for (int c = 0; c < channels; ++c) target[c][b[c]] += 1.0;
    }
    std::vector<std::array<int, 3>> pool_bins(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        pool_bins[i] = mean_color_bins(pool[i], kBins);
        for (int c = 0; c < channels; ++c) pool_hist[c][pool_bins[i][c]] += 1.0;
    }

    std::vector<double> weight(pool.size(), 1.0);
    for (size_t i = 0; i < pool.size(); ++i)
        for (int c = 0; c < channels; ++c) {
            double t = target[c][pool_bins[i][c]] / static_cast<double>(labeled.size());
            double p = pool_hist[c][pool_bins[i][c]] / static_cast<double>(pool.size());
            weight[i] *= (p > 0.0 ? t / p : 0.0);
        }

    Rng rng(seed, 0x5e1ecu);
    std::vector<size_t> out;
    std::vector<char> taken(pool.size(), 0);
    int fallbacks = 0;
    while (out.size() < k) {
        double total = 0.0;
        for (size_t i = 0; i < pool.size(); ++i)
            if (!taken[i]) total += weight[i];
        if (total <= 0.0) {
            // No weighted mass left; fill the deficit uniformly.
            std::vector<size_t> rest;
            for (size_t i = 0; i < pool.size(); ++i)
                if (!taken[i]) rest.push_back(i);
            rng.shuffle(rest);
            for (size_t i = 0; out.size() < k; ++i) {
                out.push_back(rest[i]);
                ++fallbacks;
            }
            break;
        }
        double u = rng.uniform() * total;
        double acc = 0.0;
        size_t pick = pool.size();
        for (size_t i = 0; i < pool.size(); ++i) {
            if (taken[i]) continue;
            acc += weight[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        if (pick == pool.size()) {  // numerical edge; take the last untaken
            for (size_t i = pool.size(); i-- > 0;)
                if (!taken[i]) {
                    pick = i;
                    break;
                }
        }
        taken[pick] = 1;
        out.push_back(pick);
    }
    if (uniform_fallbacks) *uniform_fallbacks = fallbacks;
    return out;
}

CropRotate draw_crop_rotate(int height, int width, int window, Rng& rng) {
    if (window > height || window > width)
        throw std::invalid_argument("crop_rotate: window larger than image");
    CropRotate cr;
    cr.size = window;
    cr.y0 = static_cast<int>(rng.bounded(static_cast<uint32_t>(height - window + 1)));
    cr.x0 = static_cast<int>(rng.bounded(static_cast<uint32_t>(width - window + 1)));
    cr.quarter_turns = static_cast<int>(rng.bounded(4));
    return cr;
}

namespace {

Image crop(const Image& img, int y0, int x0, int size) {
    Image out(size, size, img.channels);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            for (int c = 0; c < img.channels; ++c) out.at(y, x, c) = img.at(y0 + y, x0 + x, c);
    return out;
}

// One counterclockwise quarter turn (world xy): new[r][c] = old[c][N-1-r].
Image rotate90(const Image& img) {
    Image out(img.width, img.height, img.channels);
    for (int r = 0; r < out.height; ++r)
        for (int c = 0; c < out.width; ++c)
            for (int ch = 0; ch < img.channels; ++ch)
                out.at(r, c, ch) = img.at(c, img.width - 1 - r, ch);
    return out;
}

}  // namespace

Image apply_crop_rotate(const Image& img, const CropRotate& cr) {
    Image out = crop(img, cr.y0, cr.x0, cr.size);
    for (int t = 0; t < (cr.quarter_turns % 4 + 4) % 4; ++t) out = rotate90(out);
    return out;
}

Image apply_crop_rotate_normals(const Image& normals, const CropRotate& cr) {
    Image out = apply_crop_rotate(normals, cr);
    int turns = (cr.quarter_turns % 4 + 4) % 4;
    for (int t = 0; t < turns; ++t) {
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x) {
                float nx = out.at(y, x, 0), ny = out.at(y, x, 1);
                out.at(y, x, 0) = -ny;
                out.at(y, x, 1) = nx;
            }
    }
    return out;
}

SvbrdfMaps apply_crop_rotate(const SvbrdfMaps& maps, const CropRotate& cr) {
    SvbrdfMaps out = maps;
    out.diffuse = apply_crop_rotate(maps.diffuse, cr);
    out.normals = apply_crop_rotate_normals(maps.normals, cr);
    return out;
}

// ---------------------------------------------------------------------

namespace {

Image render_grid_sample(const WardBrdf& brdf, const EnvironmentMap& env, int rotation,
                         int resolution, bool gamma_encode) {
    EnvironmentMap lit = rotation ? rotate_texels(env, rotation) : env;
    RenderedImage img = render_sphere(brdf, lit, resolution);
    FinalizeOptions opts;
    opts.gamma_encode = gamma_encode;
    finalize(img, opts);
    return img.pixels;
}

}  // namespace

BrdfDataset build_brdf_dataset(const BrdfDatasetConfig& cfg) {
    BrdfDataset ds;
    ds.config = cfg;
    ds.grid = build_grid(cfg.nd, cfg.ns, cfg.nr);
    ds.test_grid = midpoint_test_grid(ds.grid);

    SubsampleResult split = subsample(ds.grid, cfg.scheme);
    ds.labeled_ids = split.labeled;
    ds.unlabeled_ids = split.complement;

    ProbeSpec probe = cfg.probe_spec;
    probe.channels = 1;  // homogeneous path is monochrome
    for (int i = 0; i < cfg.num_probes; ++i)
        ds.train_envs.push_back(generate_probe(derive_seed(cfg.seed, 1000 + i), probe));
    for (int i = 0; i < cfg.num_test_probes; ++i)
        ds.test_envs.push_back(generate_probe(derive_seed(cfg.seed, 2000 + i), probe));

    auto draw_rotation = [&](Rng& rng, const EnvironmentMap& env) {
        if (cfg.rotations <= 1) return 0;
        return static_cast<int>(rng.bounded(static_cast<uint32_t>(env.width())));
    };

    uint64_t sample_counter = 0;
    for (size_t id : ds.labeled_ids) {
        WardBrdf brdf = ds.grid.brdf_at(id);
        BrdfNetParams target = normalize_brdfnet(brdf);
        for (int j = 0; j < cfg.labeled_lightings; ++j) {
            uint64_t s = derive_seed(cfg.seed, 3000 + sample_counter++);
            Rng rng(s);
            int env_idx = (cfg.labeled_lightings >= cfg.num_probes)
                              ? static_cast<int>((j) % cfg.num_probes)
                              : static_cast<int>(rng.bounded(static_cast<uint32_t>(cfg.num_probes)));
            int rot = draw_rotation(rng, ds.train_envs[env_idx]);
            LabeledSample sample;
            sample.image = render_grid_sample(brdf, ds.train_envs[env_idx], rot,
                                              cfg.sphere_resolution, cfg.gamma_encode);
            sample.target = target;
            sample.grid_id = id;
            sample.env_index = env_idx;
            sample.rotation = rot;
            sample.seed = s;
            ds.labeled.push_back(std::move(sample));
        }
    }

    for (size_t id : ds.unlabeled_ids) {
        uint64_t s = derive_seed(cfg.seed, 3000 + sample_counter++);
        Rng rng(s);
        int env_idx = static_cast<int>(rng.bounded(static_cast<uint32_t>(cfg.num_probes)));
        int rot = draw_rotation(rng, ds.train_envs[env_idx]);
        UnlabeledSample sample;
        sample.image = render_grid_sample(ds.grid.brdf_at(id), ds.train_envs[env_idx], rot,
                                          cfg.sphere_resolution, cfg.gamma_encode);
        sample.grid_id = id;
        sample.env_index = env_idx;
        sample.rotation = rot;
        sample.seed = s;
        ds.unlabeled.push_back(std::move(sample));
    }

    for (size_t id = 0; id < ds.test_grid.total(); ++id) {
        WardBrdf brdf = ds.test_grid.brdf_at(id);
        BrdfNetParams target = normalize_brdfnet(brdf);
        for (int j = 0; j < cfg.test_lightings; ++j) {
            uint64_t s = derive_seed(cfg.seed, 3000 + sample_counter++);
            Rng rng(s);
            int env_idx = static_cast<int>(rng.bounded(static_cast<uint32_t>(cfg.num_test_probes)));
            int rot = draw_rotation(rng, ds.test_envs[env_idx]);
            LabeledSample sample;
            sample.image = render_grid_sample(brdf, ds.test_envs[env_idx], rot,
                                              cfg.sphere_resolution, cfg.gamma_encode);
            sample.target = target;
            sample.grid_id = id;
            sample.env_index = env_idx;
            sample.rotation = rot;
            sample.seed = s;
            ds.test.push_back(std::move(sample));
        }
    }
    return ds;
}

nlohmann::json brdf_dataset_config_to_json(const BrdfDatasetConfig& cfg) {
    nlohmann::json scheme;
    if (std::holds_alternative<UniformScheme>(cfg.scheme)) {
        const auto& u = std::get<UniformScheme>(cfg.scheme);
        scheme = {{"kind", "uniform"}, {"nd", u.nd}, {"ns", u.ns}, {"nr", u.nr}};
    } else {
        const auto& r = std::get<RandomScheme>(cfg.scheme);
        scheme = {{"kind", "random"}, {"fraction", r.fraction}, {"seed", r.seed}};
    }
    return {{"nd", cfg.nd},
            {"ns", cfg.ns},
            {"nr", cfg.nr},
            {"scheme", scheme},
            {"probe", {{"height", cfg.probe_spec.height},
                       {"num_lobes", cfg.probe_spec.num_lobes},
                       {"sharpness_range", cfg.probe_spec.sharpness_range},
                       {"ambient_range", cfg.probe_spec.ambient_range},
                       {"intensity_range", cfg.probe_spec.intensity_range}}},
            {"num_probes", cfg.num_probes},
            {"num_test_probes", cfg.num_test_probes},
            {"labeled_lightings", cfg.labeled_lightings},
            {"test_lightings", cfg.test_lightings},
            {"rotations", cfg.rotations},
            {"sphere_resolution", cfg.sphere_resolution},
            {"gamma_encode", cfg.gamma_encode},
            {"seed", cfg.seed}};
}

BrdfDatasetConfig brdf_dataset_config_from_json(const nlohmann::json& j) {
    BrdfDatasetConfig cfg;
    cfg.nd = j.value("nd", cfg.nd);
    cfg.ns = j.value("ns", cfg.ns);
    cfg.nr = j.value("nr", cfg.nr);
    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        std::string kind = s.value("kind", "uniform");
        if (kind == "uniform")
            cfg.scheme = UniformScheme{s.value("nd", 2), s.value("ns", 2), s.value("nr", 2)};
        else if (kind == "random")
            cfg.scheme = RandomScheme{s.value("fraction", 0.125), s.value("seed", 0ull)};
        else
            throw std::invalid_argument("unknown subsample scheme: " + kind);
    }
    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        cfg.probe_spec.height = p.value("height", cfg.probe_spec.height);
        cfg.probe_spec.num_lobes = p.value("num_lobes", cfg.probe_spec.num_lobes);
        if (p.contains("sharpness_range"))
            cfg.probe_spec.sharpness_range = p.at("sharpness_range");
        if (p.contains("ambient_range")) cfg.probe_spec.ambient_range = p.at("ambient_range");
        if (p.contains("intensity_range")) cfg.probe_spec.intensity_range = p.at("intensity_range");
    }
    cfg.num_probes = j.value("num_probes", cfg.num_probes);
    cfg.num_test_probes = j.value("num_test_probes", cfg.num_test_probes);
    cfg.labeled_lightings = j.value("labeled_lightings", cfg.labeled_lightings);
    cfg.test_lightings = j.value("test_lightings", cfg.test_lightings);
    cfg.rotations = j.value("rotations", cfg.rotations);
    cfg.sphere_resolution = j.value("sphere_resolution", cfg.sphere_resolution);
    cfg.gamma_encode = j.value("gamma_encode", cfg.gamma_encode);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

void save_brdf_dataset(const BrdfDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["kind"] = "brdf_grid";
    manifest["config"] = brdf_dataset_config_to_json(ds.config);
    manifest["labeled_ids"] = ds.labeled_ids;
    manifest["unlabeled_ids"] = ds.unlabeled_ids;

    for (size_t i = 0; i < ds.train_envs.size(); ++i)
        save_env(dir / ("envs/train-" + std::to_string(i) + ".saem"), ds.train_envs[i]);
    for (size_t i = 0; i < ds.test_envs.size(); ++i)
        save_env(dir / ("envs/test-" + std::to_string(i) + ".saem"), ds.test_envs[i]);

    auto record_image = [&](const Image& img, const std::string& rel) {
        RenderedImage r;
        r.pixels = img;
        r.finalized = true;
        io::write_image_blob(dir / rel, "SAIM", img);
    };

    nlohmann::json records = nlohmann::json::array();
    for (size_t i = 0; i < ds.labeled.size(); ++i) {
        const LabeledSample& s = ds.labeled[i];
        std::string rel = "images/labeled-" + std::to_string(i) + ".saim";
        record_image(s.image, rel);
        records.push_back({{"split", "train"},
                           {"labeled", true},
                           {"image", rel},
                           {"grid_id", s.grid_id},
                           {"env_index", s.env_index},
                           {"rotation", s.rotation},
                           {"seed", s.seed},
                           {"params",
                            {{"rho_s_rel", s.target.rho_s_rel[0]},
                             {"alpha_log", s.target.alpha_log[0]}}}});
    }
    for (size_t i = 0; i < ds.unlabeled.size(); ++i) {
        const UnlabeledSample& s = ds.unlabeled[i];
        std::string rel = "images/unlabeled-" + std::to_string(i) + ".saim";
        record_image(s.image, rel);
        records.push_back({{"split", "unlabeled"},
                           {"labeled", false},
                           {"image", rel},
                           {"grid_id", s.grid_id},
                           {"env_index", s.env_index},
                           {"rotation", s.rotation},
                           {"seed", s.seed}});
    }
    for (size_t i = 0; i < ds.test.size(); ++i) {
        const LabeledSample& s = ds.test[i];
        std::string rel = "images/test-" + std::to_string(i) + ".saim";
        record_image(s.image, rel);
        records.push_back({{"split", "test"},
                           {"labeled", true},
                           {"image", rel},
                           {"grid_id", s.grid_id},
                           {"env_index", s.env_index},
                           {"rotation", s.rotation},
                           {"seed", s.seed},
                           {"params",
                            {{"rho_s_rel", s.target.rho_s_rel[0]},
                             {"alpha_log", s.target.alpha_log[0]}}}});
    }
    manifest["records"] = records;
    io::save_json(dir / "manifest.json", manifest);
}

BrdfDataset load_brdf_dataset(const std::filesystem::path& dir) {
    nlohmann::json manifest = io::load_json(dir / "manifest.json");
    if (manifest.value("kind", "") != "brdf_grid")
        throw std::runtime_error("not a brdf_grid dataset: " + dir.string());

    BrdfDataset ds;
    ds.config = brdf_dataset_config_from_json(manifest.at("config"));
    ds.grid = build_grid(ds.config.nd, ds.config.ns, ds.config.nr);
    ds.test_grid = midpoint_test_grid(ds.grid);
    ds.labeled_ids = manifest.at("labeled_ids").get<std::vector<size_t>>();
    ds.unlabeled_ids = manifest.at("unlabeled_ids").get<std::vector<size_t>>();

    for (int i = 0; i < ds.config.num_probes; ++i)
        ds.train_envs.push_back(load_env(dir / ("envs/train-" + std::to_string(i) + ".saem")));
    for (int i = 0; i < ds.config.num_test_probes; ++i)
        ds.test_envs.push_back(load_env(dir / ("envs/test-" + std::to_string(i) + ".saem")));

    for (const auto& rec : manifest.at("records")) {
        std::string split = rec.at("split");
        std::filesystem::path img_path = dir / rec.at("image").get<std::string>();
        if (split == "unlabeled") {
            UnlabeledSample s;
            s.image = io::read_image_blob(img_path, "SAIM");
            s.grid_id = rec.at("grid_id");
            s.env_index = rec.at("env_index");
            s.rotation = rec.at("rotation");
            s.seed = rec.at("seed");
            ds.unlabeled.push_back(std::move(s));
        } else {
            LabeledSample s;
            s.image = io::read_image_blob(img_path, "SAIM");
            s.grid_id = rec.at("grid_id");
            s.env_index = rec.at("env_index");
            s.rotation = rec.at("rotation");
            s.seed = rec.at("seed");
            s.target.channels = 1;
            s.target.rho_s_rel[0] = rec.at("params").at("rho_s_rel");
            s.target.alpha_log[0] = rec.at("params").at("alpha_log");
            (split == "test" ? ds.test : ds.labeled).push_back(std::move(s));
        }
    }
    return ds;
}

}  // namespace sa
