#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "darac/errors.hpp"
#include "darac/eval.hpp"
#include "darac/head.hpp"
#include "darac/image.hpp"
#include "darac/io.hpp"
#include "darac/losses.hpp"
#include "darac/pooling.hpp"
#include "darac/postprocess.hpp"
#include "darac/regions.hpp"
#include "darac/tensor.hpp"
#include "darac/training.hpp"

namespace {

using namespace darac;

/// Bad flag combinations that CLI11 cannot express; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct RegionsOptions {
    int width = 0;
    int height = 0;
    int scales = 3;
};

struct ExtractOptions {
    std::string input;
    std::string out;
    std::string variant;
    bool darac_head = false;
    std::string checkpoint;
    int size = 0;
    int channels = 8;
    std::uint64_t seed = 0;
};

struct PoolStudyOptions {
    std::string dataset;
    std::string gt;
    std::string sizes;
    int channels = 8;
    std::uint64_t seed = 0;
};

struct TrainOptions {
    std::string config;
};

struct WhitenOptions {
    std::string fit;
    std::string out_model;
    std::string model;
    std::string in;
    std::string out;
};

struct FuseOptions {
    std::string in;
    std::string out;
};

struct EvalOptions {
    std::string descriptors;
    std::string gt;
};

PoolingVariant parse_variant(const std::string& name) {
    for (PoolingVariant v : all_pooling_variants()) {
        if (name == pooling_variant_name(v)) return v;
    }
    std::string valid;
    for (PoolingVariant v : all_pooling_variants()) {
        if (!valid.empty()) valid += ", ";
        valid += pooling_variant_name(v);
    }
    throw UsageError("unknown pooling variant '" + name + "' (expected one of: " + valid + ")");
}

std::vector<int> parse_size_list(const std::string& text) {
    std::vector<int> sizes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        const std::string part =
            pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
        if (part.empty()) {
            throw UsageError("bad size list '" + text + "'");
        }
        try {
            sizes.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw UsageError("bad size '" + part + "' in size list");
        }
        if (sizes.back() < 1) {
            throw UsageError("sizes must be positive, got '" + part + "'");
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return sizes;
}

std::vector<std::string> parse_path_list(const std::string& text) {
    std::vector<std::string> paths;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        const std::string part =
            pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
        if (part.empty()) {
            throw UsageError("bad path list '" + text + "'");
        }
        paths.push_back(part);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return paths;
}

int run_regions(const RegionsOptions& opt) {
    const std::vector<Region> regions = rmac_regions(opt.width, opt.height, opt.scales);
    const RegionGrid grid = with_global(regions, opt.width, opt.height);
    std::map<int, int> per_scale;
    for (const Region& r : grid.regions) {
        std::printf("%d %d %d %d %d\n", r.scale_index, r.x0, r.y0, r.x1, r.y1);
        ++per_scale[r.scale_index];
    }
    for (const auto& [scale, count] : per_scale) {
        if (scale == 0) {
            std::printf("# scale 0 (global): %d region\n", count);
        } else {
            std::printf("# scale %d: %d regions\n", scale, count);
        }
    }
    std::printf("# total: %zu regions\n", grid.regions.size());
    return 0;
}

RegionGrid& grid_for(std::map<std::pair<int, int>, RegionGrid>& cache, int width, int height) {
    const auto key = std::make_pair(width, height);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, with_global(rmac_regions(width, height), width, height)).first;
    }
    return it->second;
}

DescriptorSet extract_descriptors(const LabeledDataset& ds, int size, bool use_head,
                                  const std::string& variant_name, int channels,
                                  std::uint64_t seed, const HeadParams* head) {
    if (size != 0 && ds.channels != 1) {
        throw UsageError("--size applies to image (1-channel) datasets only");
    }
    const int extractor_channels = use_head ? head->channels : channels;
    const ToyExtractor extractor(extractor_channels, seed);
    const PoolingVariant variant =
        use_head ? PoolingVariant::AvgGlobal : parse_variant(variant_name);

    std::map<std::pair<int, int>, RegionGrid> grids;
    DescriptorSet set;
    set.names.reserve(ds.items.size());
    set.descriptors.reserve(ds.items.size());
    for (const DatasetItem& item : ds.items) {
        set.names.push_back(item.name);
        Vector descriptor;
        if (ds.channels == 1) {
            Image img = image_from_features(item.maps);
            if (size != 0) img = resize_min_side(img, size);
            const FeatureMapSet maps = extractor.extract(img);
            if (use_head) {
                const RegionGrid& grid = grid_for(grids, maps.width(), maps.height());
                std::vector<PooledMatrix> batch{pooled_matrix(maps, grid)};
                HeadParams params = *head;
                descriptor = head_forward(batch, params, HeadMode::Infer).front();
            } else {
                descriptor = baseline_descriptor(maps, variant);
            }
        } else {
            if (use_head) {
                const RegionGrid& grid = grid_for(grids, item.maps.width(), item.maps.height());
                std::vector<PooledMatrix> batch{pooled_matrix(item.maps, grid)};
                HeadParams params = *head;
                descriptor = head_forward(batch, params, HeadMode::Infer).front();
            } else {
                descriptor = baseline_descriptor(item.maps, variant);
            }
        }
        set.descriptors.push_back(l2_normalize(descriptor));
    }
    return set;
}

int run_extract(const ExtractOptions& opt) {
    if (opt.darac_head == !opt.variant.empty()) {
        throw UsageError("pass exactly one of --darac or --variant");
    }
    if (opt.darac_head && opt.checkpoint.empty()) {
        throw UsageError("--darac requires --checkpoint");
    }
    const LabeledDataset ds = load_dataset(opt.input);
    HeadParams head;
    if (opt.darac_head) {
        head = load_head_checkpoint(opt.checkpoint);
    }
    const DescriptorSet set =
        extract_descriptors(ds, opt.size, opt.darac_head, opt.variant, opt.channels,
                            opt.seed, opt.darac_head ? &head : nullptr);
    write_descriptor_file(opt.out, set);
    return 0;
}

int run_pool_study(const PoolStudyOptions& opt) {
    const LabeledDataset ds = load_dataset(opt.dataset);
    const QueryProtocol protocol = load_query_protocol(opt.gt);
    std::vector<int> sizes{0};
    if (!opt.sizes.empty()) {
        sizes = parse_size_list(opt.sizes);
    }
    std::printf("variant\tsize\tmAP\n");
    for (PoolingVariant variant : all_pooling_variants()) {
        for (int size : sizes) {
            const DescriptorSet set =
                extract_descriptors(ds, size, false, pooling_variant_name(variant),
                                    opt.channels, opt.seed, nullptr);
            RetrievalIndex index{set.names, set.descriptors};
            const double map_score = evaluate_map(index, protocol);
            if (size == 0) {
                std::printf("%s\tnative\t%.4f\n", pooling_variant_name(variant), map_score);
            } else {
                std::printf("%s\t%d\t%.4f\n", pooling_variant_name(variant), size, map_score);
            }
        }
    }
    return 0;
}

int run_train(const TrainOptions& opt) {
    const TrainingConfig cfg = load_training_config(opt.config);
    const LabeledDataset ds = load_dataset(cfg.dataset_path);
    const TrainResult result = train(cfg, ds);
    for (std::size_t step = 0; step < result.loss_log.size(); ++step) {
        std::printf("step %zu loss %.17g\n", step, result.loss_log[step]);
    }
    save_head_checkpoint(cfg.checkpoint_path, result.params);
    return 0;
}

int run_whiten(const WhitenOptions& opt) {
    const bool fit_mode = !opt.fit.empty() || !opt.out_model.empty();
    const bool apply_mode = !opt.model.empty() || !opt.in.empty() || !opt.out.empty();
    if (fit_mode == apply_mode) {
        throw UsageError("use either --fit/--out-model or --model/--in/--out");
    }
    if (fit_mode) {
        if (opt.fit.empty() || opt.out_model.empty()) {
            throw UsageError("fitting needs both --fit and --out-model");
        }
        const DescriptorSet set = read_descriptor_file(opt.fit);
        const WhiteningModel model = fit_whitening(set.descriptors);
        save_whitening_model(opt.out_model, model);
        return 0;
    }
    if (opt.model.empty() || opt.in.empty() || opt.out.empty()) {
        throw UsageError("applying needs --model, --in, and --out");
    }
    const WhiteningModel model = load_whitening_model(opt.model);
    DescriptorSet set = read_descriptor_file(opt.in);
    for (Vector& d : set.descriptors) {
        d = apply_whitening(model, d);
    }
    write_descriptor_file(opt.out, set);
    return 0;
}

int run_fuse(const FuseOptions& opt) {
    const std::vector<std::string> paths = parse_path_list(opt.in);
    std::vector<DescriptorSet> sets;
    sets.reserve(paths.size());
    for (const std::string& path : paths) {
        sets.push_back(read_descriptor_file(path));
    }
    const DescriptorSet& first = sets.front();
    for (std::size_t s = 1; s < sets.size(); ++s) {
        if (sets[s].names != first.names) {
            throw FormatError("descriptor files are not aligned: '" + paths[s] +
                              "' lists different names than '" + paths[0] + "'");
        }
    }
    DescriptorSet fused;
    fused.names = first.names;
    fused.descriptors.reserve(first.descriptors.size());
    for (std::size_t i = 0; i < first.descriptors.size(); ++i) {
        std::vector<Vector> stack;
        stack.reserve(sets.size());
        for (const DescriptorSet& s : sets) {
            stack.push_back(s.descriptors[i]);
        }
        fused.descriptors.push_back(fuse_multiresolution(stack));
    }
    write_descriptor_file(opt.out, fused);
    return 0;
}

int run_eval(const EvalOptions& opt) {
    const DescriptorSet set = read_descriptor_file(opt.descriptors);
    const QueryProtocol protocol = load_query_protocol(opt.gt);
    RetrievalIndex index{set.names, set.descriptors};
    const double map_score = evaluate_map(index, protocol);
    std::printf("mAP %.4f\n", map_score);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regional descriptor aggregation pipeline"};
    app.require_subcommand(1);

    RegionsOptions regions_opt;
    CLI::App* regions_cmd = app.add_subcommand("regions", "print the multi-scale region grid");
    regions_cmd->add_option("--width", regions_opt.width, "feature map width")->required();
    regions_cmd->add_option("--height", regions_opt.height, "feature map height")->required();
    regions_cmd->add_option("--scales", regions_opt.scales, "number of scales");

    ExtractOptions extract_opt;
    CLI::App* extract_cmd = app.add_subcommand("extract", "compute descriptors for a dataset");
    extract_cmd->add_option("--input", extract_opt.input, "dataset file")->required();
    extract_cmd->add_option("--out", extract_opt.out, "output descriptor file")->required();
    extract_cmd->add_option("--variant", extract_opt.variant, "pooling-study variant name");
    extract_cmd->add_flag("--darac", extract_opt.darac_head, "use the learned head");
    extract_cmd->add_option("--checkpoint", extract_opt.checkpoint, "head checkpoint file");
    extract_cmd->add_option("--size", extract_opt.size, "resize images to this min side");
    extract_cmd->add_option("--channels", extract_opt.channels,
                            "extractor channels for --variant on image datasets");
    extract_cmd->add_option("--seed", extract_opt.seed, "extractor seed");

    PoolStudyOptions study_opt;
    CLI::App* study_cmd = app.add_subcommand("pool-study", "mAP table over pooling variants");
    study_cmd->add_option("--dataset", study_opt.dataset, "dataset file")->required();
    study_cmd->add_option("--gt", study_opt.gt, "ground-truth protocol file")->required();
    study_cmd->add_option("--sizes", study_opt.sizes, "comma-separated resize min sides");
    study_cmd->add_option("--channels", study_opt.channels, "extractor channels");
    study_cmd->add_option("--seed", study_opt.seed, "extractor seed");

    TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train", "train the aggregation head");
    train_cmd->add_option("--config", train_opt.config, "training config file")->required();

    WhitenOptions whiten_opt;
    CLI::App* whiten_cmd = app.add_subcommand("whiten", "fit or apply whitening");
    whiten_cmd->add_option("--fit", whiten_opt.fit, "descriptor file to fit on");
    whiten_cmd->add_option("--out-model", whiten_opt.out_model, "where to write the model");
    whiten_cmd->add_option("--model", whiten_opt.model, "whitening model to apply");
    whiten_cmd->add_option("--in", whiten_opt.in, "descriptor file to whiten");
    whiten_cmd->add_option("--out", whiten_opt.out, "output descriptor file");

    FuseOptions fuse_opt;
    CLI::App* fuse_cmd = app.add_subcommand("fuse", "sum-fuse aligned descriptor files");
    fuse_cmd->add_option("--in", fuse_opt.in, "comma-separated descriptor files")->required();
    fuse_cmd->add_option("--out", fuse_opt.out, "output descriptor file")->required();

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "mean average precision of descriptors");
    eval_cmd->add_option("--descriptors", eval_opt.descriptors, "descriptor file")->required();
    eval_cmd->add_option("--gt", eval_opt.gt, "ground-truth protocol file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (regions_cmd->parsed()) return run_regions(regions_opt);
        if (extract_cmd->parsed()) return run_extract(extract_opt);
        if (study_cmd->parsed()) return run_pool_study(study_opt);
        if (train_cmd->parsed()) return run_train(train_opt);
        if (whiten_cmd->parsed()) return run_whiten(whiten_opt);
        if (fuse_cmd->parsed()) return run_fuse(fuse_opt);
        if (eval_cmd->parsed()) return run_eval(eval_opt);
        std::fprintf(stderr, "error: no subcommand selected\n");
        return 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ContractError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ProtocolError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
