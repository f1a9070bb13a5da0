#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "saldl/config.hpp"
#include "saldl/error.hpp"
#include "saldl/halftone.hpp"
#include "saldl/metrics.hpp"
#include "saldl/networks.hpp"
#include "saldl/pnm.hpp"
#include "saldl/training.hpp"
#include "saldl/verification.hpp"

namespace saldl::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

bool is_image_file(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" || ext == ".ppm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

GrayImage load_gray_or_luma(const fs::path& path) {
    auto img = load_pnm(path);
    if (auto* g = std::get_if<GrayImage>(&img)) return *g;
    return to_grayscale(std::get<ColorImage>(img));
}

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
    return out.parent_path() / (out.stem().string() + suffix + ".pgm");
}

// ---------------------------------------------------------------------------
// halftone

struct HalftoneArgs {
    std::string input;
    std::string output;
};

int cmd_halftone(const HalftoneArgs& a, std::ostream& out) {
    auto img = load_pnm(a.input);
    if (auto* g = std::get_if<GrayImage>(&img)) {
        save_pgm(floyd_steinberg(*g).to_gray(), a.output);
    } else {
        const auto planes = split_planes(std::get<ColorImage>(img));
        save_ppm(merge_planes(floyd_steinberg(planes[0]).to_gray(), floyd_steinberg(planes[1]).to_gray(),
                              floyd_steinberg(planes[2]).to_gray()),
                 a.output);
    }
    out << "wrote " << a.output << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// dataset

struct DatasetArgs {
    std::string corpus;
    std::string out_dir;
    int patches = 0;
    std::uint64_t seed = 0;
    int patch_size = kPatchSize;
};

int cmd_dataset(const DatasetArgs& a, std::ostream& out) {
    const auto files = list_images(a.corpus);
    if (files.empty()) throw IoError("no .pgm/.ppm images in " + a.corpus);
    if (a.patches < 1) throw InvalidArgument("--patches must be positive");
    std::vector<GrayImage> images;
    std::vector<std::string> names;
    for (const auto& f : files) {
        images.push_back(load_gray_or_luma(f));
        names.push_back(f.filename().string());
    }
    // Round-robin split of the requested total over the corpus.
    const int k = static_cast<int>(images.size());
    std::vector<int> counts(images.size(), a.patches / k);
    for (int i = 0; i < a.patches % k; ++i) ++counts[static_cast<std::size_t>(i)];
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].height() < a.patch_size || images[i].width() < a.patch_size) {
            throw DimensionError(names[i] + " is smaller than the patch size");
        }
        const auto capacity = patch_capacity(images[i], a.patch_size);
        if (static_cast<std::size_t>(counts[i]) > capacity) {
            throw InvalidArgument("shortfall: " + names[i] + " has " + std::to_string(capacity) +
                                  " distinct patches but " + std::to_string(counts[i]) + " were requested");
        }
    }
    const auto triplets = build_dataset(images, a.patch_size, counts, a.seed);
    write_triplets(triplets, names, a.out_dir);
    out << "wrote " << triplets.size() << " triplets to " << a.out_dir << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string stage;
    std::string data;
    std::string model;
    std::string config;
    std::string validation;
    std::string preset = "full";
    std::string arch;
    bool resume = false;
    std::optional<std::uint64_t> seed;
    std::optional<int> epochs;
    std::optional<int> iters;
    std::optional<int> batch;
    std::optional<double> lr_start;
    std::optional<double> lr_end;
    std::optional<int> lr_step;
    std::optional<double> momentum;
    std::optional<double> omega_detail;
    std::optional<double> omega_laplacian;
};

ArchConfig parse_arch(const std::string& name) {
    if (name == "desk") return ArchConfig::desk();
    if (name == "full") return ArchConfig::full();
    throw InvalidArgument("unknown architecture '" + name + "' (expected desk or full)");
}

TrainConfig resolve_config(const TrainArgs& a, int stage_number, std::string& arch_name) {
    TrainConfig cfg;
    if (a.preset == "desk") {
        cfg = TrainConfig::desk(stage_number);
    } else if (a.preset != "full") {
        throw InvalidArgument("unknown preset '" + a.preset + "' (expected desk or full)");
    }
    arch_name = a.preset;
    if (!a.config.empty()) {
        const auto kv = KeyValueFile::load(a.config);
        const auto& known = TrainConfig::keys();
        for (const auto& [key, value] : kv.values()) {
            if (key != "arch" && std::find(known.begin(), known.end(), key) == known.end()) {
                throw InvalidArgument("unknown config key '" + key + "' in " + a.config);
            }
        }
        cfg = TrainConfig::from_keyvalue(kv, cfg);
        if (kv.has("arch")) arch_name = kv.get("arch");
    }
    if (!a.arch.empty()) arch_name = a.arch;
    if (a.seed) cfg.seed = *a.seed;
    if (a.epochs) cfg.epochs = *a.epochs;
    if (a.iters) cfg.iters_per_epoch = *a.iters;
    if (a.batch) cfg.batch_size = *a.batch;
    if (a.lr_start) cfg.lr_start = *a.lr_start;
    if (a.lr_end) cfg.lr_end = *a.lr_end;
    if (a.lr_step) cfg.lr_step_epochs = *a.lr_step;
    if (a.momentum) cfg.momentum = *a.momentum;
    if (a.omega_detail) cfg.omega_detail = *a.omega_detail;
    if (a.omega_laplacian) cfg.omega_laplacian = *a.omega_laplacian;
    cfg.stage = stage_number;
    cfg.validate();
    return cfg;
}

bool has_bundle(const fs::path& dir) { return fs::exists(dir / "manifest.txt"); }

int cmd_train(const TrainArgs& a, std::ostream& out) {
    int stage_number = 0;
    std::optional<BaselineKind> baseline;
    if (a.stage == "1" || a.stage == "2" || a.stage == "3") {
        stage_number = a.stage[0] - '0';
    } else {
        baseline = parse_baseline_kind(a.stage);
        stage_number = 3;
    }
    std::string arch_name;
    const TrainConfig cfg = resolve_config(a, stage_number, arch_name);
    const fs::path model_dir = a.model;

    ModelBundle bundle = [&] {
        if (has_bundle(model_dir)) return load_bundle(model_dir);
        if (stage_number == 1 && !baseline) return ModelBundle::create(parse_arch(arch_name), cfg.seed);
        if (stage_number == 2 && !baseline) return ModelBundle::create(parse_arch(arch_name), cfg.seed);
        throw UntrainedError("missing stage-1 checkpoint: " + (model_dir / "gcm.ckpt").string() +
                             " (run train --stage 1 first)");
    }();
    if (a.resume && !has_bundle(model_dir)) {
        throw IoError("--resume needs an existing model in " + model_dir.string());
    }

    StageStatus& status = baseline ? bundle.baseline_status(*baseline)
                          : stage_number == 1 ? bundle.stage1
                          : stage_number == 2 ? bundle.stage2
                                              : bundle.stage3;
    if (!a.resume) {
        // A fresh run of a stage restarts its networks from their seeded init.
        ModelBundle fresh = ModelBundle::create(bundle.arch, bundle.seed);
        status = {};
        if (baseline) {
            bundle.baseline(*baseline) = fresh.baseline(*baseline);
        } else if (stage_number == 1) {
            bundle.gcm = fresh.gcm;
        } else if (stage_number == 2) {
            bundle.irs = fresh.irs;
        } else {
            bundle.ismp_head = fresh.ismp_head;
            bundle.sards = fresh.sards;
        }
    }

    const auto triplets = read_triplets(a.data);
    const TrainingData data(triplets, bundle.gaussian);
    std::optional<TrainingData> validation;
    if (!a.validation.empty()) validation.emplace(read_triplets(a.validation), bundle.gaussian);

    fs::create_directories(model_dir);
    const std::string tag = baseline ? to_string(*baseline) : "stage" + std::to_string(stage_number);
    KeyValueFile echo = cfg.to_keyvalue();
    echo.set("arch", arch_name);
    echo.set("train_stage", a.stage);
    out << "# resolved config\n" << echo.format();
    echo.save(model_dir / ("train_" + tag + ".cfg"));

    const auto log_path = model_dir / ("train_" + tag + ".csv");
    const bool append = a.resume && fs::exists(log_path);
    std::ofstream log(log_path, append ? std::ios::app : std::ios::trunc);
    if (!log) throw IoError("cannot write " + log_path.string());
    if (!append) write_log_header(log);
    std::ofstream vlog;
    if (validation) {
        const auto vpath = model_dir / ("validation_" + tag + ".csv");
        const bool vappend = a.resume && fs::exists(vpath);
        vlog.open(vpath, vappend ? std::ios::app : std::ios::trunc);
        if (!vappend) vlog << "epoch,validation_loss\n";
    }

    TrainOptions options;
    if (validation) options.validation = &*validation;
    options.on_epoch = [&](const EpochRecord& r) {
        write_log_row(log, r);
        log.flush();
        write_log_row(out, r);
        if (r.validation_loss) vlog << r.epoch << ',' << format_double(*r.validation_loss) << '\n';
        save_bundle(bundle, model_dir);
    };
    TrainReport report;
    if (baseline) {
        report = train_baseline(bundle, *baseline, data, cfg, options);
    } else if (stage_number == 1) {
        report = train_stage1_gcm(bundle, data, cfg, options);
    } else if (stage_number == 2) {
        report = train_stage2_irs(bundle, data, cfg, options);
    } else {
        report = train_stage3_joint(bundle, data, cfg, options);
    }
    save_bundle(bundle, model_dir);
    if (report.best_epoch >= 0) out << "best validation epoch " << report.best_epoch << '\n';
    out << "saved " << model_dir.string() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// infer

struct InferArgs {
    std::string model;
    std::string input;
    std::string output;
    std::string baseline;
    bool emit_layers = false;
    bool halftone = false;
};

void emit_layers(const Decomposition& d, const fs::path& output, const std::string& plane) {
    save_pgm(d.base.base, with_suffix(output, "_base" + plane));
    save_pgm(encode_signed(d.detail), with_suffix(output, "_detail" + plane));
    save_pgm(encode_signed(d.structure.laplacian), with_suffix(output, "_laplacian" + plane));
}

GrayImage prepare_plane(const GrayImage& plane, bool halftone) {
    if (halftone) return floyd_steinberg(plane).to_gray();
    if (!is_bilevel(plane)) {
        throw InvalidArgument("input is not bilevel; pass --halftone to error-diffuse it first");
    }
    return plane;
}

int cmd_infer(const InferArgs& a, std::ostream& out) {
    const ModelBundle bundle = load_bundle(a.model);
    std::optional<BaselineKind> baseline;
    if (!a.baseline.empty()) baseline = parse_baseline_kind(a.baseline);
    auto run_plane = [&](const GrayImage& h, const std::string& plane) {
        if (baseline) return reconstruct_baseline(*baseline, h, bundle);
        Decomposition d = decompose(h, bundle);
        if (a.emit_layers) emit_layers(d, a.output, plane);
        return d.output;
    };
    const auto img = load_pnm(a.input);
    if (const auto* g = std::get_if<GrayImage>(&img)) {
        save_pgm(run_plane(prepare_plane(*g, a.halftone), ""), a.output);
    } else {
        const auto planes = split_planes(std::get<ColorImage>(img));
        const char* names[] = {"_r", "_g", "_b"};
        std::vector<GrayImage> recon;
        for (int c = 0; c < 3; ++c) recon.push_back(run_plane(prepare_plane(planes[c], a.halftone), names[c]));
        save_ppm(merge_planes(recon[0], recon[1], recon[2]), a.output);
    }
    out << "wrote " << a.output << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string pairs;
    std::string output;
    std::string color_psnr = "merged";
    std::string color_ssim = "luma";
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    std::ifstream in(a.pairs);
    if (!in) throw IoError("cannot read " + a.pairs);
    const fs::path base = fs::path(a.pairs).parent_path();
    const ColorPsnr psnr_mode = a.color_psnr == "planes" ? ColorPsnr::PlaneAverage : ColorPsnr::MergedMse;
    const ColorSsim ssim_mode = a.color_ssim == "planes" ? ColorSsim::PlaneAverage : ColorSsim::Luma;

    std::ostringstream csv;
    csv << "image,psnr,ssim,error\n";
    double sum_psnr = 0.0;
    double sum_ssim = 0.0;
    int ok = 0;
    int failed = 0;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (fields.size() == 2 && fields[0] == "reference" && fields[1] == "candidate") continue;
        const std::string name = fields.size() >= 2 ? fields[1] : line;
        try {
            if (fields.size() != 2) throw ParseError(ParseErrorKind::MalformedHeader, "expected reference,candidate");
            const auto ref = load_pnm(base / fields[0]);
            const auto cand = load_pnm(base / fields[1]);
            double p = 0.0;
            double s = 0.0;
            if (ref.index() != cand.index()) throw DimensionError("one image is color and the other is not");
            if (const auto* g = std::get_if<GrayImage>(&ref)) {
                const auto& c = std::get<GrayImage>(cand);
                p = psnr(*g, c);
                s = ssim(*g, c);
            } else {
                const auto& r = std::get<ColorImage>(ref);
                const auto& c = std::get<ColorImage>(cand);
                p = psnr(r, c, 1.0, psnr_mode);
                s = ssim(r, c, ssim_mode);
            }
            csv << name << ',' << format_metric(p) << ',' << format_metric(s) << ",\n";
            sum_psnr += p;
            sum_ssim += s;
            ++ok;
        } catch (const std::exception& e) {
            csv << name << ",,," << '"' << e.what() << '"' << '\n';
            err << "error: " << name << ": " << e.what() << '\n';
            ++failed;
        }
    }
    if (ok > 0) {
        csv << "AVG," << format_metric(sum_psnr / ok) << ',' << format_metric(sum_ssim / ok) << ",\n";
    } else {
        csv << "AVG,,,no valid rows\n";
    }
    if (a.output.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(a.output);
        if (!f) throw IoError("cannot write " + a.output);
        f << csv.str();
        out << "wrote " << a.output << '\n';
    }
    return failed == 0 ? kOk : kDataError;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    bool gradcheck = false;
    bool gcm_identity = false;
    std::string narrowing;
    std::uint64_t seed = 0;
    bool corrupt_backward = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const bool all = !a.gradcheck && !a.gcm_identity && a.narrowing.empty();
    bool passed = true;
    auto report = [&](const PropertyCheck& c) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured=" << format_metric(c.measured)
            << " threshold=" << format_metric(c.threshold);
        if (!c.detail.empty()) out << " (" << c.detail << ')';
        out << '\n';
        passed = passed && c.passed;
    };
    if (all || a.gradcheck) {
        GradCheckSuiteOptions opts;
        opts.seed = a.seed;
        opts.corrupt_backward = a.corrupt_backward;
        for (const auto& c : gradcheck_suite(opts)) report(c);
    }
    if (all || a.gcm_identity) report(gcm_identity_check(10, a.seed, default_gcm_kernel()));
    if (!a.narrowing.empty()) {
        std::vector<std::pair<std::string, GrayImage>> images;
        for (const auto& f : list_images(a.narrowing)) images.emplace_back(f.filename().string(), load_gray_or_luma(f));
        if (images.empty()) throw IoError("no images in " + a.narrowing);
        for (const auto& r : narrowing_check(images, default_gcm_kernel())) {
            out << (r.passed ? "PASS " : "FAIL ") << "narrowing " << r.name
                << ": std_ratio=" << format_metric(r.std_ratio) << " width99_ratio=" << format_metric(r.width_ratio)
                << " threshold=1 (additive std=" << format_metric(r.additive.std)
                << " gcm std=" << format_metric(r.gcm.std) << ")\n";
            passed = passed && r.passed;
        }
    }
    return passed ? kOk : kPropertyFailure;
}

// ---------------------------------------------------------------------------
// histogram

struct HistogramArgs {
    std::string original;
    std::string halftone;
    std::string output;
    int bins = kDefaultHistogramBins;
};

int cmd_histogram(const HistogramArgs& a, std::ostream& out) {
    const GrayImage original = load_gray_or_luma(a.original);
    const BitImage halftone = a.halftone.empty() ? floyd_steinberg(original)
                                                 : BitImage::from_gray(load_pgm(a.halftone));
    const auto report = residual_histogram(original, halftone, default_gcm_kernel(), a.bins);
    if (a.output.empty()) {
        write_histogram_csv(out, report);
    } else {
        std::ofstream f(a.output);
        if (!f) throw IoError("cannot write " + a.output);
        write_histogram_csv(f, report);
        out << "wrote " << a.output << '\n';
    }
    return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// Triplet directories

void write_triplets(const std::vector<SampleTriplet>& triplets, const std::vector<std::string>& source_names,
                    const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream manifest(dir / kTripletManifest);
    if (!manifest) throw IoError("cannot write " + (dir / kTripletManifest).string());
    manifest << "# laplacian stored offset-encoded: byte/255 = (v + 1) / 2\n";
    manifest << "id,source,y,x,original,laplacian,halftone\n";
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        const auto& t = triplets[i];
        std::ostringstream stem;
        stem << std::setw(6) << std::setfill('0') << i;
        const std::string o = stem.str() + "_original.pgm";
        const std::string l = stem.str() + "_laplacian.pgm";
        const std::string h = stem.str() + "_halftone.pgm";
        save_pgm(t.original, dir / o);
        save_pgm(encode_signed(t.laplacian), dir / l);
        save_pgm(t.halftone.to_gray(), dir / h);
        const auto src = static_cast<std::size_t>(t.source_id);
        manifest << i << ',' << (src < source_names.size() ? source_names[src] : std::to_string(src)) << ','
                 << t.y << ',' << t.x << ',' << o << ',' << l << ',' << h << '\n';
    }
}

std::vector<SampleTriplet> read_triplets(const fs::path& dir) {
    std::ifstream in(dir / kTripletManifest);
    if (!in) throw IoError("no triplet manifest at " + (dir / kTripletManifest).string());
    std::vector<SampleTriplet> out;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 7) throw ParseError(ParseErrorKind::MalformedHeader, "bad manifest row: " + line);
        SampleTriplet t{load_pgm(dir / f[4]), decode_signed(load_pgm(dir / f[5])),
                        BitImage::from_gray(load_pgm(dir / f[6])), 0, std::stoi(f[2]), std::stoi(f[3])};
        out.push_back(std::move(t));
    }
    if (out.empty()) throw IoError("triplet manifest in " + dir.string() + " lists no samples");
    return out;
}

// ---------------------------------------------------------------------------
// Entry point

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Layer-decomposition inverse halftoning"};
    app.require_subcommand(1);

    HalftoneArgs halftone;
    auto* sc_halftone = app.add_subcommand("halftone", "Error-diffuse an image to bilevel");
    sc_halftone->add_option("input", halftone.input, "Input PGM/PPM")->required();
    sc_halftone->add_option("output", halftone.output, "Output path")->required();

    DatasetArgs dataset;
    auto* sc_dataset = app.add_subcommand("dataset", "Cut training triplets from a corpus");
    sc_dataset->add_option("corpus", dataset.corpus, "Directory of PGM/PPM images")->required();
    sc_dataset->add_option("out_dir", dataset.out_dir, "Output directory")->required();
    sc_dataset->add_option("--patches", dataset.patches, "Total number of triplets")->required();
    sc_dataset->add_option("--seed", dataset.seed, "Random seed");
    sc_dataset->add_option("--patch-size", dataset.patch_size, "Patch side");

    TrainArgs train;
    auto* sc_train = app.add_subcommand("train", "Train one stage");
    sc_train->add_option("--stage", train.stage, "1, 2, 3, prl or ddn")
        ->required()
        ->check(CLI::IsMember({"1", "2", "3", "prl", "ddn"}));
    sc_train->add_option("--data", train.data, "Triplet directory")->required();
    sc_train->add_option("--model", train.model, "Model directory")->required();
    sc_train->add_option("--config", train.config, "key = value config file");
    sc_train->add_option("--validation", train.validation, "Validation triplet directory");
    sc_train->add_option("--preset", train.preset, "desk or full")->check(CLI::IsMember({"desk", "full"}));
    sc_train->add_option("--arch", train.arch, "desk or full (new models only)");
    sc_train->add_flag("--resume", train.resume, "Continue the stage from the saved model");
    sc_train->add_option("--seed", train.seed);
    sc_train->add_option("--epochs", train.epochs);
    sc_train->add_option("--iters-per-epoch", train.iters);
    sc_train->add_option("--batch-size", train.batch);
    sc_train->add_option("--lr-start", train.lr_start);
    sc_train->add_option("--lr-end", train.lr_end);
    sc_train->add_option("--lr-step-epochs", train.lr_step);
    sc_train->add_option("--momentum", train.momentum);
    sc_train->add_option("--omega-detail", train.omega_detail);
    sc_train->add_option("--omega-laplacian", train.omega_laplacian);

    InferArgs infer;
    auto* sc_infer = app.add_subcommand("infer", "Reconstruct a continuous-tone image");
    sc_infer->add_option("model", infer.model, "Model directory")->required();
    sc_infer->add_option("input", infer.input, "Halftone PGM or PPM")->required();
    sc_infer->add_option("output", infer.output, "Output path")->required();
    sc_infer->add_flag("--emit-layers", infer.emit_layers, "Also write base, detail and Laplacian maps");
    sc_infer->add_flag("--halftone", infer.halftone, "Error-diffuse a continuous-tone input first");
    sc_infer->add_option("--baseline", infer.baseline, "Use the prl or ddn network instead")
        ->check(CLI::IsMember({"prl", "ddn"}));

    EvalArgs eval;
    auto* sc_eval = app.add_subcommand("eval", "PSNR/SSIM over reference,candidate pairs");
    sc_eval->add_option("pairs", eval.pairs, "CSV of reference,candidate paths")->required();
    sc_eval->add_option("--out", eval.output, "Write the table here instead of stdout");
    sc_eval->add_option("--color-psnr", eval.color_psnr, "merged or planes")
        ->check(CLI::IsMember({"merged", "planes"}));
    sc_eval->add_option("--color-ssim", eval.color_ssim, "luma or planes")->check(CLI::IsMember({"luma", "planes"}));

    VerifyArgs verify;
    auto* sc_verify = app.add_subcommand("verify", "Run the property suite");
    sc_verify->add_flag("--gradcheck", verify.gradcheck, "Finite-difference gradient checks");
    sc_verify->add_flag("--gcm-identity", verify.gcm_identity, "Convolution distributivity");
    sc_verify->add_option("--narrowing", verify.narrowing, "Directory of natural images");
    sc_verify->add_option("--seed", verify.seed);
    sc_verify->add_flag("--corrupt-backward", verify.corrupt_backward)->group("");

    HistogramArgs hist;
    auto* sc_hist = app.add_subcommand("histogram", "Additive vs GCM residual histogram");
    sc_hist->add_option("original", hist.original, "Continuous-tone PGM")->required();
    sc_hist->add_option("--halftone", hist.halftone, "Bilevel PGM (default: error-diffuse the original)");
    sc_hist->add_option("--out", hist.output, "CSV path (default stdout)");
    sc_hist->add_option("--bins", hist.bins, "Number of bins over [-1, 1]");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*sc_halftone) return cmd_halftone(halftone, out);
        if (*sc_dataset) return cmd_dataset(dataset, out);
        if (*sc_train) return cmd_train(train, out);
        if (*sc_infer) return cmd_infer(infer, out);
        if (*sc_eval) return cmd_eval(eval, out, err);
        if (*sc_verify) return cmd_verify(verify, out);
        if (*sc_hist) return cmd_histogram(hist, out);
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace saldl::cli
