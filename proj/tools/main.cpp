#include "mobiuse/dataset.hpp"
#include "mobiuse/evaluation.hpp"
#include "mobiuse/model.hpp"
#include "mobiuse/training.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace mobiuse;

const char* kind_name(GeometryKind k) {
    switch (k) {
        case GeometryKind::Mobius: return "mobius";
        case GeometryKind::Torus: return "torus";
        case GeometryKind::Euclidean:
        default: return "transe";
    }
}

GeometryKind kind_of(const std::string& name) {
    if (name == "mobius") return GeometryKind::Mobius;
    if (name == "torus") return GeometryKind::Torus;
    return GeometryKind::Euclidean;
}

struct DataFlags {
    std::string dir;
    bool lenient = false;

    TripleStore load(bool report_counts) const {
        LoadReport report;
        TripleStore store = load_triples(dir, LoadOptions{!lenient}, &report);
        if (report_counts) {
            std::cout << stats_table(store);
            if (lenient && (report.skipped_unknown || report.skipped_duplicate))
                std::cout << "skipped: unknown=" << report.skipped_unknown
                          << " duplicate=" << report.skipped_duplicate << '\n';
        }
        return store;
    }
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
    cmd->add_option("--data", flags.dir, "dataset directory with train.txt/valid.txt/test.txt")
        ->envname("MOBIUSE_DATA_ROOT")
        ->required();
    cmd->add_flag("--lenient", flags.lenient,
                  "skip (and count) bad valid/test triples instead of failing");
}

struct GeometryFlags {
    std::string geometry = "mobius";
    int q = 2;
    int p = 1;
    std::string norm = "l1";
    CLI::Option* q_opt = nullptr;
    CLI::Option* p_opt = nullptr;

    Geometry build() const {
        const Norm nm = norm == "l1" ? Norm::L1 : Norm::L2;
        const GeometryKind kind = kind_of(geometry);
        if (kind != GeometryKind::Mobius && (q_opt->count() > 0 || p_opt->count() > 0))
            throw std::invalid_argument("--q/--p apply to the mobius geometry only");
        switch (kind) {
            case GeometryKind::Mobius: return Geometry::mobius(RingSpec{q, p}, nm);
            case GeometryKind::Torus: return Geometry::torus(nm);
            case GeometryKind::Euclidean:
            default: return Geometry::euclidean(nm);
        }
    }
};

void add_geometry_flags(CLI::App* cmd, GeometryFlags& flags) {
    cmd->add_option("--geometry", flags.geometry, "embedding geometry")
        ->check(CLI::IsMember({"mobius", "torus", "transe"}))
        ->capture_default_str();
    flags.q_opt = cmd->add_option("--q", flags.q, "ring modulus q (mobius)")
                      ->capture_default_str();
    flags.p_opt = cmd->add_option("--p", flags.p, "ring modulus p (mobius)")
                      ->capture_default_str();
    cmd->add_option("--norm", flags.norm, "distance norm")
        ->check(CLI::IsMember({"l1", "l2"}))
        ->capture_default_str();
}

struct TrainFlags {
    DataFlags data;
    GeometryFlags geo;
    int dim = 100;
    TrainConfig cfg;
    int threads = 1;
    std::string out = "model.ckpt";
};

void add_train_flags(CLI::App* cmd, TrainFlags& f, bool with_margin_grid) {
    add_data_flags(cmd, f.data);
    add_geometry_flags(cmd, f.geo);
    cmd->add_option("--dim", f.dim, "embedding dimension n")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (!with_margin_grid) {
        cmd->add_option("--gamma", f.cfg.gamma, "ranking margin")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--alpha", f.cfg.alpha, "SGD learning rate")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }
    cmd->add_option("--epochs", f.cfg.epochs, "training epochs (0 = initialize only)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--batch", f.cfg.batch_size, "batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", f.cfg.seed, "random seed")->capture_default_str();
    cmd->add_option("--eval-every", f.cfg.eval_every,
                    "validation metrics every N epochs (0 = never)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--threads", f.threads, "evaluation worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", f.out, "checkpoint output path")->capture_default_str();
}

ModelState train_once(const TripleStore& store, const Geometry& geometry, const TrainFlags& f,
                      const TrainConfig& cfg, bool log) {
    ModelState state =
        init_model(geometry, store.num_entities(), store.num_relations(), f.dim, cfg.seed);
    std::optional<FilterIndex> filter;
    if (cfg.eval_every > 0) filter.emplace(FilterIndex::over_all(store));
    train(state, store, cfg, [&](int epoch, double loss, const ModelState& s) {
        if (log) std::printf("epoch=%d loss=%.6f\n", epoch, loss);
        if (cfg.eval_every > 0 && epoch % cfg.eval_every == 0) {
            const MetricReport rep =
                evaluate(s, store, *filter, Split::Valid, EvalOptions{true, f.threads});
            std::cout << "validation after epoch " << epoch << ":\n" << rep.table();
        }
        std::fflush(stdout);
    });
    return state;
}

int run_train(const TrainFlags& f) {
    const Geometry geometry = f.geo.build();
    const TripleStore store = f.data.load(true);
    const ModelState state = train_once(store, geometry, f, f.cfg, true);
    checkpoint_save(state, f.out);
    std::cout << "checkpoint written: " << f.out << '\n';
    return 0;
}

int run_grid(const TrainFlags& f, const std::vector<double>& gammas,
             const std::vector<double>& alphas) {
    const Geometry geometry = f.geo.build();
    const TripleStore store = f.data.load(true);
    const FilterIndex filter = FilterIndex::over_all(store);

    std::optional<ModelState> best;
    double best_mrr = -1.0, best_gamma = 0.0, best_alpha = 0.0;
    for (double gamma : gammas) {
        for (double alpha : alphas) {
            TrainConfig cfg = f.cfg;
            cfg.gamma = gamma;
            cfg.alpha = alpha;
            ModelState state = train_once(store, geometry, f, cfg, false);
            const MetricReport rep =
                evaluate(state, store, filter, Split::Valid, EvalOptions{true, f.threads});
            std::printf("gamma=%g alpha=%g valid_mrr=%.6f valid_mr=%.2f\n", gamma, alpha,
                        rep.mrr, rep.mr);
            std::fflush(stdout);
            if (rep.mrr > best_mrr) {
                best_mrr = rep.mrr;
                best_gamma = gamma;
                best_alpha = alpha;
                best = std::move(state);
            }
        }
    }
    std::printf("best: gamma=%g alpha=%g valid_mrr=%.6f\n", best_gamma, best_alpha, best_mrr);
    checkpoint_save(*best, f.out);
    std::cout << "checkpoint written: " << f.out << '\n';
    return 0;
}

struct EvalFlags {
    DataFlags data;
    std::string ckpt;
    std::string split = "test";
    std::string expect_geometry;
    bool raw = false;
    bool kv = false;
    int threads = 1;
};

int run_eval(const EvalFlags& f) {
    const TripleStore store = f.data.load(false);
    const ModelState state = checkpoint_load(f.ckpt);
    if (!f.expect_geometry.empty() && kind_of(f.expect_geometry) != state.geometry.kind)
        throw DataError(std::string("geometry mismatch: checkpoint holds ") +
                        kind_name(state.geometry.kind) + ", expected " + f.expect_geometry);
    const FilterIndex filter = f.raw ? FilterIndex{} : FilterIndex::over_all(store);
    const Split split = f.split == "valid" ? Split::Valid : Split::Test;
    const MetricReport rep = evaluate(state, store, filter, split, EvalOptions{!f.raw, f.threads});
    std::cout << (f.kv ? rep.kv() : rep.table());
    return 0;
}

struct MeshFlags {
    std::string surface = "mobius";
    int res = 64;
    double hole_radius = 2.0;
    double tube_radius = 1.0;
    bool curve = false;
    double omega = 0.0;
    CLI::Option* omega_opt = nullptr;
    std::string out = "mesh.txt";
};

int run_export_mesh(const MeshFlags& f) {
    const bool mobius = f.surface == "mobius";
    const SurfaceParams params{f.hole_radius, f.tube_radius};
    const double theta_period = (mobius ? 4.0 : 2.0) * std::numbers::pi;
    const double omega_period = 2.0 * std::numbers::pi;
    const double omega_fixed =
        f.omega_opt->count() > 0 ? f.omega : (mobius ? 0.0 : std::numbers::pi / 2.0);

    std::ofstream file(f.out, std::ios::trunc);
    if (!file) throw DataError("cannot open mesh output: " + f.out);
    const auto emit = [&](double theta, double omega) {
        const Eigen::Vector3d v = mobius ? surface_point_mobius(theta, omega, params)
                                         : surface_point_torus(theta, omega, params);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        file << buf;
    };
    if (f.curve) {
        for (int i = 0; i <= f.res; ++i) emit(i * theta_period / f.res, omega_fixed);
    } else {
        for (int i = 0; i < f.res; ++i)
            for (int j = 0; j < f.res; ++j)
                emit(i * theta_period / f.res, j * omega_period / f.res);
    }
    if (!file) throw DataError("mesh write failed: " + f.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph embeddings on modular ring geometries"};
    app.require_subcommand(1);

    TrainFlags train_flags;
    CLI::App* train_cmd = app.add_subcommand("train", "train an embedding model");
    add_train_flags(train_cmd, train_flags, false);

    TrainFlags grid_flags;
    std::vector<double> gammas = {2000, 1000, 500, 200, 100};
    std::vector<double> alphas = {0.002, 0.001, 0.0005, 0.0002, 0.0001};
    CLI::App* grid_cmd =
        app.add_subcommand("grid", "margin/learning-rate grid search, keeps the validation-best");
    add_train_flags(grid_cmd, grid_flags, true);
    grid_cmd->add_option("--gammas", gammas, "margins to sweep")
        ->delimiter(',')
        ->capture_default_str();
    grid_cmd->add_option("--alphas", alphas, "learning rates to sweep")
        ->delimiter(',')
        ->capture_default_str();

    EvalFlags eval_flags;
    CLI::App* eval_cmd = app.add_subcommand("eval", "link-prediction metrics for a checkpoint");
    add_data_flags(eval_cmd, eval_flags.data);
    eval_cmd->add_option("--ckpt", eval_flags.ckpt, "checkpoint path")->required();
    eval_cmd->add_option("--split", eval_flags.split, "split to evaluate")
        ->check(CLI::IsMember({"valid", "test"}))
        ->capture_default_str();
    eval_cmd->add_option("--geometry", eval_flags.expect_geometry,
                         "fail unless the checkpoint uses this geometry")
        ->check(CLI::IsMember({"mobius", "torus", "transe"}));
    eval_cmd->add_flag("--raw", eval_flags.raw, "rank against every corruption (unfiltered)");
    eval_cmd->add_flag("--kv", eval_flags.kv, "machine-readable key=value output");
    eval_cmd->add_option("--threads", eval_flags.threads, "evaluation worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    DataFlags stats_flags;
    CLI::App* stats_cmd = app.add_subcommand("stats", "dataset split counts");
    add_data_flags(stats_cmd, stats_flags);

    MeshFlags mesh_flags;
    CLI::App* mesh_cmd =
        app.add_subcommand("export-mesh", "sample surface vertices as x y z text lines");
    mesh_cmd->add_option("--surface", mesh_flags.surface, "surface family")
        ->check(CLI::IsMember({"mobius", "torus"}))
        ->capture_default_str();
    mesh_cmd->add_option("--res", mesh_flags.res, "samples per parameter")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    mesh_cmd->add_option("--hole-radius", mesh_flags.hole_radius, "center-to-tube radius R")
        ->capture_default_str();
    mesh_cmd->add_option("--tube-radius", mesh_flags.tube_radius, "tube radius r")
        ->capture_default_str();
    mesh_cmd->add_flag("--curve", mesh_flags.curve,
                       "fixed-omega closed curve instead of the full grid");
    mesh_flags.omega_opt =
        mesh_cmd->add_option("--omega", mesh_flags.omega,
                             "fixed tube angle for --curve (default 0 mobius, pi/2 torus)");
    mesh_cmd->add_option("--out", mesh_flags.out, "output path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train_cmd->parsed()) return run_train(train_flags);
        if (grid_cmd->parsed()) return run_grid(grid_flags, gammas, alphas);
        if (eval_cmd->parsed()) return run_eval(eval_flags);
        if (stats_cmd->parsed()) {
            stats_flags.load(true);
            return 0;
        }
        if (mesh_cmd->parsed()) return run_export_mesh(mesh_flags);
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
