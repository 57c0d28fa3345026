/* Copyright 2026 The QNNSim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Command-line front end: prepare-data, train, eval, verify, features.
// Exit codes: 0 success, 1 verification failure, 2 usage or data errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <qnnsim/baseline.hpp>
#include <qnnsim/data.hpp>
#include <qnnsim/qnn.hpp>
#include <qnnsim/symmetry.hpp>
#include <qnnsim/train.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qnnsim;

namespace {

// All file outputs go through a temp-file-plus-rename so readers never see a
// partial document.
void write_atomic(const fs::path &path, const std::string &content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw data::DataError("cannot write " + tmp.string());
        f << content;
    }
    fs::rename(tmp, path);
}

template <typename WriteFn>
void write_atomic_via(const fs::path &path, WriteFn &&fn) {
    const fs::path tmp = path.string() + ".tmp";
    fn(tmp.string());
    fs::rename(tmp, path);
}

void echo_config(const fs::path &outdir, const json &resolved) {
    fs::create_directories(outdir);
    write_atomic(outdir / "run.json", resolved.dump(2) + "\n");
}

json dataset_counts(const data::LabeledDataset &ds) {
    const auto pos = std::count(ds.labels.begin(), ds.labels.end(), 1);
    return {{"total", ds.size()},
            {"positive", pos},
            {"negative", static_cast<long>(ds.size()) - pos}};
}

int cmd_prepare_data(const std::string &mnist, const std::vector<int> &digits,
                     bool synthetic, int n_bits, int size, const std::string &rule,
                     std::uint64_t seed, const std::string &out) {
    json cfg{{"command", "prepare-data"}, {"synthetic", synthetic}, {"seed", seed},
             {"out", out}};

    data::LabeledDataset train_set, test_set;
    if (synthetic) {
        cfg["n"] = n_bits;
        cfg["size"] = size;
        cfg["rule"] = rule;
        echo_config(out, cfg);
        train_set = data::synthetic_dataset(n_bits, size, rule, seed);
        test_set = data::synthetic_dataset(n_bits, std::max(1, size / 5), rule, seed + 1);
    } else {
        const std::string dir = data::mnist_dir(mnist);
        if (!data::mnist_available(dir)) {
            std::cerr << "error: MNIST IDX files not found under '" << dir
                      << "' (set QNNSIM_MNIST_DIR or pass --mnist-dir)\n";
            return 2;
        }
        cfg["mnist_dir"] = dir;
        cfg["digits"] = digits;
        echo_config(out, cfg);
        auto raw_train = data::load_idx(dir + "/train-images-idx3-ubyte",
                                        dir + "/train-labels-idx1-ubyte");
        auto raw_test = data::load_idx(dir + "/t10k-images-idx3-ubyte",
                                       dir + "/t10k-labels-idx1-ubyte");
        train_set = data::build_digit_task(raw_train, digits[0], digits[1]);
        test_set = data::build_digit_task(raw_test, digits[0], digits[1]);
    }

    const auto negated_test = data::negate_dataset(test_set);
    const auto drawback_train = data::build_drawback_task(train_set);
    const auto drawback_test = data::build_drawback_task(test_set);

    const fs::path dir(out);
    write_atomic_via(dir / "train.csv", [&](const std::string &p) {
        data::save_dataset_csv(train_set, p);
    });
    write_atomic_via(dir / "test.csv", [&](const std::string &p) {
        data::save_dataset_csv(test_set, p);
    });
    write_atomic_via(dir / "test_negated.csv", [&](const std::string &p) {
        data::save_dataset_csv(negated_test, p);
    });
    write_atomic_via(dir / "drawback_train.csv", [&](const std::string &p) {
        data::save_dataset_csv(drawback_train, p);
    });
    write_atomic_via(dir / "drawback_test.csv", [&](const std::string &p) {
        data::save_dataset_csv(drawback_test, p);
    });

    json counts{{"train", dataset_counts(train_set)},
                {"test", dataset_counts(test_set)},
                {"test_negated", dataset_counts(negated_test)},
                {"drawback_train", dataset_counts(drawback_train)},
                {"drawback_test", dataset_counts(drawback_test)}};
    write_atomic(dir / "counts.json", counts.dump(2) + "\n");
    std::cout << counts.dump(2) << std::endl;
    return 0;
}

int cmd_train(const std::string &data_dir, const std::string &task,
              const std::string &model_kind, const std::string &arch,
              const std::string &measurement, int hidden, std::size_t limit,
              train::TrainConfig config, const std::string &out) {
    const fs::path ddir(data_dir);
    const std::string train_csv = task == "drawback" ? "drawback_train.csv" : "train.csv";
    const std::string test_csv = task == "drawback" ? "drawback_test.csv" : "test.csv";
    auto train_set = data::load_dataset_csv((ddir / train_csv).string());
    auto test_set = data::load_dataset_csv((ddir / test_csv).string());
    if (limit > 0 && limit < train_set.size()) {
        train_set.patterns.resize(limit);
        train_set.labels.resize(limit);
    }

    json cfg{{"command", "train"},      {"data", data_dir},
             {"task", task},            {"model", model_kind},
             {"arch", arch},            {"measurement", measurement},
             {"hidden", hidden},        {"limit", limit},
             {"out", out},              {"config", train::config_to_json(config)}};
    echo_config(out, cfg);

    const fs::path dir(out);
    if (model_kind == "mlp") {
        auto result = mlp::mlp_fit(mlp::make_mlp(train_set.width(), hidden, config.seed),
                                   train_set, &test_set, config);
        write_atomic_via(dir / "checkpoint.json", [&](const std::string &p) {
            mlp::save_mlp_checkpoint(p, result.model, config, result.metrics);
        });
        write_atomic_via(dir / "metrics.csv", [&](const std::string &p) {
            train::save_metrics_csv(p, result.metrics);
        });
        if (!result.metrics.empty()) {
            const auto &m = result.metrics.back();
            std::cout << "epochs=" << result.metrics.size() << " train_acc=" << m.train_acc
                      << " test_acc=" << m.test_acc
                      << " test_acc_negated=" << m.test_acc_negated << std::endl;
        }
        return 0;
    }

    auto model = make_model(arch, train_set.width(), parse_pauli(measurement));
    auto result = train::fit(std::move(model), train_set, &test_set, config);
    write_atomic_via(dir / "checkpoint.json", [&](const std::string &p) {
        train::save_checkpoint(p, result.model, config, result.metrics);
    });
    write_atomic_via(dir / "metrics.csv", [&](const std::string &p) {
        train::save_metrics_csv(p, result.metrics);
    });
    if (!result.metrics.empty()) {
        const auto &m = result.metrics.back();
        std::cout << "epochs=" << result.metrics.size() << " train_acc=" << m.train_acc
                  << " test_acc=" << m.test_acc
                  << " test_acc_negated=" << m.test_acc_negated << std::endl;
    }
    return 0;
}

int cmd_eval(const std::string &checkpoint, const std::string &dataset_csv,
             bool negated, const std::string &out) {
    auto ds = data::load_dataset_csv(dataset_csv);
    if (negated) ds = data::negate_dataset(ds);

    std::ifstream probe(checkpoint);
    if (!probe) throw data::DataError("cannot open " + checkpoint);
    json header = json::parse(probe);
    double acc = 0.0;
    if (header.value("model_kind", "qnn") == "mlp") {
        acc = mlp::mlp_evaluate(mlp::load_mlp_checkpoint(checkpoint), ds);
    } else {
        acc = train::evaluate(train::load_checkpoint(checkpoint), ds);
    }
    json result{{"accuracy", acc}, {"examples", ds.size()}, {"negated", negated}};
    std::cout << result.dump() << std::endl;
    if (!out.empty()) {
        echo_config(out, json{{"command", "eval"},
                              {"checkpoint", checkpoint},
                              {"data", dataset_csv},
                              {"negated", negated}});
        write_atomic(fs::path(out) / "eval.json", result.dump(2) + "\n");
    }
    return 0;
}

int cmd_verify(int n_qubits, int trials, std::uint64_t seed, double tol,
               const std::string &arch, const std::string &measurement,
               const std::string &checkpoint, const std::string &out) {
    json cfg{{"command", "verify"}, {"n", n_qubits},   {"trials", trials},
             {"seed", seed},        {"tolerance", tol}, {"out", out}};
    if (!out.empty()) echo_config(out, cfg);

    std::vector<sym::SymmetryReport> reports;
    if (!checkpoint.empty()) {
        // fixed trained parameters: pairwise logit and feature checks
        auto model = train::load_checkpoint(checkpoint);
        std::mt19937_64 rng(seed);
        sym::SymmetryReport logit, feat;
        logit.architecture = model.arch.to_string();
        logit.measurement = model.measurement;
        logit.claim = sym::Claim::equal;
        logit.trials = trials;
        logit.tolerance = tol;
        feat = logit;
        feat.claim = sym::Claim::antisymmetric;
        for (int t = 0; t < trials; ++t) {
            data::BinaryPattern x(model.arch.n_data_qubits);
            for (auto &b : x) b = rng() & 1;
            const auto xn = data::negate(x);
            logit.max_deviation = std::max(
                logit.max_deviation, std::abs(forward(model, x) - forward(model, xn)));
            auto gx = features(model, x);
            auto gn = features(model, xn);
            for (std::size_t k = 0; k < gx.size(); ++k)
                feat.max_deviation = std::max(feat.max_deviation, std::abs(gx[k] + gn[k]));
        }
        logit.pass = logit.max_deviation <= tol;
        feat.pass = feat.max_deviation <= tol;
        reports.push_back(logit);
        reports.push_back(feat);
    } else if (!arch.empty()) {
        reports.push_back(sym::check_theorem1(arch, n_qubits, trials, seed, tol,
                                              parse_pauli(measurement)));
    } else {
        reports = sym::check_table1_grid(n_qubits, trials, seed, tol);
        auto t2 = sym::check_table2_grid(n_qubits, trials, seed, tol);
        reports.insert(reports.end(), t2.begin(), t2.end());
    }

    // Bell-pair correlation checks ride along on every full run
    json bell = json::array();
    bool bell_ok = true;
    if (checkpoint.empty() && arch.empty()) {
        for (auto basis : {sym::BellBasis::computational, sym::BellBasis::fourier}) {
            auto p = sym::bell_probabilities(basis);
            const double dev = std::max(
                {std::abs(p[0] - 0.5), std::abs(p[1]), std::abs(p[2]), std::abs(p[3] - 0.5)});
            const bool ok = dev <= 1e-12;
            bell_ok = bell_ok && ok;
            bell.push_back({{"basis", basis == sym::BellBasis::computational
                                          ? "computational"
                                          : "fourier"},
                            {"probabilities", p},
                            {"max_deviation", dev},
                            {"pass", ok}});
        }
    }

    sym::print_reports(std::cout, reports);
    bool all_pass = bell_ok;
    std::vector<std::string> failing;
    for (const auto &r : reports) {
        if (!r.pass)
            failing.push_back("(" + r.architecture + ", " +
                              std::string(1, pauli_name(r.measurement)) + ")");
        all_pass = all_pass && r.pass;
    }
    for (const auto &b : bell)
        std::cout << "bell " << b["basis"].get<std::string>() << ": max_deviation "
                  << b["max_deviation"].get<double>()
                  << (b["pass"].get<bool>() ? " pass" : " FAIL") << "\n";

    if (!out.empty()) {
        json doc{{"cells", sym::reports_to_json(reports)}, {"bell", bell},
                 {"pass", all_pass}};
        write_atomic(fs::path(out) / "report.json", doc.dump(2) + "\n");
    }
    if (!all_pass) {
        std::cerr << "verification failed:";
        for (const auto &f : failing) std::cerr << ' ' << f;
        if (!bell_ok) std::cerr << " (bell)";
        std::cerr << std::endl;
        return 1;
    }
    return 0;
}

int cmd_features(const std::string &checkpoint, const std::string &dataset_csv,
                 bool negated, const std::string &out_file) {
    auto ds = data::load_dataset_csv(dataset_csv);
    if (negated) ds = data::negate_dataset(ds);
    auto model = train::load_checkpoint(checkpoint);
    if (ds.width() != model.arch.n_data_qubits)
        throw data::DataError("dataset width " + std::to_string(ds.width()) +
                              " does not match model N " +
                              std::to_string(model.arch.n_data_qubits));

    const int N = model.arch.n_data_qubits;
    std::ostringstream csv;
    csv << "bits,label";
    for (int k = 1; k <= N; ++k) csv << ",g_" << k;
    csv << '\n';
    csv << std::setprecision(17);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (auto b : ds.patterns[i]) csv << static_cast<char>('0' + b);
        csv << ',' << ds.labels[i];
        for (double g : features(model, ds.patterns[i])) csv << ',' << g;
        csv << '\n';
    }
    const fs::path out(out_file);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_atomic(out, csv.str());

    auto stats = sym::feature_pair_stats(model, ds);
    json s{{"max_pair_norm", stats.max_pair_norm},
           {"mean_cosine", stats.mean_cosine},
           {"mean_pearson", stats.mean_pearson},
           {"pairs", stats.n_pairs},
           {"skipped_pairs", stats.skipped_pairs}};
    std::cout << s.dump() << std::endl;
    const fs::path stats_path =
        out.parent_path() / (out.stem().string() + "_stats.json");
    write_atomic(stats_path, s.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"statevector QNN classifier: data preparation, training and "
                 "symmetry verification"};
    app.require_subcommand(1);

    // prepare-data
    auto *prep = app.add_subcommand("prepare-data", "build dataset caches");
    std::string mnist_dir_flag, prep_out = "out/data";
    std::vector<int> digits{3, 6};
    bool synthetic = false;
    int syn_n = 4, syn_size = 200;
    std::string syn_rule = "mask-parity";
    std::uint64_t prep_seed = 0;
    prep->add_option("--mnist-dir", mnist_dir_flag, "directory with the four IDX files");
    prep->add_option("--digits", digits, "positive and negative digit")->expected(2);
    prep->add_flag("--synthetic", synthetic, "generate a synthetic task instead");
    prep->add_option("--n", syn_n, "synthetic pattern width");
    prep->add_option("--size", syn_size, "synthetic training-set size");
    prep->add_option("--rule", syn_rule, "synthetic labelling rule");
    prep->add_option("--seed", prep_seed, "generator seed");
    prep->add_option("--out", prep_out, "output directory");

    // train
    auto *tr = app.add_subcommand("train", "train a classifier on a cache");
    std::string data_dir, task = "digits", model_kind = "qnn", arch = "XX-ZZ";
    std::string measurement = "Z", train_out = "out/train";
    int hidden = 2;
    std::size_t limit = 0;
    train::TrainConfig tcfg;
    tr->add_option("--data", data_dir, "cache directory from prepare-data")->required();
    tr->add_option("--task", task, "digits or drawback")
        ->check(CLI::IsMember({"digits", "drawback"}));
    tr->add_option("--model", model_kind, "qnn or mlp")
        ->check(CLI::IsMember({"qnn", "mlp"}));
    tr->add_option("--arch", arch, "parity-layer architecture, e.g. XX-ZZ");
    tr->add_option("--measurement", measurement, "readout Pauli (X, Y or Z)");
    tr->add_option("--hidden", hidden, "mlp hidden width");
    tr->add_option("--limit", limit, "use only the first K training examples");
    tr->add_option("--epochs", tcfg.epochs, "epoch budget");
    tr->add_option("--lr", tcfg.learning_rate, "Adam learning rate");
    tr->add_option("--batch-size", tcfg.batch_size, "mini-batch size");
    tr->add_option("--seed", tcfg.seed, "shuffle and init seed");
    tr->add_option("--shots", tcfg.shots, "measurement shots (0 = exact)");
    tr->add_option("--patience", tcfg.early_stop_patience,
                   "early-stop patience in epochs (0 disables)");
    tr->add_option("--init-range", tcfg.init_range, "uniform init half-width");
    tr->add_option("--out", train_out, "output directory");

    // eval
    auto *ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    std::string eval_ckpt, eval_data, eval_out;
    bool eval_negated = false;
    ev->add_option("--checkpoint", eval_ckpt)->required();
    ev->add_option("--data", eval_data, "dataset CSV")->required();
    ev->add_flag("--negated", eval_negated, "negate every pattern first");
    ev->add_option("--out", eval_out, "optional output directory");

    // verify
    auto *vf = app.add_subcommand("verify", "run the symmetry grids and Bell checks");
    int vf_n = 4, vf_trials = 1000;
    std::uint64_t vf_seed = 0;
    double vf_tol = 1e-9;
    std::string vf_arch, vf_meas = "Z", vf_ckpt, vf_out;
    vf->add_option("--n", vf_n, "data qubits per trial");
    vf->add_option("--trials", vf_trials, "random draws per cell");
    vf->add_option("--seed", vf_seed);
    vf->add_option("--tol", vf_tol, "pass tolerance");
    vf->add_option("--arch", vf_arch, "check a single architecture cell");
    vf->add_option("--measurement", vf_meas, "Pauli for the single cell");
    vf->add_option("--checkpoint", vf_ckpt, "verify a trained model instead");
    vf->add_option("--out", vf_out, "directory for report.json");

    // features
    auto *ft = app.add_subcommand("features", "export learned representations");
    std::string ft_ckpt, ft_data, ft_out = "out/features.csv";
    bool ft_negated = false;
    ft->add_option("--checkpoint", ft_ckpt)->required();
    ft->add_option("--data", ft_data, "dataset CSV")->required();
    ft->add_flag("--negated", ft_negated, "negate every pattern first");
    ft->add_option("--out", ft_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    }

    try {
        if (prep->parsed())
            return cmd_prepare_data(mnist_dir_flag, digits, synthetic, syn_n, syn_size,
                                    syn_rule, prep_seed, prep_out);
        if (tr->parsed())
            return cmd_train(data_dir, task, model_kind, arch, measurement, hidden,
                             limit, tcfg, train_out);
        if (ev->parsed()) return cmd_eval(eval_ckpt, eval_data, eval_negated, eval_out);
        if (vf->parsed())
            return cmd_verify(vf_n, vf_trials, vf_seed, vf_tol, vf_arch, vf_meas,
                              vf_ckpt, vf_out);
        if (ft->parsed()) return cmd_features(ft_ckpt, ft_data, ft_negated, ft_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
