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
#ifndef QNNSIM_DATA_HPP_
#define QNNSIM_DATA_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qnnsim::data {

using BinaryPattern = std::vector<std::uint8_t>;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabeledDataset {
    std::vector<BinaryPattern> patterns;
    std::vector<int> labels; // each -1 or +1
    std::string name;

    std::size_t size() const { return patterns.size(); }
    int width() const { return patterns.empty() ? 0 : static_cast<int>(patterns[0].size()); }

    void validate() const {
        if (patterns.size() != labels.size())
            throw DataError("dataset '" + name + "': pattern/label count mismatch");
        for (const auto &p : patterns)
            if (static_cast<int>(p.size()) != width())
                throw DataError("dataset '" + name + "': ragged pattern widths");
        for (int y : labels)
            if (y != -1 && y != 1)
                throw DataError("dataset '" + name + "': labels must be -1 or +1");
    }
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major, length width*height
};

// ---------------------------------------------------------------------------
// IDX ingestion

namespace detail {

inline std::uint32_t read_be32(std::ifstream &f, const std::string &path,
                               std::size_t offset) {
    unsigned char b[4];
    if (!f.read(reinterpret_cast<char *>(b), 4))
        throw FormatError(path + ": truncated at byte " + std::to_string(offset));
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

} // namespace detail

/// Parse a big-endian IDX image/label file pair into grayscale images with
/// digit labels 0-9.
inline std::vector<std::pair<GrayImage, int>> load_idx(const std::string &images_path,
                                                       const std::string &labels_path) {
    std::ifstream imgf(images_path, std::ios::binary);
    if (!imgf) throw FormatError(images_path + ": cannot open");
    std::ifstream lblf(labels_path, std::ios::binary);
    if (!lblf) throw FormatError(labels_path + ": cannot open");

    const std::uint32_t img_magic = detail::read_be32(imgf, images_path, 0);
    if (img_magic != 0x00000803u)
        throw FormatError(images_path + ": bad magic at byte 0 (got " +
                          std::to_string(img_magic) + ", want 2051)");
    const std::uint32_t n_images = detail::read_be32(imgf, images_path, 4);
    const std::uint32_t rows = detail::read_be32(imgf, images_path, 8);
    const std::uint32_t cols = detail::read_be32(imgf, images_path, 12);

    const std::uint32_t lbl_magic = detail::read_be32(lblf, labels_path, 0);
    if (lbl_magic != 0x00000801u)
        throw FormatError(labels_path + ": bad magic at byte 0 (got " +
                          std::to_string(lbl_magic) + ", want 2049)");
    const std::uint32_t n_labels = detail::read_be32(lblf, labels_path, 4);
    if (n_images != n_labels)
        throw FormatError(images_path + ": image count " + std::to_string(n_images) +
                          " does not match label count " + std::to_string(n_labels));

    std::vector<std::pair<GrayImage, int>> out;
    out.reserve(n_images);
    const std::size_t npix = std::size_t{rows} * cols;
    for (std::uint32_t i = 0; i < n_images; ++i) {
        GrayImage img;
        img.width = static_cast<int>(cols);
        img.height = static_cast<int>(rows);
        img.pixels.resize(npix);
        if (!imgf.read(reinterpret_cast<char *>(img.pixels.data()),
                       static_cast<std::streamsize>(npix)))
            throw FormatError(images_path + ": truncated at byte " +
                              std::to_string(16 + std::size_t{i} * npix));
        char lbl;
        if (!lblf.read(&lbl, 1))
            throw FormatError(labels_path + ": truncated at byte " +
                              std::to_string(8 + std::size_t{i}));
        out.emplace_back(std::move(img), static_cast<int>(static_cast<unsigned char>(lbl)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pixel pipeline

/// Downsample by sampling the centre of each block (for 28->4 that is rows
/// and columns 3, 10, 17, 24). Out dimensions must divide the source ones.
inline GrayImage downsample(const GrayImage &img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1 || img.width % out_w != 0 || img.height % out_h != 0)
        throw std::invalid_argument("downsample: output dims must divide source dims");
    const int bw = img.width / out_w, bh = img.height / out_h;
    GrayImage out;
    out.width = out_w;
    out.height = out_h;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);
    for (int r = 0; r < out_h; ++r)
        for (int c = 0; c < out_w; ++c) {
            const int sr = r * bh + bh / 2;
            const int sc = c * bw + bw / 2;
            out.pixels[static_cast<std::size_t>(r) * out_w + c] =
                img.pixels[static_cast<std::size_t>(sr) * img.width + sc];
        }
    return out;
}

/// Threshold to bits: 1 iff pixel >= threshold, row-major flattening.
inline BinaryPattern binarize(const GrayImage &img, std::uint8_t threshold = 128) {
    BinaryPattern bits(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        bits[i] = img.pixels[i] >= threshold ? 1 : 0;
    return bits;
}

/// Bitwise NOT of the pattern.
inline BinaryPattern negate(const BinaryPattern &pattern) {
    BinaryPattern out = pattern;
    for (auto &b : out) b ^= 1;
    return out;
}

/// Grayscale inversion: pixel -> 255 - pixel.
inline GrayImage invert_gray(const GrayImage &img) {
    GrayImage out = img;
    for (auto &p : out.pixels) p = static_cast<std::uint8_t>(255 - p);
    return out;
}

// ---------------------------------------------------------------------------
// Task construction

namespace detail {

// Drop every pattern whose bit-string occurs with both labels; all
// occurrences of a conflicted string are removed.
inline LabeledDataset remove_contradictions(LabeledDataset ds) {
    std::map<BinaryPattern, std::set<int>> seen;
    for (std::size_t i = 0; i < ds.size(); ++i) seen[ds.patterns[i]].insert(ds.labels[i]);
    LabeledDataset out;
    out.name = ds.name;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (seen[ds.patterns[i]].size() == 1) {
            out.patterns.push_back(std::move(ds.patterns[i]));
            out.labels.push_back(ds.labels[i]);
        }
    }
    return out;
}

} // namespace detail

/// Two-digit classification task: filter to the digit pair, downsample and
/// binarize, map digit_pos -> +1 and digit_neg -> -1, then remove every
/// contradictory bit-string.
inline LabeledDataset build_digit_task(const std::vector<std::pair<GrayImage, int>> &raw,
                                       int digit_pos = 3, int digit_neg = 6,
                                       int out_w = 4, int out_h = 4) {
    LabeledDataset ds;
    ds.name = "digits-" + std::to_string(digit_pos) + "v" + std::to_string(digit_neg);
    for (const auto &[img, digit] : raw) {
        if (digit != digit_pos && digit != digit_neg) continue;
        ds.patterns.push_back(binarize(downsample(img, out_w, out_h)));
        ds.labels.push_back(digit == digit_pos ? 1 : -1);
    }
    ds = detail::remove_contradictions(std::move(ds));
    if (ds.size() == 0)
        throw DataError("digit task " + ds.name + " is empty after preprocessing");
    return ds;
}

/// Negation-detection task: base patterns labelled +1, their negations -1,
/// contradictory strings removed.
inline LabeledDataset build_drawback_task(const LabeledDataset &base) {
    LabeledDataset ds;
    ds.name = base.name + "-drawback";
    for (const auto &p : base.patterns) {
        ds.patterns.push_back(p);
        ds.labels.push_back(1);
        ds.patterns.push_back(negate(p));
        ds.labels.push_back(-1);
    }
    return detail::remove_contradictions(std::move(ds));
}

/// Seeded random patterns labelled by a rule over a fixed prefix mask.
/// Labels are a function of the pattern, so the set is contradiction-free by
/// construction, and both rules stay near class balance.
///   "mask-parity": +1 iff an even number of the first two bits is set; the
///   label survives bitwise negation, which makes the task learnable by the
///   parity-layer circuits.
///   "mask-majority": majority vote over an odd-sized prefix; negating a
///   pattern flips its label.
inline LabeledDataset synthetic_dataset(int n_bits, int size,
                                        const std::string &rule, std::uint64_t seed) {
    if (n_bits < 1 || n_bits > 20)
        throw std::invalid_argument("synthetic_dataset: n_bits must be in [1, 20]");
    if (rule != "mask-majority" && rule != "mask-parity")
        throw std::invalid_argument("synthetic_dataset: unknown rule '" + rule + "'");
    int mask_bits;
    if (rule == "mask-parity") {
        mask_bits = std::min(2, n_bits);
    } else {
        mask_bits = n_bits >= 3 ? n_bits / 2 : n_bits;
        if (mask_bits % 2 == 0) ++mask_bits; // odd count -> balanced majority
        mask_bits = std::min(mask_bits, n_bits);
    }

    std::mt19937_64 rng(seed);
    LabeledDataset ds;
    ds.name = "synthetic-" + rule + "-n" + std::to_string(n_bits);
    for (int i = 0; i < size; ++i) {
        BinaryPattern p(n_bits);
        for (auto &b : p) b = rng() & 1;
        int votes = 0;
        for (int k = 0; k < mask_bits; ++k) votes += p[k];
        ds.patterns.push_back(std::move(p));
        if (rule == "mask-parity")
            ds.labels.push_back(votes % 2 == 0 ? 1 : -1);
        else
            ds.labels.push_back(2 * votes > mask_bits ? 1 : -1);
    }
    return ds;
}

/// Elementwise negation of every pattern, labels untouched.
inline LabeledDataset negate_dataset(const LabeledDataset &ds) {
    LabeledDataset out = ds;
    out.name = ds.name + "-negated";
    for (auto &p : out.patterns) p = negate(p);
    return out;
}

// ---------------------------------------------------------------------------
// CSV cache

inline void save_dataset_csv(const LabeledDataset &ds, const std::string &path) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << "bits,label\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (auto b : ds.patterns[i]) f << static_cast<char>('0' + b);
        f << ',' << ds.labels[i] << '\n';
    }
}

inline LabeledDataset load_dataset_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line) || line != "bits,label")
        throw FormatError(path + ": expected header 'bits,label'");
    LabeledDataset ds;
    ds.name = path;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError(path + ": missing comma on line " + std::to_string(lineno));
        BinaryPattern p;
        p.reserve(comma);
        for (std::size_t i = 0; i < comma; ++i) {
            if (line[i] != '0' && line[i] != '1')
                throw FormatError(path + ": bad bit on line " + std::to_string(lineno));
            p.push_back(line[i] - '0');
        }
        ds.patterns.push_back(std::move(p));
        ds.labels.push_back(std::stoi(line.substr(comma + 1)));
    }
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// MNIST file resolution

/// Directory containing the four canonical IDX files. Explicit argument
/// wins, then $QNNSIM_MNIST_DIR, then ./data/mnist.
inline std::string mnist_dir(const std::string &explicit_dir = "") {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char *env = std::getenv("QNNSIM_MNIST_DIR")) return env;
    return "data/mnist";
}

inline bool mnist_available(const std::string &dir) {
    for (const char *f : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                          "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"}) {
        std::ifstream probe(dir + "/" + f, std::ios::binary);
        if (!probe) return false;
    }
    return true;
}

} // namespace qnnsim::data

#endif // QNNSIM_DATA_HPP_
