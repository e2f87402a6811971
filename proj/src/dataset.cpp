#include "bregbench/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>

#include "bregbench/errors.hpp"
#include "bregbench/rng.hpp"
#include "real_format.hpp"

namespace bregbench {

namespace {

using detail::format_real;

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view field, const std::filesystem::path& path, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        fail_line(path, line, "non-numeric field '" + std::string(field) + "'");
    if (!std::isfinite(value))
        fail_line(path, line, "non-finite field '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view row) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = row.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(row.substr(start));
            return fields;
        }
        fields.push_back(row.substr(start, comma - start));
        start = comma + 1;
    }
}

std::size_t parse_meta_field(std::string_view field, std::string_view key,
                             const std::filesystem::path& path) {
    if (field.substr(0, key.size()) != key)
        throw FormatError(path.string() + ":1: expected '" + std::string(key) +
                          "<value>' in meta line, got '" + std::string(field) + "'");
    const std::string_view digits = field.substr(key.size());
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
        throw FormatError(path.string() + ":1: bad integer in meta field '" +
                          std::string(field) + "'");
    return value;
}

} // namespace

ProbVector normalize_repeats(const RepeatsVector& r) {
    const std::int64_t total = r.total();
    if (total < 1)
        throw InvalidInputError("normalize_repeats: total count is zero");
    std::vector<double> p(r.size());
    for (std::size_t j = 0; j < r.size(); ++j)
        p[j] = static_cast<double>(r[j]) / static_cast<double>(total);
    return ProbVector(std::move(p));
}

LabeledDataset::LabeledDataset(std::vector<LabeledInstance> instances)
    : instances_(std::move(instances)) {
    if (instances_.empty())
        throw InvalidInputError("LabeledDataset: need at least 1 instance");
    feature_dim_ = instances_.front().features.size();
    categories_ = instances_.front().target.size();
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const auto& inst = instances_[i];
        if (inst.features.size() != feature_dim_ || inst.target.size() != categories_)
            throw ShapeError("LabeledDataset: inhomogeneous instance " + std::to_string(i));
        if (inst.repeats && inst.repeats->size() != categories_)
            throw ShapeError("LabeledDataset: repeats size mismatch at instance " +
                             std::to_string(i));
    }
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidInputError("split: train_fraction must lie in (0, 1)");
    const std::size_t n = ds.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw InvalidInputError("split: fraction " + std::to_string(train_fraction) +
                                " leaves an empty side for N=" + std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<LabeledInstance> train, test;
    train.reserve(n_train);
    test.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i)
        (i < n_train ? train : test).push_back(ds[order[i]]);
    return {LabeledDataset(std::move(train)), LabeledDataset(std::move(test))};
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw FormatError("save_dataset: cannot open '" + path.string() + "' for writing");
    out << "#meta,d=" << ds.feature_dim() << ",K=" << ds.categories() << ",N=" << ds.size()
        << "\n";
    for (const auto& inst : ds.instances()) {
        bool first = true;
        for (double x : inst.features) {
            out << (first ? "" : ",") << format_real(x);
            first = false;
        }
        for (std::size_t j = 0; j < inst.target.size(); ++j)
            out << ',' << format_real(inst.target[j]);
        out << '\n';
    }
    if (!out.flush())
        throw FormatError("save_dataset: write to '" + path.string() + "' failed");
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("load_dataset: cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path.string() + ":1: empty file, expected meta line");
    const auto meta = split_fields(line);
    if (meta.size() != 4 || meta[0] != "#meta")
        throw FormatError(path.string() + ":1: expected '#meta,d=<d>,K=<K>,N=<N>'");
    const std::size_t d = parse_meta_field(meta[1], "d=", path);
    const std::size_t k = parse_meta_field(meta[2], "K=", path);
    const std::size_t n = parse_meta_field(meta[3], "N=", path);
    if (d < 1 || k < 2 || n < 1)
        throw FormatError(path.string() + ":1: meta values out of range (d>=1, K>=2, N>=1)");

    std::vector<LabeledInstance> instances;
    instances.reserve(n);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != d + k)
            fail_line(path, line_no,
                      "expected " + std::to_string(d + k) + " fields, got " +
                          std::to_string(fields.size()));
        std::vector<double> features(d);
        for (std::size_t j = 0; j < d; ++j)
            features[j] = parse_real(fields[j], path, line_no);
        std::vector<double> target(k);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            target[j] = parse_real(fields[d + j], path, line_no);
            if (target[j] < 0.0 || target[j] > 1.0)
                fail_line(path, line_no,
                          "target entry " + format_real(target[j]) + " outside [0, 1]");
            sum += target[j];
        }
        if (std::abs(sum - 1.0) > 1e-6)
            fail_line(path, line_no,
                      "target sums to " + format_real(sum) + ", off the simplex beyond 1e-6");
        // Within 1e-6 but beyond the ProbVector tolerance: renormalize so
        // hand-written files load; exact files pass through bit-identical.
        if (std::abs(sum - 1.0) > ProbVector::kSumTolerance)
            for (double& t : target)
                t /= sum;
        instances.push_back(
            LabeledInstance{std::move(features), ProbVector(std::move(target)), std::nullopt});
    }
    if (instances.empty())
        throw FormatError(path.string() + ": no data rows");
    if (instances.size() != n)
        throw FormatError(path.string() + ": meta declares N=" + std::to_string(n) + " but " +
                          std::to_string(instances.size()) + " rows present");
    return LabeledDataset(std::move(instances));
}

} // namespace bregbench
