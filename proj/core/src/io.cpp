#include "darac/io.hpp"

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <unordered_set>
#include <utility>

#include "darac/errors.hpp"

namespace darac {

namespace {

void put_bytes(std::ostream& out, const char* bytes, std::size_t count) {
    out.write(bytes, static_cast<std::streamsize>(count));
    if (!out) throw FormatError("write failed");
}

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    put_bytes(out, b, 4);
}

void put_f32(std::ostream& out, float v) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_f64(std::ostream& out, double v) {
    const std::uint64_t u = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    put_bytes(out, b, 8);
}

void get_bytes(std::istream& in, char* bytes, std::size_t count, const char* what) {
    in.read(bytes, static_cast<std::streamsize>(count));
    if (in.gcount() != static_cast<std::streamsize>(count)) {
        throw FormatError(std::string("unexpected end of file reading ") + what);
    }
}

std::uint32_t get_u32(std::istream& in, const char* what) {
    char b[4];
    get_bytes(in, b, 4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
}

float get_f32(std::istream& in, const char* what) {
    return std::bit_cast<float>(get_u32(in, what));
}

double get_f64(std::istream& in, const char* what) {
    char b[8];
    get_bytes(in, b, 8, what);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) {
        u |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return std::bit_cast<double>(u);
}

std::string get_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(std::string("unexpected end of file reading ") + what);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void expect_magic(std::istream& in, const char* magic, const char* kind) {
    const std::string line = get_line(in, "magic");
    if (line != magic) {
        throw FormatError(std::string("not a ") + kind + " file (bad magic)");
    }
}

void expect_eof(std::istream& in, const char* kind) {
    char extra;
    in.read(&extra, 1);
    if (in.gcount() != 0) {
        throw FormatError(std::string("trailing bytes after ") + kind + " payload");
    }
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return in;
}

long long parse_header_int(const std::string& line, const std::string& key) {
    const std::string prefix = key + "=";
    if (line.rfind(prefix, 0) != 0) {
        throw FormatError("expected header line '" + key + "=...', got '" + line + "'");
    }
    const std::string value = line.substr(prefix.size());
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw FormatError("bad integer for header '" + key + "': '" + value + "'");
    }
    return v;
}

void check_name(const std::string& name, bool forbid_tab, const char* where) {
    if (name.empty()) {
        throw ContractError(std::string(where) + ": empty name");
    }
    if (name.find('\n') != std::string::npos ||
        (forbid_tab && name.find('\t') != std::string::npos)) {
        throw ContractError(std::string(where) + ": name '" + name +
                            "' contains a delimiter character");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace

void write_descriptor_file(const std::string& path, const DescriptorSet& set) {
    if (set.names.size() != set.descriptors.size()) {
        throw DimensionError("write_descriptor_file: names/descriptors length mismatch");
    }
    if (set.descriptors.empty()) {
        throw ContractError("write_descriptor_file: empty descriptor set");
    }
    const std::size_t dim = set.descriptors.front().size();
    if (dim == 0 || dim > std::numeric_limits<std::uint32_t>::max()) {
        throw DimensionError("write_descriptor_file: bad descriptor dimension");
    }
    std::unordered_set<std::string> seen;
    for (const std::string& name : set.names) {
        check_name(name, false, "write_descriptor_file");
        if (!seen.insert(name).second) {
            throw ContractError("write_descriptor_file: duplicate name '" + name + "'");
        }
    }
    for (const Vector& d : set.descriptors) {
        if (d.size() != dim) {
            throw DimensionError("write_descriptor_file: descriptor dimensions differ");
        }
    }

    std::ofstream out = open_out(path, true);
    put_bytes(out, "DRCF1\n", 6);
    put_u32(out, static_cast<std::uint32_t>(set.descriptors.size()));
    put_u32(out, static_cast<std::uint32_t>(dim));
    for (const Vector& d : set.descriptors) {
        for (double v : d) put_f32(out, static_cast<float>(v));
    }
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");

    std::ofstream manifest = open_out(path + ".names", false);
    for (const std::string& name : set.names) {
        manifest << name << '\n';
    }
    manifest.close();
    if (!manifest) throw FormatError("write failed for '" + path + ".names'");
}

DescriptorSet read_descriptor_file(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "DRCF1", "descriptor");
    const std::uint32_t count = get_u32(in, "descriptor count");
    const std::uint32_t dim = get_u32(in, "descriptor dimension");
    if (dim == 0) throw FormatError("descriptor file has zero dimension");

    DescriptorSet set;
    set.descriptors.assign(count, Vector(dim, 0.0));
    for (std::uint32_t i = 0; i < count; ++i) {
        for (std::uint32_t c = 0; c < dim; ++c) {
            set.descriptors[i][c] = static_cast<double>(get_f32(in, "descriptor values"));
        }
    }
    expect_eof(in, "descriptor");

    std::ifstream manifest = open_in(path + ".names", false);
    std::string line;
    while (std::getline(manifest, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        set.names.push_back(line);
    }
    if (set.names.size() != count) {
        throw FormatError("manifest '" + path + ".names' has " +
                          std::to_string(set.names.size()) + " names, expected " +
                          std::to_string(count));
    }
    std::unordered_set<std::string> seen;
    for (const std::string& name : set.names) {
        if (name.empty()) throw FormatError("manifest contains an empty name");
        if (!seen.insert(name).second) {
            throw FormatError("manifest contains duplicate name '" + name + "'");
        }
    }
    return set;
}

void save_head_checkpoint(const std::string& path, const HeadParams& params) {
    if (params.l_head < 1 || params.channels < 1) {
        throw ContractError("save_head_checkpoint: params are uninitialized");
    }
    std::ofstream out = open_out(path, true);
    put_bytes(out, "DRCH1\n", 6);
    const std::string header =
        "L_head=" + std::to_string(params.l_head) + "\nC=" + std::to_string(params.channels) + "\n";
    put_bytes(out, header.c_str(), header.size());
    for (double v : params.layer1_weights.data) put_f64(out, v);
    for (double v : params.layer1_bias) put_f64(out, v);
    for (double v : params.layer2_weights) put_f64(out, v);
    put_f64(out, params.layer2_bias);
    for (double v : params.bn_running_mean.data) put_f64(out, v);
    for (double v : params.bn_running_var.data) put_f64(out, v);
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");
}

HeadParams load_head_checkpoint(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "DRCH1", "head checkpoint");
    const long long l_head = parse_header_int(get_line(in, "L_head header"), "L_head");
    const long long channels = parse_header_int(get_line(in, "C header"), "C");
    if (l_head < 1 || l_head > 1 << 20 || channels < 1 || channels > 1 << 20) {
        throw FormatError("head checkpoint has implausible dimensions");
    }
    HeadParams p;
    p.l_head = static_cast<int>(l_head);
    p.channels = static_cast<int>(channels);
    p.layer1_weights = Matrix(p.l_head, kPooledRows);
    for (double& v : p.layer1_weights.data) v = get_f64(in, "layer1 weights");
    p.layer1_bias.resize(static_cast<std::size_t>(p.l_head));
    for (double& v : p.layer1_bias) v = get_f64(in, "layer1 bias");
    p.layer2_weights.resize(static_cast<std::size_t>(p.l_head));
    for (double& v : p.layer2_weights) v = get_f64(in, "layer2 weights");
    p.layer2_bias = get_f64(in, "layer2 bias");
    p.bn_running_mean = Matrix(p.l_head, p.channels);
    for (double& v : p.bn_running_mean.data) v = get_f64(in, "running mean");
    p.bn_running_var = Matrix(p.l_head, p.channels);
    for (double& v : p.bn_running_var.data) {
        v = get_f64(in, "running variance");
        if (!(v >= 0.0)) {
            throw FormatError("head checkpoint has negative running variance");
        }
    }
    expect_eof(in, "head checkpoint");
    return p;
}

void save_whitening_model(const std::string& path, const WhiteningModel& model) {
    const std::size_t dim = model.mean.size();
    if (dim == 0 || model.projection.rows != static_cast<int>(dim) ||
        model.projection.cols != static_cast<int>(dim)) {
        throw ContractError("save_whitening_model: model is uninitialized");
    }
    if (model.fit_count < 2) {
        throw ContractError("save_whitening_model: fit_count below 2");
    }
    std::ofstream out = open_out(path, true);
    put_bytes(out, "DRCW1\n", 6);
    const std::string header = "C=" + std::to_string(dim) + "\nfit_count=" +
                               std::to_string(model.fit_count) + "\n";
    put_bytes(out, header.c_str(), header.size());
    for (double v : model.mean) put_f64(out, v);
    for (double v : model.projection.data) put_f64(out, v);
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");
}

WhiteningModel load_whitening_model(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "DRCW1", "whitening model");
    const long long dim = parse_header_int(get_line(in, "C header"), "C");
    const long long fit_count = parse_header_int(get_line(in, "fit_count header"), "fit_count");
    if (dim < 1 || dim > 1 << 20) {
        throw FormatError("whitening model has implausible dimension");
    }
    if (fit_count < 2) {
        throw FormatError("whitening model has fit_count below 2");
    }
    WhiteningModel model;
    model.fit_count = fit_count;
    model.mean.resize(static_cast<std::size_t>(dim));
    for (double& v : model.mean) v = get_f64(in, "mean");
    model.projection = Matrix(static_cast<int>(dim), static_cast<int>(dim));
    for (double& v : model.projection.data) v = get_f64(in, "projection");
    expect_eof(in, "whitening model");
    return model;
}

void save_dataset(const std::string& path, const LabeledDataset& ds) {
    if (ds.channels < 1 || ds.height < 1 || ds.width < 1) {
        throw DimensionError("save_dataset: dataset shape is unset");
    }
    std::unordered_set<std::string> seen;
    for (const DatasetItem& item : ds.items) {
        check_name(item.name, true, "save_dataset");
        if (!seen.insert(item.name).second) {
            throw ContractError("save_dataset: duplicate name '" + item.name + "'");
        }
        if (item.maps.channels() != ds.channels || item.maps.height() != ds.height ||
            item.maps.width() != ds.width) {
            throw DimensionError("save_dataset: item '" + item.name +
                                 "' does not match the dataset shape");
        }
    }
    std::ofstream out = open_out(path, true);
    put_bytes(out, "DRCD1\n", 6);
    const std::string header = "count=" + std::to_string(ds.items.size()) +
                               "\nC=" + std::to_string(ds.channels) +
                               "\nH=" + std::to_string(ds.height) +
                               "\nW=" + std::to_string(ds.width) + "\n";
    put_bytes(out, header.c_str(), header.size());
    for (const DatasetItem& item : ds.items) {
        const std::string line = item.name + "\t" + std::to_string(item.label) + "\n";
        put_bytes(out, line.c_str(), line.size());
    }
    for (const DatasetItem& item : ds.items) {
        for (double v : item.maps.values()) put_f64(out, v);
    }
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");
}

LabeledDataset load_dataset(const std::string& path) {
    std::ifstream in = open_in(path, true);
    expect_magic(in, "DRCD1", "dataset");
    const long long count = parse_header_int(get_line(in, "count header"), "count");
    const long long channels = parse_header_int(get_line(in, "C header"), "C");
    const long long height = parse_header_int(get_line(in, "H header"), "H");
    const long long width = parse_header_int(get_line(in, "W header"), "W");
    if (count < 0 || channels < 1 || height < 1 || width < 1 || channels > 1 << 20 ||
        height > 1 << 20 || width > 1 << 20) {
        throw FormatError("dataset has implausible header values");
    }

    LabeledDataset ds;
    ds.channels = static_cast<int>(channels);
    ds.height = static_cast<int>(height);
    ds.width = static_cast<int>(width);

    std::vector<std::pair<std::string, int>> entries;
    std::unordered_set<std::string> seen;
    for (long long i = 0; i < count; ++i) {
        const std::string line = get_line(in, "item line");
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw FormatError("dataset item line " + std::to_string(i) +
                              " is not 'name<TAB>label'");
        }
        const std::string name = line.substr(0, tab);
        const std::string label_text = line.substr(tab + 1);
        errno = 0;
        char* end = nullptr;
        const long long label = std::strtoll(label_text.c_str(), &end, 10);
        if (label_text.empty() || end != label_text.c_str() + label_text.size() ||
            errno == ERANGE || label < std::numeric_limits<int>::min() ||
            label > std::numeric_limits<int>::max()) {
            throw FormatError("dataset item '" + name + "' has bad label '" + label_text + "'");
        }
        if (!seen.insert(name).second) {
            throw FormatError("dataset contains duplicate name '" + name + "'");
        }
        entries.emplace_back(name, static_cast<int>(label));
    }

    const std::size_t per_item = static_cast<std::size_t>(channels) *
                                 static_cast<std::size_t>(height) *
                                 static_cast<std::size_t>(width);
    for (long long i = 0; i < count; ++i) {
        std::vector<double> values(per_item);
        for (double& v : values) v = get_f64(in, "feature values");
        try {
            ds.items.push_back(DatasetItem{entries[static_cast<std::size_t>(i)].first,
                                           entries[static_cast<std::size_t>(i)].second,
                                           FeatureMapSet(ds.channels, ds.height, ds.width,
                                                         std::move(values))});
        } catch (const DomainError& e) {
            throw FormatError("dataset item '" + entries[static_cast<std::size_t>(i)].first +
                              "' is invalid: " + e.what());
        }
    }
    expect_eof(in, "dataset");
    return ds;
}

void save_query_protocol(const std::string& path, const QueryProtocol& protocol) {
    std::ofstream out = open_out(path, false);
    for (const Query& q : protocol.queries) {
        check_name(q.name, true, "save_query_protocol");
        if (q.positives.empty()) {
            throw ContractError("save_query_protocol: query '" + q.name + "' has no positives");
        }
        out << q.name << '\t';
        for (std::size_t i = 0; i < q.positives.size(); ++i) {
            check_name(q.positives[i], true, "save_query_protocol");
            if (q.positives[i].find(',') != std::string::npos) {
                throw ContractError("save_query_protocol: name '" + q.positives[i] +
                                    "' contains a comma");
            }
            if (i > 0) out << ',';
            out << q.positives[i];
        }
        if (!q.junk.empty()) {
            out << '\t';
            for (std::size_t i = 0; i < q.junk.size(); ++i) {
                check_name(q.junk[i], true, "save_query_protocol");
                if (q.junk[i].find(',') != std::string::npos) {
                    throw ContractError("save_query_protocol: name '" + q.junk[i] +
                                        "' contains a comma");
                }
                if (i > 0) out << ',';
                out << q.junk[i];
            }
        }
        out << '\n';
    }
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");
}

QueryProtocol load_query_protocol(const std::string& path) {
    std::ifstream in = open_in(path, false);
    QueryProtocol protocol;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, '\t');
        if (fields.size() < 2 || fields.size() > 3) {
            throw ProtocolError("ground truth line " + std::to_string(line_no) +
                                ": expected 2 or 3 tab-separated fields");
        }
        Query q;
        q.name = fields[0];
        if (q.name.empty()) {
            throw ProtocolError("ground truth line " + std::to_string(line_no) +
                                ": empty query name");
        }
        for (const std::string& p : split(fields[1], ',')) {
            if (p.empty()) {
                throw ProtocolError("ground truth line " + std::to_string(line_no) +
                                    ": empty positive name");
            }
            q.positives.push_back(p);
        }
        if (fields.size() == 3 && !fields[2].empty()) {
            for (const std::string& j : split(fields[2], ',')) {
                if (j.empty()) {
                    throw ProtocolError("ground truth line " + std::to_string(line_no) +
                                        ": empty junk name");
                }
                q.junk.push_back(j);
            }
        }
        const std::unordered_set<std::string> pos_set(q.positives.begin(), q.positives.end());
        for (const std::string& j : q.junk) {
            if (pos_set.count(j) != 0) {
                throw ProtocolError("ground truth line " + std::to_string(line_no) + ": '" +
                                    j + "' listed as both positive and junk");
            }
        }
        protocol.queries.push_back(std::move(q));
    }
    return protocol;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double_value(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw FormatError("training config: bad number for '" + key + "': '" + value + "'");
    }
    return v;
}

long long parse_int_value(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw FormatError("training config: bad integer for '" + key + "': '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE ||
        value.front() == '-') {
        throw FormatError("training config: bad unsigned integer for '" + key + "': '" +
                          value + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t')) --end;
    return s.substr(begin, end - begin);
}

} // namespace

void save_training_config(const std::string& path, const TrainingConfig& cfg) {
    std::ofstream out = open_out(path, false);
    out << "seed=" << cfg.seed << '\n';
    out << "k=" << cfg.k << '\n';
    out << "n=" << cfg.n << '\n';
    out << "steps=" << cfg.steps << '\n';
    out << "learning_rate=" << format_double(cfg.learning_rate) << '\n';
    out << "momentum=" << format_double(cfg.momentum) << '\n';
    out << "alpha=" << format_double(cfg.alpha) << '\n';
    out << "epsilon=" << format_double(cfg.epsilon) << '\n';
    out << "L_head=" << cfg.l_head << '\n';
    out << "C=" << cfg.channels << '\n';
    out << "dataset_path=" << cfg.dataset_path << '\n';
    out << "checkpoint_path=" << cfg.checkpoint_path << '\n';
    if (cfg.augment_resize != 0 || cfg.augment_crop != 0) {
        out << "augment_resize=" << cfg.augment_resize << '\n';
        out << "augment_crop=" << cfg.augment_crop << '\n';
    }
    out.close();
    if (!out) throw FormatError("write failed for '" + path + "'");
}

TrainingConfig load_training_config(const std::string& path) {
    std::ifstream in = open_in(path, false);
    TrainingConfig cfg;
    std::unordered_set<std::string> seen;
    bool have_dataset = false;
    bool have_checkpoint = false;
    bool have_channels = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw FormatError("training config line " + std::to_string(line_no) +
                              ": expected 'key=value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw FormatError("training config: duplicate key '" + key + "'");
        }

        if (key == "seed") {
            cfg.seed = parse_u64_value(key, value);
        } else if (key == "k") {
            cfg.k = static_cast<int>(parse_int_value(key, value));
        } else if (key == "n") {
            cfg.n = static_cast<int>(parse_int_value(key, value));
        } else if (key == "steps") {
            cfg.steps = static_cast<int>(parse_int_value(key, value));
        } else if (key == "learning_rate") {
            cfg.learning_rate = parse_double_value(key, value);
        } else if (key == "momentum") {
            cfg.momentum = parse_double_value(key, value);
        } else if (key == "alpha") {
            cfg.alpha = parse_double_value(key, value);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double_value(key, value);
        } else if (key == "L_head") {
            cfg.l_head = static_cast<int>(parse_int_value(key, value));
        } else if (key == "C") {
            cfg.channels = static_cast<int>(parse_int_value(key, value));
            have_channels = true;
        } else if (key == "dataset_path") {
            cfg.dataset_path = value;
            have_dataset = true;
        } else if (key == "checkpoint_path") {
            cfg.checkpoint_path = value;
            have_checkpoint = true;
        } else if (key == "augment_resize") {
            cfg.augment_resize = static_cast<int>(parse_int_value(key, value));
        } else if (key == "augment_crop") {
            cfg.augment_crop = static_cast<int>(parse_int_value(key, value));
        } else {
            throw FormatError("training config: unknown key '" + key + "'");
        }
    }

    if (!have_dataset || cfg.dataset_path.empty()) {
        throw FormatError("training config: dataset_path is required");
    }
    if (!have_checkpoint || cfg.checkpoint_path.empty()) {
        throw FormatError("training config: checkpoint_path is required");
    }
    if (!have_channels) {
        throw FormatError("training config: C is required");
    }
    if (cfg.k < 2 || cfg.n < 2) {
        throw FormatError("training config: k and n must be at least 2");
    }
    if (cfg.steps < 0) {
        throw FormatError("training config: steps must be non-negative");
    }
    if (!(cfg.learning_rate > 0.0)) {
        throw FormatError("training config: learning_rate must be positive");
    }
    if (!(cfg.momentum >= 0.0) || !(cfg.momentum < 1.0)) {
        throw FormatError("training config: momentum must lie in [0, 1)");
    }
    if (!(cfg.alpha > 0.0)) {
        throw FormatError("training config: alpha must be positive");
    }
    if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0)) {
        throw FormatError("training config: epsilon must lie in (0, 1)");
    }
    if (cfg.l_head < 1) {
        throw FormatError("training config: L_head must be positive");
    }
    if (cfg.channels < 1) {
        throw FormatError("training config: C must be positive");
    }
    if (cfg.augment_resize < 0 || cfg.augment_crop < 0) {
        throw FormatError("training config: augment sizes must be non-negative");
    }
    if ((cfg.augment_resize == 0) != (cfg.augment_crop == 0)) {
        throw FormatError("training config: augment_resize and augment_crop go together");
    }
    if (cfg.augment_crop > cfg.augment_resize) {
        throw FormatError("training config: augment_crop exceeds augment_resize");
    }
    return cfg;
}

} // namespace darac
