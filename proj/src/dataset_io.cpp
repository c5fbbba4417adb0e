#include "nondecomp/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace nondecomp {
namespace {

InputError line_error(std::size_t line, const std::string &what) {
    return InputError("line " + std::to_string(line) + ": " + what);
}

template <class T>
bool parse_number(std::string_view s, T &out) {
    if (s.empty())
        return false;
    if (s.front() == '+')
        s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string read_line(std::istream &in, std::size_t &line_no, const char *what) {
    std::string line;
    if (!std::getline(in, line))
        throw line_error(line_no + 1, std::string("unexpected end of input, expected ") + what);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

void write_row(std::ostream &out, const Eigen::MatrixXd &M, Eigen::Index r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        if (c)
            out << ' ';
        out << format_double(M(r, c));
    }
    out << '\n';
}

Eigen::MatrixXd read_matrix(std::istream &in, std::size_t &line_no, Eigen::Index rows,
                            Eigen::Index cols) {
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string line = read_line(in, line_no, "a matrix row");
        const auto tokens = split_ws(line);
        if (static_cast<Eigen::Index>(tokens.size()) != cols)
            throw line_error(line_no, "expected " + std::to_string(cols) + " numbers, got " +
                                          std::to_string(tokens.size()));
        for (Eigen::Index c = 0; c < cols; ++c)
            if (!parse_number(tokens[c], M(r, c)) || !std::isfinite(M(r, c)))
                throw line_error(line_no, "bad number '" + std::string(tokens[c]) + "'");
    }
    return M;
}

std::optional<double> parse_optional(std::string_view token, std::size_t line_no) {
    if (token == "none")
        return std::nullopt;
    double v = 0;
    if (!parse_number(token, v) || !std::isfinite(v))
        throw line_error(line_no, "bad number '" + std::string(token) + "'");
    return v;
}

std::vector<std::string> header_fields(std::istream &in, std::size_t &line_no,
                                            std::string_view key, std::size_t min_values,
                                            std::size_t max_values) {
    const std::string line = read_line(in, line_no, "model header");
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0] != key || tokens.size() - 1 < min_values ||
        tokens.size() - 1 > max_values)
        throw line_error(line_no, "corrupted model header, expected '" + std::string(key) + "'");
    return {tokens.begin() + 1, tokens.end()};
}

std::string optional_str(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string("none");
}

void check_csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") != std::string::npos)
        throw InputError("CSV field '" + s + "' contains a reserved character");
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string stable_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void SparseDataset::validate() const {
    if (n < 0 || d < 1 || L < 1)
        throw InputError("dataset dimensions must be positive");
    if (features.size() != static_cast<std::size_t>(n) ||
        labels.size() != static_cast<std::size_t>(n))
        throw InputError("dataset row count does not match n");
    for (int i = 0; i < n; ++i) {
        std::vector<int> seen;
        for (const auto &[idx, val] : features[i]) {
            if (idx < 0 || idx >= d)
                throw InputError("feature index out of range in row " + std::to_string(i));
            if (!std::isfinite(val))
                throw InputError("non-finite feature value in row " + std::to_string(i));
            seen.push_back(idx);
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw InputError("duplicate feature index in row " + std::to_string(i));
        for (int lab : labels[i])
            if (lab < 0 || lab >= L)
                throw InputError("label index out of range in row " + std::to_string(i));
        if (std::adjacent_find(labels[i].begin(), labels[i].end()) != labels[i].end())
            throw InputError("duplicate label in row " + std::to_string(i));
    }
}

Eigen::MatrixXd SparseDataset::dense_features() const {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i)
        for (const auto &[idx, val] : features[i])
            X(i, idx) = val;
    return X;
}

Eigen::MatrixXd SparseDataset::label_matrix() const {
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, L);
    for (int i = 0; i < n; ++i)
        for (int lab : labels[i])
            Y(i, lab) = 1.0;
    return Y;
}

SparseDataset parse_dataset(std::istream &in) {
    std::size_t line_no = 0;
    SparseDataset data;
    {
        const std::string header = read_line(in, line_no, "header 'n d L'");
        const auto tokens = split_ws(header);
        if (tokens.size() != 3 || !parse_number(tokens[0], data.n) ||
            !parse_number(tokens[1], data.d) || !parse_number(tokens[2], data.L))
            throw line_error(line_no, "header must be 'n d L'");
        if (data.n < 0 || data.d < 1 || data.L < 1)
            throw line_error(line_no, "header dimensions must be positive");
    }
    data.features.resize(data.n);
    data.labels.resize(data.n);
    for (int i = 0; i < data.n; ++i) {
        const std::string line = read_line(in, line_no, "an instance line");
        auto tokens = split_ws(line);
        std::size_t first_feature = 0;
        const bool has_labels = !line.empty() &&
                                !std::isspace(static_cast<unsigned char>(line.front())) &&
                                tokens.front().find(':') == std::string_view::npos;
        if (has_labels) {
            first_feature = 1;
            for (auto piece : split_on(tokens.front(), ',')) {
                int lab = 0;
                if (!parse_number(piece, lab))
                    throw line_error(line_no, "bad label '" + std::string(piece) + "'");
                if (lab < 0 || lab >= data.L)
                    throw line_error(line_no, "label " + std::to_string(lab) + " out of range");
                data.labels[i].push_back(lab);
            }
            std::sort(data.labels[i].begin(), data.labels[i].end());
            if (std::adjacent_find(data.labels[i].begin(), data.labels[i].end()) !=
                data.labels[i].end())
                throw line_error(line_no, "duplicate label");
        }
        std::vector<int> seen;
        for (std::size_t t = first_feature; t < tokens.size(); ++t) {
            const auto colon = tokens[t].find(':');
            if (colon == std::string_view::npos)
                throw line_error(line_no, "feature '" + std::string(tokens[t]) +
                                              "' is not index:value");
            int idx = 0;
            double val = 0;
            if (!parse_number(tokens[t].substr(0, colon), idx) ||
                !parse_number(tokens[t].substr(colon + 1), val) || !std::isfinite(val))
                throw line_error(line_no, "bad feature '" + std::string(tokens[t]) + "'");
            if (idx < 0 || idx >= data.d)
                throw line_error(line_no, "feature index " + std::to_string(idx) +
                                              " out of range");
            data.features[i].emplace_back(idx, val);
            seen.push_back(idx);
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw line_error(line_no, "duplicate feature index");
    }
    std::string rest;
    while (std::getline(in, rest)) {
        ++line_no;
        if (!is_blank(rest))
            throw line_error(line_no, "more instance lines than the header declares");
    }
    return data;
}

void write_dataset(const SparseDataset &data, std::ostream &out) {
    data.validate();
    out << data.n << ' ' << data.d << ' ' << data.L << '\n';
    for (int i = 0; i < data.n; ++i) {
        for (std::size_t k = 0; k < data.labels[i].size(); ++k) {
            if (k)
                out << ',';
            out << data.labels[i][k];
        }
        for (const auto &[idx, val] : data.features[i])
            out << ' ' << idx << ':' << format_double(val);
        out << '\n';
    }
}

SparseDataset read_dataset_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open dataset '" + path + "'");
    try {
        return parse_dataset(in);
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_dataset_file(const SparseDataset &data, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    write_dataset(data, out);
}

SparseDataset dataset_from_dense(const Eigen::MatrixXd &X, const Eigen::MatrixXd &Y) {
    if (X.rows() != Y.rows())
        throw InputError("features and labels differ in row count");
    SparseDataset data;
    data.n = static_cast<int>(X.rows());
    data.d = static_cast<int>(X.cols());
    data.L = static_cast<int>(Y.cols());
    data.features.resize(data.n);
    data.labels.resize(data.n);
    for (int i = 0; i < data.n; ++i) {
        for (int a = 0; a < data.d; ++a)
            if (X(i, a) != 0.0)
                data.features[i].emplace_back(a, X(i, a));
        for (int j = 0; j < data.L; ++j) {
            if (Y(i, j) != 0.0 && Y(i, j) != 1.0)
                throw InputError("dataset labels must be binary");
            if (Y(i, j) == 1.0)
                data.labels[i].push_back(j);
        }
    }
    return data;
}

ObservationSet mask_observations(const Eigen::MatrixXd &Y, double ratio,
                                 const OmegaDistribution &dist, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw InputError("observation ratio must lie in (0, 1]");
    const int n = static_cast<int>(Y.rows()), L = static_cast<int>(Y.cols());
    const auto m = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(n) * static_cast<double>(L)));
    if (m == 0)
        throw InputError("observation ratio selects no entries");
    const auto cells = sample_omega(n, L, m, dist, seed);
    std::vector<ObservationSet::Entry> entries;
    entries.reserve(cells.size());
    for (const auto &c : cells)
        entries.push_back({c.row, c.col, Y(c.row, c.col)});
    return ObservationSet(n, L, std::move(entries));
}

ObservationSet mask_observations(const SparseDataset &data, double ratio,
                                 const OmegaDistribution &dist, std::uint64_t seed) {
    return mask_observations(data.label_matrix(), ratio, dist, seed);
}

void save_model(const Model &model, std::ostream &out) {
    out << "nondecomp-model 1\n";
    if (const auto *dense = std::get_if<DenseModel>(&model)) {
        out << "kind dense\n";
        out << "dims " << dense->W.rows() << ' ' << dense->W.cols() << '\n';
        out << "theta " << optional_str(dense->theta) << '\n';
        out << "gamma " << optional_str(dense->gamma_clip) << '\n';
        for (Eigen::Index r = 0; r < dense->W.rows(); ++r)
            write_row(out, dense->W, r);
        return;
    }
    const auto &f = std::get<FactoredModel>(model);
    out << "kind factored\n";
    out << "dims " << f.W1.rows() << ' ' << f.W2.rows() << ' ' << f.W1.cols() << '\n';
    out << "theta " << optional_str(f.theta) << '\n';
    out << "gamma " << optional_str(f.gamma_clip) << '\n';
    for (Eigen::Index r = 0; r < f.W1.rows(); ++r)
        write_row(out, f.W1, r);
    for (Eigen::Index r = 0; r < f.W2.rows(); ++r)
        write_row(out, f.W2, r);
}

Model load_model(std::istream &in) {
    std::size_t line_no = 0;
    auto magic = header_fields(in, line_no, "nondecomp-model", 1, 1);
    if (magic[0] != "1")
        throw line_error(line_no, "unsupported model format version");
    const std::string kind = header_fields(in, line_no, "kind", 1, 1)[0];
    if (kind != "dense" && kind != "factored")
        throw line_error(line_no, "unknown model kind '" + kind + "'");
    const bool dense = kind == "dense";
    std::vector<int> dims;
    for (const auto &t : header_fields(in, line_no, "dims", dense ? 2 : 3, dense ? 2 : 3)) {
        int v = 0;
        if (!parse_number(t, v) || v < 1)
            throw line_error(line_no, "bad model dimension");
        dims.push_back(v);
    }
    const auto theta = parse_optional(header_fields(in, line_no, "theta", 1, 1)[0], line_no);
    const auto gamma = parse_optional(header_fields(in, line_no, "gamma", 1, 1)[0], line_no);
    if (dense) {
        DenseModel m;
        m.W = read_matrix(in, line_no, dims[0], dims[1]);
        m.theta = theta;
        m.gamma_clip = gamma;
        return m;
    }
    FactoredModel m;
    m.W1 = read_matrix(in, line_no, dims[0], dims[2]);
    m.W2 = read_matrix(in, line_no, dims[1], dims[2]);
    m.theta = theta;
    m.gamma_clip = gamma;
    return m;
}

void save_model_file(const Model &model, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    save_model(model, out);
}

Model load_model_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open model '" + path + "'");
    try {
        return load_model(in);
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_results_csv(const ResultTable &table, std::ostream &out, bool header) {
    if (header)
        out << "method,metric_name,split,value,stderr,config_hash\n";
    for (const auto &r : table) {
        for (const auto *s : {&r.method, &r.metric_name, &r.split, &r.config_hash})
            check_csv_field(*s);
        if (!std::isfinite(r.value) || !(r.std_error >= 0))
            throw InputError("result row has a non-finite value or negative stderr");
        out << r.method << ',' << r.metric_name << ',' << r.split << ','
            << format_double(r.value) << ',' << format_double(r.std_error) << ','
            << r.config_hash << '\n';
    }
}

ResultTable parse_results_csv(std::istream &in) {
    std::size_t line_no = 0;
    const std::string header = read_line(in, line_no, "CSV header");
    if (header != "method,metric_name,split,value,stderr,config_hash")
        throw line_error(line_no, "unexpected CSV header");
    ResultTable table;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line))
            continue;
        const auto f = split_on(line, ',');
        if (f.size() != 6)
            throw line_error(line_no, "expected 6 fields");
        ResultRow r{std::string(f[0]), std::string(f[1]), std::string(f[2]), 0, 0,
                    std::string(f[5])};
        if (!parse_number(f[3], r.value) || !parse_number(f[4], r.std_error))
            throw line_error(line_no, "bad number");
        table.push_back(std::move(r));
    }
    return table;
}

void emit_plot(const std::vector<PlotSeries> &series, std::string_view x_label,
               std::string_view y_label, std::ostream &out) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                throw InputError("plot point is not finite");
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (series.empty() || !std::isfinite(xmin))
        throw InputError("cannot plot an empty series");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 150, top = 30, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };
    static constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
        << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + ph << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymin + (ymax - ymin) * t / 4.0;
        out << "<text x=\"" << fmt_coord(px(xv)) << "\" y=\"" << fmt_coord(top + ph + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
        out << "<text x=\"" << fmt_coord(left - 6) << "\" y=\"" << fmt_coord(py(yv) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
    }
    out << "<text x=\"" << fmt_coord(left + pw / 2) << "\" y=\"" << fmt_coord(height - 15)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(x_label)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt_coord(top + ph / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << fmt_coord(top + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char *color = palette[s % std::size(palette)];
        auto pts = series[s].points;
        std::sort(pts.begin(), pts.end());
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k)
            out << (k ? " " : "") << fmt_coord(px(pts[k].first)) << ','
                << fmt_coord(py(pts[k].second));
        out << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(s);
        out << "<line x1=\"" << fmt_coord(left + pw + 12) << "\" y1=\"" << fmt_coord(ly + 6)
            << "\" x2=\"" << fmt_coord(left + pw + 32) << "\" y2=\"" << fmt_coord(ly + 6)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt_coord(left + pw + 36) << "\" y=\"" << fmt_coord(ly + 10)
            << "\" font-size=\"12\">" << xml_escape(series[s].name) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace nondecomp
