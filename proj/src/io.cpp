#include "plir/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace plir {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

int read_dim(const json& j, const std::string& path, const char* field) {
    if (!j.contains(field) || !j[field].is_number_integer())
        throw InputError(path + ": field '" + field + "' must be an integer");
    const int v = j[field].get<int>();
    if (v < 1) throw InputError(path + ": field '" + field + "' must be >= 1");
    return v;
}

std::vector<double> read_matrix(const json& j, const std::string& path, const char* field,
                                std::size_t expected) {
    if (!j.contains(field) || !j[field].is_array())
        throw InputError(path + ": field '" + field + "' must be a row-major array");
    const auto& arr = j[field];
    if (arr.size() != expected) {
        std::ostringstream msg;
        msg << path << ": field '" << field << "' has " << arr.size() << " entries, expected "
            << expected;
        throw InputError(msg.str());
    }
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            std::ostringstream msg;
            msg << path << ": field '" << field << "' entry " << i << " is not a number";
            throw InputError(msg.str());
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

}  // namespace

std::pair<FiniteSpace, FieldRV> load_space_and_rv(const std::string& path, bool require_x) {
    const json j = parse_file(path);
    const int rows = read_dim(j, path, "M");
    const int cols = read_dim(j, path, "N");
    const std::size_t cells = static_cast<std::size_t>(rows) * cols;
    std::vector<double> p = read_matrix(j, path, "p", cells);
    FiniteSpace space = [&]() {
        try {
            return FiniteSpace(rows, cols, std::move(p));
        } catch (const std::invalid_argument& e) {
            throw InputError(path + ": field 'p': " + e.what());
        }
    }();
    FieldRV x(rows, cols);
    if (j.contains("x")) {
        x.v = read_matrix(j, path, "x", cells);
        try {
            x.require_finite();
        } catch (const std::invalid_argument& e) {
            throw InputError(path + ": field 'x': " + e.what());
        }
    } else if (require_x) {
        throw InputError(path + ": field 'x' is required");
    }
    return {std::move(space), std::move(x)};
}

std::pair<FiniteSpace, SupportSet> load_support_set(const std::string& path) {
    const json j = parse_file(path);
    auto [space, unused] = load_space_and_rv(path, false);
    (void)unused;
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
        throw InputError(path + ": field 'vertices' must be a non-empty array of densities");
    const std::size_t cells = static_cast<std::size_t>(space.rows()) * space.cols();
    std::vector<FieldRV> vertices;
    for (std::size_t k = 0; k < j["vertices"].size(); ++k) {
        if (!j["vertices"][k].is_array() || j["vertices"][k].size() != cells) {
            std::ostringstream msg;
            msg << path << ": field 'vertices' entry " << k << " must hold " << cells
                << " numbers";
            throw InputError(msg.str());
        }
        FieldRV d(space.rows(), space.cols());
        for (std::size_t i = 0; i < cells; ++i) {
            if (!j["vertices"][k][i].is_number()) {
                std::ostringstream msg;
                msg << path << ": field 'vertices' entry " << k << "[" << i
                    << "] is not a number";
                throw InputError(msg.str());
            }
            d.v[i] = j["vertices"][k][i].get<double>();
        }
        vertices.push_back(std::move(d));
    }
    try {
        SupportSet s = make_support_set(space, std::move(vertices));
        return {std::move(space), std::move(s)};
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": field 'vertices': " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError(tmp + ": cannot open for writing");
        out << content;
        if (!out) throw InputError(tmp + ": write failed");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace plir
