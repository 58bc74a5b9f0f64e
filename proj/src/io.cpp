#include "kslab/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kslab {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Real parse_real(const std::string& tok, const std::string& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const Real v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (...) {
        throw config_error(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
    }
}

std::string format_real(Real v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

PointCloudSpace load_table_json(const json& j, const std::string& path) {
    if (!j.contains("d") || !j.contains("w"))
        throw config_error(path + ": table space needs keys 'd' and 'w'");
    const auto& d = j.at("d");
    const auto& w = j.at("w");
    const std::size_t n = w.size();
    std::vector<Real> table(n * n);
    if (d.size() != n) throw config_error(path + ": 'd' must be an n x n matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i].size() != n) throw config_error(path + ": 'd' must be an n x n matrix");
        for (std::size_t k = 0; k < n; ++k) table[i * n + k] = d[i][k].get<Real>();
    }
    std::vector<Real> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = w[i].get<Real>();
    return PointCloudSpace::from_table(std::move(table), std::move(weights));
}

} // namespace

PointCloudSpace load_space(const std::string& path) {
    if (!std::filesystem::exists(path)) throw config_error(path + ": file not found");

    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        std::ifstream in(path);
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw config_error(path + ": invalid JSON (" + e.what() + ")");
        }
        if (j.value("metric", "") != "table")
            throw config_error(path + ": JSON space files must declare \"metric\": \"table\"");
        return load_table_json(j, path);
    }

    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw config_error(path + ":1: empty file");
    ++lineno;
    const auto header = split(line, ',');
    if (header.size() < 3 || header.front() != "id" || header.back() != "weight")
        throw config_error(path + ":1: expected header id,c0[,c1,...],weight");
    const int dim = static_cast<int>(header.size()) - 2;

    std::vector<Real> coords, weights;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != header.size())
            throw config_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " columns, got " +
                               std::to_string(toks.size()));
        const Real id = parse_real(toks[0], path, lineno);
        if (id != static_cast<Real>(weights.size()))
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": ids must be consecutive starting at 0");
        for (int k = 0; k < dim; ++k)
            coords.push_back(parse_real(toks[static_cast<std::size_t>(k) + 1], path, lineno));
        weights.push_back(parse_real(toks.back(), path, lineno));
    }

    MetricKind kind = MetricKind::Euclidean;
    std::vector<Real> period;
    const std::string sidecar = path + ".json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream sin(sidecar);
        json j;
        try {
            sin >> j;
        } catch (const std::exception& e) {
            throw config_error(sidecar + ": invalid JSON (" + e.what() + ")");
        }
        if (j.value("metric", "") == "torus") {
            kind = MetricKind::FlatTorus;
            for (const auto& v : j.at("period")) period.push_back(v.get<Real>());
        }
    }
    return PointCloudSpace::from_points(std::move(coords), dim, std::move(weights), kind,
                                        std::move(period));
}

void save_space_csv(const PointCloudSpace& space, const std::string& path) {
    if (space.metric() == MetricKind::DistanceTable)
        throw config_error("save_space_csv: table spaces are saved as JSON");
    std::ofstream out(path);
    out << "id";
    for (int k = 0; k < space.dim(); ++k) out << ",c" << k;
    out << ",weight\n";
    for (Index i = 0; i < space.size(); ++i) {
        out << i;
        for (int k = 0; k < space.dim(); ++k) out << ',' << format_real(space.coord(i, k));
        out << ',' << format_real(space.weight(i)) << '\n';
    }
}

ScalarField load_field(const PointCloudSpace& space, const std::string& path) {
    if (!std::filesystem::exists(path)) throw config_error(path + ": file not found");
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw config_error(path + ":1: empty file");
    ++lineno;
    if (split(line, ',') != std::vector<std::string>{"id", "value"})
        throw config_error(path + ":1: expected header id,value");
    std::vector<Real> values(static_cast<std::size_t>(space.size()), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(space.size()), false);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != 2)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected id,value");
        const Real idr = parse_real(toks[0], path, lineno);
        const auto id = static_cast<std::ptrdiff_t>(idr);
        if (idr != static_cast<Real>(id) || id < 0 || id >= space.size())
            throw config_error(path + ":" + std::to_string(lineno) + ": id out of range");
        values[static_cast<std::size_t>(id)] = parse_real(toks[1], path, lineno);
        seen[static_cast<std::size_t>(id)] = true;
    }
    for (Index i = 0; i < space.size(); ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw config_error(path + ": missing value for point " + std::to_string(i));
    return bind_field(space, std::move(values));
}

void save_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    out << "id,value\n";
    for (Index i = 0; i < field.size(); ++i)
        out << i << ',' << format_real(field[i]) << '\n';
}

json net_to_json(const EpsNet& net) {
    json j;
    j["eps"] = net.eps;
    j["centers"] = net.centers.ids;
    return j;
}

void save_partition_csv(const PartitionOfUnity& pou, const std::string& path) {
    std::ofstream out(path);
    out << "center_id,point_id,value\n";
    for (std::size_t k = 0; k < pou.support.size(); ++k)
        for (std::size_t t = 0; t < pou.support[k].size(); ++t)
            out << pou.net.centers.ids[k] << ',' << pou.support[k][t] << ','
                << format_real(pou.phi[k][t]) << '\n';
}

json sweep_to_json(const EnergySweep& sweep) {
    json j;
    j["p"] = sweep.p;
    j["radii"] = sweep.radii;
    j["values"] = sweep.values;
    j["sup"] = sweep.sup_estimate;
    j["liminf_window"] = sweep.liminf_window;
    j["limsup_window"] = sweep.limsup_window;
    j["fit_window"] = sweep.fit_window;
    if (sweep.extrapolated) j["extrapolated"] = *sweep.extrapolated;
    j["fit_residual"] = sweep.fit_residual;
    return j;
}

PointCloudSpace make_space(const std::string& spec) {
    const auto toks = split(spec, ':');
    auto count = [&](std::size_t k) -> Index {
        try {
            return static_cast<Index>(std::stol(toks.at(k)));
        } catch (...) {
            throw config_error("space spec '" + spec + "': bad count");
        }
    };
    if (toks.size() >= 2 && toks[0] == "circle") return PointCloudSpace::circle_grid(count(1));
    if (toks.size() >= 2 && toks[0] == "interval") return PointCloudSpace::interval_grid(count(1));
    if (toks.size() >= 2 && toks[0] == "torus2") {
        const auto dims = split(toks[1], 'x');
        const Index nx = static_cast<Index>(std::stol(dims[0]));
        const Index ny = dims.size() > 1 ? static_cast<Index>(std::stol(dims[1])) : nx;
        return PointCloudSpace::torus2d_grid(nx, ny);
    }
    if (toks.size() >= 3 && toks[0] == "random") {
        CloudSampler sampler = CloudSampler::UnitSquare;
        if (toks.size() >= 4) {
            if (toks[3] == "torus") sampler = CloudSampler::UnitTorus;
            else if (toks[3] == "interval") sampler = CloudSampler::UnitInterval;
            else if (toks[3] != "square")
                throw config_error("space spec '" + spec + "': unknown sampler '" + toks[3] + "'");
        }
        return PointCloudSpace::random_cloud(count(1), static_cast<std::uint64_t>(std::stoull(toks[2])),
                                             sampler);
    }
    return load_space(spec);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error(path + ": cannot open for writing");
    out << content;
}

} // namespace kslab
