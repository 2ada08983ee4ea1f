#include "parley/synth/front_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "parley/error.hpp"

namespace parley::synth {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError(fmt::format("front CSV line {}: '{}' is not a number", line, s));
    }
    return v;
}

} // namespace

void write_front_csv(const ParetoFront& front, std::ostream& out) {
    out << "policy_id";
    for (const auto& o : front.objectives) out << ',' << o.name;
    out << '\n';
    for (std::size_t i = 0; i < front.points.size(); ++i) {
        out << i;
        for (double v : front.points[i].objectives) out << ',' << fmt::format("{}", v);
        out << '\n';
    }
}

void write_front_json(const ParetoFront& front, std::ostream& out) {
    nlohmann::json j;
    j["objectives"] = nlohmann::json::array();
    for (const auto& o : front.objectives) {
        j["objectives"].push_back({{"name", o.name},
                                   {"property", o.property.to_string()},
                                   {"sense", o.sense() == Sense::Maximize ? "max" : "min"}});
    }
    j["policies"] = nlohmann::json::object();
    for (std::size_t i = 0; i < front.points.size(); ++i) j["policies"][std::to_string(i)] = front.points[i].policy;
    out << j.dump() << '\n';
}

std::string sidecar_path(const std::string& csv_path) {
    std::string base = csv_path;
    if (base.size() >= 4 && base.compare(base.size() - 4, 4, ".csv") == 0) base.resize(base.size() - 4);
    return base + ".json";
}

void save_front(const ParetoFront& front, const std::string& csv_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw InputError(fmt::format("cannot write {}", csv_path));
    write_front_csv(front, csv);
    std::ofstream js(sidecar_path(csv_path));
    if (!js) throw InputError(fmt::format("cannot write {}", sidecar_path(csv_path)));
    write_front_json(front, js);
}

ParetoFront read_front_csv(std::istream& csv, std::istream* sidecar) {
    ParetoFront front;
    std::string line;
    if (!std::getline(csv, line)) throw InputError("front CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split(line);
    if (header.size() < 2 || header[0] != "policy_id") throw InputError("front CSV header must start with policy_id");
    for (std::size_t i = 1; i < header.size(); ++i) {
        mc::Property prop;
        prop.sense = header[i] == "success" ? Sense::Maximize : Sense::Minimize;
        front.objectives.push_back({header[i], prop});
    }
    std::vector<std::string> ids;
    std::size_t no = 1;
    while (std::getline(csv, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != header.size()) throw InputError(fmt::format("front CSV line {}: expected {} fields", no, header.size()));
        EvaluatedPolicy p;
        for (std::size_t i = 1; i < cells.size(); ++i) p.objectives.push_back(to_double(cells[i], no));
        ids.push_back(cells[0]);
        front.points.push_back(std::move(p));
    }
    if (sidecar) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(*sidecar);
            if (j.contains("objectives")) {
                const auto& objs = j.at("objectives");
                if (objs.size() != front.objectives.size()) throw InputError("sidecar objectives do not match the CSV header");
                for (std::size_t i = 0; i < objs.size(); ++i) {
                    auto& o = front.objectives[i];
                    if (objs[i].at("name").get<std::string>() != o.name) throw InputError("sidecar objective names do not match the CSV header");
                    if (objs[i].contains("property")) o.property = mc::Property::parse(objs[i].at("property").get<std::string>());
                    o.property.sense = objs[i].at("sense").get<std::string>() == "max" ? Sense::Maximize : Sense::Minimize;
                }
            }
            const auto& pol = j.at("policies");
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (!pol.contains(ids[i])) throw InputError(fmt::format("sidecar has no policy '{}'", ids[i]));
                front.points[i].policy = pol.at(ids[i]).get<urc::Policy>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw InputError(fmt::format("malformed front sidecar: {}", e.what()));
        }
    }
    return front;
}

ParetoFront load_front(const std::string& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw InputError(fmt::format("cannot read {}", csv_path));
    std::ifstream js(sidecar_path(csv_path));
    return read_front_csv(csv, js ? &js : nullptr);
}

} // namespace parley::synth
