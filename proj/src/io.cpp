#include "afrac/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "afrac/error.hpp"
#include "json.hpp"

namespace afrac {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    require(static_cast<bool>(out_), "cannot open " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, "csv row width differs from the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

void write_grid_csv(const GridFunction& u, const std::filesystem::path& csv_path) {
    CsvWriter w(csv_path, {"i", "j", "x", "y", "value", "interior_flag"});
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) {
            const Vec2 x = u.node(i, j);
            w.row({std::to_string(i), std::to_string(j), format_number(x.x), format_number(x.y),
                   format_number(u.at(i, j)), u.interior(i, j) ? "1" : "0"});
        }
    w.close();
    nlohmann::ordered_json side;
    side["origin"] = {u.origin().x, u.origin().y};
    side["h"] = u.h();
    side["nx"] = u.nx();
    side["ny"] = u.ny();
    side["s"] = u.s_tag;
    side["domain"] = u.domain().describe();
    auto json_path = csv_path;
    json_path.replace_extension(".json");
    std::ofstream out(json_path, std::ios::binary);
    out << side.dump(2) << '\n';
    require(static_cast<bool>(out), "cannot write " + json_path.string());
}

OutputGuard::~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : paths_) std::filesystem::remove(p, ec);
}

std::filesystem::path OutputGuard::track(std::filesystem::path p) {
    paths_.push_back(p);
    return p;
}

}  // namespace afrac
