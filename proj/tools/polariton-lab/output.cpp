#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "scenario.hpp"

namespace lab {

namespace {

std::string number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

} // namespace

std::string format_csv(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string format_svg(const Table& t, const std::string& title)
{
    constexpr double W = 720, H = 480, ml = 70, mr = 180, mt = 40, mb = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& r : t.rows) {
        if (!std::isfinite(r[0])) continue;
        x0 = std::min(x0, r[0]);
        x1 = std::max(x1, r[0]);
        for (std::size_t c = 1; c < r.size(); ++c)
            if (std::isfinite(r[c])) {
                y0 = std::min(y0, r[c]);
                y1 = std::max(y1, r[c]);
            }
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::string s = fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
                                "font-family=\"sans-serif\" font-size=\"12\">\n",
                                W, H);
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", ml, mt,
                     W - ml - mr, H - mt - mb);
    s += fmt::format("<text x=\"{}\" y=\"24\">{}</text>\n", ml, title);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", ml, H - 12, t.header[0]);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{:.4g}</text><text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n",
                     ml, H - mb + 16, x0, W - mr, H - mb + 16, x1);
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text><text x=\"{}\" y=\"{}\" "
                     "text-anchor=\"end\">{:.4g}</text>\n",
                     ml - 4, H - mb, y0, ml - 4, mt + 10, y1);
    for (std::size_t c = 1; c < t.header.size(); ++c) {
        const char* col = colors[(c - 1) % 10];
        std::string d;
        bool pen = false;
        for (const auto& r : t.rows) {
            if (!std::isfinite(r[0]) || !std::isfinite(r[c])) {
                pen = false;
                continue;
            }
            d += fmt::format("{}{:.2f},{:.2f} ", pen ? "L" : "M", px(r[0]), py(r[c]));
            pen = true;
        }
        s += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", d, col);
        s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - mr + 8, mt + 16 * c, col, t.header[c]);
    }
    s += "</svg>\n";
    return s;
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(fmt::format("cannot open '{}' for writing", tmp.string()));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError(fmt::format("cannot move output into place at '{}'", path.string()));
    }
}

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw IoError("SHA-256 failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

} // namespace lab
