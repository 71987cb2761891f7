#include "fruitpal/dataset/manifest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "fruitpal/core/errors.hpp"

namespace fruitpal::dataset {

namespace {

constexpr std::array<std::string_view, 4> kSplitNames = {"Training", "Validation", "Testing",
                                                         "Unassigned"};

bool skippable(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#';
}

int positive_dimension(const Json& rec, const char* key) {
    const Json& v = rec.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ParseError(std::string(key) + " must be a positive integer");
    }
    return v.get<int>();
}

// Shared record shell; `box_parser` turns one row into a truth.
template <typename BoxParser>
std::vector<AnnotatedImage> parse_records(std::istream& in, BoxParser box_parser) {
    std::vector<AnnotatedImage> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) {
            continue;
        }
        try {
            const Json rec = Json::parse(line);
            AnnotatedImage img;
            img.image_id = rec.at("image_id").get<std::string>();
            if (img.image_id.empty()) {
                throw ParseError("empty image_id");
            }
            if (!ids.insert(img.image_id).second) {
                throw ParseError("duplicate image_id " + img.image_id);
            }
            img.width = positive_dimension(rec, "width");
            img.height = positive_dimension(rec, "height");
            if (auto it = rec.find("split"); it != rec.end() && !it->is_null()) {
                auto split = parse_split(it->get<std::string>());
                if (!split) {
                    throw ParseError("unknown split " + it->dump());
                }
                img.split = *split;
            }
            for (const Json& row : rec.value("boxes", Json::array())) {
                img.truths.push_back(box_parser(row, img));
            }
            out.push_back(std::move(img));
        } catch (const Json::exception& e) {
            throw ManifestError(line_no, e.what());
        } catch (const Error& e) {
            throw ManifestError(line_no, e.what());
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(Split s) noexcept { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> parse_split(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
        if (s == kSplitNames[i]) {
            return static_cast<Split>(i);
        }
    }
    return std::nullopt;
}

std::vector<AnnotatedImage> parse_manifest(std::istream& in) {
    return parse_records(in, [](const Json& row, const AnnotatedImage&) { return truth_from_row(row); });
}

std::vector<AnnotatedImage> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open manifest " + path.string());
    }
    return parse_manifest(in);
}

Json image_to_json(const AnnotatedImage& img) {
    Json boxes = Json::array();
    for (const GroundTruth& t : img.truths) {
        boxes.push_back(box_row(t.fruit, t.box));
    }
    Json j{{"image_id", img.image_id}, {"width", img.width}, {"height", img.height}, {"boxes", boxes}};
    if (img.split != Split::Unassigned) {
        j["split"] = std::string(to_string(img.split));
    }
    return j;
}

void write_manifest(std::ostream& out, const std::vector<AnnotatedImage>& images) {
    for (const AnnotatedImage& img : images) {
        out << image_to_json(img).dump() << '\n';
    }
}

void save_manifest(const std::filesystem::path& path, const std::vector<AnnotatedImage>& images) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write manifest " + path.string());
    }
    write_manifest(out, images);
}

std::vector<AnnotatedImage> convert_center_pixel(std::istream& in) {
    return parse_records(in, [](const Json& row, const AnnotatedImage& img) {
        if (!row.is_array() || row.size() != 5) {
            throw ParseError("expected [class, cx, cy, w, h], got " + row.dump());
        }
        const FruitClass fruit = fruit_from_json(row[0]);
        const double cx = row[1].get<double>(), cy = row[2].get<double>();
        const double w = row[3].get<double>(), h = row[4].get<double>();
        const double W = img.width, H = img.height;
        const double x0 = std::clamp((cx - w / 2.0) / W, 0.0, 1.0);
        const double x1 = std::clamp((cx + w / 2.0) / W, 0.0, 1.0);
        const double y0 = std::clamp((cy - h / 2.0) / H, 0.0, 1.0);
        const double y1 = std::clamp((cy + h / 2.0) / H, 0.0, 1.0);
        return GroundTruth{fruit, BoundingBox(x0, y0, x1, y1)};
    });
}

}  // namespace fruitpal::dataset
