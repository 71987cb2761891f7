#include "fruitpal/dataset/health.hpp"

#include <iomanip>
#include <sstream>

namespace fruitpal::dataset {

HealthReport health_check(const std::vector<AnnotatedImage>& images) {
    HealthReport r;
    for (const AnnotatedImage& img : images) {
        ++r.total_images;
        if (img.truths.empty()) {
            ++r.null_images;
            continue;
        }
        std::array<bool, kFruitClassCount> present{};
        for (const GroundTruth& t : img.truths) {
            const std::size_t c = index_of(t.fruit);
            present[c] = true;
            ++r.per_class[c].annotation_count;
            ++r.total_annotations;
            switch (img.split) {
                case Split::Training: ++r.per_split_boxes[c].train; break;
                case Split::Validation: ++r.per_split_boxes[c].val; break;
                case Split::Testing: ++r.per_split_boxes[c].test; break;
                case Split::Unassigned: break;
            }
        }
        for (std::size_t c = 0; c < kFruitClassCount; ++c) {
            r.per_class[c].image_count += present[c] ? 1 : 0;
        }
    }
    if (r.non_null_images() != 0) {
        r.avg_objects_per_image =
            static_cast<double>(r.total_annotations) / static_cast<double>(r.non_null_images());
    }
    return r;
}

std::string health_table(const HealthReport& r) {
    std::ostringstream os;
    os << std::left << std::setw(14) << "Class" << std::right << std::setw(10) << "Images"
       << std::setw(13) << "Annotations" << '\n';
    for (FruitClass c : kAllFruitClasses) {
        os << std::left << std::setw(14) << to_string(c) << std::right << std::setw(10)
           << r.stats(c).image_count << std::setw(13) << r.stats(c).annotation_count << '\n';
    }
    os << std::left << std::setw(14) << "Null" << std::right << std::setw(10) << r.null_images
       << std::setw(13) << 0 << '\n';
    os << std::left << std::setw(14) << "Total" << std::right << std::setw(10) << r.non_null_images()
       << std::setw(13) << r.total_annotations << "   (" << r.total_images
       << " images including null)\n";
    os << "average objects per non-null image: " << std::fixed << std::setprecision(2)
       << r.avg_objects_per_image << "\n\n";

    os << std::left << std::setw(14) << "Class" << std::right << std::setw(10) << "Training"
       << std::setw(12) << "Validation" << std::setw(9) << "Testing" << '\n';
    for (FruitClass c : kAllFruitClasses) {
        const SplitBoxes& s = r.split_boxes(c);
        os << std::left << std::setw(14) << to_string(c) << std::right << std::setw(10) << s.train
           << std::setw(12) << s.val << std::setw(9) << s.test << '\n';
    }
    return os.str();
}

Json health_json(const HealthReport& r) {
    Json per_class = Json::object();
    for (FruitClass c : kAllFruitClasses) {
        const SplitBoxes& s = r.split_boxes(c);
        per_class[std::string(to_string(c))] = {{"images", r.stats(c).image_count},
                                               {"annotations", r.stats(c).annotation_count},
                                               {"train", s.train},
                                               {"val", s.val},
                                               {"test", s.test}};
    }
    return Json{{"per_class", per_class},
                {"total_images", r.total_images},
                {"null_images", r.null_images},
                {"total_annotations", r.total_annotations},
                {"avg_objects_per_image", r.avg_objects_per_image}};
}

}  // namespace fruitpal::dataset
