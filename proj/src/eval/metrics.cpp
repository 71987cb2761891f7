#include "fruitpal/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "fruitpal/core/errors.hpp"

namespace fruitpal::eval {

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidValue(std::string(what) + " outside [0,1]");
    }
}

std::vector<std::size_t> confidence_order(std::span<const Detection> preds) {
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return preds[a].confidence > preds[b].confidence;
    });
    return order;
}

}  // namespace

MatchResult match_detections(std::span<const Detection> preds, std::span<const GroundTruth> truths,
                             double iou_threshold, ClassGate gate) {
    check_unit(iou_threshold, "IoU threshold");

    MatchResult result;
    std::vector<bool> pred_matched(preds.size(), false);
    std::vector<bool> truth_taken(truths.size(), false);

    for (std::size_t di : confidence_order(preds)) {
        const Detection& d = preds[di];
        std::size_t best = truths.size();
        double best_iou = -1.0;
        for (std::size_t ti = 0; ti < truths.size(); ++ti) {
            if (truth_taken[ti]) {
                continue;
            }
            if (gate == ClassGate::SameClass && truths[ti].fruit != d.fruit) {
                continue;
            }
            const double v = iou(d.box, truths[ti].box);
            if (v >= iou_threshold && v > best_iou) {
                best = ti;
                best_iou = v;
            }
        }
        if (best != truths.size()) {
            truth_taken[best] = true;
            pred_matched[di] = true;
            result.pairs.push_back({di, best, best_iou});
        }
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!pred_matched[i]) {
            result.unmatched_detections.push_back(i);
        }
    }
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (!truth_taken[i]) {
            result.unmatched_truths.push_back(i);
        }
    }
    return result;
}

PRCurve pr_curve(std::span<const ImageSample> samples, FruitClass fruit, double iou_threshold) {
    struct Scored {
        double confidence;
        std::size_t image;
        std::size_t index;
        bool tp;
    };
    std::vector<Scored> scored;
    PRCurve curve;

    for (std::size_t img = 0; img < samples.size(); ++img) {
        std::vector<Detection> preds;
        std::vector<std::size_t> original;
        for (std::size_t i = 0; i < samples[img].preds.size(); ++i) {
            if (samples[img].preds[i].fruit == fruit) {
                preds.push_back(samples[img].preds[i]);
                original.push_back(i);
            }
        }
        std::vector<GroundTruth> truths;
        for (const GroundTruth& t : samples[img].truths) {
            if (t.fruit == fruit) {
                truths.push_back(t);
            }
        }
        curve.num_truths += truths.size();

        const MatchResult m = match_detections(preds, truths, iou_threshold);
        std::vector<bool> tp(preds.size(), false);
        for (const MatchPair& p : m.pairs) {
            tp[p.detection] = true;
        }
        for (std::size_t i = 0; i < preds.size(); ++i) {
            scored.push_back({preds[i].confidence, img, original[i], tp[i]});
        }
    }

    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.confidence != b.confidence) {
            return a.confidence > b.confidence;
        }
        return std::tie(a.image, a.index) < std::tie(b.image, b.index);
    });

    std::size_t tp = 0;
    for (std::size_t k = 0; k < scored.size(); ++k) {
        tp += scored[k].tp ? 1 : 0;
        const double recall =
            curve.num_truths == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(curve.num_truths);
        const double precision = static_cast<double>(tp) / static_cast<double>(k + 1);
        curve.points.push_back({recall, precision});
    }
    return curve;
}

double average_precision(const PRCurve& curve) {
    if (curve.num_truths == 0 || curve.points.empty()) {
        return 0.0;
    }
    // Suffix maximum of precision turns "best precision at recall >= r" into
    // a single scan; recall is non-decreasing along the curve.
    std::vector<double> envelope(curve.points.size());
    double running = 0.0;
    for (std::size_t i = curve.points.size(); i-- > 0;) {
        running = std::max(running, curve.points[i].precision);
        envelope[i] = running;
    }
    double sum = 0.0;
    std::size_t k = 0;
    for (int step = 0; step <= 100; ++step) {
        const double r = static_cast<double>(step) / 100.0;
        while (k < curve.points.size() && curve.points[k].recall < r) {
            ++k;
        }
        if (k == curve.points.size()) {
            break;
        }
        sum += envelope[k];
    }
    return sum / 101.0;
}

ClassAp map_at(std::span<const ImageSample> samples, double iou_threshold) {
    check_unit(iou_threshold, "IoU threshold");
    ClassAp out;
    double sum = 0.0;
    for (FruitClass c : kAllFruitClasses) {
        const PRCurve curve = pr_curve(samples, c, iou_threshold);
        if (curve.num_truths == 0) {
            continue;
        }
        const double ap = average_precision(curve);
        out.per_class.emplace(c, ap);
        sum += ap;
    }
    if (!out.per_class.empty()) {
        out.mean = sum / static_cast<double>(out.per_class.size());
    }
    return out;
}

std::array<double, 10> coco_iou_thresholds() {
    std::array<double, 10> t{};
    for (int i = 0; i < 10; ++i) {
        t[i] = static_cast<double>(50 + 5 * i) / 100.0;
    }
    return t;
}

double map_50_95(std::span<const ImageSample> samples) {
    double sum = 0.0;
    double first = 0.0;
    for (double t : coco_iou_thresholds()) {
        const double m = map_at(samples, t).mean;
        if (t == 0.5) {
            first = m;
        }
        sum += m;
    }
    // The terms are non-increasing, so the mean never exceeds the first one;
    // clamp away the rounding of the sum.
    return std::min(sum / 10.0, first);
}

ConfusionMatrix confusion_matrix(std::span<const ImageSample> samples, double conf_threshold,
                                 double iou_threshold) {
    check_unit(conf_threshold, "confidence threshold");
    ConfusionMatrix m{};
    for (const ImageSample& s : samples) {
        std::vector<Detection> preds;
        std::copy_if(s.preds.begin(), s.preds.end(), std::back_inserter(preds),
                     [&](const Detection& d) { return d.confidence >= conf_threshold; });
        const MatchResult r = match_detections(preds, s.truths, iou_threshold, ClassGate::AnyClass);
        for (const MatchPair& p : r.pairs) {
            ++m[index_of(s.truths[p.truth].fruit)][index_of(preds[p.detection].fruit)];
        }
        for (std::size_t t : r.unmatched_truths) {
            ++m[index_of(s.truths[t].fruit)][kBackground];
        }
        for (std::size_t d : r.unmatched_detections) {
            ++m[kBackground][index_of(preds[d].fruit)];
        }
    }
    return m;
}

OperatingPoint operating_point(std::span<const ImageSample> samples, double conf_threshold,
                               double iou_threshold) {
    check_unit(conf_threshold, "confidence threshold");
    OperatingPoint op;
    for (const ImageSample& s : samples) {
        std::vector<Detection> preds;
        std::copy_if(s.preds.begin(), s.preds.end(), std::back_inserter(preds),
                     [&](const Detection& d) { return d.confidence >= conf_threshold; });
        const MatchResult r = match_detections(preds, s.truths, iou_threshold);
        op.true_positives += r.pairs.size();
        op.false_positives += r.unmatched_detections.size();
        op.false_negatives += r.unmatched_truths.size();
    }
    const auto tp = static_cast<double>(op.true_positives);
    const auto predicted = static_cast<double>(op.true_positives + op.false_positives);
    const auto actual = static_cast<double>(op.true_positives + op.false_negatives);
    op.precision = predicted == 0.0 ? 0.0 : tp / predicted;
    op.recall = actual == 0.0 ? 0.0 : tp / actual;
    return op;
}

EvalReport evaluate(std::span<const ImageSample> samples, const EvalOptions& options) {
    check_unit(options.conf_threshold, "confidence threshold");
    check_unit(options.iou_threshold, "IoU threshold");

    EvalReport report;
    report.options = options;
    report.images = samples.size();
    const ClassAp at50 = map_at(samples, 0.5);
    report.per_class_ap = at50.per_class;
    report.map50 = at50.mean;
    report.map50_95 = map_50_95(samples);
    const OperatingPoint op = operating_point(samples, options.conf_threshold, options.iou_threshold);
    report.precision = op.precision;
    report.recall = op.recall;
    report.confusion = confusion_matrix(samples, options.conf_threshold, options.iou_threshold);
    return report;
}

}  // namespace fruitpal::eval
