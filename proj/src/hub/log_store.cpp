#include "fruitpal/hub/log_store.hpp"

#include <iterator>

#include "fruitpal/core/errors.hpp"

namespace fruitpal::hub {

void MemoryLogStore::append(const HubMessage& m) {
    if (failures_ > 0) {
        --failures_;
        throw PublishError("log store unavailable");
    }
    messages_.push_back(m);
}

FileLogStore::FileLogStore(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    // Drop a torn tail so the next append starts on a fresh line.
    if (std::filesystem::exists(path_)) {
        std::ifstream in(path_, std::ios::binary);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (!text.empty() && text.back() != '\n') {
            const auto keep = text.find_last_of('\n');
            std::filesystem::resize_file(path_, keep == std::string::npos ? 0 : keep + 1);
        }
    }
    out_.open(path_, std::ios::app | std::ios::binary);
    if (!out_) throw PublishError("cannot open hub log " + path_.string());
}

void FileLogStore::append(const HubMessage& m) {
    out_ << message_to_json(m).dump() << '\n';
    out_.flush();
    if (!out_) throw PublishError("write to hub log " + path_.string() + " failed");
}

std::vector<HubMessage> FileLogStore::load() const {
    std::ifstream in(path_, std::ios::binary);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) lines.push_back(std::move(line));
    }
    std::vector<HubMessage> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            out.push_back(message_from_json(Json::parse(lines[i])));
        } catch (const std::exception& e) {
            if (i + 1 == lines.size()) break;
            throw ParseError("hub log " + path_.string() + " line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace fruitpal::hub
