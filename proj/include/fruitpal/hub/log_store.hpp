#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include "fruitpal/hub/message.hpp"

namespace fruitpal::hub {

/// Durable, append-only message log. append() either persists the message or
/// throws PublishError.
class LogStore {
public:
    virtual ~LogStore() = default;
    virtual void append(const HubMessage& m) = 0;
    virtual std::vector<HubMessage> load() const = 0;
};

class MemoryLogStore final : public LogStore {
public:
    void append(const HubMessage& m) override;
    std::vector<HubMessage> load() const override { return messages_; }

    /// The next n appends fail, as a full disk would.
    void fail_next(unsigned n) { failures_ = n; }
    std::size_t size() const noexcept { return messages_.size(); }

private:
    std::vector<HubMessage> messages_;
    unsigned failures_ = 0;
};

/// One JSON message per line. A torn final line (crash mid-write) is ignored
/// on load; damage anywhere else is a ParseError.
class FileLogStore final : public LogStore {
public:
    explicit FileLogStore(std::filesystem::path path);

    void append(const HubMessage& m) override;
    std::vector<HubMessage> load() const override;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace fruitpal::hub
