#pragma once

// HTTP front end for RewardEngine:
//   POST /verify, POST /verify_batch, GET /tasks/<id>, POST /tasks, GET /healthz

#include <memory>
#include <stdexcept>
#include <string>

#include "ipt/reward.hpp"

namespace ipt::reward {

class ServiceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RewardService {
public:
    explicit RewardService(RewardConfig config);
    ~RewardService();

    RewardService(const RewardService&) = delete;
    RewardService& operator=(const RewardService&) = delete;

    RewardEngine& engine() noexcept;

    /// Binds; port 0 picks a free one. Returns the bound port. Throws
    /// ServiceError when the address cannot be bound.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires bind().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ipt::reward
