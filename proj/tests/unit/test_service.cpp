#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>

#include "ipt/service.hpp"

using namespace ipt::reward;
using nlohmann::json;

namespace {

const char* kToyTask =
    "% id: toy3\n"
    "has_car(train0,car0). car_color(car0,red).\n"
    "has_car(train1,car1). car_color(car1,blue).\n"
    "eastbound(train0). westbound(train1).\n";

class live_service : public ::testing::Test {
protected:
    void SetUp() override {
        RewardConfig c;
        c.mode = Mode::isomorphic;
        c.max_request_bytes = 64 * 1024;
        service_ = std::make_unique<RewardService>(c);
        port_ = service_->bind("127.0.0.1", 0);
        thread_ = std::thread([this] { service_->listen(); });
        service_->wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        client_->set_read_timeout(30);
    }

    void TearDown() override {
        service_->stop();
        thread_.join();
    }

    httplib::Result post(const std::string& path, const json& body) {
        return client_->Post(path, body.dump(), "application/json");
    }

    std::unique_ptr<RewardService> service_;
    std::unique_ptr<httplib::Client> client_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace

TEST_F(live_service, healthz) {
    auto res = client_->Get("/healthz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto j = json::parse(res->body);
    EXPECT_EQ(j.at("status"), "ok");
    EXPECT_EQ(j.at("mode"), "isomorphic");
}

TEST_F(live_service, verify_fixtures) {
    auto res = post("/verify", {{"task", kToyTask}, {"hypothesis", "eastbound(T) :- has_car(T,C), car_color(C,red)."}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type").rfind("application/json", 0), 0u);
    EXPECT_EQ(json::parse(res->body).at("reward"), 10.0);

    res = post("/verify", {{"task", kToyTask}, {"hypothesis", "eastbound(train0)."}});
    ASSERT_TRUE(res);
    const auto j = json::parse(res->body);
    EXPECT_EQ(j.at("reward"), 0.0);
    EXPECT_EQ(j.at("shortcut"), true);
}

TEST_F(live_service, verify_batch) {
    json batch = json::array({json{{"task", kToyTask}, {"hypothesis", "eastbound(train0)."}},
                              json{{"task", kToyTask}, {"hypothesis", "eastbound(T) :- has_car(T,C)."}}});
    auto res = post("/verify_batch", batch);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto results = json::parse(res->body).at("results");
    ASSERT_EQ(results.size(), 2u);
    EXPECT_EQ(results[0], service_->engine().verify(batch[0]));
    EXPECT_EQ(results[1].at("pass_ext"), false);
}

TEST_F(live_service, register_and_fetch_task) {
    auto res = client_->Post("/tasks", kToyTask, "text/plain");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    res = client_->Post("/tasks", kToyTask, "text/plain");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    res = client_->Get("/tasks/toy3");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(ipt::tasks::task_from_json(json::parse(res->body)), ipt::tasks::parse_task(kToyTask));

    res = post("/verify", {{"task_id", "toy3"}, {"hypothesis", "eastbound(train0)."}});
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body).at("reward_ext"), 10.0);

    res = client_->Get("/tasks/nope");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(json::parse(res->body).at("error").at("code"), "unknown_task");
}

TEST_F(live_service, structured_errors) {
    auto res = client_->Post("/verify", "{broken", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body).at("error").at("code"), "bad_json");

    res = client_->Post("/verify", std::string(128 * 1024, 'x'), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 413);
    EXPECT_EQ(json::parse(res->body).at("error").at("code"), "payload_too_large");

    res = client_->Get("/no/such/route");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    EXPECT_TRUE(json::parse(res->body).contains("error"));
}

TEST_F(live_service, concurrent_clients) {
    std::vector<std::thread> workers;
    std::atomic<int> ok{0};
    for (int w = 0; w < 8; ++w)
        workers.emplace_back([&] {
            httplib::Client c("127.0.0.1", port_);
            for (int i = 0; i < 10; ++i) {
                auto r = c.Post("/verify",
                                json{{"task", kToyTask}, {"hypothesis", "eastbound(train0)."}}.dump(),
                                "application/json");
                if (r && r->status == 200 && json::parse(r->body).at("reward") == 0.0) ++ok;
            }
        });
    for (auto& t : workers) t.join();
    EXPECT_EQ(ok.load(), 80);
}

TEST(reward_service, bind_failure) {
    RewardService a{RewardConfig{}};
    const int port = a.bind("127.0.0.1", 0);
    RewardService b{RewardConfig{}};
    EXPECT_THROW(b.bind("127.0.0.1", port), ServiceError);
}
