#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lmx/backend/engine.hpp"
#include "lmx/backend/http_engine.hpp"
#include "lmx/backend/replay.hpp"
#include "lmx/backend/subtree_mock.hpp"
#include "lmx/backend/umda_mock.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/core/error.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/symreg/expr.hpp"
#include "lmx/symreg/parser.hpp"

using namespace lmx;
using namespace lmx::backend;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string::npos) {
            nl = text.size();
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

CompletionRequest request(std::string prompt, double temperature = 1.0)
{
    CompletionRequest r;
    r.prompt = std::move(prompt);
    r.params.temperature = temperature;
    return r;
}

// Local stand-in for a completions server. `handler` gets the parsed body and
// fills the reply.
class FakeServer {
public:
    using Handler = std::function<void(const json&, httplib::Response&)>;

    explicit FakeServer(Handler h) : handler_(std::move(h))
    {
        server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            last_body = json::parse(req.body);
            last_auth = req.get_header_value("Authorization");
            handler_(last_body, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer()
    {
        server_.stop();
        thread_.join();
    }

    [[nodiscard]] HttpEngineConfig config() const
    {
        HttpEngineConfig c;
        c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions";
        c.model = "fake";
        c.max_retries = 2;
        c.initial_backoff = std::chrono::milliseconds(1);
        c.timeout = std::chrono::seconds(5);
        return c;
    }

    std::atomic<int> hits{0};
    json last_body;
    std::string last_auth;

private:
    Handler handler_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

void reply(httplib::Response& res, const json& choice)
{
    res.set_content(json{{"choices", json::array({choice})}}.dump(), "application/json");
}

} // namespace

TEST_CASE("sampling params validation")
{
    SamplingParams p;
    CHECK_NOTHROW(p.validate());
    p.temperature = -0.1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SamplingParams{};
    p.top_p = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SamplingParams{};
    p.top_k = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = SamplingParams{};
    p.max_new_tokens = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("stop sequences cut at the earliest occurrence")
{
    std::string t = "ab\ncd##ef";
    const std::vector<std::string> stops{"##", "\n"};
    CHECK(apply_stop_sequences(t, stops));
    CHECK(t == "ab");
    std::string u = "plain";
    CHECK_FALSE(apply_stop_sequences(u, stops));
    CHECK(u == "plain");
}

TEST_CASE("tempered softmax")
{
    const std::map<std::string, double> lp{{"0", std::log(0.25)}, {"1", std::log(0.75)}};
    auto t1 = tempered_softmax(lp, 1.0);
    CHECK(t1["1"] == doctest::Approx(0.75).epsilon(1e-12));
    auto t0 = tempered_softmax(lp, 0.0);
    CHECK(t0["1"] == 1.0);
    CHECK(t0["0"] == 0.0);
    // oracle: p^(1/T) normalized
    const double T = 0.5;
    const double a = std::pow(0.75, 1 / T), b = std::pow(0.25, 1 / T);
    CHECK(tempered_softmax(lp, T)["1"] == doctest::Approx(a / (a + b)).epsilon(1e-12));
    const double ninf = -std::numeric_limits<double>::infinity();
    auto flat = tempered_softmax({{"a", ninf}, {"b", ninf}}, 1.0);
    CHECK(flat["a"] == 0.5);
}

TEST_CASE("replay engine returns the recorded response")
{
    auto e = make_replay_engine({{"p", "r"}});
    auto resp = e->complete(request("p"));
    CHECK(resp.text == "r");
    CHECK(resp.finish_reason == FinishReason::stop_sequence);
    CHECK(e->remaining() == 0);
    CHECK_THROWS_AS(e->complete(request("q")), ReplayMiss);
    CHECK_THROWS_AS(e->complete(request("p")), ReplayMiss);
}

TEST_CASE("replay matching is by prompt and in order")
{
    ReplayEngine e({{"a", "1"}, {"b", "2"}, {"a", "3"}});
    CHECK(e.complete(request("a")).text == "1");
    CHECK(e.complete(request("a")).text == "3");
    CHECK(e.complete(request("b")).text == "2");

    ReplayEngine seq({{"x", "1"}, {"y", "2"}}, ReplayMatch::sequential);
    CHECK(seq.complete(request("anything")).text == "1");
    CHECK(seq.complete(request("else")).text == "2");
    CHECK_THROWS_AS(seq.complete(request("more")), ReplayMiss);
    try {
        seq.complete(request("more"));
    } catch (const EngineError& err) {
        CHECK_FALSE(err.retryable());
    }
}

TEST_CASE("recording engine keeps exchanges verbatim and round-trips through JSONL")
{
    auto inner = make_replay_engine({{"prompt one\n", "resp\n\"quoted\""}, {"two", "x"}});
    RecordingEngine rec(*inner);
    rec.complete(request("prompt one\n"));
    rec.complete(request("two"));
    auto ex = rec.exchanges();
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].prompt == "prompt one\n");
    CHECK(ex[0].response == "resp\n\"quoted\"");

    const auto path = std::filesystem::temp_directory_path() / "lmx_test_recording.jsonl";
    rec.save_jsonl(path);
    auto loaded = load_recording(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[1].prompt == "two");
    auto replay = make_replay_engine(loaded);
    CHECK(replay->complete(request("prompt one\n")).text == "resp\n\"quoted\"");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_recording(path), ConfigError);
}

TEST_CASE("engines without logprobs raise a capability error")
{
    auto e = make_replay_engine({});
    const std::vector<std::string> cands{"0", "1"};
    CHECK_FALSE(e->supports_logprobs());
    CHECK_THROWS_AS(e->next_token_distribution("x", cands, 1.0), CapabilityError);
}

TEST_CASE("umda mock with unanimous zero parents always emits 00")
{
    UmdaMockEngine e(binary::Codec::underscore, 3);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto req = request("_0_0\n_0_0\n");
        req.params.seed = s;
        for (const auto& line : lines_of(e.complete(req).text)) {
            CHECK(binary::decode(line, binary::Codec::underscore) == std::optional<std::string>("00"));
        }
    }
}

TEST_CASE("umda mock from 11,11 always emits 11")
{
    auto e = make_umda_mock({"11", "11"});
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto req = request("11\n11\n");
        req.params.seed = s;
        for (const auto& line : lines_of(e->complete(req).text)) {
            CHECK(line == "11");
        }
    }
}

TEST_CASE("umda mock next-token distribution reports parent frequencies")
{
    const std::vector<std::string> cands{"0", "1"};
    {
        auto e = make_umda_mock({"10", "10", "10"});
        auto d = e->next_token_distribution("10\n10\n10\n", cands, 1.0);
        CHECK(d.probability("0") == 0.0);
        CHECK(d.probability("1") == 1.0);
    }
    {
        auto e = make_umda_mock({"10", "00"});
        auto d = e->next_token_distribution("10\n00\n", cands, 1.0);
        CHECK(d.probability("0") == 0.5);
        CHECK(d.probability("1") == 0.5);
    }
    {
        auto e = make_umda_mock({"01", "10"});
        CHECK(e->next_token_distribution("01\n10\n", cands, 1.0).probability("1") == 0.5);
    }
    {
        auto e = make_umda_mock({"111", "110", "100", "100"});
        const auto m = e->marginals_for("111\n110\n100\n100\n");
        REQUIRE(m.size() == 3);
        CHECK(m[0] == 1.0);
        CHECK(m[1] == 0.5);
        CHECK(m[2] == 0.25);
        // per-position queries through partial lines
        CHECK(e->next_token_distribution("111\n110\n100\n100\n1", cands, 1.0).probability("1") == 0.5);
        CHECK(e->next_token_distribution("111\n110\n100\n100\n10", cands, 1.0).probability("1") == 0.25);
    }
    {
        auto e = make_umda_mock({"10"});
        const std::vector<std::string> one{"1"};
        auto d = e->next_token_distribution("10\n00\n", one, 1.0);
        CHECK(d.probability("1") == 1.0);
    }
}

TEST_CASE("umda mock underscore prefixes are read bit by bit")
{
    UmdaMockEngine e(binary::Codec::underscore);
    const std::vector<std::string> cands{"0", "1"};
    const std::string prompt = "_1_0_1\n_1_1_1\n_0_0_1\n_0_0_0\n";
    const double expected[] = {0.5, 0.25, 0.75};
    std::string prefix;
    const std::string committed = "101";
    for (std::size_t j = 0; j < 3; ++j) {
        auto d = e.next_token_distribution(prompt + prefix + "_", cands, 1.0);
        CHECK(d.probability("1") == doctest::Approx(expected[j]).epsilon(1e-12));
        CHECK(d.probability("0") + d.probability("1") == doctest::Approx(1.0).epsilon(1e-9));
        prefix += std::string("_") + committed[j];
    }
}

TEST_CASE("umda mock sampling frequencies follow the marginals")
{
    auto e = make_umda_mock({"111", "110", "100", "100"}, binary::Codec::plain, 1);
    std::array<int, 3> ones{};
    const int draws = 4000;
    for (int s = 0; s < draws; ++s) {
        auto req = request("111\n110\n100\n100\n");
        req.params.seed = static_cast<std::uint64_t>(s);
        const auto line = lines_of(e->complete(req).text).at(0);
        REQUIRE(line.size() == 3);
        for (std::size_t j = 0; j < 3; ++j) {
            ones[j] += line[j] == '1';
        }
    }
    CHECK(ones[0] == draws);
    // 5 sigma bounds around 0.5 and 0.25
    CHECK(std::abs(ones[1] / double(draws) - 0.5) < 5 * std::sqrt(0.25 / draws));
    CHECK(std::abs(ones[2] / double(draws) - 0.25) < 5 * std::sqrt(0.1875 / draws));
}

TEST_CASE("umda mock construction errors")
{
    CHECK_THROWS_AS(make_umda_mock({}), ConfigError);
    CHECK_THROWS_AS(make_umda_mock({"10", "1"}), PreconditionError);
    CHECK_THROWS_AS(make_umda_mock({"1a"}), PreconditionError);
}

TEST_CASE("mock engines are deterministic at temperature 0 and honour stops")
{
    auto e = make_umda_mock({"0110", "1010", "1111"});
    auto req = request("0110\n1010\n1111\n", 0.0);
    CHECK(e->complete(req).text == e->complete(req).text);
    CHECK(lines_of(e->complete(req).text).at(0) == "1110");
    req.params.stop = {"\n"};
    const auto text = e->complete(req).text;
    CHECK(text == "1110");
    req.params.stop.clear();
    req.params.max_new_tokens = 2;
    auto cut = e->complete(req);
    CHECK(cut.text.size() == 2);
    CHECK(cut.finish_reason == FinishReason::length);

    auto sub = make_subtree_mock(core::RngStream(1, "sub"));
    auto sreq = request("header\nsin(x1)\ncos(x2)\n", 0.0);
    CHECK(sub->complete(sreq).text == sub->complete(sreq).text);
}

TEST_CASE("subtree mock on single-node parents")
{
    auto e = make_subtree_mock(core::RngStream(3, "sub"));
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto req = request("Below are expressions:\nx1\nx2\n");
        req.params.seed = s;
        const auto child = lines_of(e->complete(req).text).at(0);
        CHECK((child == "x1" || child == "x2"));
    }
}

TEST_CASE("subtree mock children lie in the closure of subtree swaps")
{
    using symreg::Expr;
    const std::vector<Expr> parents{*symreg::parse_expression("sin(x1)"), *symreg::parse_expression("cos(x2)")};
    std::set<std::string> closure;
    for (const auto& a : parents) {
        for (const auto& b : parents) {
            for (std::size_t i = 0; i < symreg::expression_size(a); ++i) {
                for (std::size_t j = 0; j < symreg::expression_size(b); ++j) {
                    Expr c = a;
                    symreg::node_at(c, i) = symreg::node_at(b, j);
                    closure.insert(symreg::to_string(c));
                }
            }
        }
    }
    CHECK(closure.count("sin(x2)") == 1);

    auto e = make_subtree_mock(core::RngStream(9, "sub"));
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 300; ++s) {
        auto req = request("Below are expressions:\nsin(x1)\ncos(x2)\n");
        req.params.seed = s;
        const auto child = lines_of(e->complete(req).text).at(0);
        CHECK(closure.count(child) == 1);
        seen.insert(child);
    }
    CHECK(seen.size() == closure.size());
}

TEST_CASE("subtree mock with nothing parseable returns an empty completion")
{
    auto e = make_subtree_mock(core::RngStream(0, "sub"));
    CHECK(e->complete(request("no expressions here\n< nor here\n")).text.empty());
}

TEST_CASE("http engine speaks the completions protocol")
{
    FakeServer server([](const json& body, httplib::Response& res) {
        reply(res, {{"text", "0101\n1100\n##tail"}, {"finish_reason", "stop"}});
        (void)body;
    });
    auto cfg = server.config();
    cfg.authorization = "Bearer secret";
    HttpEngine e(cfg);
    auto req = request("1\n2\n3\n4\n", 0.8);
    req.params.top_k = 30;
    req.params.top_p = 0.8;
    req.params.max_new_tokens = 40;
    req.params.stop = {"##"};
    req.params.seed = 11;
    auto resp = e.complete(req);
    CHECK(resp.text == "0101\n1100\n");
    CHECK(resp.finish_reason == FinishReason::stop_sequence);
    CHECK(server.last_body["prompt"] == "1\n2\n3\n4\n");
    CHECK(server.last_body["model"] == "fake");
    CHECK(server.last_body["max_tokens"] == 40);
    CHECK(server.last_body["top_k"] == 30);
    CHECK(server.last_body["top_p"] == 0.8);
    CHECK(server.last_body["temperature"] == 0.8);
    CHECK(server.last_body["seed"] == 11);
    CHECK(server.last_body["stop"] == json::array({"##"}));
    CHECK_FALSE(server.last_body.contains("logprobs"));
    CHECK(server.last_auth == "Bearer secret");
}

TEST_CASE("http engine reports length finishes and logprobs")
{
    FakeServer server([](const json&, httplib::Response& res) {
        reply(res, {{"text", "01"},
                    {"finish_reason", "length"},
                    {"logprobs",
                     {{"tokens", {"0", "1"}},
                      {"token_logprobs", {-0.5, -0.25}},
                      {"top_logprobs", {{{"0", -0.5}, {"1", -1.0}}, {{"1", -0.25}, {"0", -1.5}}}}}}});
    });
    HttpEngine e(server.config());
    auto req = request("x");
    req.want_logprobs = true;
    auto resp = e.complete(req);
    CHECK(resp.finish_reason == FinishReason::length);
    REQUIRE(resp.token_logprobs);
    REQUIRE(resp.token_logprobs->size() == 2);
    CHECK((*resp.token_logprobs)[1].token == "1");
    CHECK((*resp.token_logprobs)[1].top.front().token == "1");
    CHECK(server.last_body["logprobs"] == 5);
}

TEST_CASE("http next-token distribution renormalizes over candidates")
{
    FakeServer server([](const json& body, httplib::Response& res) {
        CHECK(body["max_tokens"] == 1);
        reply(res, {{"text", "1"},
                    {"finish_reason", "length"},
                    {"logprobs",
                     {{"tokens", {"1"}},
                      {"token_logprobs", {std::log(0.6)}},
                      {"top_logprobs", {{{"1", std::log(0.6)}, {"0", std::log(0.2)}, {" ", std::log(0.1)}}}}}}});
    });
    HttpEngine e(server.config());
    const std::vector<std::string> cands{"0", "1"};
    auto d = e.next_token_distribution("_1_0_", cands, 1.0);
    CHECK(d.probability("1") == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(d.probability("0") == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_FALSE(d.approximated);

    const std::vector<std::string> missing{"1", "7"};
    auto m = e.next_token_distribution("_1_0_", missing, 1.0);
    CHECK(m.approximated);
    CHECK(m.probability("1") + m.probability("7") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("http engine retries 5xx and then gives up with a retryable error")
{
    std::atomic<int> calls{0};
    FakeServer flaky([&](const json&, httplib::Response& res) {
        if (++calls < 3) {
            res.status = 503;
            res.set_content("busy", "text/plain");
            return;
        }
        reply(res, {{"text", "ok"}, {"finish_reason", "stop"}});
    });
    HttpEngine e(flaky.config());
    CHECK(e.complete(request("p")).text == "ok");
    CHECK(calls.load() == 3);

    FakeServer down([](const json&, httplib::Response& res) { res.status = 500; });
    HttpEngine d(down.config());
    try {
        d.complete(request("p"));
        FAIL("expected an EngineError");
    } catch (const EngineError& err) {
        CHECK(err.retryable());
    }
    CHECK(down.hits.load() == 3);
}

TEST_CASE("http engine client errors are not retried")
{
    FakeServer bad([](const json&, httplib::Response& res) {
        res.status = 400;
        res.set_content("bad request", "text/plain");
    });
    HttpEngine e(bad.config());
    try {
        e.complete(request("p"));
        FAIL("expected an EngineError");
    } catch (const EngineError& err) {
        CHECK_FALSE(err.retryable());
        CHECK(std::string(err.what()).find("bad request") != std::string::npos);
    }
    CHECK(bad.hits.load() == 1);

    FakeServer garbage([](const json&, httplib::Response& res) { res.set_content("not json", "application/json"); });
    HttpEngine g(garbage.config());
    CHECK_THROWS_AS(g.complete(request("p")), EngineError);
}

TEST_CASE("http engine transport failure is retryable")
{
    HttpEngineConfig c;
    c.endpoint = "http://127.0.0.1:1/v1/completions";
    c.max_retries = 1;
    c.initial_backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::seconds(2);
    HttpEngine e(c);
    try {
        e.complete(request("p"));
        FAIL("expected an EngineError");
    } catch (const EngineError& err) {
        CHECK(err.retryable());
    }
}

TEST_CASE("http engine capability errors")
{
    FakeServer plain([](const json&, httplib::Response& res) { reply(res, {{"text", "1"}}); });
    HttpEngine e(plain.config());
    const std::vector<std::string> cands{"0", "1"};
    CHECK_THROWS_AS(e.next_token_distribution("x", cands, 1.0), CapabilityError);

    auto cfg = plain.config();
    cfg.supports_logprobs = false;
    HttpEngine off(cfg);
    CHECK_FALSE(off.supports_logprobs());
    CHECK_THROWS_AS(off.next_token_distribution("x", cands, 1.0), CapabilityError);
    CHECK(plain.hits.load() == 1);
}

TEST_CASE("http engine rejects non-http endpoints")
{
    HttpEngineConfig c;
    c.endpoint = "localhost:8000";
    CHECK_THROWS_AS(HttpEngine{c}, ConfigError);
    c.endpoint = "https://example.invalid/v1/completions";
    CHECK_THROWS_AS(HttpEngine{c}, ConfigError);
}

TEST_CASE("http engine against a live shim is reproducible at temperature 0")
{
    const char* url = std::getenv("LMX_SHIM_URL");
    if (!url) {
        MESSAGE("LMX_SHIM_URL not set; live shim check skipped");
        return;
    }
    HttpEngineConfig c;
    c.endpoint = url;
    HttpEngine e(c);
    auto req = request("1\n2\n3\n4\n", 0.0);
    req.params.seed = 1234;
    req.params.max_new_tokens = 16;
    CHECK(e.complete(req).text == e.complete(req).text);
}
