#include <vector>

#include <gtest/gtest.h>

#include "indyforge/errors.hpp"
#include "indyforge/synthetic.hpp"
#include "indyforge/transport.hpp"

namespace {

using namespace indyforge;
using namespace indyforge::netsim;

Envelope sample(std::uint64_t id) {
  const auto e = synthetic::steward(5);
  Envelope env;
  env.id = id;
  env.from = {"10.0.0.2", 9701};
  env.to = {"fd00::1", 9702};
  env.msg = {MessageKind::Ordered, 7, {e.steward.did, genesis::node_txn_for(e.validator)}};
  return env;
}

TEST(Transport, FrameRoundTrip) {
  const auto env = sample(3);
  const auto frame = encode_frame(env);
  const auto body = to_json(env).dump();
  ASSERT_EQ(frame.size(), body.size() + 4);
  const std::size_t len = (std::size_t{frame[0]} << 24) | (std::size_t{frame[1]} << 16) |
                          (std::size_t{frame[2]} << 8) | frame[3];
  EXPECT_EQ(len, body.size());

  std::size_t consumed = 0;
  for (std::size_t cut = 0; cut < frame.size(); cut += 37) {
    EXPECT_FALSE(decode_frame(std::span(frame).first(cut), consumed).has_value());
  }
  auto two = frame;
  two.insert(two.end(), frame.begin(), frame.end());
  const auto back = decode_frame(two, consumed);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, env);
  EXPECT_EQ(consumed, frame.size());
}

TEST(Transport, EnvelopeJsonRejectsGarbage) {
  EXPECT_THROW(envelope_from_json(nlohmann::json::object()), Error);
  auto j = to_json(sample(1));
  j["msg"]["kind"] = "Shout";
  EXPECT_THROW(envelope_from_json(j), Error);
}

void exercise(Transport& t) {
  const Endpoint a{"10.0.0.2", 9701}, b{"10.0.0.3", 9701};
  t.bind(a);
  t.bind(b);
  EXPECT_TRUE(t.collect().empty());
  auto e3 = sample(3), e1 = sample(1), e2 = sample(2);
  e3.to = b;
  e1.to = a;
  e2.to = b;
  t.send(e3);
  t.send(e1);
  t.send(e2);
  const auto got = t.collect();
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0], e1);
  EXPECT_EQ(got[1], e2);
  EXPECT_EQ(got[2], e3);
  EXPECT_EQ(t.in_flight(), 0u);
  auto stray = sample(4);
  stray.to = {"10.9.9.9", 1};
  try {
    t.send(stray);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::UnknownNode);
  }
}

TEST(Transport, InProc) {
  auto t = make_inproc_transport();
  exercise(*t);
}

TEST(Transport, LoopbackTcp) {
  auto t = make_tcp_transport();
  exercise(*t);
}

}  // namespace
