#include "tricount/channel.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "doctest.h"

using namespace tricount;

TEST_CASE("buffered channel delivers in order and signals close") {
  Channel<int> ch(4);
  std::thread producer([&] {
    for (int i = 0; i < 100; ++i) ch.send(i);
    ch.close();
  });
  int expected = 0;
  while (auto v = ch.recv()) CHECK(*v == expected++);
  CHECK(expected == 100);
  producer.join();
}

TEST_CASE("rendezvous send completes only after the receive") {
  Channel<int> ch(0);
  std::atomic<bool> sent{false};
  std::thread producer([&] {
    ch.send(42);
    sent = true;
    ch.close();
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  CHECK(!sent.load());
  auto v = ch.recv();
  REQUIRE(v.has_value());
  CHECK(*v == 42);
  producer.join();
  CHECK(sent.load());
  CHECK(!ch.recv().has_value());
}

TEST_CASE("bounded capacity blocks the producer") {
  Channel<int> ch(2);
  std::atomic<int> produced{0};
  std::thread producer([&] {
    for (int i = 0; i < 10; ++i) {
      ch.send(i);
      ++produced;
    }
    ch.close();
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  CHECK(produced.load() <= 3);  // capacity 2 in flight, one more mid-send
  int count = 0;
  while (ch.recv()) ++count;
  CHECK(count == 10);
  producer.join();
}

TEST_CASE("recv_some drains batches") {
  Channel<int> ch(64);
  for (int i = 0; i < 10; ++i) ch.send(i);
  ch.close();
  std::vector<int> got;
  while (ch.recv_some(got, 4)) {
  }
  CHECK(got == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("multiple producers all complete") {
  Channel<int> ch(1);
  std::atomic<int> left{4};
  std::vector<std::thread> producers;
  for (int p = 0; p < 4; ++p)
    producers.emplace_back([&] {
      for (int i = 0; i < 50; ++i) ch.send(i);
      if (left.fetch_sub(1) == 1) ch.close();
    });
  int count = 0;
  while (ch.recv()) ++count;
  CHECK(count == 200);
  for (auto& t : producers) t.join();
}
