// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <string>

#include "gweval/rng.hpp"
#include "gweval/sha256.hpp"

using namespace gweval;

TEST_CASE("digest of the empty message") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("digest of abc") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("digest of the 448-bit reference message") {
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("digest of the 896-bit reference message") {
  CHECK(sha256_hex("abcdefghbcdefghicdefghijdefghijkefghijklfghijklmghijklmn"
                   "hijklmnoijklmnopjklmnopqklmnopqrlmnopqrsmnopqrstnopqrstu") ==
        "cf5b16a778af8380036ce59e7b0492370b249b11e8f07a51afac45037afee9d1");
}

TEST_CASE("digest of one million a characters") {
  Sha256 h;
  const std::string chunk(1000, 'a');
  for (int i = 0; i < 1000; ++i) h.update(chunk);
  CHECK(h.hex_digest() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("streaming in odd-sized pieces matches the one-shot digest") {
  SeededRng rng(801);
  std::string message;
  for (int i = 0; i < 10000; ++i) {
    message.push_back(static_cast<char>(rng.uniform_int(256)));
  }
  for (int iter = 0; iter < 10; ++iter) {
    Sha256 h;
    std::size_t pos = 0;
    while (pos < message.size()) {
      const std::size_t step = std::min<std::size_t>(
          1 + rng.uniform_int(257), message.size() - pos);
      h.update(message.data() + pos, step);
      pos += step;
    }
    REQUIRE(h.hex_digest() == sha256_hex(message));
  }
}

TEST_CASE("block boundary lengths hash correctly") {
  // 55, 56, 63, 64 and 65 bytes straddle the padding cutoffs.
  for (const std::size_t n : {55u, 56u, 63u, 64u, 65u}) {
    const std::string msg(n, 'x');
    Sha256 split;
    split.update(msg.substr(0, n / 2));
    split.update(msg.substr(n / 2));
    REQUIRE(split.hex_digest() == sha256_hex(msg));
  }
}

TEST_CASE("reset restores a fresh state") {
  Sha256 h;
  h.update("garbage");
  h.reset();
  h.update("abc");
  CHECK(h.hex_digest() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
