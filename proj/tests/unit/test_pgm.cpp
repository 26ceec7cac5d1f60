#include <doctest.h>

#include <filesystem>
#include <string>

#include "evpipe/errors.hpp"
#include "evpipe/pgm.hpp"

#include "../support/gen.hpp"
#include "../support/synthetic.hpp"

using namespace evpipe;
namespace fs = std::filesystem;

TEST_SUITE("pgm") {

TEST_CASE("encode_pgm emits the canonical header") {
    Frame f = Frame::zeros({3, 2});
    f.at(0, 0) = 7;
    auto bytes = encode_pgm(f);
    std::string head(bytes.begin(), bytes.begin() + 9);
    CHECK(head == "P5\n3 2\n25"); // "P5\n3 2\n255\n" + 6 pixel bytes
    CHECK(bytes.size() == 11 + 6);
}

TEST_CASE("parse_pgm round-trips random frames") {
    gen::Source src(0x96);
    for (int it = 0; it < 50; ++it) {
        Frame f = gen::frame(src, {1 + src.below(40), 1 + src.below(40)});
        CHECK(parse_pgm(encode_pgm(f)) == f);
    }
}

TEST_CASE("parse_pgm accepts header comments") {
    std::string text = "P5\n# made elsewhere\n2 1\n255\nAB";
    Frame f = parse_pgm(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(text.data()), text.size()));
    CHECK(f.geometry == SensorGeometry{2, 1});
    CHECK(f.at(0, 0) == 'A');
    CHECK(f.at(1, 0) == 'B');
}

TEST_CASE("parse_pgm rejects malformed input") {
    auto parse_str = [](const std::string& s) {
        return parse_pgm(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    };
    CHECK_THROWS_AS(parse_str("P6\n1 1\n255\nX"), ParseError);
    CHECK_THROWS_AS(parse_str("P5\n1 1\n65535\n"), ParseError);
    CHECK_THROWS_AS(parse_str("P5\n2 2\n255\nAB"), ParseError); // truncated pixels
    CHECK_THROWS_AS(parse_str("P5\nx 1\n255\nA"), ParseError);
}

TEST_CASE("frame file names are zero-padded") {
    CHECK(frame_file_name(0) == fs::path("frame_00000.pgm"));
    CHECK(frame_file_name(74) == fs::path("frame_00074.pgm"));
}

TEST_CASE("write_frame_sequence writes frames plus meta.json") {
    auto dir = synthetic::scratch_dir("pgm_seq");
    gen::Source src(0x97);
    std::vector<Frame> frames;
    for (int i = 0; i < 3; ++i) frames.push_back(gen::frame(src, {5, 4}));
    SequenceMeta meta{{5, 4}, 25, EncoderKind::Sae, {0, 120'000}};
    write_frame_sequence(dir / "seq", frames, meta);

    for (int i = 0; i < 3; ++i) {
        Frame back = read_pgm_file(dir / "seq" / frame_file_name(std::size_t(i)));
        CHECK(back == frames[std::size_t(i)]);
    }
    auto j = nlohmann::json::parse(read_file_bytes(dir / "seq" / "meta.json"));
    CHECK(j["encoder"] == "sae");
    CHECK(j["fps"] == 25);
    CHECK(j["frames"] == 3);
    CHECK(j["geometry"]["width"] == 5);
    CHECK(j["window"]["t_end_us"] == 120'000);
    fs::remove_all(dir);
}

}
