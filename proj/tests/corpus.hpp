#pragma once

// On-disk synthetic corpus: real frames, fakes with a planted block, landmark
// sidecars and a frame manifest.

#include <filesystem>
#include <string>

#include "support.hpp"

namespace fctest {

namespace fs = std::filesystem;

struct CorpusSpec {
    int real_videos = 4;
    int frames = 2;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 1;
    bool with_sidecars = true;
};

struct Corpus {
    fs::path root;
    fs::path manifest;
    std::size_t rows = 0;
};

// Fresh scratch directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("facecutout_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline Corpus make_corpus(const fs::path& root, const CorpusSpec& spec) {
    Rng rng(spec.seed);
    std::string csv = "video_id,frame_id,path,label,source_video_id\n";
    Corpus c{root, root / "manifest.csv", 0};
    for (int v = 0; v < spec.real_videos; ++v) {
        const std::string real_id = "real" + std::to_string(v);
        const std::string fake_id = "fake" + std::to_string(v);
        for (int f = 0; f < spec.frames; ++f) {
            const auto real = textured_image(spec.width, spec.height, rng);
            const int side = std::min(spec.width, spec.height) / 4;
            const int x0 = static_cast<int>(rng.uniform_int(0, spec.width - side));
            const int y0 = static_cast<int>(rng.uniform_int(0, spec.height - side));
            const auto fake = plant_block(real, x0, y0, side, rng);
            const auto lm = synthetic_face(spec.width, spec.height, &rng, 1.0);
            const std::string rname = "frames/" + real_id + "_" + std::to_string(f) + ".png";
            const std::string fname = "frames/" + fake_id + "_" + std::to_string(f) + ".png";
            io::write_png(root / rname, real);
            io::write_png(root / fname, fake);
            if (spec.with_sidecars) {
                io::write_text(io::sidecar_path(root / rname), io::format_landmarks(lm));
                io::write_text(io::sidecar_path(root / fname), io::format_landmarks(lm));
            }
            csv += real_id + "," + std::to_string(f) + "," + rname + ",REAL,\n";
            csv += fake_id + "," + std::to_string(f) + "," + fname + ",FAKE," + real_id + "\n";
            c.rows += 2;
        }
    }
    io::write_text(c.manifest, csv);
    return c;
}

// Relative path -> file bytes for every regular file below `dir`.
inline std::map<std::string, std::vector<std::uint8_t>> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::vector<std::uint8_t>> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = io::read_bytes(e.path());
    }
    return out;
}

} // namespace fctest
