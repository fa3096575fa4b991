#include <doctest.h>

#include <array>
#include <fstream>

#include "srkit/dataset.hpp"
#include "testutil.hpp"

using namespace srkit;

TEST_CASE("extract_patches is deterministic per seed") {
  const ImageF32 hr = testutil::synthetic_image(96, 96, 1);
  const SamplePair pair = make_pair(hr, 4, "p");
  const PatchBatch a = extract_patches(pair, 16, 1234);
  const PatchBatch b = extract_patches(pair, 16, 1234);
  REQUIRE(a.inputs.size() == 16);
  for (int k = 0; k < 16; ++k) {
    CHECK(a.inputs[k].data == b.inputs[k].data);
    CHECK(a.targets[k].data == b.targets[k].data);
  }
  const PatchBatch c = extract_patches(pair, 16, 1235);
  bool any_different = false;
  for (int k = 0; k < 16; ++k)
    if (a.inputs[k].data != c.inputs[k].data) any_different = true;
  CHECK(any_different);
}

TEST_CASE("48x48 pair admits exactly the zero-offset crop") {
  const ImageF32 hr = testutil::synthetic_image(48, 48, 2);
  const SamplePair pair = make_pair(hr, 4, "tiny");
  const PatchBatch batch = extract_patches(pair, 1, 99);
  REQUIRE(batch.inputs.size() == 1);
  CHECK(batch.targets[0].data == pair.hr.data);
  CHECK(batch.inputs[0].data == pair.lr_up.data);
}

TEST_CASE("patch coordinates match between input and target") {
  const ImageF32 hr = testutil::synthetic_image(80, 80, 3);
  const SamplePair pair = make_pair(hr, 2, "c");
  const PatchBatch batch = extract_patches(pair, 8, 7);
  for (int k = 0; k < 8; ++k) {
    // locate the target patch inside hr by scanning offsets; verify the
    // input patch sits at the same offset of lr_up
    bool found = false;
    for (int top = 0; top + kPatchSize <= pair.hr.height && !found; ++top)
      for (int left = 0; left + kPatchSize <= pair.hr.width && !found; ++left) {
        bool match = true;
        for (int y = 0; y < kPatchSize && match; y += 7)
          for (int x = 0; x < kPatchSize && match; x += 7)
            if (batch.targets[k].at(0, y, x) != pair.hr.at(0, top + y, left + x))
              match = false;
        if (!match) continue;
        match = true;
        for (int y = 0; y < kPatchSize && match; ++y)
          for (int x = 0; x < kPatchSize && match; ++x)
            if (batch.inputs[k].at(1, y, x) != pair.lr_up.at(1, top + y, left + x))
              match = false;
        if (match) found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("extract_patches rejects undersized images") {
  const ImageF32 hr = testutil::synthetic_image(40, 64, 4);
  const SamplePair pair = make_pair(hr, 4, "small");
  CHECK_THROWS(extract_patches(pair, 1, 0));
}

TEST_CASE("dihedral transforms: group identities") {
  const ImageF32 img = testutil::random_image<float>(9, 9, 3, 5);

  ImageF32 r = img;
  for (int k = 0; k < 4; ++k) r = rotate90_ccw(r);
  CHECK(r.data == img.data);

  CHECK(flip_horizontal(flip_horizontal(img)).data == img.data);

  // spot-check the quarter turn: (y,x) of the output reads (x, w-1-y)
  const ImageF32 q = rotate90_ccw(img);
  CHECK(q.at(0, 0, 0) == img.at(0, 0, img.width - 1));
  CHECK(q.at(2, 3, 1) == img.at(2, 1, img.width - 1 - 3));

  CHECK_THROWS(apply_dihedral(testutil::random_image<float>(4, 5, 1, 6), 1));
}

TEST_CASE("augment applies one transform to both patches") {
  const ImageF32 in = testutil::random_image<float>(12, 12, 3, 7);
  const ImageF32 tgt = testutil::random_image<float>(12, 12, 3, 8);
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    const auto [ai, at] = augment(in, tgt, seed);
    bool matched = false;
    for (int k = 0; k < 8; ++k) {
      if (apply_dihedral(in, k).data == ai.data) {
        CHECK(apply_dihedral(tgt, k).data == at.data);
        matched = true;
        break;
      }
    }
    CHECK(matched);
  }
}

TEST_CASE("augment draws all 8 transforms uniformly") {
  const ImageF32 in = testutil::random_image<float>(6, 6, 1, 9);
  const ImageF32 tgt = in;
  std::array<ImageF32, 8> variants;
  for (int k = 0; k < 8; ++k) variants[k] = apply_dihedral(in, k);
  // the variants must be distinct for the histogram to be meaningful
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      REQUIRE(variants[a].data != variants[b].data);

  std::array<int, 8> histogram{};
  for (std::uint64_t seed = 0; seed < 8000; ++seed) {
    const auto [ai, at] = augment(in, tgt, derive_seed(424242, 1, seed));
    for (int k = 0; k < 8; ++k)
      if (variants[k].data == ai.data) {
        ++histogram[k];
        break;
      }
  }
  int total = 0;
  for (int k = 0; k < 8; ++k) {
    CHECK(histogram[k] >= 950);   // 1000 +- 5%
    CHECK(histogram[k] <= 1050);
    total += histogram[k];
  }
  CHECK(total == 8000);
}

TEST_CASE("degrade_directory writes mirrors and a manifest") {
  const auto src = testutil::fresh_temp_dir("degrade_src");
  const auto dst = testutil::fresh_temp_dir("degrade_dst");
  testutil::write_synthetic_corpus(src, 3, 64, 56, 77);

  const int n = degrade_directory(src, dst, 4);
  CHECK(n == 3);
  const auto lr_files = list_image_files(dst / "lr");
  const auto lr_up_files = list_image_files(dst / "lr_up");
  REQUIRE(lr_files.size() == 3);
  REQUIRE(lr_up_files.size() == 3);
  const ImageF32 lr = load_image(lr_files[0]);
  CHECK(lr.height == 16);
  CHECK(lr.width == 14);
  const ImageF32 lr_up = load_image(lr_up_files[0]);
  CHECK(lr_up.height == 64);
  CHECK(lr_up.width == 56);

  std::ifstream manifest(dst / "manifest.csv");
  std::string line;
  REQUIRE(std::getline(manifest, line));
  CHECK(line == "source_id,hr_h,hr_w,scale");
  REQUIRE(std::getline(manifest, line));
  CHECK(line == "img000,64,56,4");
}
