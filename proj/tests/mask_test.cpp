/* Copyright 2026 The Coralab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "coralab/mask.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "coralab/error.h"
#include "coralab/rle_json.h"
#include "coralab/semantic.h"
#include "test_util.h"

namespace coralab {
namespace {

using ::coralab::testing::BruteForceCounts;
using ::coralab::testing::BruteForceErode;
using ::coralab::testing::Popcount;
using ::coralab::testing::RandomRaster;

BinaryRaster TopLeftOnly() {
  BinaryRaster r(2, 2);
  r.set(0, 0, true);
  return r;
}

TEST(RleEncodeTest, Examples) {
  EXPECT_EQ(RleEncode(BinaryRaster(2, 2)).counts(),
            (std::vector<uint32_t>{4}));
  EXPECT_EQ(RleEncode(BinaryRaster(2, 2, {1, 1, 1, 1})).counts(),
            (std::vector<uint32_t>{0, 4}));
  EXPECT_EQ(RleEncode(TopLeftOnly()).counts(),
            (std::vector<uint32_t>{0, 1, 3}));
}

TEST(RleEncodeTest, ColumnMajorOrder) {
  // Only (row 1, col 0) set: second pixel in column-major order.
  BinaryRaster r(2, 2);
  r.set(1, 0, true);
  EXPECT_EQ(RleEncode(r).counts(), (std::vector<uint32_t>{1, 1, 2}));
}

TEST(RleEncodeTest, ZeroAreaIsDimensionError) {
  try {
    BinaryRaster r(0, 3);
    FAIL() << "expected dimension error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

TEST(RleDecodeTest, Examples) {
  EXPECT_EQ(RleDecode(BinaryMask(2, 2, {4})), BinaryRaster(2, 2));
  EXPECT_EQ(RleDecode(BinaryMask(2, 2, {0, 4})),
            BinaryRaster(2, 2, {1, 1, 1, 1}));
  EXPECT_EQ(RleDecode(BinaryMask(2, 2, {0, 1, 3})), TopLeftOnly());
}

TEST(BinaryMaskTest, RejectsCorruptCounts) {
  auto expect_corrupt = [](std::vector<uint32_t> counts) {
    try {
      BinaryMask m(2, 2, std::move(counts));
      ADD_FAILURE() << "expected corrupt-mask error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptMask);
    }
  };
  expect_corrupt({3});
  expect_corrupt({0, 5});
  expect_corrupt({});
  expect_corrupt({1, 0, 3});  // non-canonical interior zero
}

TEST(MaskAreaTest, Examples) {
  EXPECT_EQ(MaskArea(BinaryMask(2, 2, {0, 4})), 4);
  EXPECT_EQ(MaskArea(BinaryMask(2, 2, {4})), 0);
  EXPECT_EQ(MaskArea(BinaryMask(2, 2, {0, 1, 3})), 1);
}

TEST(MaskBBoxTest, Examples) {
  EXPECT_EQ(MaskBBox(BinaryMask::Full(2, 2)), (BBox{0, 0, 2, 2}));
  EXPECT_FALSE(MaskBBox(BinaryMask::Empty(2, 2)).has_value());
  EXPECT_EQ(MaskBBox(BinaryMask(2, 2, {0, 1, 3})), (BBox{0, 0, 1, 1}));
}

TEST(MaskBooleanTest, Examples) {
  const BinaryMask a = RleEncode(TopLeftOnly());
  const BinaryMask empty = BinaryMask::Empty(2, 2);
  EXPECT_EQ(MaskBoolean(a, a, BooleanOp::kXor), empty);
  EXPECT_EQ(MaskBoolean(a, empty, BooleanOp::kUnion), a);
  EXPECT_EQ(MaskBoolean(a, BinaryMask::Full(2, 2), BooleanOp::kXor).counts(),
            (std::vector<uint32_t>{1, 3}));
}

TEST(MaskBooleanTest, DimensionMismatch) {
  try {
    MaskBoolean(BinaryMask::Full(2, 2), BinaryMask::Full(2, 3),
                BooleanOp::kUnion);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

TEST(MaskPropertyTest, RoundTripAndCanonicalForm) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const BinaryRaster r = RandomRaster(rng);
    const BinaryMask m = RleEncode(r);
    ASSERT_EQ(RleDecode(m), r);
    ASSERT_EQ(m.counts(), BruteForceCounts(r));
    ASSERT_EQ(RleEncode(RleDecode(m)), m);
    ASSERT_EQ(MaskArea(m), Popcount(r));
  }
}

TEST(MaskPropertyTest, BooleanOpsMatchPixelwiseEvaluation) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const BinaryRaster ra = RandomRaster(rng, 40);
    BinaryRaster rb = testing::RandomRasterOfSize(rng, ra.width(), ra.height(),
                                                  (i % 5) / 4.0);
    const BinaryMask a = RleEncode(ra), b = RleEncode(rb);
    for (BooleanOp op : {BooleanOp::kUnion, BooleanOp::kIntersection,
                         BooleanOp::kDifference, BooleanOp::kXor}) {
      BinaryRaster expected(ra.width(), ra.height());
      for (int row = 0; row < ra.height(); ++row) {
        for (int col = 0; col < ra.width(); ++col) {
          const bool x = ra.at(row, col), y = rb.at(row, col);
          bool v = false;
          if (op == BooleanOp::kUnion) v = x || y;
          if (op == BooleanOp::kIntersection) v = x && y;
          if (op == BooleanOp::kDifference) v = x && !y;
          if (op == BooleanOp::kXor) v = x != y;
          expected.set(row, col, v);
        }
      }
      ASSERT_EQ(RleDecode(MaskBoolean(a, b, op)), expected);
    }
    const int64_t inter = MaskArea(MaskBoolean(a, b, BooleanOp::kIntersection));
    EXPECT_EQ(MaskArea(MaskBoolean(a, b, BooleanOp::kUnion)) + inter,
              MaskArea(a) + MaskArea(b));
    EXPECT_EQ(MaskArea(MaskBoolean(a, b, BooleanOp::kXor)),
              MaskArea(a) + MaskArea(b) - 2 * inter);
  }
}

TEST(MaskPropertyTest, BBoxContainsAndNthPixelMatchEnumeration) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const BinaryRaster r = RandomRaster(rng, 30);
    const BinaryMask m = RleEncode(r);
    int min_x = r.width(), max_x = -1, min_y = r.height(), max_y = -1;
    std::vector<Pixel> set_pixels;
    for (int col = 0; col < r.width(); ++col) {
      for (int row = 0; row < r.height(); ++row) {
        ASSERT_EQ(MaskContains(m, col, row), r.at(row, col));
        if (!r.at(row, col)) continue;
        set_pixels.push_back({col, row});
        min_x = std::min(min_x, col);
        max_x = std::max(max_x, col);
        min_y = std::min(min_y, row);
        max_y = std::max(max_y, row);
      }
    }
    const auto box = MaskBBox(m);
    if (set_pixels.empty()) {
      EXPECT_FALSE(box.has_value());
      continue;
    }
    ASSERT_TRUE(box.has_value());
    EXPECT_EQ(*box, (BBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1}));
    for (size_t k = 0; k < set_pixels.size(); k += 1 + set_pixels.size() / 17) {
      EXPECT_EQ(NthSetPixel(m, static_cast<int64_t>(k)), set_pixels[k]);
    }
  }
}

TEST(ErodeMaskTest, MatchesBruteForceNeighbourhood) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const BinaryRaster r = RandomRaster(rng, 32);
    for (int radius : {0, 1, 2, 3}) {
      ASSERT_EQ(RleDecode(ErodeMask(RleEncode(r), radius)),
                BruteForceErode(r, radius));
    }
  }
}

TEST(ErodeMaskTest, ErodedDiscIsStrictlyContained) {
  const BinaryMask disc = RleEncode(testing::Disc(40, 40, 20, 20, 8));
  const BinaryMask eroded = ErodeMask(disc, 2);
  EXPECT_LT(MaskArea(eroded), MaskArea(disc));
  EXPECT_EQ(MaskBoolean(eroded, disc, BooleanOp::kDifference),
            BinaryMask::Empty(40, 40));
}

TEST(RleJsonTest, CocoLayout) {
  const BinaryMask m(3, 2, {1, 2, 3});
  const nlohmann::json j = MaskToJson(m);
  EXPECT_EQ(j.dump(), R"({"counts":[1,2,3],"size":[2,3]})");
  EXPECT_EQ(MaskFromJson(j), m);
}

TEST(RleJsonTest, RejectsMalformed) {
  for (const char* text :
       {R"({"size":[2,2]})", R"({"size":[2,2],"counts":"abc"})",
        R"({"size":[2],"counts":[4]})", R"({"size":[2,2],"counts":[-1,5]})",
        R"({"size":[2,2],"counts":[1,2]})", R"({"size":[0,2],"counts":[0]})"}) {
    try {
      MaskFromJson(nlohmann::json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptMask) << text;
    }
  }
}

LabeledInstance Instance(int64_t index, const BinaryRaster& r,
                         std::optional<int> label) {
  LabeledInstance inst{.instance_id = index,
                       .mask = RleEncode(r),
                       .label_id = label,
                       .creation_index = index};
  return inst;
}

TEST(FlattenToSemanticTest, Examples) {
  std::vector<LabeledInstance> none;
  EXPECT_EQ(FlattenToSemantic(none, 2, 2), SemanticRaster(2, 2));

  std::vector<LabeledInstance> full{
      Instance(1, BinaryRaster(2, 2, {1, 1, 1, 1}), 3)};
  EXPECT_EQ(FlattenToSemantic(full, 2, 2), SemanticRaster(2, 2, 3));

  BinaryRaster left(2, 2), top(2, 2);
  left.set(0, 0, true);
  left.set(1, 0, true);
  top.set(0, 0, true);
  top.set(0, 1, true);
  std::vector<LabeledInstance> overlap{Instance(1, left, 1),
                                       Instance(2, top, 2)};
  const SemanticRaster s = FlattenToSemantic(overlap, 2, 2);
  EXPECT_EQ(s.at(0, 0), 2);
  EXPECT_EQ(s.at(1, 0), 1);
  EXPECT_EQ(s.at(0, 1), 2);
  EXPECT_EQ(s.at(1, 1), SemanticRaster::kBackground);

  // Sequence order does not matter, creation order does.
  std::vector<LabeledInstance> reversed{overlap[1], overlap[0]};
  EXPECT_EQ(FlattenToSemantic(reversed, 2, 2), s);
}

TEST(FlattenToSemanticTest, UnassignedAndMismatch) {
  std::vector<LabeledInstance> insts{
      Instance(1, BinaryRaster(2, 2, {1, 0, 0, 0}), std::nullopt)};
  EXPECT_EQ(FlattenToSemantic(insts, 2, 2).at(0, 0),
            SemanticRaster::kUnassigned);
  try {
    FlattenToSemantic(insts, 3, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

TEST(FlattenToSemanticTest, PermutingDisjointInstancesIsInvariant) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 16, h = 12;
    std::vector<LabeledInstance> insts;
    // Disjoint vertical stripes, one per instance.
    for (int k = 0; k < 4; ++k) {
      BinaryRaster r(w, h);
      for (int row = 0; row < h; ++row)
        for (int col = k * 4; col < k * 4 + 4; ++col)
          r.set(row, col, (rng() & 1) != 0);
      r.set(0, k * 4, true);
      insts.push_back(Instance(k + 1, r, k + 1));
    }
    const SemanticRaster base = FlattenToSemantic(insts, w, h);
    std::vector<LabeledInstance> shuffled = insts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (size_t i = 0; i < shuffled.size(); ++i)
      shuffled[i].creation_index = static_cast<int64_t>(i + 1);
    EXPECT_EQ(FlattenToSemantic(shuffled, w, h), base);
  }
}

}  // namespace
}  // namespace coralab
