// Copyright 2026 The LumiForge Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <gtest/gtest.h>

#include "lumiforge/caption.hpp"
#include "lumiforge/error.hpp"
#include "lumiforge/rng.hpp"
#include "test_support.hpp"

namespace lumiforge {
namespace {

TEST(GenerateCaption, Deterministic) {
  const SubjectScene s = build_subject(4);
  const Caption a = generate_caption(s, 12);
  const Caption b = generate_caption(s, 12);
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.template_id, b.template_id);
  EXPECT_EQ(a.slots, b.slots);
}

TEST(GenerateCaption, HundredSeedsGiveAtLeastTwentyCaptions) {
  const SubjectScene s = build_subject(0);
  std::set<std::string> texts;
  for (std::uint64_t seed = 0; seed < 100; ++seed) texts.insert(generate_caption(s, seed).text);
  EXPECT_GE(texts.size(), 20u);
}

TEST(CaptionBank, EmptyListsRejectedAtConstruction) {
  EXPECT_THROW(CaptionBank({}, {"calm"}, {"wall"}, {"gray"}, {"studio"}), InvalidArgument);
  EXPECT_THROW(CaptionBank({"a {subject}"}, {}, {"wall"}, {"gray"}, {"studio"}), InvalidArgument);
  EXPECT_THROW(CaptionBank({"a {subject}"}, {"calm"}, {"wall"}, {"gray"}, {}), InvalidArgument);
}

TEST(CaptionBank, UnknownPlaceholderThrows) {
  const CaptionBank bank({"a {subject} near {nowhere}"}, {"calm"}, {"wall"}, {"gray"}, {"studio"});
  EXPECT_THROW(bank.render(0, {{"subject", "person"}}), InvalidArgument);
}

TEST(CaptionProperty, TextReproducibleFromTemplateAndSlots) {
  Rng rng(8);
  const CaptionBank& bank = CaptionBank::standard();
  for (int c = 0; c < testing::kPropertyCases; ++c) {
    const SubjectScene s = build_subject(static_cast<int>(rng.below(65)), 16, 16);
    const Caption cap = generate_caption(s, rng.next_u64());
    ASSERT_EQ(bank.render(cap.template_id, cap.slots), cap.text);
    const Caption back = Caption::from_json(cap.to_json());
    ASSERT_EQ(back.text, cap.text);
    ASSERT_EQ(back.slots, cap.slots);
  }
}

TEST(AugmentCaption, SingleVariant) {
  const Caption c = generate_caption(build_subject(1), 3);
  EXPECT_EQ(augment_caption(c, 1, 9).size(), 1u);
  EXPECT_THROW(augment_caption(c, 0, 9), InvalidArgument);
}

TEST(AugmentCaption, DeterministicList) {
  const Caption c = generate_caption(build_subject(1), 3);
  const auto a = augment_caption(c, 8, 5);
  const auto b = augment_caption(c, 8, 5);
  ASSERT_EQ(a.size(), 8u);
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_EQ(a[n].text, b[n].text);
}

TEST(AugmentCaptionProperty, SubjectSlotPreserved) {
  Rng rng(21);
  const CaptionBank& bank = CaptionBank::standard();
  for (int c = 0; c < 100; ++c) {
    const SubjectScene s = build_subject(static_cast<int>(rng.below(65)), 16, 16);
    const Caption cap = generate_caption(s, rng.next_u64());
    const std::string subject = cap.slots.at("subject");
    const auto variants = augment_caption(cap, 1 + static_cast<int>(rng.below(10)), rng.next_u64());
    std::set<std::string> texts;
    for (const auto& v : variants) {
      ASSERT_EQ(v.slots.at("subject"), subject);
      ASSERT_NE(v.text.find(subject), std::string::npos) << v.text;
      ASSERT_EQ(bank.render(v.template_id, v.slots), v.text);
      texts.insert(v.text);
    }
    if (variants.size() >= 4) ASSERT_GE(texts.size(), 2u);
  }
}

}  // namespace
}  // namespace lumiforge
