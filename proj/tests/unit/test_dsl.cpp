#include <gtest/gtest.h>

#include "dualkern/dsl.hpp"
#include "dualkern/error.hpp"

using namespace dualkern;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_skeleton(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Dsl, ParsesAllDirectives) {
  const auto spec = parse_layered(
      "# header comment\n"
      "inputs n=8 dim=2\n"
      "bias beta=0.25\n"
      "conv width=4 stride=2 activation=exp(a=0.5) delta=2\n"
      "fc activation=hermite(n=3)\n");
  EXPECT_EQ(spec.coordinate_count, 8u);
  EXPECT_EQ(spec.coordinate_dim, 2u);
  ASSERT_TRUE(spec.beta);
  EXPECT_EQ(*spec.beta, 0.25);
  ASSERT_EQ(spec.layers.size(), 2u);
  EXPECT_EQ(spec.layers[0].kind, LayerKind::conv1d);
  EXPECT_EQ(spec.layers[0].width, 4u);
  EXPECT_EQ(spec.layers[0].stride, 2u);
  EXPECT_EQ(spec.layers[0].delta, 2.0);
  EXPECT_EQ(spec.layers[0].activation, make_activation(ActivationKind::exponential, 0.5));
  EXPECT_EQ(spec.layers[1].activation, make_activation(ActivationKind::hermite, 3.0));
  const auto s = Skeleton::from_layers(spec);
  EXPECT_EQ(s.size(), 3u + 1u);
  EXPECT_EQ(s.beta(), 0.25);
  EXPECT_EQ(s.node(s.internal_order().front()).delta, 2.0);
}

TEST(Dsl, RoundTripIsBitExact) {
  const std::string text =
      "inputs n=6 dim=1\n"
      "bias beta=0.1\n"
      "conv width=2 stride=2 activation=sin(a=1.5)\n"
      "conv width=3 stride=1 activation=step delta=0.5\n"
      "fc activation=relu\n";
  const auto s = parse_skeleton(text);
  EXPECT_EQ(serialize(s), text);
  const auto again = parse_skeleton(serialize(s));
  EXPECT_EQ(again.hash(), s.hash());
  ASSERT_EQ(again.nodes().size(), s.nodes().size());
  for (NodeId v = 0; v < s.nodes().size(); ++v) {
    EXPECT_EQ(again.node(v).inputs, s.node(v).inputs);
    EXPECT_EQ(again.node(v).activation, s.node(v).activation);
  }
}

TEST(Dsl, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("fc activation=relu\n"), 1u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nconv width=3 stride=2 activation=relu\nfc activation=relu\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=relu\nconv width=1 stride=1 activation=relu\n"), 3u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=tanh\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=relu colour=red\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=relu\nbias beta=0.5\n"), 3u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nbias beta=1.5\nfc activation=relu\n"), 2u);
  EXPECT_EQ(error_line("inputs n=0 dim=1\nfc activation=relu\n"), 1u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\n"), 1u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=exp(a=x)\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nlayer activation=relu\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\nfc activation=relu activation=step\n"), 2u);
  EXPECT_EQ(error_line("inputs n=4 dim=1\n\n# c\nfc activation=relu delta=-1\n"), 4u);
}

TEST(Dsl, ActivationTokens) {
  EXPECT_EQ(parse_activation_token("relu"), make_activation(ActivationKind::relu));
  EXPECT_EQ(parse_activation_token("identity"), make_activation(ActivationKind::identity));
  EXPECT_EQ(parse_activation_token("sin(a=2)"), make_activation(ActivationKind::sine, 2.0));
  EXPECT_THROW(parse_activation_token("hermite(n=1.5)"), InvalidArgument);
  EXPECT_THROW(parse_activation_token("exp"), InvalidArgument);
}

TEST(Dsl, LoadFromFile) {
  const auto s = load_skeleton(std::string(DUALKERN_TEST_DATA) + "/s2.skel");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_THROW(load_skeleton("/nonexistent/x.skel"), InvalidArgument);
}
