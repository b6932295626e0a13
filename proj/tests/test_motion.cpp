#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace mover;
using mover::testing::make_animation;
using mover::testing::object_track;
using mover::testing::ramp;

namespace
{

object_track mover_track( std::function< affine( std::size_t ) > at )
{
    object_track t;
    t.id = "a";
    t.box = { 0, 0, 20, 20 };
    t.at = std::move( at );
    return t;
}

} // namespace

TEST( Channels, LinearTranslationIsOneSegment )
{
    // 2 px per frame from frame 2 through 61
    const animation a = make_animation( { mover_track( []( std::size_t f ) {
                                            return affine::translation( { 120.0 * ramp( f, 1, 61 ), 0 } );
                                        } ) },
                                        90 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::translate );
    ASSERT_EQ( segs.size(), 1u );
    EXPECT_EQ( segs[ 0 ].start_frame, 2u );
    EXPECT_EQ( segs[ 0 ].end_frame, 61u );
    EXPECT_NEAR( segs[ 0 ].net_magnitude, 120.0, 1e-9 );
    EXPECT_TRUE( mc.segments_of( 0, channel::rotate ).empty() );
    EXPECT_TRUE( mc.segments_of( 0, channel::scale ).empty() );
}

TEST( Channels, EasedTailsStayInsideTheSegment )
{
    // smoothstep: the first and last deltas fall below the activity threshold
    const animation a = make_animation( { mover_track( []( std::size_t f ) {
                                            const double p = ramp( f, 1, 61 );
                                            return affine::translation( { 100.0 * p * p * ( 3 - 2 * p ), 0 } );
                                        } ) },
                                        80 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::translate );
    ASSERT_EQ( segs.size(), 1u );
    EXPECT_EQ( segs[ 0 ].start_frame, 2u );
    EXPECT_EQ( segs[ 0 ].end_frame, 61u );
    EXPECT_NEAR( segs[ 0 ].net_magnitude, 100.0, 1e-9 );
}

TEST( Channels, FullTurnUnwraps )
{
    const local_box box{ 0, 0, 20, 20 };
    const animation a = make_animation( { mover_track( [ box ]( std::size_t f ) {
                                            return affine::about( box.center(), affine::rotation( 360.0 * ramp( f, 1, 61 ) ) );
                                        } ) },
                                        61 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::rotate );
    ASSERT_EQ( segs.size(), 1u );
    EXPECT_NEAR( segs[ 0 ].net_magnitude, 360.0, 1e-9 );
    EXPECT_NEAR( mc.at( 0, 61 ).angle, 360.0, 1e-9 );
    EXPECT_TRUE( mc.segments_of( 0, channel::translate ).empty() );
}

TEST( Channels, RotationAboutPointRecoversOrigin )
{
    const vec2 pivot{ 137.25, -42.5 };
    const animation a = make_animation( { mover_track( [ pivot ]( std::size_t f ) {
                                            return affine::translation( { 300, 200 } ) *
                                                   affine::about( pivot, affine::rotation( -90.0 * ramp( f, 1, 31 ) ) );
                                        } ) },
                                        31 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::rotate );
    ASSERT_EQ( segs.size(), 1u );
    ASSERT_TRUE( segs[ 0 ].mean_origin );
    const vec2 expected = affine::translation( { 300, 200 } ).apply( pivot );
    EXPECT_NEAR( segs[ 0 ].mean_origin->x, expected.x, 1e-6 );
    EXPECT_NEAR( segs[ 0 ].mean_origin->y, expected.y, 1e-6 );
    EXPECT_LT( segs[ 0 ].origin_spread, 1e-6 );
    EXPECT_NEAR( segs[ 0 ].net_magnitude, -90.0, 1e-9 );
}

TEST( Channels, NonUniformScaleFreesTheUnscaledAxis )
{
    const animation a = make_animation( { mover_track( []( std::size_t f ) {
                                            return affine::about( { 0, 10 }, affine::scaling( 1.0 + ramp( f, 1, 21 ), 1.0 ) );
                                        } ) },
                                        21 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::scale );
    ASSERT_EQ( segs.size(), 1u );
    EXPECT_NEAR( segs[ 0 ].net_ratio.x, 2.0, 1e-9 );
    EXPECT_NEAR( segs[ 0 ].net_ratio.y, 1.0, 1e-9 );
    ASSERT_TRUE( mc.at( 0, 5 ).origin );
    EXPECT_TRUE( mc.at( 0, 5 ).origin->y_free );
    EXPECT_NEAR( mc.at( 0, 5 ).origin->point.x, 0.0, 1e-6 );
}

TEST( Channels, PausesSplitSegments )
{
    const animation a = make_animation( { mover_track( []( std::size_t f ) {
                                            return affine::translation( { 50.0 * ramp( f, 1, 11 ) + 50.0 * ramp( f, 21, 31 ), 0 } );
                                        } ) },
                                        40 );
    const motion_channels mc = build_channels( a.scene, a.trace );
    const auto& segs = mc.segments_of( 0, channel::translate );
    ASSERT_EQ( segs.size(), 2u );
    EXPECT_EQ( segs[ 0 ].end_frame, 11u );
    EXPECT_EQ( segs[ 1 ].start_frame, 22u );
}

TEST( Hysteresis, WeakFramesJoinOnlyWhenConnected )
{
    using motion_detail::hysteresis;
    const std::vector< double > d{ 0, 0.01, 0.5, 0.01, 0, 0.01, 0.01, 0 };
    const auto bits = hysteresis( d, 0.1, 0.001 );
    EXPECT_EQ( bits, ( std::vector< bool >{ false, true, true, true, false, false, false, false } ) );
}
