#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mover;
using mover::testing::allen_by_definition;

TEST( Allen, MatchesEndpointDefinitionsExhaustively )
{
    for ( std::size_t as = 1; as <= 8; ++as )
        for ( std::size_t ae = as; ae <= 8; ++ae )
            for ( std::size_t bs = 1; bs <= 8; ++bs )
                for ( std::size_t be = bs; be <= 8; ++be )
                {
                    const frame_interval a{ as, ae }, b{ bs, be };
                    ASSERT_EQ( allen( a, b ), allen_by_definition( a, b ) ) << as << "-" << ae << " vs " << bs << "-" << be;
                    ASSERT_EQ( allen( b, a ), inverse( allen( a, b ) ) );
                }
}

TEST( Allen, ConsecutiveFramesMeet )
{
    EXPECT_EQ( allen( { 1, 60 }, { 61, 120 } ), allen_relation::meets );
    EXPECT_EQ( allen( { 1, 60 }, { 62, 120 } ), allen_relation::precedes );
    EXPECT_EQ( allen( { 1, 60 }, { 60, 120 } ), allen_relation::overlaps );
}

TEST( Allen, InverseTable )
{
    EXPECT_EQ( inverse( allen_relation::precedes ), allen_relation::preceded_by );
    EXPECT_EQ( inverse( allen_relation::meets ), allen_relation::met_by );
    EXPECT_EQ( inverse( allen_relation::overlaps ), allen_relation::overlapped_by );
    EXPECT_EQ( inverse( allen_relation::starts ), allen_relation::started_by );
    EXPECT_EQ( inverse( allen_relation::during ), allen_relation::contains );
    EXPECT_EQ( inverse( allen_relation::finishes ), allen_relation::finished_by );
    EXPECT_EQ( inverse( allen_relation::equals ), allen_relation::equals );
    for ( const auto r : all_allen_relations )
    {
        EXPECT_EQ( inverse( inverse( r ) ), r );
        EXPECT_EQ( parse_allen( to_string( r ) ), r );
    }
}

TEST( Allen, RealEndpointsWithTolerance )
{
    EXPECT_EQ( allen_real( 0, 10, 11, 20, 1.5 ), allen_relation::meets );
    EXPECT_EQ( allen_real( 0, 10, 11, 20, 0 ), allen_relation::precedes );
    EXPECT_EQ( allen_real( 0, 10, 0.5, 10.5, 1 ), allen_relation::equals );
}

TEST( Masks, AggregatesPartitionTheThirteenRelations )
{
    const mask_table m = default_masks();
    const auto& b = m.at( "before" ).relations;
    const auto& w = m.at( "while" ).relations;
    const auto& a = m.at( "after" ).relations;
    EXPECT_EQ( w.size(), 9u );
    for ( const auto r : all_allen_relations )
        EXPECT_EQ( b.count( r ) + w.count( r ) + a.count( r ), 1u ) << to_string( r );
}

TEST( Masks, JsonRoundTripAndShippedFile )
{
    const mask_table m = default_masks();
    EXPECT_EQ( to_json( masks_from_json( nlohmann::json::parse( to_json( m ).dump() ) ) ), to_json( m ) );
    const mask_table shipped = load_masks( std::string{ MOVER_ASSET_DIR } + "/masks.json" );
    EXPECT_EQ( to_json( shipped ), to_json( m ) );
}

TEST( Masks, CustomMasksMergeOverDefaults )
{
    const mask_table m = masks_from_json( nlohmann::json::parse( R"({
        "overlapping": {"axis": "time", "relations": ["overlaps", "overlapped_by"]},
        "beside": {"axis": "y", "relations": ["equals"]}
    })" ) );
    EXPECT_TRUE( m.at( "overlapping" ).is_temporal() );
    EXPECT_TRUE( m.at( "overlapping" ).matches( allen_relation::overlaps ) );
    EXPECT_FALSE( m.at( "beside" ).is_temporal() );
    EXPECT_TRUE( m.at( "beside" ).matches( bbox{ 0, 0, 10, 10 }, bbox{ 50, 0, 60, 10 }, 0 ) );
    EXPECT_THROW( masks_from_json( nlohmann::json::parse( R"({"bad": {"axis": "time", "relations": ["sideways"]}})" ) ), error );
    EXPECT_THROW( masks_from_json( nlohmann::json::parse( R"({"bad": "nowhere"})" ) ), error );
}

TEST( SpatialRules, ScreenCoordinates )
{
    const bbox ref{ 100, 100, 200, 200 };
    const double tau = 2;
    EXPECT_TRUE( apply_rule( spatial_rule::top, { 120, 40, 160, 80 }, ref, tau ) );
    EXPECT_FALSE( apply_rule( spatial_rule::bottom, { 120, 40, 160, 80 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::bottom, { 120, 220, 160, 260 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::left, { 20, 120, 60, 160 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::right, { 240, 120, 280, 160 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::left_border, { 60, 120, 101, 160 }, ref, tau ) );
    EXPECT_FALSE( apply_rule( spatial_rule::left_border, { 60, 220, 101, 260 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::right_border, { 199, 120, 240, 160 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::top_border, { 120, 60, 160, 100 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::bottom_border, { 120, 200, 160, 240 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::border, { 120, 200, 160, 240 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::intersect, { 150, 150, 250, 250 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::intersect, { 200, 200, 250, 250 }, ref, tau ) );
    EXPECT_FALSE( apply_rule( spatial_rule::intersect, { 201, 201, 250, 250 }, ref, tau ) );
    EXPECT_TRUE( apply_rule( spatial_rule::bottom_border_flush, { 200, 160, 240, 200 }, ref, tau ) );
}

TEST( SpatialRules, RectangleAlgebraForAdjacentBoxes )
{
    const rect_relation r = classify_rects( { 0, 0, 10, 10 }, { 10, 0, 20, 10 }, 0 );
    EXPECT_EQ( r.x, allen_relation::meets );
    EXPECT_EQ( r.y, allen_relation::equals );
}

TEST( IntervalIndex, MatchesLinearScan )
{
    std::mt19937_64 rng{ 3 };
    std::uniform_int_distribution< int > start( 0, 1000 ), len( 0, 60 );
    std::vector< closed_interval< int > > ivs;
    for ( int i = 0; i < 1000; ++i )
    {
        const int s = start( rng );
        ivs.push_back( { s, s + len( rng ) } );
    }
    const interval_index< int > index{ std::span< const closed_interval< int > >{ ivs } };
    auto sorted_ids = [ & ]( std::vector< std::size_t > ids ) {
        std::ranges::sort( ids, [ & ]( std::size_t a, std::size_t b ) {
            return std::tie( ivs[ a ].start, ivs[ a ].end, a ) < std::tie( ivs[ b ].start, ivs[ b ].end, b );
        } );
        return ids;
    };
    for ( int q = 0; q < 100; ++q )
    {
        const int s = start( rng );
        const closed_interval< int > query{ s, s + len( rng ) };
        std::vector< std::size_t > overlap, stab;
        for ( std::size_t i = 0; i < ivs.size(); ++i )
        {
            if ( ivs[ i ].start <= query.end && query.start <= ivs[ i ].end )
                overlap.push_back( i );
            if ( ivs[ i ].start <= s && s <= ivs[ i ].end )
                stab.push_back( i );
        }
        ASSERT_EQ( index.overlapping( query ), sorted_ids( overlap ) );
        ASSERT_EQ( index.stab( s ), sorted_ids( stab ) );
    }
}

TEST( IntervalIndex, Empty )
{
    const interval_index< int > index;
    EXPECT_TRUE( index.overlapping( { 0, 10 } ).empty() );
}

TEST( TemporalMasks, IndexedAndScannedPathsAgree )
{
    std::mt19937_64 rng{ 5 };
    std::uniform_int_distribution< std::size_t > start( 1, 100 ), len( 0, 20 ), count( 0, 4 );
    const mask_table m = default_masks();
    for ( int trial = 0; trial < 500; ++trial )
    {
        std::vector< frame_interval > a, b;
        for ( std::size_t i = count( rng ); i > 0; --i )
        {
            const std::size_t s = start( rng );
            a.push_back( { s, s + len( rng ) } );
        }
        for ( std::size_t i = count( rng ); i > 0; --i )
        {
            const std::size_t s = start( rng );
            b.push_back( { s, s + len( rng ) } );
        }
        for ( const auto& name : { "before", "while", "after" } )
        {
            bool expected = false;
            for ( const auto& x : a )
                for ( const auto& y : b )
                    expected = expected || m.at( name ).matches( allen( x, y ) );
            const temporal_result r = eval_mask_temporal( m.at( name ), a, b );
            ASSERT_EQ( r.value, expected );
            if ( r.value )
                ASSERT_TRUE( m.at( name ).matches( allen( r.witness->a, r.witness->b ) ) );
        }
    }
}
