#include "helpers.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mover;

TEST( Affine, ComposeAndInverse )
{
    const affine m = affine::translation( { 5, -3 } ) * affine::rotation( 30 ) * affine::scaling( 2, 0.5 );
    const affine id = m * m.inverse();
    EXPECT_LT( id.max_abs_diff( affine::identity() ), 1e-12 );
    const vec2 p = m.apply( { 1, 0 } );
    EXPECT_NEAR( p.x, 5 + 2 * std::cos( deg_to_rad( 30 ) ), 1e-12 );
    EXPECT_NEAR( p.y, -3 + 2 * std::sin( deg_to_rad( 30 ) ), 1e-12 );
}

TEST( Affine, PositiveRotationTurnsClockwiseOnScreen )
{
    // +x axis turns toward +y, which points down on screen
    const vec2 p = affine::rotation( 90 ).apply( { 1, 0 } );
    EXPECT_NEAR( p.x, 0, 1e-12 );
    EXPECT_NEAR( p.y, 1, 1e-12 );
}

TEST( Affine, RotationAboutPivotFixesPivot )
{
    const vec2 pivot{ 40, -7 };
    const affine m = affine::about( pivot, affine::rotation( 73 ) );
    const vec2 q = m.apply( pivot );
    EXPECT_NEAR( q.x, pivot.x, 1e-12 );
    EXPECT_NEAR( q.y, pivot.y, 1e-12 );
}

TEST( WrapDegrees, IntoHalfOpenRange )
{
    EXPECT_DOUBLE_EQ( wrap_degrees( 190 ), -170 );
    EXPECT_DOUBLE_EQ( wrap_degrees( -180 ), 180 );
    EXPECT_DOUBLE_EQ( wrap_degrees( 180 ), 180 );
    EXPECT_DOUBLE_EQ( wrap_degrees( 725 ), 5 );
}

TEST( LocalBox, TransformedIsAxisAlignedHull )
{
    const local_box b{ 0, 0, 10, 20 };
    const bbox w = b.transformed( affine::about( b.center(), affine::rotation( 90 ) ) );
    EXPECT_NEAR( w.xmin, -5, 1e-9 );
    EXPECT_NEAR( w.xmax, 15, 1e-9 );
    EXPECT_NEAR( w.ymin, 5, 1e-9 );
    EXPECT_NEAR( w.ymax, 15, 1e-9 );
}

TEST( Decompose, RecomposesRandomShearFreeMatrices )
{
    std::mt19937_64 rng{ 11 };
    std::uniform_real_distribution< double > ang( -179.0, 179.0 ), sc( 0.1, 5.0 ), tr( -500, 500 );
    for ( int i = 0; i < 10000; ++i )
    {
        const double sy = ( i % 7 == 0 ? -1.0 : 1.0 ) * sc( rng );
        const affine m = affine::translation( { tr( rng ), tr( rng ) } ) * affine::rotation( ang( rng ) ) * affine::scaling( sc( rng ), sy );
        const decomposition d = decompose( m );
        ASSERT_LT( recompose( d ).max_abs_diff( m ), 1e-6 );
        ASSERT_FALSE( d.sheared() );
    }
}

TEST( Decompose, ReportsShear )
{
    const affine sheared{ 1, 0, 0.5, 1, 0, 0 };
    const decomposition d = decompose( sheared );
    EXPECT_TRUE( d.sheared() );
    EXPECT_LT( recompose( d, true ).max_abs_diff( sheared ), 1e-12 );
}

TEST( Decompose, DegenerateMatrixThrows )
{
    try
    {
        (void)decompose( affine::scaling( 0, 1 ) );
        FAIL();
    }
    catch ( const error& e )
    {
        EXPECT_EQ( e.kind(), error_kind::degenerate_matrix );
    }
}

TEST( Color, CssNamesAndHex )
{
    EXPECT_EQ( css_colors.size(), 147u );
    EXPECT_EQ( *parse_color( "orange" ), ( rgb{ 255, 165, 0 } ) );
    EXPECT_EQ( *parse_color( "#FFA500" ), ( rgb{ 255, 165, 0 } ) );
    EXPECT_EQ( *parse_color( "#fa0" ), ( rgb{ 255, 170, 0 } ) );
    EXPECT_EQ( *parse_color( "rgb(0, 0, 255)" ), ( rgb{ 0, 0, 255 } ) );
    EXPECT_EQ( *parse_color( " Blue " ), ( rgb{ 0, 0, 255 } ) );
    EXPECT_FALSE( parse_color( "blurple" ) );
    EXPECT_EQ( to_hex( { 255, 165, 0 } ), "#ffa500" );
}

TEST( Color, EveryCssNameRoundTrips )
{
    for ( const auto& c : css_colors )
    {
        const auto v = parse_color( c.name );
        ASSERT_TRUE( v ) << c.name;
        const auto canon = canonical_name( *v );
        ASSERT_TRUE( canon );
        EXPECT_EQ( *parse_color( *canon ), *v );
    }
}

TEST( Color, AliasesShareCanonicalName )
{
    EXPECT_EQ( canonical_name( *parse_color( "grey" ) ), canonical_name( *parse_color( "gray" ) ) );
    EXPECT_EQ( canonical_name( *parse_color( "aqua" ) ), canonical_name( *parse_color( "cyan" ) ) );
}
