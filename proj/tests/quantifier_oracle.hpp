#pragma once

// Row-enumeration oracle for quantified statements over small random scenes.

#include "helpers.hpp"

#include <functional>
#include <optional>
#include <random>

namespace mover::testing
{

struct brute_force
{
    const animation& anim;
    std::vector< std::vector< bbox > > boxes; // [row][frame - 1]

    explicit brute_force( const animation& a ) : anim( a )
    {
        for ( std::size_t r = 0; r < a.scene.size(); ++r )
        {
            boxes.emplace_back();
            for ( std::size_t f = 1; f <= a.trace.num_frames; ++f )
                boxes.back().push_back( a.scene[ r ].bbox_local.transformed( a.trace.at( r, f ) ) );
        }
    }

    [[nodiscard]] bool pairs( spatial_rule rule, const std::vector< std::size_t >& as, const std::vector< std::size_t >& bs,
                              std::size_t f ) const
    {
        for ( const std::size_t x : as )
            for ( const std::size_t y : bs )
                if ( ( as.size() == 1 && bs.size() == 1 ) || x != y )
                    if ( !apply_rule( rule, boxes[ x ][ f ], boxes[ y ][ f ], 2.0 ) )
                        return false;
        return true;
    }
};

// A body is a random formula over one free object and the bound objects o_0..o_k.
struct body_gen
{
    std::mt19937_64& rng;
    std::size_t bound;

    int pick( int n ) { return std::uniform_int_distribution< int >( 0, n - 1 )( rng ); }

    // Returns the source and a cell evaluator (row, 0-based frame) -> bool.
    std::pair< std::string, std::function< bool( const brute_force&, std::size_t, std::size_t ) > > make( int depth )
    {
        static const char* colors[] = { "red", "blue", "green" };
        static const char* shapes[] = { "circle", "square" };
        static const std::pair< spatial_rule, const char* > rules[] = {
            { spatial_rule::left, "s_left" }, { spatial_rule::top, "s_top" }, { spatial_rule::intersect, "s_intersect" },
            { spatial_rule::right, "s_right" }, { spatial_rule::border, "s_border" } };
        if ( depth == 0 || pick( 3 ) == 0 )
        {
            switch ( pick( 3 ) )
            {
            case 0: {
                const std::string c = colors[ pick( 3 ) ];
                return { "color(o, \"" + c + "\")", [ c ]( const brute_force& bf, std::size_t r, std::size_t ) {
                            return bf.anim.scene[ r ].fill.name == c;
                        } };
            }
            case 1: {
                const std::string s = shapes[ pick( 2 ) ];
                return { "shape(o, \"" + s + "\")", [ s ]( const brute_force& bf, std::size_t r, std::size_t ) {
                            return to_string( bf.anim.scene[ r ].shape ) == s;
                        } };
            }
            default: {
                const auto& [ rule, name ] = rules[ pick( 5 ) ];
                const std::size_t other = static_cast< std::size_t >( pick( static_cast< int >( bound ) ) );
                const bool free_first = pick( 2 ) == 0;
                const std::string src = std::string{ name } + ( free_first ? "(o, o_" + std::to_string( other ) + ")"
                                                                            : "(o_" + std::to_string( other ) + ", o)" );
                return { src, [ rule, other, free_first ]( const brute_force& bf, std::size_t r, std::size_t f ) {
                            return free_first ? bf.pairs( rule, { r }, { other }, f ) : bf.pairs( rule, { other }, { r }, f );
                        } };
            }
            }
        }
        auto [ ls, lf ] = make( depth - 1 );
        switch ( pick( 3 ) )
        {
        case 0: {
            auto [ rs, rf ] = make( depth - 1 );
            return { "(" + ls + " and " + rs + ")", [ lf, rf ]( const brute_force& bf, std::size_t r, std::size_t f ) {
                        return lf( bf, r, f ) && rf( bf, r, f );
                    } };
        }
        case 1: {
            auto [ rs, rf ] = make( depth - 1 );
            return { "(" + ls + " or " + rs + ")", [ lf, rf ]( const brute_force& bf, std::size_t r, std::size_t f ) {
                        return lf( bf, r, f ) || rf( bf, r, f );
                    } };
        }
        default:
            return { "not " + ls, [ lf ]( const brute_force& bf, std::size_t r, std::size_t f ) { return !lf( bf, r, f ); } };
        }
    }
};

inline animation mini_scene( std::mt19937_64& rng )
{
    static const char* colors[] = { "red", "blue", "green" };
    std::uniform_int_distribution< int > nobj( 1, 3 ), nframes( 1, 30 ), pos( 0, 100 ), size( 5, 40 ), col( 0, 2 ), shp( 0, 1 );
    std::uniform_real_distribution< double > vel( -4, 4 );
    std::vector< object_track > tracks;
    const int n = nobj( rng );
    for ( int i = 0; i < n; ++i )
    {
        object_track t;
        t.id = "x" + std::to_string( i );
        t.color = colors[ col( rng ) ];
        t.shape = shp( rng ) ? shape_class::circle : shape_class::square;
        t.box = { static_cast< double >( pos( rng ) ), static_cast< double >( pos( rng ) ), static_cast< double >( size( rng ) ),
                  static_cast< double >( size( rng ) ) };
        const vec2 v{ vel( rng ), vel( rng ) };
        t.at = [ v ]( std::size_t f ) { return affine::translation( static_cast< double >( f - 1 ) * v ); };
        tracks.push_back( t );
    }
    return make_animation( tracks, static_cast< std::size_t >( nframes( rng ) ) );
}

// Runs one random quantified program on a random scene. Returns the program text on disagreement.
inline std::optional< std::string > quantifier_trial( std::mt19937_64& rng, int trial )
{
    const animation anim = mini_scene( rng );
    const brute_force bf{ anim };
    const std::size_t rows = anim.scene.size(), frames = anim.trace.num_frames;
    std::string src;
    for ( std::size_t i = 0; i < rows; ++i )
        src += "o_" + std::to_string( i ) + " = iota(Object, lambda o: id(o, \"" + anim.scene[ i ].id + "\"))\n";
    body_gen gen{ rng, rows };
    auto [ body, cell ] = gen.make( 3 );
    static const char* quants[] = { "exists", "iota", "all" };
    const std::string q = quants[ trial % 3 ];
    src += "q = " + q + "(Object, lambda o: " + body + ")\n";
    if ( q != "exists" )
        src += "s_left(q, o_0)\nnot s_left(q, o_0)\n";

    std::vector< std::size_t > hits;
    for ( std::size_t r = 0; r < rows; ++r )
        for ( std::size_t f = 0; f < frames; ++f )
            if ( cell( bf, r, f ) )
            {
                hits.push_back( r );
                break;
            }
    std::vector< std::size_t > chosen = hits;
    if ( q != "all" && !chosen.empty() )
        chosen.resize( 1 );

    const report r = run( src, anim );
    const auto& v = r.result.verdicts;
    if ( v[ rows ].value != !hits.empty() )
        return src;

    if ( q == "exists" )
        return {}; // exists binds a truth value, not objects
    bool left_any = false, not_left_any = false;
    for ( std::size_t f = 0; f < frames && !chosen.empty(); ++f )
    {
        const bool left = bf.pairs( spatial_rule::left, chosen, { 0 }, f );
        left_any = left_any || left;
        not_left_any = not_left_any || !left;
    }
    if ( v[ rows + 1 ].value != left_any )
        return src;
    if ( v[ rows + 2 ].value != ( chosen.empty() ? true : not_left_any ) )
        return src;
    return std::nullopt;
}

} // namespace mover::testing
