#pragma once

#include "mover/mover.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mover::testing
{

struct object_track
{
    std::string id;
    shape_class shape = shape_class::square;
    std::string color = "black";
    local_box box{ 0.0, 0.0, 10.0, 10.0 };
    std::function< affine( std::size_t ) > at = []( std::size_t ) { return affine::identity(); };
};

inline animation make_animation( const std::vector< object_track >& tracks, std::size_t frames, double fps = 60.0 )
{
    std::vector< object_info > infos;
    for ( const auto& t : tracks )
        infos.push_back( { t.id, t.shape, canonicalize( *parse_color( t.color ) ), t.box } );
    animation a{ scene{ std::move( infos ) }, {} };
    a.trace.fps = fps;
    a.trace.num_frames = frames;
    for ( const auto& t : tracks )
    {
        std::vector< affine > m;
        for ( std::size_t f = 1; f <= frames; ++f )
            m.push_back( t.at( f ) );
        a.trace.frames.push_back( std::move( m ) );
    }
    return a;
}

// Linear ramp from 0 at frame `from` to 1 at frame `to`, clamped outside.
inline double ramp( std::size_t f, std::size_t from, std::size_t to )
{
    if ( f <= from )
        return 0.0;
    if ( f >= to )
        return 1.0;
    return static_cast< double >( f - from ) / static_cast< double >( to - from );
}

inline report run( const std::string& source, const animation& a, const tolerances& tol = {} ) { return verify( source, a, tol ); }

inline const predicate_trace* find_predicate( const verdict& v, const std::string& name )
{
    for ( const auto& p : v.predicates )
        if ( p.name == name )
            return &p;
    return nullptr;
}

// Allen relation from the textbook endpoint definitions on half-open [s, e + 1).
inline allen_relation allen_by_definition( frame_interval a, frame_interval b )
{
    const long long as = static_cast< long long >( a.start ), ae = static_cast< long long >( a.end ) + 1;
    const long long bs = static_cast< long long >( b.start ), be = static_cast< long long >( b.end ) + 1;
    if ( ae < bs )
        return allen_relation::precedes;
    if ( ae == bs )
        return allen_relation::meets;
    if ( be < as )
        return allen_relation::preceded_by;
    if ( be == as )
        return allen_relation::met_by;
    if ( as == bs && ae == be )
        return allen_relation::equals;
    if ( as == bs )
        return ae < be ? allen_relation::starts : allen_relation::started_by;
    if ( ae == be )
        return as > bs ? allen_relation::finishes : allen_relation::finished_by;
    if ( as > bs && ae < be )
        return allen_relation::during;
    if ( as < bs && ae > be )
        return allen_relation::contains;
    return as < bs ? allen_relation::overlaps : allen_relation::overlapped_by;
}

} // namespace mover::testing
