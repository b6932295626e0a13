#pragma once

#include "algebra.hpp"
#include "color.hpp"
#include "config.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "lang.hpp"
#include "motion.hpp"
#include "scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mover
{

// ---------------------------------------------------------------------------
// Scene graph specs

struct object_spec
{
    std::string id;
    shape_class shape = shape_class::square;
    std::string color = "black";
    local_box bbox;
};

// One coordinate of a transform origin: a percentage of the object's box or absolute px.
struct origin_coord
{
    bool percent = true;
    double value = 50.0;
};

struct post_spec
{
    std::string relation; // spatial mask name without prefix, e.g. "right" or "left_border"
    std::string reference;
};

enum class easing_kind
{
    linear,
    smoothstep,
};

struct motion_spec
{
    std::string id;
    std::string agent;
    channel type = channel::translate;
    vec2 direction{ 0.0, 1.0 }; // translate: logical y-up vector; scale: per-axis sign
    bool clockwise = true;      // rotate
    double magnitude = 0.0;     // translate px, rotate degrees
    vec2 factors{ 1.0, 1.0 };   // scale; 0 leaves the axis unchanged
    std::optional< std::array< origin_coord, 2 > > origin;
    double duration = 1.0;
    double start = 0.0;
    easing_kind easing = easing_kind::linear;
    std::optional< post_spec > post;
    std::vector< std::string > predicates; // empty: the defaults for the motion type
};

struct relation_spec
{
    std::string kind; // before | while | after
    std::string a;
    std::string b;
};

struct scene_graph_spec
{
    std::string name;
    std::string category;
    double fps = 60.0;
    std::vector< object_spec > objects;
    std::vector< motion_spec > motions;
    std::vector< relation_spec > relations;

    [[nodiscard]] const object_spec* object( const std::string& id ) const
    {
        for ( const auto& o : objects )
            if ( o.id == id )
                return &o;
        return nullptr;
    }
    [[nodiscard]] const motion_spec* motion( const std::string& id ) const
    {
        for ( const auto& m : motions )
            if ( m.id == id )
                return &m;
        return nullptr;
    }
};

namespace synth_detail
{

[[noreturn]] inline void invalid( const std::string& what ) { throw error{ error_kind::invalid_spec, what }; }

inline double number_at( const nlohmann::json& j, const char* key, const std::string& where )
{
    if ( !j.contains( key ) || !j[ key ].is_number() )
        invalid( where + "." + key + ": expected a number" );
    return j[ key ].get< double >();
}

inline std::string string_at( const nlohmann::json& j, const char* key, const std::string& where )
{
    if ( !j.contains( key ) || !j[ key ].is_string() )
        invalid( where + "." + key + ": expected a string" );
    return j[ key ].get< std::string >();
}

inline vec2 pair_at( const nlohmann::json& j, const std::string& where )
{
    if ( !j.is_array() || j.size() != 2 || !j[ 0 ].is_number() || !j[ 1 ].is_number() )
        invalid( where + ": expected [number, number]" );
    return { j[ 0 ].get< double >(), j[ 1 ].get< double >() };
}

inline origin_coord origin_at( const nlohmann::json& j, const std::string& where )
{
    if ( j.is_number() )
        return { false, j.get< double >() };
    if ( j.is_string() )
    {
        const std::string s = j.get< std::string >();
        if ( s.size() >= 2 && s.back() == '%' )
        {
            try
            {
                return { true, std::stod( s.substr( 0, s.size() - 1 ) ) };
            }
            catch ( const std::exception& )
            {
            }
        }
    }
    invalid( where + ": origin coordinates are numbers or percent strings" );
}

inline std::string percent_text( double v )
{
    std::string s = format_number( v );
    if ( s.size() > 2 && s.ends_with( ".0" ) )
        s.resize( s.size() - 2 );
    return s + "%";
}

} // namespace synth_detail

inline std::string to_string( easing_kind e ) { return e == easing_kind::linear ? "linear" : "smoothstep"; }

inline nlohmann::ordered_json to_json( const scene_graph_spec& s )
{
    using oj = nlohmann::ordered_json;
    oj j;
    j[ "name" ] = s.name;
    j[ "category" ] = s.category;
    j[ "fps" ] = s.fps;
    j[ "objects" ] = oj::array();
    for ( const auto& o : s.objects )
        j[ "objects" ].push_back( { { "id", o.id },
                                    { "shape", std::string{ to_string( o.shape ) } },
                                    { "color", o.color },
                                    { "bbox", { o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h } } } );
    j[ "motions" ] = oj::array();
    for ( const auto& m : s.motions )
    {
        oj mj;
        mj[ "id" ] = m.id;
        mj[ "agent" ] = m.agent;
        mj[ "type" ] = std::string{ to_string( m.type ) };
        if ( m.type == channel::rotate )
        {
            mj[ "direction" ] = m.clockwise ? "clockwise" : "counterclockwise";
            mj[ "magnitude" ] = m.magnitude;
        }
        else if ( m.type == channel::translate )
        {
            mj[ "direction" ] = { m.direction.x, m.direction.y };
            mj[ "magnitude" ] = m.magnitude;
        }
        else
        {
            mj[ "direction" ] = { m.direction.x, m.direction.y };
            mj[ "magnitude" ] = { m.factors.x, m.factors.y };
        }
        if ( m.origin )
        {
            oj o = oj::array();
            for ( const auto& c : *m.origin )
                o.push_back( c.percent ? oj( synth_detail::percent_text( c.value ) ) : oj( c.value ) );
            mj[ "origin" ] = o;
        }
        mj[ "duration" ] = m.duration;
        mj[ "start" ] = m.start;
        mj[ "easing" ] = to_string( m.easing );
        if ( m.post )
            mj[ "post" ] = { { "relation", m.post->relation }, { "reference", m.post->reference } };
        if ( !m.predicates.empty() )
            mj[ "predicates" ] = m.predicates;
        j[ "motions" ].push_back( mj );
    }
    j[ "relations" ] = oj::array();
    for ( const auto& r : s.relations )
        j[ "relations" ].push_back( { { "kind", r.kind }, { "a", r.a }, { "b", r.b } } );
    return j;
}

// Structural validation; every failure is InvalidSpec.
inline void validate_spec( const scene_graph_spec& s, const mask_table& masks = default_masks() )
{
    using synth_detail::invalid;
    if ( !( s.fps > 0.0 ) )
        invalid( "fps must be positive" );
    std::set< std::string > ids;
    for ( const auto& o : s.objects )
    {
        if ( o.id.empty() || !ids.insert( o.id ).second )
            invalid( "object ids must be unique and non-empty ('" + o.id + "')" );
        if ( !parse_color( o.color ) )
            invalid( "object '" + o.id + "': unknown color '" + o.color + "'" );
        if ( !( o.bbox.w >= 0.0 && o.bbox.h >= 0.0 ) || ( o.bbox.w == 0.0 && o.bbox.h == 0.0 ) )
            invalid( "object '" + o.id + "': degenerate bbox" );
    }
    std::set< std::string > mids;
    for ( const auto& m : s.motions )
    {
        const std::string where = "motion '" + m.id + "'";
        if ( m.id.empty() || !mids.insert( m.id ).second )
            invalid( "motion ids must be unique and non-empty ('" + m.id + "')" );
        if ( !s.object( m.agent ) )
            invalid( where + ": unknown agent '" + m.agent + "'" );
        if ( !( m.duration > 0.0 ) || m.duration * s.fps < 2.0 )
            invalid( where + ": duration must span at least two frames" );
        if ( !( m.start >= 0.0 ) )
            invalid( where + ": start must be non-negative" );
        if ( m.type == channel::translate && ( !( m.magnitude > 0.0 ) || m.direction.norm() == 0.0 ) )
            invalid( where + ": translation needs a direction and a positive magnitude" );
        if ( m.type == channel::rotate && !( m.magnitude > 0.0 ) )
            invalid( where + ": rotation needs a positive magnitude" );
        if ( m.type == channel::scale )
        {
            for ( const double f : { m.factors.x, m.factors.y } )
                if ( f < 0.0 )
                    invalid( where + ": scale factors must be non-negative" );
            if ( ( m.factors.x == 0.0 || m.factors.x == 1.0 ) && ( m.factors.y == 0.0 || m.factors.y == 1.0 ) )
                invalid( where + ": scale must change at least one axis" );
            auto consistent = [ & ]( double dir, double f ) {
                if ( f == 0.0 || f == 1.0 )
                    return dir == 0.0;
                return f > 1.0 ? dir > 0.0 : dir < 0.0;
            };
            if ( !consistent( m.direction.x, m.factors.x ) || !consistent( m.direction.y, m.factors.y ) )
                invalid( where + ": scale direction must match the factors" );
        }
        if ( m.type == channel::translate && m.origin )
            invalid( where + ": translations have no origin" );
        if ( m.post )
        {
            const auto it = masks.find( m.post->relation );
            if ( it == masks.end() || it->second.is_temporal() )
                invalid( where + ": unknown spatial relation '" + m.post->relation + "'" );
            if ( !s.object( m.post->reference ) )
                invalid( where + ": unknown reference '" + m.post->reference + "'" );
        }
    }
    // before/after edges must not form a cycle
    std::map< std::string, std::vector< std::string > > edges;
    for ( const auto& r : s.relations )
    {
        if ( r.kind != "before" && r.kind != "while" && r.kind != "after" )
            invalid( "relation kind must be before, while or after" );
        if ( !s.motion( r.a ) || !s.motion( r.b ) || r.a == r.b )
            invalid( "relation " + r.kind + "(" + r.a + ", " + r.b + ") must name two distinct motions" );
        if ( r.kind == "before" )
            edges[ r.a ].push_back( r.b );
        else if ( r.kind == "after" )
            edges[ r.b ].push_back( r.a );
    }
    std::map< std::string, int > state;
    std::function< void( const std::string& ) > visit = [ & ]( const std::string& n ) {
        state[ n ] = 1;
        for ( const auto& nx : edges[ n ] )
        {
            if ( state[ nx ] == 1 )
                invalid( "before/after relations form a cycle through '" + nx + "'" );
            if ( state[ nx ] == 0 )
                visit( nx );
        }
        state[ n ] = 2;
    };
    for ( const auto& m : s.motions )
        if ( state[ m.id ] == 0 )
            visit( m.id );
}

inline scene_graph_spec spec_from_json( const nlohmann::json& j )
{
    using namespace synth_detail;
    if ( !j.is_object() )
        invalid( "spec must be a JSON object" );
    scene_graph_spec s;
    s.name = j.value( "name", "" );
    s.category = j.value( "category", "" );
    if ( j.contains( "fps" ) )
        s.fps = number_at( j, "fps", "$" );
    if ( !j.contains( "objects" ) || !j[ "objects" ].is_array() )
        invalid( "$.objects: expected an array" );
    for ( std::size_t i = 0; i < j[ "objects" ].size(); ++i )
    {
        const auto& oj = j[ "objects" ][ i ];
        const std::string where = "$.objects[" + std::to_string( i ) + "]";
        object_spec o;
        o.id = string_at( oj, "id", where );
        const auto shape = parse_shape( string_at( oj, "shape", where ) );
        if ( !shape )
            invalid( where + ".shape: unknown shape" );
        o.shape = *shape;
        o.color = string_at( oj, "color", where );
        if ( !oj.contains( "bbox" ) || !oj[ "bbox" ].is_array() || oj[ "bbox" ].size() != 4 )
            invalid( where + ".bbox: expected [x, y, w, h]" );
        for ( const auto& v : oj[ "bbox" ] )
            if ( !v.is_number() )
                invalid( where + ".bbox: expected numbers" );
        o.bbox = { oj[ "bbox" ][ 0 ].get< double >(), oj[ "bbox" ][ 1 ].get< double >(), oj[ "bbox" ][ 2 ].get< double >(),
                   oj[ "bbox" ][ 3 ].get< double >() };
        s.objects.push_back( o );
    }
    const nlohmann::json motions = j.value( "motions", nlohmann::json::array() );
    for ( std::size_t i = 0; i < motions.size(); ++i )
    {
        const auto& mj = motions[ i ];
        const std::string where = "$.motions[" + std::to_string( i ) + "]";
        motion_spec m;
        m.id = string_at( mj, "id", where );
        m.agent = string_at( mj, "agent", where );
        const std::string type = string_at( mj, "type", where );
        if ( type == "translate" )
            m.type = channel::translate;
        else if ( type == "rotate" )
            m.type = channel::rotate;
        else if ( type == "scale" )
            m.type = channel::scale;
        else
            invalid( where + ".type: expected translate, rotate or scale" );
        if ( m.type == channel::rotate )
        {
            const std::string dir = mj.value( "direction", "clockwise" );
            if ( dir != "clockwise" && dir != "counterclockwise" )
                invalid( where + ".direction: expected clockwise or counterclockwise" );
            m.clockwise = dir == "clockwise";
            m.magnitude = number_at( mj, "magnitude", where );
        }
        else
        {
            if ( !mj.contains( "direction" ) )
                invalid( where + ".direction: missing" );
            m.direction = pair_at( mj[ "direction" ], where + ".direction" );
            if ( m.type == channel::translate )
                m.magnitude = number_at( mj, "magnitude", where );
            else
            {
                if ( !mj.contains( "magnitude" ) )
                    invalid( where + ".magnitude: missing" );
                m.factors = pair_at( mj[ "magnitude" ], where + ".magnitude" );
            }
        }
        if ( mj.contains( "origin" ) )
        {
            if ( !mj[ "origin" ].is_array() || mj[ "origin" ].size() != 2 )
                invalid( where + ".origin: expected [x, y]" );
            m.origin = std::array< origin_coord, 2 >{ origin_at( mj[ "origin" ][ 0 ], where + ".origin" ),
                                                      origin_at( mj[ "origin" ][ 1 ], where + ".origin" ) };
        }
        else if ( m.type != channel::translate )
            m.origin = std::array< origin_coord, 2 >{ origin_coord{}, origin_coord{} };
        m.duration = number_at( mj, "duration", where );
        if ( mj.contains( "start" ) )
            m.start = number_at( mj, "start", where );
        const std::string easing = mj.value( "easing", "linear" );
        if ( easing == "linear" )
            m.easing = easing_kind::linear;
        else if ( easing == "smoothstep" || easing == "ease-in-out" )
            m.easing = easing_kind::smoothstep;
        else
            invalid( where + ".easing: expected linear or smoothstep" );
        if ( mj.contains( "post" ) )
            m.post = post_spec{ string_at( mj[ "post" ], "relation", where + ".post" ), string_at( mj[ "post" ], "reference", where + ".post" ) };
        if ( mj.contains( "predicates" ) )
            m.predicates = mj[ "predicates" ].get< std::vector< std::string > >();
        s.motions.push_back( m );
    }
    const nlohmann::json relations = j.value( "relations", nlohmann::json::array() );
    for ( std::size_t i = 0; i < relations.size(); ++i )
    {
        const std::string where = "$.relations[" + std::to_string( i ) + "]";
        s.relations.push_back(
            { string_at( relations[ i ], "kind", where ), string_at( relations[ i ], "a", where ), string_at( relations[ i ], "b", where ) } );
    }
    validate_spec( s );
    return s;
}

// ---------------------------------------------------------------------------
// Program compilation

inline std::vector< std::string > default_predicates( const motion_spec& m )
{
    std::vector< std::string > p{ "type", "direction" };
    if ( !( m.type == channel::translate && m.post ) )
        p.push_back( "magnitude" );
    if ( m.type != channel::translate )
        p.push_back( "origin" );
    if ( m.post )
        p.push_back( "post" );
    p.push_back( "duration" );
    p.push_back( "agent" );
    return p;
}

inline std::vector< std::string > emitted_predicates( const motion_spec& m )
{
    static const std::vector< std::string > order{ "type", "direction", "magnitude", "origin", "post", "duration", "agent" };
    const auto wanted = m.predicates.empty() ? default_predicates( m ) : m.predicates;
    std::vector< std::string > out;
    for ( const auto& p : order )
        if ( std::ranges::find( wanted, p ) != wanted.end() )
            out.push_back( p );
    return out;
}

// Where each statement of a compiled program came from.
struct statement_origin
{
    enum kind_t
    {
        object,
        motion,
        relation,
    } kind = object;
    std::string id;         // object or motion id
    std::size_t index = 0;  // relation index
};

struct compiled_program
{
    std::string source;
    std::vector< statement_origin > statements;
    std::map< std::string, std::string > object_vars; // object id -> o_i
    std::map< std::string, std::string > motion_vars; // motion id -> m_j
};

inline compiled_program compile_program( const scene_graph_spec& s )
{
    validate_spec( s );
    compiled_program out;

    // agents first, then reference objects, in first-mention order
    std::vector< std::string > objs;
    auto mention = [ & ]( const std::string& id ) {
        if ( std::ranges::find( objs, id ) == objs.end() )
            objs.push_back( id );
    };
    for ( const auto& m : s.motions )
        mention( m.agent );
    for ( const auto& m : s.motions )
        if ( m.post )
            mention( m.post->reference );
    for ( std::size_t i = 0; i < objs.size(); ++i )
    {
        const object_spec& o = *s.object( objs[ i ] );
        const std::string var = "o_" + std::to_string( i + 1 );
        out.object_vars[ o.id ] = var;
        out.source += var + " = iota(Object, lambda o: color(o, " + quote( o.color ) + ") and shape(o, " +
                      quote( std::string{ to_string( o.shape ) } ) + "))\n";
        out.statements.push_back( { statement_origin::object, o.id, 0 } );
    }

    std::set< std::string > related;
    for ( const auto& r : s.relations )
        related.insert( r.a ), related.insert( r.b );

    for ( std::size_t i = 0; i < s.motions.size(); ++i )
    {
        const motion_spec& m = s.motions[ i ];
        const std::string var = "m_" + std::to_string( i + 1 );
        out.motion_vars[ m.id ] = var;
        const bool bound = related.contains( m.id );
        const std::string v = bound ? "m" : var;
        std::string body;
        for ( const auto& p : emitted_predicates( m ) )
        {
            std::string term;
            if ( p == "type" )
                term = "type(" + v + ", " + quote( std::string{ to_string( m.type ) } ) + ")";
            else if ( p == "direction" )
                term = "direction(" + v + ", " +
                       ( m.type == channel::rotate ? quote( m.clockwise ? "clockwise" : "counterclockwise" )
                                                   : "[" + format_number( m.direction.x ) + ", " + format_number( m.direction.y ) + "]" ) +
                       ")";
            else if ( p == "magnitude" )
                term = "magnitude(" + v + ", " +
                       ( m.type == channel::scale ? "[" + format_number( m.factors.x ) + ", " + format_number( m.factors.y ) + "]"
                                                  : format_number( m.magnitude ) ) +
                       ")";
            else if ( p == "origin" && m.origin )
            {
                std::string coords;
                for ( const auto& c : *m.origin )
                    coords += ( coords.empty() ? "" : ", " ) +
                              ( c.percent ? quote( synth_detail::percent_text( c.value ) ) : format_number( c.value ) );
                term = "origin(" + v + ", [" + coords + "])";
            }
            else if ( p == "post" && m.post )
                term = "post(" + v + ", s_" + m.post->relation + "(" + out.object_vars.at( m.agent ) + ", " +
                       out.object_vars.at( m.post->reference ) + "))";
            else if ( p == "duration" )
                term = "duration(" + v + ", " + format_number( m.duration ) + ")";
            else if ( p == "agent" )
                term = "agent(" + v + ", " + out.object_vars.at( m.agent ) + ")";
            if ( !term.empty() )
                body += ( body.empty() ? "" : " and " ) + term;
        }
        if ( bound )
            out.source += var + " = iota(Motion, lambda m: " + body + ")\n";
        else
            out.source += "exists(Motion, lambda " + var + ": " + body + ")\n";
        out.statements.push_back( { statement_origin::motion, m.id, 0 } );
    }

    for ( std::size_t i = 0; i < s.relations.size(); ++i )
    {
        const auto& r = s.relations[ i ];
        out.source += "t_" + r.kind + "(" + out.motion_vars.at( r.a ) + ", " + out.motion_vars.at( r.b ) + ")\n";
        out.statements.push_back( { statement_origin::relation, "", i } );
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

// Frames [k0, k1] carry the motion: progress is 0 at k0 and 1 at k1, so the first
// changed frame is k0 + 1 and the endpoint displacement is exact.
struct frame_window
{
    std::size_t k0 = 1;
    std::size_t k1 = 1;
};

inline frame_window window_of( const motion_spec& m, double fps )
{
    const auto k0 = static_cast< std::size_t >( std::llround( m.start * fps ) ) + 1;
    const auto k1 = static_cast< std::size_t >( std::llround( ( m.start + m.duration ) * fps ) );
    return { k0, std::max( k1, k0 + 1 ) };
}

inline std::size_t frame_count( const scene_graph_spec& s )
{
    if ( s.motions.empty() )
        return static_cast< std::size_t >( std::max< long long >( 1, std::llround( s.fps ) ) );
    std::size_t n = 1;
    for ( const auto& m : s.motions )
        n = std::max( n, window_of( m, s.fps ).k1 );
    return n;
}

inline double ease( easing_kind e, double p )
{
    p = std::clamp( p, 0.0, 1.0 );
    return e == easing_kind::linear ? p : p * p * ( 3.0 - 2.0 * p );
}

inline double progress( const motion_spec& m, double fps, std::size_t frame )
{
    const frame_window w = window_of( m, fps );
    const double p = ( static_cast< double >( frame ) - static_cast< double >( w.k0 ) ) / static_cast< double >( w.k1 - w.k0 );
    return ease( m.easing, p );
}

namespace synth_detail
{

inline vec2 translation_offset( const motion_spec& m, double e )
{
    const double n = m.direction.norm();
    return { m.magnitude * e * m.direction.x / n, -m.magnitude * e * m.direction.y / n };
}

inline affine linear_part( const motion_spec& m, double e )
{
    if ( m.type == channel::rotate )
        return affine::rotation( ( m.clockwise ? 1.0 : -1.0 ) * m.magnitude * e );
    const double fx = m.factors.x == 0.0 ? 1.0 : m.factors.x;
    const double fy = m.factors.y == 0.0 ? 1.0 : m.factors.y;
    return affine::scaling( 1.0 + ( fx - 1.0 ) * e, 1.0 + ( fy - 1.0 ) * e );
}

struct object_renderer
{
    const scene_graph_spec& spec;
    const object_spec& obj;
    std::vector< const motion_spec* > motions; // chronological

    // Translation offsets add; rotations and scales compose in time order about pivots
    // fixed when each motion starts (percent pivots follow the box, absolute ones are world px).
    [[nodiscard]] affine at( std::size_t frame ) const
    {
        vec2 offset;
        for ( const auto* m : motions )
            if ( m->type == channel::translate )
                offset = offset + translation_offset( *m, progress( *m, spec.fps, frame ) );
        return affine::translation( offset ) * linear_stack( frame, motions.size() );
    }

    [[nodiscard]] affine linear_stack( std::size_t frame, std::size_t upto ) const
    {
        affine acc = affine::identity();
        for ( std::size_t i = 0; i < upto; ++i )
        {
            const motion_spec& m = *motions[ i ];
            if ( m.type == channel::translate )
                continue;
            const std::size_t k0 = window_of( m, spec.fps ).k0;
            vec2 pivot;
            const auto& o = *m.origin;
            const vec2 local = obj.bbox.at_fraction( o[ 0 ].percent ? o[ 0 ].value / 100.0 : 0.0, o[ 1 ].percent ? o[ 1 ].value / 100.0 : 0.0 );
            const vec2 carried = linear_stack( k0, i ).apply( local );
            vec2 offset_at_start;
            for ( const auto* t : motions )
                if ( t->type == channel::translate )
                    offset_at_start = offset_at_start + translation_offset( *t, progress( *t, spec.fps, k0 ) );
            pivot.x = o[ 0 ].percent ? carried.x : o[ 0 ].value - offset_at_start.x;
            pivot.y = o[ 1 ].percent ? carried.y : o[ 1 ].value - offset_at_start.y;
            acc = affine::about( pivot, linear_part( m, progress( m, spec.fps, frame ) ) ) * acc;
        }
        return acc;
    }
};

} // namespace synth_detail

inline animation render_trace( const scene_graph_spec& s )
{
    validate_spec( s );
    std::vector< object_info > infos;
    for ( const auto& o : s.objects )
        infos.push_back( { o.id, o.shape, canonicalize( *parse_color( o.color ) ), o.bbox } );
    animation out{ scene{ std::move( infos ) }, {} };
    out.trace.fps = s.fps;
    out.trace.num_frames = frame_count( s );
    for ( const auto& o : s.objects )
    {
        synth_detail::object_renderer r{ s, o, {} };
        for ( const auto& m : s.motions )
            if ( m.agent == o.id )
                r.motions.push_back( &m );
        std::ranges::stable_sort( r.motions, []( const motion_spec* a, const motion_spec* b ) { return a->start < b->start; } );
        std::vector< affine > frames;
        frames.reserve( out.trace.num_frames );
        for ( std::size_t f = 1; f <= out.trace.num_frames; ++f )
            frames.push_back( r.at( f ) );
        out.trace.frames.push_back( std::move( frames ) );
    }
    validate_trace( out.scene, out.trace );
    return out;
}

// World box of an object at a frame of the rendered trace.
inline bbox world_box( const animation& a, const std::string& id, std::size_t frame )
{
    const std::size_t i = *a.scene.index_of( id );
    return a.scene[ i ].bbox_local.transformed( a.trace.at( i, frame ) );
}

// Whether the motion's post relation holds on its last frame, read off the rendered trace.
inline bool post_holds( const scene_graph_spec& s, const animation& a, const motion_spec& m, double tau,
                        const mask_table& masks = default_masks() )
{
    if ( !m.post )
        return true;
    const std::size_t end = window_of( m, s.fps ).k1;
    return masks.at( m.post->relation ).matches( world_box( a, m.agent, end ), world_box( a, m.post->reference, end ), tau );
}

// Timing oracle over spec seconds: before = a ends no later than b starts; while = open overlap.
inline bool relation_holds( const scene_graph_spec& s, const relation_spec& r )
{
    const motion_spec& a = *s.motion( r.a );
    const motion_spec& b = *s.motion( r.b );
    constexpr double eps = 1e-9;
    if ( r.kind == "before" )
        return a.start + a.duration <= b.start + eps;
    if ( r.kind == "after" )
        return b.start + b.duration <= a.start + eps;
    return a.start < b.start + b.duration - eps && b.start < a.start + a.duration - eps;
}

// ---------------------------------------------------------------------------
// Perturbations

enum class perturbation_kind
{
    flip_direction,
    half_magnitude,
    half_duration,
    shift_start,
    swap_order,
    drop_post,
};

inline constexpr std::array< std::pair< perturbation_kind, const char* >, 6 > perturbation_names{ {
    { perturbation_kind::flip_direction, "flip-direction" },
    { perturbation_kind::half_magnitude, "half-magnitude" },
    { perturbation_kind::half_duration, "half-duration" },
    { perturbation_kind::shift_start, "shift-start" },
    { perturbation_kind::swap_order, "swap-order" },
    { perturbation_kind::drop_post, "drop-post" },
} };

inline std::string to_string( perturbation_kind k )
{
    for ( const auto& [ kind, name ] : perturbation_names )
        if ( kind == k )
            return name;
    return "";
}

struct perturbation
{
    perturbation_kind kind = perturbation_kind::flip_direction;
    std::string motion;         // target motion id
    std::size_t relation = 0;   // target relation (swap-order)
};

namespace synth_detail
{

inline motion_spec& motion_ref( scene_graph_spec& s, const std::string& id )
{
    for ( auto& m : s.motions )
        if ( m.id == id )
            return m;
    throw error{ error_kind::invalid_selector, "no motion '" + id + "'" };
}

inline std::optional< std::size_t > first_relation_of( const scene_graph_spec& s, const std::string& id )
{
    for ( std::size_t i = 0; i < s.relations.size(); ++i )
        if ( s.relations[ i ].a == id || s.relations[ i ].b == id )
            return i;
    return std::nullopt;
}

inline bool emits( const motion_spec& m, const std::string& pred )
{
    const auto p = emitted_predicates( m );
    return std::ranges::find( p, pred ) != p.end();
}

} // namespace synth_detail

// Applies one perturbation; InvalidSelector when it does not apply to the target.
inline scene_graph_spec perturb( const scene_graph_spec& original, const perturbation& p )
{
    using synth_detail::motion_ref;
    scene_graph_spec s = original;
    auto bad = [ & ]( const std::string& why ) { return error{ error_kind::invalid_selector, to_string( p.kind ) + ": " + why }; };
    switch ( p.kind )
    {
    case perturbation_kind::flip_direction: {
        motion_spec& m = motion_ref( s, p.motion );
        if ( m.type == channel::translate )
            m.direction = -1.0 * m.direction;
        else if ( m.type == channel::rotate )
            m.clockwise = !m.clockwise;
        else
        {
            m.direction = -1.0 * m.direction;
            if ( m.factors.x != 0.0 )
                m.factors.x = 1.0 / m.factors.x;
            if ( m.factors.y != 0.0 )
                m.factors.y = 1.0 / m.factors.y;
        }
        break;
    }
    case perturbation_kind::half_magnitude: {
        motion_spec& m = motion_ref( s, p.motion );
        if ( !synth_detail::emits( m, "magnitude" ) )
            throw bad( "motion '" + m.id + "' has no magnitude predicate" );
        if ( m.type == channel::scale )
        {
            if ( m.factors.x != 0.0 )
                m.factors.x = 1.0 + ( m.factors.x - 1.0 ) / 2.0;
            if ( m.factors.y != 0.0 )
                m.factors.y = 1.0 + ( m.factors.y - 1.0 ) / 2.0;
        }
        else
            m.magnitude /= 2.0;
        break;
    }
    case perturbation_kind::half_duration: motion_ref( s, p.motion ).duration /= 2.0; break;
    case perturbation_kind::drop_post: {
        motion_spec& m = motion_ref( s, p.motion );
        if ( !m.post || m.type != channel::translate )
            throw bad( "motion '" + m.id + "' has no post relation" );
        m.magnitude /= 2.0;
        break;
    }
    case perturbation_kind::shift_start: {
        motion_spec& m = motion_ref( s, p.motion );
        const auto ri = synth_detail::first_relation_of( s, m.id );
        if ( !ri )
            throw bad( "motion '" + m.id + "' takes part in no relation" );
        const relation_spec& r = s.relations[ *ri ];
        const motion_spec& other = *s.motion( r.a == m.id ? r.b : r.a );
        if ( other.agent == m.agent )
            throw bad( "both motions of the relation belong to '" + m.agent + "'" );
        if ( r.kind == "while" )
            m.start = other.start + other.duration;
        else
            m.start = other.start;
        break;
    }
    case perturbation_kind::swap_order: {
        if ( p.relation >= s.relations.size() || s.relations[ p.relation ].kind == "while" )
            throw bad( "relation " + std::to_string( p.relation ) + " is not a before/after pair" );
        const relation_spec r = s.relations[ p.relation ];
        motion_spec& first = motion_ref( s, r.kind == "before" ? r.a : r.b );
        motion_spec& second = motion_ref( s, r.kind == "before" ? r.b : r.a );
        const double gap = second.start - ( first.start + first.duration );
        const double t0 = first.start;
        second.start = t0;
        first.start = t0 + second.duration + std::max( gap, 0.0 );
        break;
    }
    }
    validate_spec( s );
    return s;
}

// Every perturbation that applies to the spec.
inline std::vector< perturbation > applicable_perturbations( const scene_graph_spec& s )
{
    std::vector< perturbation > out;
    for ( const auto& m : s.motions )
    {
        out.push_back( { perturbation_kind::flip_direction, m.id, 0 } );
        if ( synth_detail::emits( m, "magnitude" ) )
            out.push_back( { perturbation_kind::half_magnitude, m.id, 0 } );
        out.push_back( { perturbation_kind::half_duration, m.id, 0 } );
        if ( m.post && m.type == channel::translate )
            out.push_back( { perturbation_kind::drop_post, m.id, 0 } );
        if ( const auto ri = synth_detail::first_relation_of( s, m.id ) )
        {
            const auto& r = s.relations[ *ri ];
            if ( s.motion( r.a == m.id ? r.b : r.a )->agent != m.agent )
                out.push_back( { perturbation_kind::shift_start, m.id, 0 } );
        }
    }
    for ( std::size_t i = 0; i < s.relations.size(); ++i )
        if ( s.relations[ i ].kind != "while" )
            out.push_back( { perturbation_kind::swap_order, "", i } );
    return out;
}

// Predicates keyed by (statement index, predicate name).
using predicate_key = std::pair< std::size_t, std::string >;

struct failure_expectation
{
    std::set< predicate_key > targets; // must evaluate false
    std::set< predicate_key > cone;    // may evaluate false
};

// Which predicates of the unperturbed program must (targets) or may (cone) turn false.
inline failure_expectation expected_failures( const scene_graph_spec& original, const perturbation& p, const compiled_program& prog,
                                              double tau = tolerances{}.tau_space )
{
    const scene_graph_spec after = perturb( original, p );
    const animation rendered = render_trace( after );
    failure_expectation ex;
    std::map< std::string, std::size_t > stmt_of_motion;
    for ( std::size_t i = 0; i < prog.statements.size(); ++i )
        if ( prog.statements[ i ].kind == statement_origin::motion )
            stmt_of_motion[ prog.statements[ i ].id ] = i;

    // Another motion of the same agent can satisfy a single predicate on its own frames:
    // same-type motions, and off-center rotations or scales, which also translate the box.
    auto shadowed = [ & ]( const motion_spec& m ) {
        for ( const auto& o : after.motions )
        {
            if ( o.id == m.id || o.agent != m.agent )
                continue;
            if ( o.type == m.type )
                return true;
            if ( m.type == channel::translate && o.origin )
                for ( const auto& c : *o.origin )
                    if ( !c.percent || c.value != 50.0 )
                        return true;
        }
        return false;
    };

    std::set< std::string > broken;
    auto target = [ & ]( const motion_spec& m, const std::string& pred ) {
        if ( !synth_detail::emits( m, pred ) )
            return;
        broken.insert( m.id );
        if ( shadowed( m ) )
            ex.cone.insert( { stmt_of_motion.at( m.id ), pred } );
        else
            ex.targets.insert( { stmt_of_motion.at( m.id ), pred } );
    };

    if ( !p.motion.empty() )
    {
        const motion_spec& m = *original.motion( p.motion );
        switch ( p.kind )
        {
        case perturbation_kind::flip_direction:
            target( m, "direction" );
            if ( m.type == channel::scale )
                target( m, "magnitude" );
            break;
        case perturbation_kind::half_magnitude: target( m, "magnitude" ); break;
        case perturbation_kind::half_duration: target( m, "duration" ); break;
        default: break;
        }
    }

    for ( const auto& m : after.motions )
    {
        if ( !m.post || !synth_detail::emits( m, "post" ) )
            continue;
        const std::size_t st = stmt_of_motion.at( m.id );
        ex.cone.insert( { st, "s_" + m.post->relation } );
        if ( !post_holds( after, rendered, m, tau ) )
        {
            ex.targets.insert( { st, "post" } );
            broken.insert( m.id );
        }
    }

    for ( std::size_t i = 0; i < prog.statements.size(); ++i )
    {
        if ( prog.statements[ i ].kind != statement_origin::relation )
            continue;
        const relation_spec& r = after.relations[ prog.statements[ i ].index ];
        if ( broken.contains( r.a ) || broken.contains( r.b ) || !relation_holds( after, r ) )
            ex.targets.insert( { i, "t_" + r.kind } );
    }
    return ex;
}

// ---------------------------------------------------------------------------
// Default suite

namespace synth_detail
{

struct suite_builder
{
    std::mt19937_64 rng;
    double tau = tolerances{}.tau_space;

    template < typename T >
    const T& pick( const std::vector< T >& v )
    {
        return v[ std::uniform_int_distribution< std::size_t >( 0, v.size() - 1 )( rng ) ];
    }

    double uniform( double lo, double hi ) { return std::uniform_real_distribution< double >( lo, hi )( rng ); }

    // rounds to a multiple of `step` so programs print short numbers
    double grid( double lo, double hi, double step )
    {
        const auto n = static_cast< long long >( std::floor( ( hi - lo ) / step ) );
        return lo + step * static_cast< double >( std::uniform_int_distribution< long long >( 0, n )( rng ) );
    }

    easing_kind easing() { return pick( std::vector< easing_kind >{ easing_kind::linear, easing_kind::smoothstep } ); }

    // Distinct (color, shape) pairs so every object description is unique.
    std::vector< std::pair< std::string, shape_class > > palette( std::size_t n )
    {
        static const std::vector< std::string > colors{ "orange", "blue", "black", "red", "green", "purple", "gray", "gold" };
        static const std::vector< shape_class > shapes{ shape_class::circle, shape_class::square, shape_class::rectangle,
                                                        shape_class::triangle, shape_class::letter };
        std::vector< std::pair< std::string, shape_class > > all;
        for ( const auto& c : colors )
            for ( const auto s : shapes )
                all.emplace_back( c, s );
        std::ranges::shuffle( all, rng );
        std::vector< std::pair< std::string, shape_class > > out;
        std::set< std::string > used_colors;
        for ( const auto& p : all )
        {
            if ( out.size() == n )
                break;
            if ( used_colors.insert( p.first ).second )
                out.push_back( p );
        }
        return out;
    }

    static object_spec make_object( std::string id, const std::pair< std::string, shape_class >& look, vec2 center, double size )
    {
        object_spec o;
        o.id = std::move( id );
        o.color = look.first;
        o.shape = look.second;
        double w = size, h = size;
        if ( o.shape == shape_class::rectangle )
            w = size * 1.6;
        else if ( o.shape == shape_class::letter )
            w = size * 0.7;
        o.bbox = { center.x - w / 2.0, center.y - h / 2.0, w, h };
        return o;
    }

    motion_spec translate( std::string id, std::string agent, vec2 dir, double mag, double duration, double start )
    {
        motion_spec m;
        m.id = std::move( id );
        m.agent = std::move( agent );
        m.type = channel::translate;
        m.direction = dir;
        m.magnitude = mag;
        m.duration = duration;
        m.start = start;
        m.easing = easing();
        return m;
    }

    motion_spec rotate( std::string id, std::string agent, double start )
    {
        motion_spec m;
        m.id = std::move( id );
        m.agent = std::move( agent );
        m.type = channel::rotate;
        m.clockwise = pick( std::vector< int >{ 0, 1 } ) == 1;
        m.magnitude = pick( std::vector< double >{ 45.0, 90.0, 135.0, 180.0, 270.0, 360.0 } );
        const int o = pick( std::vector< int >{ 0, 0, 1, 2 } );
        if ( o == 0 )
            m.origin = std::array< origin_coord, 2 >{ origin_coord{ true, 50.0 }, origin_coord{ true, 50.0 } };
        else if ( o == 1 )
            m.origin = std::array< origin_coord, 2 >{ origin_coord{ true, 100.0 }, origin_coord{ true, 100.0 } };
        else
            m.origin = std::array< origin_coord, 2 >{ origin_coord{ true, 0.0 }, origin_coord{ true, 0.0 } };
        m.duration = grid( 1.0, 2.0, 0.5 );
        m.start = start;
        m.easing = easing();
        return m;
    }

    motion_spec scale( std::string id, std::string agent, double start )
    {
        motion_spec m;
        m.id = std::move( id );
        m.agent = std::move( agent );
        m.type = channel::scale;
        switch ( pick( std::vector< int >{ 0, 1, 2, 3 } ) )
        {
        case 0:
            m.direction = { 1.0, 1.0 };
            m.factors = { 2.0, 2.0 };
            break;
        case 1:
            m.direction = { -1.0, -1.0 };
            m.factors = { 0.5, 0.5 };
            break;
        case 2:
            m.direction = { 1.0, 0.0 };
            m.factors = { 2.5, 0.0 };
            break;
        default:
            m.direction = { 0.0, -1.0 };
            m.factors = { 0.0, 0.5 };
            break;
        }
        m.origin = pick( std::vector< int >{ 0, 1 } ) == 0
                       ? std::array< origin_coord, 2 >{ origin_coord{ true, 50.0 }, origin_coord{ true, 50.0 } }
                       : std::array< origin_coord, 2 >{ origin_coord{ true, 0.0 }, origin_coord{ true, 0.0 } };
        m.duration = grid( 0.5, 2.0, 0.5 );
        m.start = start;
        m.easing = easing();
        return m;
    }

    motion_spec any_motion( const std::string& id, const std::string& agent, double start )
    {
        switch ( pick( std::vector< int >{ 0, 1, 2 } ) )
        {
        case 0: {
            static const std::vector< vec2 > dirs{ { 0, 1 }, { 0, -1 }, { 1, 0 }, { -1, 0 }, { 1, 1 }, { -1, 1 } };
            return translate( id, agent, pick( dirs ), grid( 60.0, 200.0, 20.0 ), grid( 0.5, 2.0, 0.5 ), start );
        }
        case 1: return rotate( id, agent, start );
        default: return scale( id, agent, start );
        }
    }

    // Places `agent` so that a translation of it ends in `relation` to `ref`, failing at
    // the start and at half the distance.
    motion_spec approach( const std::string& id, object_spec& agent, const object_spec& ref, const std::string& relation, double start )
    {
        const bbox r{ ref.bbox.x, ref.bbox.y, ref.bbox.x + ref.bbox.w, ref.bbox.y + ref.bbox.h };
        const double w = agent.bbox.w, h = agent.bbox.h;
        const double travel = grid( 120.0, 200.0, 20.0 );
        const double margin = grid( 10.0, 30.0, 10.0 );
        const double cy = ( r.ymin + r.ymax ) / 2.0, cx = ( r.xmin + r.xmax ) / 2.0;
        vec2 end_center, dir;
        if ( relation == "right" )
            end_center = { r.xmax + margin - w / 2.0, cy }, dir = { 1, 0 };
        else if ( relation == "left" )
            end_center = { r.xmin - margin + w / 2.0, cy }, dir = { -1, 0 };
        else if ( relation == "top" )
            end_center = { cx, r.ymin - margin + h / 2.0 }, dir = { 0, 1 };
        else if ( relation == "bottom" )
            end_center = { cx, r.ymax + margin - h / 2.0 }, dir = { 0, -1 };
        else if ( relation == "left_border" || relation == "border" )
            end_center = { r.xmin - w / 2.0, cy }, dir = { 1, 0 };
        else if ( relation == "right_border" )
            end_center = { r.xmax + w / 2.0, cy }, dir = { -1, 0 };
        else if ( relation == "top_border" )
            end_center = { cx, r.ymin - h / 2.0 }, dir = { 0, -1 };
        else if ( relation == "bottom_border" )
            end_center = { cx, r.ymax + h / 2.0 }, dir = { 0, 1 };
        else // intersect
            end_center = { cx, cy }, dir = { 1, 0 };
        // start = end - travel * dir (dir is logical y-up)
        const vec2 start_center{ end_center.x - travel * dir.x, end_center.y + travel * dir.y };
        agent.bbox.x = start_center.x - w / 2.0;
        agent.bbox.y = start_center.y - h / 2.0;
        motion_spec m = translate( id, agent.id, dir, travel, grid( 0.5, 2.0, 0.5 ), start );
        m.post = post_spec{ relation, ref.id };
        return m;
    }
};

// A non-uniform scale applied after a rotation of the same object scales along world axes,
// which leaves shear in the matrix and has no local-axis reading.
inline bool scale_follows_rotation( const scene_graph_spec& s )
{
    for ( const auto& sc : s.motions )
    {
        const double fx = sc.factors.x == 0.0 ? 1.0 : sc.factors.x, fy = sc.factors.y == 0.0 ? 1.0 : sc.factors.y;
        if ( sc.type != channel::scale || fx == fy )
            continue;
        for ( const auto& r : s.motions )
            if ( r.type == channel::rotate && r.agent == sc.agent && r.start < sc.start + sc.duration )
                return true;
    }
    return false;
}

inline bool spec_is_sound( const scene_graph_spec& s, double tau )
{
    if ( scale_follows_rotation( s ) )
        return false;
    const animation a = render_trace( s );
    for ( const auto& m : s.motions )
    {
        if ( !m.post )
            continue;
        if ( !post_holds( s, a, m, tau ) )
            return false;
        // the relation must not already hold when the motion starts, nor halfway
        const auto& rel = default_masks().at( m.post->relation );
        const std::size_t k0 = window_of( m, s.fps ).k0;
        if ( rel.matches( world_box( a, m.agent, k0 ), world_box( a, m.post->reference, k0 ), tau ) )
            return false;
        scene_graph_spec half = perturb( s, { perturbation_kind::drop_post, m.id, 0 } );
        if ( post_holds( half, render_trace( half ), *half.motion( m.id ), tau ) )
            return false;
    }
    for ( const auto& r : s.relations )
        if ( !relation_holds( s, r ) )
            return false;
    return true;
}

} // namespace synth_detail

// 56 specs: 12 single atomic, 14 spatial, 12 temporal, 18 spatio-temporal.
inline std::vector< scene_graph_spec > default_suite( std::uint64_t seed = 7 )
{
    synth_detail::suite_builder b{ std::mt19937_64{ seed } };
    std::vector< scene_graph_spec > out;
    static const std::vector< std::string > spatial_rel{ "right", "left", "top", "bottom", "left_border", "right_border", "top_border",
                                                          "bottom_border", "intersect", "border", "right", "top", "left_border", "bottom" };

    auto named = []( const std::string& cat, std::size_t i ) {
        char buf[ 64 ];
        std::snprintf( buf, sizeof buf, "%s_%02zu", cat.c_str(), i + 1 );
        return std::string{ buf };
    };

    // Retries a category builder until its geometry and timing are consistent.
    auto build = [ & ]( auto&& make ) {
        for ( int attempt = 0; attempt < 100; ++attempt )
        {
            scene_graph_spec s = make();
            if ( synth_detail::spec_is_sound( s, b.tau ) )
                return s;
        }
        throw error{ error_kind::invalid_spec, "could not build a consistent suite spec" };
    };

    for ( std::size_t i = 0; i < 12; ++i )
        out.push_back( build( [ & ] {
            scene_graph_spec s;
            s.name = named( "single", i );
            s.category = "single";
            const auto looks = b.palette( 2 );
            s.objects.push_back( b.make_object( "a", looks[ 0 ], { b.grid( 300, 500, 20 ), b.grid( 250, 350, 10 ) }, b.grid( 40, 80, 10 ) ) );
            if ( i % 2 == 1 )
                s.objects.push_back( b.make_object( "distractor", looks[ 1 ], { 100, 100 }, 40 ) );
            const double start = b.pick( std::vector< double >{ 0.0, 0.0, 0.5 } );
            if ( i % 3 == 0 )
            {
                static const std::vector< vec2 > dirs{ { 0, 1 }, { 0, -1 }, { 1, 0 }, { -1, 0 }, { 1, 1 }, { -1, -1 } };
                s.motions.push_back( b.translate( "m1", "a", b.pick( dirs ), b.grid( 60, 200, 20 ), b.grid( 0.5, 2.0, 0.5 ), start ) );
            }
            else if ( i % 3 == 1 )
                s.motions.push_back( b.rotate( "m1", "a", start ) );
            else
                s.motions.push_back( b.scale( "m1", "a", start ) );
            return s;
        } ) );

    for ( std::size_t i = 0; i < 14; ++i )
        out.push_back( build( [ & ] {
            scene_graph_spec s;
            s.name = named( "spatial", i );
            s.category = "spatial";
            const auto looks = b.palette( 2 );
            object_spec ref = b.make_object( "ref", looks[ 1 ], { 400, 300 }, b.grid( 60, 100, 10 ) );
            object_spec agent = b.make_object( "a", looks[ 0 ], { 0, 0 }, b.grid( 30, 60, 10 ) );
            motion_spec m = b.approach( "m1", agent, ref, spatial_rel[ i ], b.pick( std::vector< double >{ 0.0, 0.5 } ) );
            s.objects = { agent, ref };
            s.motions = { m };
            return s;
        } ) );

    for ( std::size_t i = 0; i < 12; ++i )
        out.push_back( build( [ & ] {
            scene_graph_spec s;
            s.name = named( "temporal", i );
            s.category = "temporal";
            const auto looks = b.palette( 2 );
            s.objects.push_back( b.make_object( "a", looks[ 0 ], { 250, 300 }, 50 ) );
            s.objects.push_back( b.make_object( "b", looks[ 1 ], { 550, 300 }, 50 ) );
            const int pattern = static_cast< int >( i % 4 );
            if ( pattern == 0 ) // same agent, sequential
            {
                motion_spec m1 = b.any_motion( "m1", "a", 0.0 );
                motion_spec m2 = b.any_motion( "m2", "a", m1.duration + b.pick( std::vector< double >{ 0.0, 0.5 } ) );
                s.motions = { m1, m2 };
                s.relations = { { "before", "m1", "m2" } };
            }
            else if ( pattern == 1 ) // two agents, sequential
            {
                motion_spec m1 = b.any_motion( "m1", "a", 0.0 );
                motion_spec m2 = b.any_motion( "m2", "b", m1.duration );
                s.motions = { m1, m2 };
                s.relations = { { "before", "m1", "m2" } };
            }
            else if ( pattern == 2 ) // two agents, simultaneous
            {
                motion_spec m1 = b.any_motion( "m1", "a", 0.0 );
                motion_spec m2 = b.any_motion( "m2", "b", b.pick( std::vector< double >{ 0.0, 0.5 } ) );
                m1.duration = std::max( m1.duration, 1.5 );
                s.motions = { m1, m2 };
                s.relations = { { "while", "m1", "m2" } };
            }
            else // three-step chain, the last by another agent described with after
            {
                motion_spec m1 = b.any_motion( "m1", "a", 0.0 );
                motion_spec m2 = b.any_motion( "m2", "a", m1.duration );
                motion_spec m3 = b.any_motion( "m3", "b", m2.start + m2.duration + 0.5 );
                s.motions = { m1, m2, m3 };
                s.relations = { { "before", "m1", "m2" }, { "after", "m3", "m2" } };
            }
            return s;
        } ) );

    for ( std::size_t i = 0; i < 18; ++i )
        out.push_back( build( [ & ] {
            scene_graph_spec s;
            s.name = named( "spatiotemporal", i );
            s.category = "spatiotemporal";
            const auto looks = b.palette( 3 );
            object_spec ref = b.make_object( "ref", looks[ 2 ], { 400, 300 }, b.grid( 60, 100, 10 ) );
            object_spec a = b.make_object( "a", looks[ 0 ], { 0, 0 }, b.grid( 30, 50, 10 ) );
            object_spec other = b.make_object( "b", looks[ 1 ], { 650, 500 }, 40 );
            const std::string rel = spatial_rel[ ( i * 5 ) % spatial_rel.size() ];
            const int pattern = static_cast< int >( i % 3 );
            motion_spec m1 = b.approach( "m1", a, ref, rel, 0.0 );
            if ( pattern == 0 ) // approach, then the same agent moves again
            {
                motion_spec m2 = b.pick( std::vector< int >{ 0, 1 } ) == 0 ? b.rotate( "m2", "a", m1.duration )
                                                                             : b.scale( "m2", "a", m1.duration );
                m2.origin = std::array< origin_coord, 2 >{ origin_coord{}, origin_coord{} };
                s.objects = { a, ref };
                s.motions = { m1, m2 };
                s.relations = { { "before", "m1", "m2" } };
            }
            else if ( pattern == 1 ) // approach while another object moves
            {
                motion_spec m2 = b.any_motion( "m2", "b", 0.0 );
                m1.duration = std::max( m1.duration, 1.0 );
                s.objects = { a, other, ref };
                s.motions = { m1, m2 };
                s.relations = { { "while", "m1", "m2" } };
            }
            else // another object moves first, then the approach
            {
                motion_spec m0 = b.any_motion( "m1", "b", 0.0 );
                m1.id = "m2";
                m1.start = m0.duration + b.pick( std::vector< double >{ 0.0, 0.5 } );
                s.objects = { a, other, ref };
                s.motions = { m0, m1 };
                s.relations = { { "before", "m1", "m2" } };
            }
            return s;
        } ) );
    return out;
}

} // namespace mover
