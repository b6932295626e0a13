#pragma once

#include "color.hpp"
#include "error.hpp"
#include "geometry.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mover
{

enum class shape_class
{
    circle,
    square,
    rectangle,
    triangle,
    ellipse,
    path,
    letter,
    group,
    image,
};

inline constexpr std::array< std::pair< shape_class, std::string_view >, 9 > shape_names{ {
    { shape_class::circle, "circle" },
    { shape_class::square, "square" },
    { shape_class::rectangle, "rectangle" },
    { shape_class::triangle, "triangle" },
    { shape_class::ellipse, "ellipse" },
    { shape_class::path, "path" },
    { shape_class::letter, "letter" },
    { shape_class::group, "group" },
    { shape_class::image, "image" },
} };

constexpr std::string_view to_string( shape_class s )
{
    for ( const auto& [ k, name ] : shape_names )
        if ( k == s )
            return name;
    return "path";
}

inline std::optional< shape_class > parse_shape( std::string_view name )
{
    const std::string key = to_lower( name );
    for ( const auto& [ k, n ] : shape_names )
        if ( n == key )
            return k;
    return std::nullopt;
}

struct object_info
{
    std::string id;
    shape_class shape = shape_class::path;
    color fill;
    local_box bbox_local;
};

class scene
{
    std::vector< object_info > _objects;

public:
    scene() = default;
    explicit scene( std::vector< object_info > objects ) : _objects{ std::move( objects ) } { validate(); }

    [[nodiscard]] const std::vector< object_info >& objects() const { return _objects; }
    [[nodiscard]] std::size_t size() const { return _objects.size(); }
    [[nodiscard]] const object_info& operator[]( std::size_t i ) const { return _objects[ i ]; }

    [[nodiscard]] std::optional< std::size_t > index_of( std::string_view id ) const
    {
        for ( std::size_t i = 0; i < _objects.size(); ++i )
            if ( _objects[ i ].id == id )
                return i;
        return std::nullopt;
    }

private:
    void validate() const
    {
        std::set< std::string, std::less<> > seen;
        for ( const auto& o : _objects )
        {
            if ( o.id.empty() )
                throw error{ error_kind::malformed_trace, "object id must be non-empty" };
            if ( !seen.insert( o.id ).second )
                throw error{ error_kind::malformed_trace, "duplicate object id '" + o.id + "'" };
            const auto& b = o.bbox_local;
            if ( !std::isfinite( b.x ) || !std::isfinite( b.y ) || !std::isfinite( b.w ) || !std::isfinite( b.h ) ||
                 b.w < 0.0 || b.h < 0.0 || ( b.w == 0.0 && b.h == 0.0 ) )
                throw error{ error_kind::malformed_trace, "object '" + o.id + "' has a degenerate bbox_local" };
        }
    }
};

inline constexpr double min_abs_det = 1e-9;

// Per object, per frame matrices. Frames are 1-based everywhere outside this storage.
struct animation_trace
{
    double fps = 60.0;
    std::size_t num_frames = 0;
    std::vector< std::vector< affine > > frames; // [object][frame - 1]

    [[nodiscard]] const affine& at( std::size_t object, std::size_t frame ) const { return frames[ object ][ frame - 1 ]; }
};

struct animation
{
    mover::scene scene;
    animation_trace trace;
};

namespace detail
{

[[noreturn]] inline void trace_error( const std::string& path, const std::string& what )
{
    throw error{ error_kind::malformed_trace, path + ": " + what };
}

inline double require_number( const nlohmann::json& j, const std::string& path )
{
    if ( !j.is_number() )
        trace_error( path, "expected a number" );
    const double v = j.get< double >();
    if ( !std::isfinite( v ) )
        trace_error( path, "expected a finite number" );
    return v;
}

inline local_box parse_box( const nlohmann::json& j, const std::string& path )
{
    if ( !j.is_array() || j.size() != 4 )
        trace_error( path, "expected [x, y, w, h]" );
    return { require_number( j[ 0 ], path + "[0]" ), require_number( j[ 1 ], path + "[1]" ),
             require_number( j[ 2 ], path + "[2]" ), require_number( j[ 3 ], path + "[3]" ) };
}

} // namespace detail

inline void validate_trace( const scene& sc, const animation_trace& tr )
{
    if ( !( tr.fps > 0.0 ) || !std::isfinite( tr.fps ) )
        throw error{ error_kind::malformed_trace, "$.fps: must be positive" };
    if ( tr.frames.size() != sc.size() )
        throw error{ error_kind::malformed_trace, "frame table does not match the object list" };
    if ( tr.num_frames < 1 )
        throw error{ error_kind::inconsistent_frame_count, "animation needs at least one frame" };
    for ( std::size_t i = 0; i < tr.frames.size(); ++i )
    {
        if ( tr.frames[ i ].size() != tr.num_frames )
            throw error{ error_kind::inconsistent_frame_count,
                         "object '" + sc[ i ].id + "' has " + std::to_string( tr.frames[ i ].size() ) + " frames, expected " +
                             std::to_string( tr.num_frames ) };
        for ( std::size_t f = 0; f < tr.frames[ i ].size(); ++f )
            if ( !( std::abs( tr.frames[ i ][ f ].det() ) > min_abs_det ) )
                throw error{ error_kind::degenerate_matrix,
                             "object '" + sc[ i ].id + "' frame " + std::to_string( f + 1 ) };
    }
}

// Parses the trace JSON. When `appearance` (usually from an SVG) is supplied, it
// provides shape/color/bbox for ids it knows; the trace's own fields win otherwise.
inline animation parse_trace( const nlohmann::json& root, const scene* appearance = nullptr )
{
    if ( !root.is_object() )
        detail::trace_error( "$", "expected an object" );
    animation out;
    out.trace.fps = root.contains( "fps" ) ? detail::require_number( root[ "fps" ], "$.fps" ) : 60.0;
    if ( !root.contains( "objects" ) || !root[ "objects" ].is_array() )
        detail::trace_error( "$.objects", "expected an array" );

    std::optional< std::size_t > declared;
    if ( root.contains( "num_frames" ) )
    {
        if ( !root[ "num_frames" ].is_number_integer() || root[ "num_frames" ].get< long long >() < 1 )
            detail::trace_error( "$.num_frames", "expected a positive integer" );
        declared = root[ "num_frames" ].get< std::size_t >();
    }

    std::vector< object_info > objects;
    const auto& arr = root[ "objects" ];
    for ( std::size_t i = 0; i < arr.size(); ++i )
    {
        const std::string path = "$.objects[" + std::to_string( i ) + "]";
        const auto& jo = arr[ i ];
        if ( !jo.is_object() )
            detail::trace_error( path, "expected an object" );
        if ( !jo.contains( "id" ) || !jo[ "id" ].is_string() || jo[ "id" ].get< std::string >().empty() )
            detail::trace_error( path + ".id", "expected a non-empty string" );

        object_info info;
        info.id = jo[ "id" ].get< std::string >();
        const object_info* known = nullptr;
        if ( appearance )
            if ( const auto k = appearance->index_of( info.id ) )
                known = &( *appearance )[ *k ];

        if ( jo.contains( "shape" ) )
        {
            if ( !jo[ "shape" ].is_string() )
                detail::trace_error( path + ".shape", "expected a string" );
            const auto s = parse_shape( jo[ "shape" ].get< std::string >() );
            if ( !s )
                detail::trace_error( path + ".shape", "unknown shape '" + jo[ "shape" ].get< std::string >() + "'" );
            info.shape = *s;
        }
        else if ( known )
            info.shape = known->shape;
        else
            detail::trace_error( path + ".shape", "required when no SVG scene is supplied" );

        if ( jo.contains( "color" ) )
        {
            if ( !jo[ "color" ].is_string() )
                detail::trace_error( path + ".color", "expected a string" );
            const auto c = parse_color( jo[ "color" ].get< std::string >() );
            if ( !c )
                detail::trace_error( path + ".color", "unrecognized color '" + jo[ "color" ].get< std::string >() + "'" );
            info.fill = canonicalize( *c );
        }
        else if ( known )
            info.fill = known->fill;
        else
            detail::trace_error( path + ".color", "required when no SVG scene is supplied" );

        if ( jo.contains( "bbox_local" ) )
            info.bbox_local = detail::parse_box( jo[ "bbox_local" ], path + ".bbox_local" );
        else if ( known )
            info.bbox_local = known->bbox_local;
        else
            detail::trace_error( path + ".bbox_local", "required when no SVG scene is supplied" );

        if ( !jo.contains( "frames" ) || !jo[ "frames" ].is_array() )
            detail::trace_error( path + ".frames", "expected an array" );
        std::vector< affine > frames;
        frames.reserve( jo[ "frames" ].size() );
        for ( std::size_t f = 0; f < jo[ "frames" ].size(); ++f )
        {
            const auto& m = jo[ "frames" ][ f ];
            const std::string mpath = path + ".frames[" + std::to_string( f ) + "]";
            if ( !m.is_array() || m.size() != 6 )
                detail::trace_error( mpath, "expected [a, b, c, d, e, f]" );
            std::array< double, 6 > v{};
            for ( std::size_t k = 0; k < 6; ++k )
                v[ k ] = detail::require_number( m[ k ], mpath + "[" + std::to_string( k ) + "]" );
            frames.push_back( affine::from_array( v ) );
        }
        objects.push_back( std::move( info ) );
        out.trace.frames.push_back( std::move( frames ) );
    }

    if ( objects.empty() )
        detail::trace_error( "$.objects", "at least one object required" );
    out.trace.num_frames = declared.value_or( out.trace.frames.front().size() );
    out.scene = scene{ std::move( objects ) };
    validate_trace( out.scene, out.trace );
    return out;
}

inline std::string read_text_file( const std::string& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw error{ error_kind::io_error, "cannot open '" + path + "'" };
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline animation load_trace( const std::string& path, const scene* appearance = nullptr )
{
    const std::string text = read_text_file( path );
    nlohmann::json root;
    try
    {
        root = nlohmann::json::parse( text );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw error{ error_kind::malformed_trace, "$: " + std::string{ e.what() } };
    }
    return parse_trace( root, appearance );
}

// Canonical serialization: fixed key order, one object per block, floats at six decimals.
inline std::string serialize_trace( const animation& anim )
{
    std::ostringstream os;
    const auto& sc = anim.scene;
    const auto& tr = anim.trace;
    os << "{\n  \"fps\": " << fixed6( tr.fps ) << ",\n  \"num_frames\": " << tr.num_frames << ",\n  \"objects\": [";
    for ( std::size_t i = 0; i < sc.size(); ++i )
    {
        const auto& o = sc[ i ];
        os << ( i ? "," : "" ) << "\n    {\n      \"id\": " << nlohmann::json( o.id ).dump()
           << ",\n      \"shape\": \"" << to_string( o.shape ) << "\""
           << ",\n      \"color\": \"" << ( o.fill.name ? *o.fill.name : to_hex( o.fill.value ) ) << "\""
           << ",\n      \"bbox_local\": [" << fixed6( o.bbox_local.x ) << ", " << fixed6( o.bbox_local.y ) << ", "
           << fixed6( o.bbox_local.w ) << ", " << fixed6( o.bbox_local.h ) << "],\n      \"frames\": [";
        for ( std::size_t f = 0; f < tr.frames[ i ].size(); ++f )
        {
            const auto m = tr.frames[ i ][ f ].to_array();
            os << ( f ? "," : "" ) << "\n        [";
            for ( std::size_t k = 0; k < 6; ++k )
                os << ( k ? ", " : "" ) << fixed6( m[ k ] );
            os << "]";
        }
        os << "\n      ]\n    }";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

} // namespace mover
