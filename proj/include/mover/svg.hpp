#pragma once

#include "color.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "scene.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mover
{

namespace svg_detail
{

using ptree = boost::property_tree::ptree;

struct extent
{
    double xmin = std::numeric_limits< double >::infinity();
    double ymin = std::numeric_limits< double >::infinity();
    double xmax = -std::numeric_limits< double >::infinity();
    double ymax = -std::numeric_limits< double >::infinity();

    void add( vec2 p )
    {
        xmin = std::min( xmin, p.x );
        ymin = std::min( ymin, p.y );
        xmax = std::max( xmax, p.x );
        ymax = std::max( ymax, p.y );
    }
    void merge( const extent& o )
    {
        if ( o.empty() )
            return;
        add( { o.xmin, o.ymin } );
        add( { o.xmax, o.ymax } );
    }
    [[nodiscard]] bool empty() const { return xmin > xmax; }
    [[nodiscard]] local_box box() const { return { xmin, ymin, xmax - xmin, ymax - ymin }; }
};

inline std::optional< std::string > attr( const ptree& node, const std::string& name )
{
    if ( const auto attrs = node.get_child_optional( "<xmlattr>" ) )
        if ( const auto v = attrs->get_optional< std::string >( name ) )
            return *v;
    return std::nullopt;
}

inline double number_attr( const ptree& node, const std::string& name, double fallback = 0.0 )
{
    const auto v = attr( node, name );
    if ( !v )
        return fallback;
    // tolerate unit suffixes such as "px"
    char* end = nullptr;
    const double d = std::strtod( v->c_str(), &end );
    if ( end == v->c_str() )
        throw error{ error_kind::svg_parse_error, "attribute " + name + "='" + *v + "' is not a number" };
    return d;
}

// Numbers in "points" and path data: separators are whitespace and commas.
class number_scanner
{
    std::string_view _s;
    std::size_t _pos = 0;

public:
    explicit number_scanner( std::string_view s ) : _s{ s } {}

    void skip_separators()
    {
        while ( _pos < _s.size() && ( std::isspace( static_cast< unsigned char >( _s[ _pos ] ) ) || _s[ _pos ] == ',' ) )
            ++_pos;
    }

    [[nodiscard]] bool at_end()
    {
        skip_separators();
        return _pos >= _s.size();
    }

    [[nodiscard]] bool at_number()
    {
        skip_separators();
        if ( _pos >= _s.size() )
            return false;
        const char c = _s[ _pos ];
        return std::isdigit( static_cast< unsigned char >( c ) ) || c == '-' || c == '+' || c == '.';
    }

    std::optional< char > command()
    {
        skip_separators();
        if ( _pos < _s.size() && std::isalpha( static_cast< unsigned char >( _s[ _pos ] ) ) )
            return _s[ _pos++ ];
        return std::nullopt;
    }

    double number()
    {
        skip_separators();
        const std::string rest{ _s.substr( _pos ) };
        char* end = nullptr;
        const double v = std::strtod( rest.c_str(), &end );
        if ( end == rest.c_str() )
            throw error{ error_kind::svg_parse_error, "bad number in '" + std::string{ _s } + "'" };
        _pos += static_cast< std::size_t >( end - rest.c_str() );
        return v;
    }
};

inline std::vector< vec2 > parse_points( std::string_view text )
{
    number_scanner sc{ text };
    std::vector< vec2 > pts;
    while ( !sc.at_end() )
    {
        const double x = sc.number();
        const double y = sc.number();
        pts.push_back( { x, y } );
    }
    return pts;
}

// Extent of all vertices and control points in path data. Arcs contribute their endpoints only.
inline extent path_extent( std::string_view d )
{
    number_scanner sc{ d };
    extent ext;
    vec2 cur{}, start{};
    char cmd = 0;
    while ( !sc.at_end() )
    {
        if ( const auto c = sc.command() )
            cmd = *c;
        else if ( cmd == 0 )
            throw error{ error_kind::svg_parse_error, "expected a path command" };

        const bool rel = std::islower( static_cast< unsigned char >( cmd ) );
        const char up = static_cast< char >( std::toupper( static_cast< unsigned char >( cmd ) ) );
        auto point = [ & ]() {
            const double x = sc.number();
            const double y = sc.number();
            return rel ? vec2{ cur.x + x, cur.y + y } : vec2{ x, y };
        };

        switch ( up )
        {
        case 'Z':
            cur = start;
            cmd = 0;
            continue;
        case 'M':
            cur = start = point();
            ext.add( cur );
            cmd = rel ? 'l' : 'L'; // implicit lineto after the first pair
            break;
        case 'L':
        case 'T':
            cur = point();
            ext.add( cur );
            break;
        case 'H':
            cur.x = rel ? cur.x + sc.number() : sc.number();
            ext.add( cur );
            break;
        case 'V':
            cur.y = rel ? cur.y + sc.number() : sc.number();
            ext.add( cur );
            break;
        case 'C': {
            const vec2 c1 = point();
            const vec2 c2 = point();
            const vec2 p = point();
            ext.add( c1 );
            ext.add( c2 );
            ext.add( p );
            cur = p;
            break;
        }
        case 'S':
        case 'Q': {
            const vec2 c1 = point();
            const vec2 p = point();
            ext.add( c1 );
            ext.add( p );
            cur = p;
            break;
        }
        case 'A': {
            sc.number();
            sc.number();
            sc.number();
            sc.number();
            sc.number();
            cur = point();
            ext.add( cur );
            break;
        }
        default:
            throw error{ error_kind::svg_parse_error, std::string{ "unsupported path command '" } + cmd + "'" };
        }
    }
    return ext;
}

inline std::optional< std::string > fill_of( const ptree& node )
{
    if ( const auto style = attr( node, "style" ) )
    {
        std::istringstream ss{ *style };
        std::string decl;
        while ( std::getline( ss, decl, ';' ) )
        {
            const auto colon = decl.find( ':' );
            if ( colon == std::string::npos )
                continue;
            const std::string key{ detail::trim( std::string_view{ decl }.substr( 0, colon ) ) };
            if ( key == "fill" )
                return std::string{ detail::trim( std::string_view{ decl }.substr( colon + 1 ) ) };
        }
    }
    return attr( node, "fill" );
}

inline bool is_ignorable( const std::string& tag )
{
    return tag == "<xmlattr>" || tag == "<xmlcomment>" || tag == "defs" || tag == "title" || tag == "desc" ||
           tag == "metadata" || tag == "style" || tag == "<xmltext>";
}

inline bool is_within( double a, double b, double rel )
{
    const double m = std::max( std::abs( a ), std::abs( b ) );
    return m == 0.0 || std::abs( a - b ) / m <= rel;
}

struct classified
{
    shape_class shape;
    extent ext;
};

inline classified classify( const std::string& tag, const ptree& node )
{
    extent ext;
    if ( tag == "circle" )
    {
        const double cx = number_attr( node, "cx" ), cy = number_attr( node, "cy" ), r = number_attr( node, "r" );
        ext.add( { cx - r, cy - r } );
        ext.add( { cx + r, cy + r } );
        return { shape_class::circle, ext };
    }
    if ( tag == "ellipse" )
    {
        const double cx = number_attr( node, "cx" ), cy = number_attr( node, "cy" );
        const double rx = number_attr( node, "rx" ), ry = number_attr( node, "ry" );
        ext.add( { cx - rx, cy - ry } );
        ext.add( { cx + rx, cy + ry } );
        return { is_within( rx, ry, 0.01 ) ? shape_class::circle : shape_class::ellipse, ext };
    }
    if ( tag == "rect" || tag == "image" )
    {
        const double x = number_attr( node, "x" ), y = number_attr( node, "y" );
        const double w = number_attr( node, "width" ), h = number_attr( node, "height" );
        ext.add( { x, y } );
        ext.add( { x + w, y + h } );
        if ( tag == "image" )
            return { shape_class::image, ext };
        return { is_within( w, h, 0.01 ) ? shape_class::square : shape_class::rectangle, ext };
    }
    if ( tag == "polygon" || tag == "polyline" )
    {
        const auto pts = parse_points( attr( node, "points" ).value_or( "" ) );
        for ( const auto& p : pts )
            ext.add( p );
        return { tag == "polygon" && pts.size() == 3 ? shape_class::triangle : shape_class::path, ext };
    }
    if ( tag == "line" )
    {
        ext.add( { number_attr( node, "x1" ), number_attr( node, "y1" ) } );
        ext.add( { number_attr( node, "x2" ), number_attr( node, "y2" ) } );
        return { shape_class::path, ext };
    }
    if ( tag == "path" )
        return { shape_class::letter, path_extent( attr( node, "d" ).value_or( "" ) ) };
    if ( tag == "text" )
    {
        // Em-box estimate: 0.6em advance per glyph, ascent 0.8em above the baseline.
        const double x = number_attr( node, "x" ), y = number_attr( node, "y" );
        const double size = number_attr( node, "font-size", 16.0 );
        const std::string content{ detail::trim( node.get_value< std::string >() ) };
        const double w = 0.6 * size * static_cast< double >( std::max< std::size_t >( content.size(), 1 ) );
        ext.add( { x, y - 0.8 * size } );
        ext.add( { x + w, y + 0.2 * size } );
        return { shape_class::letter, ext };
    }
    throw error{ error_kind::unsupported_node, tag };
}

inline extent group_extent( const ptree& g )
{
    extent ext;
    for ( const auto& [ tag, child ] : g )
    {
        if ( is_ignorable( tag ) )
            continue;
        if ( tag == "g" )
            ext.merge( group_extent( child ) );
        else
            ext.merge( classify( tag, child ).ext );
    }
    return ext;
}

inline std::optional< std::string > group_fill( const ptree& g )
{
    if ( auto f = fill_of( g ) )
        return f;
    for ( const auto& [ tag, child ] : g )
        if ( !is_ignorable( tag ) )
            if ( auto f = fill_of( child ) )
                return f;
    return std::nullopt;
}

inline object_info make_object( const std::string& tag, const ptree& node, std::size_t index )
{
    const auto id = attr( node, "id" );
    if ( !id || id->empty() )
        throw error{ error_kind::missing_id, "node #" + std::to_string( index ) + " <" + tag + ">" };

    object_info info;
    info.id = *id;
    extent ext;
    std::optional< std::string > fill;
    if ( tag == "g" )
    {
        info.shape = shape_class::group;
        ext = group_extent( node );
        fill = group_fill( node );
    }
    else
    {
        const auto c = classify( tag, node );
        info.shape = c.shape;
        ext = c.ext;
        fill = fill_of( node );
    }
    if ( ext.empty() )
        throw error{ error_kind::svg_parse_error, "object '" + info.id + "' has no geometry" };
    info.bbox_local = ext.box();

    rgb value{ 0, 0, 0 }; // SVG default fill
    if ( fill && *fill != "none" )
    {
        const auto parsed = parse_color( *fill );
        if ( !parsed )
            throw error{ error_kind::svg_parse_error, "object '" + info.id + "' has unrecognized fill '" + *fill + "'" };
        value = *parsed;
    }
    info.fill = canonicalize( value );
    return info;
}

} // namespace svg_detail

// Objects are the direct children of <svg>, or the children of id-less <g> layers one level down.
inline scene parse_svg_scene( const std::string& text )
{
    using svg_detail::ptree;
    ptree doc;
    try
    {
        std::istringstream in{ text };
        boost::property_tree::read_xml( in, doc );
    }
    catch ( const boost::property_tree::xml_parser_error& e )
    {
        throw error{ error_kind::svg_parse_error, e.what() };
    }
    const auto root = doc.get_child_optional( "svg" );
    if ( !root )
        throw error{ error_kind::svg_parse_error, "missing <svg> root element" };

    std::vector< object_info > objects;
    std::size_t index = 0;
    auto visit = [ & ]( const std::string& tag, const ptree& node ) {
        objects.push_back( svg_detail::make_object( tag, node, index++ ) );
    };
    for ( const auto& [ tag, node ] : *root )
    {
        if ( svg_detail::is_ignorable( tag ) )
            continue;
        if ( tag == "g" && !svg_detail::attr( node, "id" ) )
        {
            for ( const auto& [ ctag, child ] : node )
                if ( !svg_detail::is_ignorable( ctag ) )
                    visit( ctag, child );
            continue;
        }
        visit( tag, node );
    }
    try
    {
        return scene{ std::move( objects ) };
    }
    catch ( const error& e )
    {
        throw error{ error_kind::svg_parse_error, e.what() };
    }
}

inline scene load_svg_scene( const std::string& path ) { return parse_svg_scene( read_text_file( path ) ); }

} // namespace mover
