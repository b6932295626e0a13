#pragma once

#include "error.hpp"
#include "geometry.hpp"
#include "interval_index.hpp"
#include "scene.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mover
{

using frame_interval = closed_interval< std::size_t >;

enum class allen_relation
{
    precedes,
    meets,
    overlaps,
    finished_by,
    contains,
    starts,
    equals,
    started_by,
    during,
    finishes,
    overlapped_by,
    met_by,
    preceded_by,
};

inline constexpr std::array< allen_relation, 13 > all_allen_relations{
    allen_relation::precedes,   allen_relation::meets,  allen_relation::overlaps,      allen_relation::finished_by,
    allen_relation::contains,   allen_relation::starts, allen_relation::equals,        allen_relation::started_by,
    allen_relation::during,     allen_relation::finishes, allen_relation::overlapped_by, allen_relation::met_by,
    allen_relation::preceded_by,
};

constexpr std::string_view to_string( allen_relation r )
{
    constexpr std::array< std::string_view, 13 > names{ "precedes", "meets",    "overlaps",      "finished_by", "contains",
                                                        "starts",   "equals",   "started_by",    "during",      "finishes",
                                                        "overlapped_by", "met_by", "preceded_by" };
    return names[ static_cast< std::size_t >( r ) ];
}

inline std::optional< allen_relation > parse_allen( std::string_view name )
{
    for ( const auto r : all_allen_relations )
        if ( to_string( r ) == name )
            return r;
    return std::nullopt;
}

// The relation the swapped pair (b, a) stands in. The enum is laid out symmetrically.
constexpr allen_relation inverse( allen_relation r )
{
    return static_cast< allen_relation >( 12 - static_cast< int >( r ) );
}

// Allen relation of real intervals [a1, a2] and [b1, b2]. Endpoints within `tau`
// compare equal; ties resolve equality first, then adjacency, then strict order.
inline allen_relation allen_real( double a1, double a2, double b1, double b2, double tau = 0.0 )
{
    auto cmp = [ tau ]( double u, double v ) { return std::abs( u - v ) <= tau ? 0 : ( u < v ? -1 : 1 ); };
    const int s = cmp( a1, b1 );
    const int e = cmp( a2, b2 );
    if ( s == 0 && e == 0 )
        return allen_relation::equals;
    if ( s == 0 )
        return e < 0 ? allen_relation::starts : allen_relation::started_by;
    if ( e == 0 )
        return s < 0 ? allen_relation::finished_by : allen_relation::finishes;
    if ( cmp( a2, b1 ) == 0 )
        return allen_relation::meets;
    if ( cmp( a1, b2 ) == 0 )
        return allen_relation::met_by;
    if ( a2 < b1 )
        return allen_relation::precedes;
    if ( a1 > b2 )
        return allen_relation::preceded_by;
    if ( s < 0 )
        return e < 0 ? allen_relation::overlaps : allen_relation::contains;
    return e < 0 ? allen_relation::during : allen_relation::overlapped_by;
}

// Discrete frame intervals map to half-open reals [start, end + 1), so frames 1-60 meet 61-120.
inline allen_relation allen( frame_interval a, frame_interval b )
{
    return allen_real( static_cast< double >( a.start ), static_cast< double >( a.end + 1 ), static_cast< double >( b.start ),
                       static_cast< double >( b.end + 1 ) );
}

struct rect_relation
{
    allen_relation x;
    allen_relation y;

    friend bool operator==( const rect_relation&, const rect_relation& ) = default;
};

inline rect_relation classify_rects( const bbox& a, const bbox& b, double tau = 0.0 )
{
    return { allen_real( a.xmin, a.xmax, b.xmin, b.xmax, tau ), allen_real( a.ymin, a.ymax, b.ymin, b.ymax, tau ) };
}

// Coordinate rules for the aggregated spatial predicates (world boxes, y-down).
enum class spatial_rule
{
    top,
    bottom,
    left,
    right,
    intersect,
    border,
    left_border,
    right_border,
    top_border,
    bottom_border,
    bottom_border_flush,
};

inline constexpr std::array< std::pair< spatial_rule, std::string_view >, 11 > spatial_rule_names{ {
    { spatial_rule::top, "top" },
    { spatial_rule::bottom, "bottom" },
    { spatial_rule::left, "left" },
    { spatial_rule::right, "right" },
    { spatial_rule::intersect, "intersect" },
    { spatial_rule::border, "border" },
    { spatial_rule::left_border, "left_border" },
    { spatial_rule::right_border, "right_border" },
    { spatial_rule::top_border, "top_border" },
    { spatial_rule::bottom_border, "bottom_border" },
    { spatial_rule::bottom_border_flush, "bottom_border_flush" },
} };

inline std::optional< spatial_rule > parse_spatial_rule( std::string_view name )
{
    for ( const auto& [ r, n ] : spatial_rule_names )
        if ( n == name )
            return r;
    return std::nullopt;
}

constexpr std::string_view to_string( spatial_rule r )
{
    for ( const auto& [ k, n ] : spatial_rule_names )
        if ( k == r )
            return n;
    return "top";
}

inline bool apply_rule( spatial_rule rule, const bbox& a, const bbox& b, double tau )
{
    const bool x_overlap = a.xmin <= b.xmax && b.xmin <= a.xmax;
    const bool y_overlap = a.ymin <= b.ymax && b.ymin <= a.ymax;
    switch ( rule )
    {
    case spatial_rule::top: return a.ymin < b.ymin - tau;
    case spatial_rule::bottom: return a.ymax > b.ymax + tau;
    case spatial_rule::left: return a.xmin < b.xmin - tau;
    case spatial_rule::right: return a.xmax > b.xmax + tau;
    case spatial_rule::intersect: return x_overlap && y_overlap;
    case spatial_rule::left_border: return std::abs( a.xmax - b.xmin ) <= tau && y_overlap;
    case spatial_rule::right_border: return std::abs( a.xmin - b.xmax ) <= tau && y_overlap;
    case spatial_rule::top_border: return std::abs( a.ymax - b.ymin ) <= tau && x_overlap;
    case spatial_rule::bottom_border: return std::abs( a.ymin - b.ymax ) <= tau && x_overlap;
    case spatial_rule::border:
        return apply_rule( spatial_rule::left_border, a, b, tau ) || apply_rule( spatial_rule::right_border, a, b, tau ) ||
               apply_rule( spatial_rule::top_border, a, b, tau ) || apply_rule( spatial_rule::bottom_border, a, b, tau );
    case spatial_rule::bottom_border_flush:
        return std::abs( a.ymax - b.ymax ) <= tau && a.xmin <= b.xmax + tau && b.xmin <= a.xmax + tau;
    }
    return false;
}

enum class mask_axis
{
    time,
    x,
    y,
    pair,
    rule,
};

// A named disjunction over low-level relations, or a coordinate rule.
struct relation_mask
{
    std::string name;
    mask_axis axis = mask_axis::time;
    std::set< allen_relation > relations;                          // time, x, y
    std::set< std::pair< allen_relation, allen_relation > > pairs; // pair
    spatial_rule rule = spatial_rule::top;                         // rule

    [[nodiscard]] bool is_temporal() const { return axis == mask_axis::time; }

    [[nodiscard]] bool matches( allen_relation r ) const { return relations.contains( r ); }

    [[nodiscard]] bool matches( const bbox& a, const bbox& b, double tau ) const
    {
        switch ( axis )
        {
        case mask_axis::rule: return apply_rule( rule, a, b, tau );
        case mask_axis::x: return relations.contains( classify_rects( a, b, tau ).x );
        case mask_axis::y: return relations.contains( classify_rects( a, b, tau ).y );
        case mask_axis::pair: {
            const auto r = classify_rects( a, b, tau );
            return pairs.contains( { r.x, r.y } );
        }
        case mask_axis::time: return false;
        }
        return false;
    }
};

using mask_table = std::map< std::string, relation_mask, std::less<> >;

inline relation_mask temporal_mask( std::string name, std::set< allen_relation > rels )
{
    relation_mask m;
    m.name = std::move( name );
    m.axis = mask_axis::time;
    m.relations = std::move( rels );
    return m;
}

inline mask_table default_masks()
{
    using ar = allen_relation;
    mask_table t;
    t[ "before" ] = temporal_mask( "before", { ar::precedes, ar::meets } );
    t[ "after" ] = temporal_mask( "after", { ar::preceded_by, ar::met_by } );
    t[ "while" ] = temporal_mask( "while", { ar::overlaps, ar::finished_by, ar::contains, ar::starts, ar::equals,
                                             ar::started_by, ar::during, ar::finishes, ar::overlapped_by } );
    for ( const auto& [ rule, name ] : spatial_rule_names )
    {
        relation_mask m;
        m.name = std::string{ name };
        m.axis = mask_axis::rule;
        m.rule = rule;
        t[ m.name ] = m;
    }
    return t;
}

namespace algebra_detail
{

inline allen_relation require_allen( const nlohmann::json& j, const std::string& where )
{
    if ( !j.is_string() )
        throw error{ error_kind::invalid_config, where + ": expected a relation name" };
    const auto r = parse_allen( j.get< std::string >() );
    if ( !r )
        throw error{ error_kind::invalid_config, where + ": unknown relation '" + j.get< std::string >() + "'" };
    return *r;
}

} // namespace algebra_detail

// name -> "rule_keyword" | { "axis": "time"|"x"|"y"|"pair", "relations": [...] }
inline mask_table masks_from_json( const nlohmann::json& j )
{
    if ( !j.is_object() )
        throw error{ error_kind::invalid_config, "mask file must be a JSON object" };
    mask_table t;
    for ( const auto& [ name, v ] : j.items() )
    {
        relation_mask m;
        m.name = name;
        if ( v.is_string() )
        {
            const auto rule = parse_spatial_rule( v.get< std::string >() );
            if ( !rule )
                throw error{ error_kind::invalid_config, name + ": unknown coordinate rule '" + v.get< std::string >() + "'" };
            m.axis = mask_axis::rule;
            m.rule = *rule;
        }
        else if ( v.is_object() && v.contains( "axis" ) && v.contains( "relations" ) && v[ "relations" ].is_array() )
        {
            const std::string axis = v[ "axis" ].is_string() ? v[ "axis" ].get< std::string >() : "";
            if ( axis == "time" || axis == "x" || axis == "y" )
            {
                m.axis = axis == "time" ? mask_axis::time : axis == "x" ? mask_axis::x : mask_axis::y;
                for ( const auto& r : v[ "relations" ] )
                    m.relations.insert( algebra_detail::require_allen( r, name ) );
            }
            else if ( axis == "pair" )
            {
                m.axis = mask_axis::pair;
                for ( const auto& p : v[ "relations" ] )
                {
                    if ( !p.is_array() || p.size() != 2 )
                        throw error{ error_kind::invalid_config, name + ": pair entries are [x_relation, y_relation]" };
                    m.pairs.insert( { algebra_detail::require_allen( p[ 0 ], name ), algebra_detail::require_allen( p[ 1 ], name ) } );
                }
            }
            else
                throw error{ error_kind::invalid_config, name + ": axis must be time, x, y or pair" };
            if ( m.relations.empty() && m.pairs.empty() )
                throw error{ error_kind::invalid_config, name + ": mask must not be empty" };
        }
        else
            throw error{ error_kind::invalid_config, name + ": expected a rule keyword or {axis, relations}" };
        t[ name ] = std::move( m );
    }
    return t;
}

inline nlohmann::ordered_json to_json( const mask_table& t )
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for ( const auto& [ name, m ] : t )
    {
        switch ( m.axis )
        {
        case mask_axis::rule: j[ name ] = std::string{ to_string( m.rule ) }; break;
        case mask_axis::pair: {
            nlohmann::ordered_json rels = nlohmann::ordered_json::array();
            for ( const auto& [ x, y ] : m.pairs )
                rels.push_back( { std::string{ to_string( x ) }, std::string{ to_string( y ) } } );
            j[ name ] = { { "axis", "pair" }, { "relations", rels } };
            break;
        }
        default: {
            nlohmann::ordered_json rels = nlohmann::ordered_json::array();
            for ( const auto r : all_allen_relations )
                if ( m.relations.contains( r ) )
                    rels.push_back( std::string{ to_string( r ) } );
            j[ name ] = { { "axis", m.axis == mask_axis::time ? "time" : m.axis == mask_axis::x ? "x" : "y" },
                          { "relations", rels } };
        }
        }
    }
    return j;
}

// Masks from a file replace same-named defaults and add new names.
inline mask_table load_masks( const std::string& path )
{
    mask_table t = default_masks();
    try
    {
        for ( auto& [ name, m ] : masks_from_json( nlohmann::json::parse( read_text_file( path ) ) ) )
            t[ name ] = std::move( m );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw error{ error_kind::invalid_config, path + ": " + e.what() };
    }
    return t;
}

struct temporal_witness
{
    frame_interval a;
    frame_interval b;
};

struct temporal_result
{
    bool value = false;
    std::optional< temporal_witness > witness;
};

// True iff some run pair stands in a relation of the mask; the witness is the first
// pair in (start_a, start_b) order. Masks made only of overlapping relations consult
// an interval index instead of scanning every pair.
inline temporal_result eval_mask_temporal( const relation_mask& mask, std::vector< frame_interval > runs_a,
                                           std::vector< frame_interval > runs_b )
{
    if ( runs_a.empty() || runs_b.empty() )
        return {};
    std::ranges::sort( runs_a );
    std::ranges::sort( runs_b );

    static const std::set< allen_relation > overlapping{
        allen_relation::overlaps, allen_relation::finished_by, allen_relation::contains,
        allen_relation::starts,   allen_relation::equals,      allen_relation::started_by,
        allen_relation::during,   allen_relation::finishes,    allen_relation::overlapped_by };
    const bool overlap_only = std::ranges::all_of( mask.relations, [ & ]( allen_relation r ) { return overlapping.contains( r ); } );

    if ( overlap_only )
    {
        const interval_index< std::size_t > index{ std::span< const frame_interval >{ runs_b } };
        for ( const auto& a : runs_a )
        {
            // ids come back in start order since runs_b is already sorted
            for ( const std::size_t id : index.overlapping( a ) )
                if ( mask.matches( allen( a, runs_b[ id ] ) ) )
                    return { true, temporal_witness{ a, runs_b[ id ] } };
        }
        return {};
    }
    for ( const auto& a : runs_a )
        for ( const auto& b : runs_b )
            if ( mask.matches( allen( a, b ) ) )
                return { true, temporal_witness{ a, b } };
    return {};
}

} // namespace mover
