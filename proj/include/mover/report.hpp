#pragma once

#include "config.hpp"
#include "evaluator.hpp"
#include "geometry.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mover
{

inline constexpr const char* engine_name = "mover";
inline constexpr const char* engine_version = "1.0.0";

struct report
{
    std::string program_source;
    double fps = 60.0;
    std::size_t num_frames = 0;
    std::vector< std::string > objects;
    evaluation result;
    tolerances config;
};

inline report make_report( std::string program_source, const scene& sc, const animation_trace& tr, evaluation result,
                           const tolerances& tol )
{
    report r;
    r.program_source = std::move( program_source );
    r.fps = tr.fps;
    r.num_frames = tr.num_frames;
    for ( const auto& o : sc.objects() )
        r.objects.push_back( o.id );
    r.result = std::move( result );
    r.config = tol;
    return r;
}

namespace report_detail
{

inline nlohmann::ordered_json note_json( const std::optional< note >& n )
{
    if ( !n )
        return nullptr;
    return { { "code", n->code }, { "text", n->text } };
}

inline std::optional< note > note_from( const nlohmann::json& j )
{
    if ( j.is_null() )
        return std::nullopt;
    return note{ j.at( "code" ).get< std::string >(), j.at( "text" ).get< std::string >() };
}

} // namespace report_detail

inline nlohmann::ordered_json to_json( const report& r )
{
    using oj = nlohmann::ordered_json;
    oj j;
    j[ "overall" ] = r.result.overall;
    oj statements = oj::array();
    for ( const auto& v : r.result.verdicts )
    {
        oj s;
        s[ "source" ] = v.source;
        s[ "value" ] = v.value;
        s[ "note" ] = report_detail::note_json( v.remark );
        oj preds = oj::array();
        for ( const auto& p : v.predicates )
        {
            oj pj;
            pj[ "name" ] = p.name;
            pj[ "args" ] = p.args;
            pj[ "value" ] = p.value;
            oj ranges = oj::array();
            for ( const auto& iv : p.true_ranges )
                ranges.push_back( { iv.start, iv.end } );
            pj[ "true_ranges" ] = ranges;
            pj[ "note" ] = report_detail::note_json( p.remark );
            preds.push_back( pj );
        }
        s[ "predicates" ] = preds;
        statements.push_back( s );
    }
    j[ "statements" ] = statements;
    j[ "warnings" ] = r.result.warnings;
    oj meta;
    meta[ "engine" ] = { { "name", engine_name }, { "version", engine_version } };
    meta[ "animation" ] = { { "fps", round6( r.fps ) }, { "num_frames", r.num_frames }, { "objects", r.objects } };
    meta[ "config" ] = to_json( r.config );
    meta[ "program_source" ] = r.program_source;
    j[ "metadata" ] = meta;
    return j;
}

inline std::string to_json_text( const report& r ) { return to_json( r ).dump( 2 ) + "\n"; }

inline report report_from_json( const nlohmann::json& j )
{
    report r;
    r.result.overall = j.at( "overall" ).get< bool >();
    for ( const auto& s : j.at( "statements" ) )
    {
        verdict v;
        v.source = s.at( "source" ).get< std::string >();
        v.value = s.at( "value" ).get< bool >();
        v.remark = report_detail::note_from( s.at( "note" ) );
        for ( const auto& pj : s.at( "predicates" ) )
        {
            predicate_trace p;
            p.name = pj.at( "name" ).get< std::string >();
            p.args = pj.at( "args" ).get< std::vector< std::string > >();
            p.value = pj.at( "value" ).get< bool >();
            for ( const auto& iv : pj.at( "true_ranges" ) )
                p.true_ranges.push_back( { iv.at( 0 ).get< std::size_t >(), iv.at( 1 ).get< std::size_t >() } );
            p.remark = report_detail::note_from( pj.at( "note" ) );
            v.predicates.push_back( std::move( p ) );
        }
        r.result.verdicts.push_back( std::move( v ) );
    }
    if ( j.contains( "warnings" ) )
        r.result.warnings = j.at( "warnings" ).get< std::vector< std::string > >();
    if ( j.contains( "metadata" ) )
    {
        const auto& m = j.at( "metadata" );
        r.program_source = m.at( "program_source" ).get< std::string >();
        r.fps = m.at( "animation" ).at( "fps" ).get< double >();
        r.num_frames = m.at( "animation" ).at( "num_frames" ).get< std::size_t >();
        r.objects = m.at( "animation" ).at( "objects" ).get< std::vector< std::string > >();
        r.config = tolerances_from_json( m.at( "config" ) );
    }
    return r;
}

inline std::string format_ranges( const std::vector< frame_interval >& ranges )
{
    if ( ranges.empty() )
        return "";
    std::string out = ranges.size() == 1 && ranges[ 0 ].start == ranges[ 0 ].end ? "frame " : "frames ";
    for ( std::size_t i = 0; i < ranges.size(); ++i )
    {
        if ( i )
            out += ", ";
        out += std::to_string( ranges[ i ].start );
        if ( ranges[ i ].end != ranges[ i ].start )
            out += "–" + std::to_string( ranges[ i ].end );
    }
    return out;
}

inline std::string to_text( const report& r )
{
    if ( r.result.verdicts.empty() )
        return "no statements\n";
    std::string out;
    for ( const auto& v : r.result.verdicts )
    {
        out += ( v.value ? "✓ " : "✗ " ) + v.source + "\n";
        if ( v.remark )
            out += "    note: " + v.remark->code + ": " + v.remark->text + "\n";
        for ( const auto& p : v.predicates )
        {
            out += "    " + p.name + ": ";
            out += p.value ? "true on " + format_ranges( p.true_ranges ) : std::string{ "false" };
            std::string args;
            for ( const auto& a : p.args )
                args += ( args.empty() ? "" : ", " ) + a;
            out += "  [" + args + "]";
            if ( p.remark )
                out += "  (" + p.remark->code + ": " + p.remark->text + ")";
            out += "\n";
        }
    }
    for ( const auto& w : r.result.warnings )
        out += "warning: " + w + "\n";
    out += r.result.overall ? "overall: PASS\n" : "overall: FAIL\n";
    return out;
}

} // namespace mover
