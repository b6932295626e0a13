#pragma once

#include "algebra.hpp"
#include "config.hpp"
#include "error.hpp"
#include "http_transport.hpp"
#include "lang.hpp"
#include "refine.hpp"
#include "report.hpp"
#include "scene.hpp"
#include "svg.hpp"
#include "synth.hpp"
#include "verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mover
{

// Exit codes: 0 verified / success, 1 verified false, 2 usage or input error.
inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_error = 2;

namespace cli_detail
{

inline void write_file( const std::filesystem::path& path, const std::string& text )
{
    std::ofstream f{ path, std::ios::binary };
    if ( !f || !( f << text ) )
        throw error{ error_kind::io_error, "cannot write '" + path.string() + "'" };
}

inline animation load_animation( const std::string& trace_path, const std::string& svg_path )
{
    if ( svg_path.empty() )
        return load_trace( trace_path );
    const scene appearance = load_svg_scene( svg_path );
    return load_trace( trace_path, &appearance );
}

struct verify_args
{
    std::string trace, svg, program, config, masks, format = "json", out;
};

inline int cmd_verify( const verify_args& a, std::ostream& out )
{
    const animation anim = load_animation( a.trace, a.svg );
    const std::string source = read_text_file( a.program );
    const tolerances tol = a.config.empty() ? tolerances{} : load_tolerances( a.config );
    const mask_table masks = a.masks.empty() ? default_masks() : load_masks( a.masks );
    const report r = verify( source, anim, tol, masks );
    const std::string text = a.format == "text" ? to_text( r ) : to_json_text( r );
    if ( a.out.empty() )
        out << text;
    else
        write_file( a.out, text );
    return r.result.overall ? exit_pass : exit_fail;
}

inline int cmd_check( const std::string& path, const std::string& masks_path, std::ostream& out )
{
    const mask_table masks = masks_path.empty() ? default_masks() : load_masks( masks_path );
    const program p = compile( read_text_file( path ), masks );
    for ( const auto& w : p.warnings )
        out << "warning: " << w << "\n";
    out << "ok: " << p.statements.size() << " statement" << ( p.statements.size() == 1 ? "" : "s" ) << "\n";
    return exit_pass;
}

inline void write_case( const scene_graph_spec& s, const std::filesystem::path& dir )
{
    std::filesystem::create_directories( dir );
    write_file( dir / "spec.json", to_json( s ).dump( 2 ) + "\n" );
    write_file( dir / "prog.mover", compile_program( s ).source );
    write_file( dir / "trace.json", serialize_trace( render_trace( s ) ) );
}

struct gen_args
{
    std::string spec, suite, out_dir = ".";
    std::uint64_t seed = 7;
};

inline int cmd_gen( const gen_args& a, std::ostream& out )
{
    if ( a.spec.empty() == a.suite.empty() )
        throw error{ error_kind::invalid_spec, "gen takes exactly one of --spec or --suite" };
    if ( !a.spec.empty() )
    {
        const nlohmann::json j = nlohmann::json::parse( read_text_file( a.spec ), nullptr, false );
        if ( j.is_discarded() )
            throw error{ error_kind::invalid_spec, "'" + a.spec + "' is not valid JSON" };
        write_case( spec_from_json( j ), a.out_dir );
        out << "wrote " << ( std::filesystem::path{ a.out_dir } / "prog.mover" ).string() << " and trace.json\n";
        return exit_pass;
    }
    if ( a.suite != "default" )
        throw error{ error_kind::invalid_spec, "unknown suite '" + a.suite + "'" };
    const auto suite = default_suite( a.seed );
    for ( const auto& s : suite )
        write_case( s, std::filesystem::path{ a.out_dir } / s.name );
    out << "wrote " << suite.size() << " cases to " << a.out_dir << "\n";
    return exit_pass;
}

struct relations_args
{
    std::string trace, svg;
    std::vector< std::string > objects;
    std::optional< std::size_t > frame;
    double tau = tolerances{}.tau_space;
};

inline int cmd_relations( const relations_args& a, std::ostream& out )
{
    const animation anim = load_animation( a.trace, a.svg );
    std::vector< std::size_t > rows;
    for ( const auto& id : a.objects )
    {
        const auto i = anim.scene.index_of( id );
        if ( !i )
            throw error{ error_kind::unknown_object_id, "no object '" + id + "' in the trace" };
        rows.push_back( *i );
    }
    std::size_t first = 1, last = anim.trace.num_frames;
    if ( a.frame )
    {
        if ( *a.frame < 1 || *a.frame > anim.trace.num_frames )
            throw error{ error_kind::inconsistent_frame_count, "frame " + std::to_string( *a.frame ) + " is outside 1.." +
                                                                   std::to_string( anim.trace.num_frames ) };
        first = last = *a.frame;
    }
    out << "frame\tx_rel\ty_rel\n";
    for ( std::size_t f = first; f <= last; ++f )
    {
        auto box = [ & ]( std::size_t r ) { return anim.scene[ r ].bbox_local.transformed( anim.trace.at( r, f ) ); };
        const rect_relation rel = classify_rects( box( rows[ 0 ] ), box( rows[ 1 ] ), a.tau );
        out << f << "\t" << to_string( rel.x ) << "\t" << to_string( rel.y ) << "\n";
    }
    return exit_pass;
}

struct refine_args
{
    std::string prompt, program, endpoint, model = "gpt-4o", feedback = "full";
    std::size_t max_iters = 50;
};

inline int cmd_refine( const refine_args& a, std::ostream& out, const chat_transport& transport )
{
    refine_session session;
    session.prompt = read_text_file( a.prompt );
    session.model = a.model;
    session.cap = a.max_iters;
    const auto mode = parse_feedback_mode( a.feedback );
    if ( !mode )
        throw error{ error_kind::invalid_config, "--feedback must be full, minimal or none" };
    session.feedback = *mode;
    session.transport = transport ? transport : http_transport( a.endpoint, api_token_from_env() );
    const refine_result r = refine( session, read_text_file( a.program ) );
    nlohmann::ordered_json j;
    j[ "status" ] = to_string( r.status );
    j[ "iterations" ] = r.iterations;
    j[ "spec" ] = to_json( r.spec );
    j[ "report" ] = to_json( r.final_report );
    out << j.dump( 2 ) << "\n";
    return r.status == refine_status::passed ? exit_pass : exit_fail;
}

} // namespace cli_detail

// Entry point shared by the executable and the tests. `transport` replaces the HTTP
// client for `refine` when set.
inline int run_cli( int argc, const char* const* argv, std::ostream& out, std::ostream& err, const chat_transport& transport = {} )
{
    CLI::App app{ "Verify motion-graphics animations against MoVer programs", "mover" };
    app.require_subcommand( 1 );

    cli_detail::verify_args va;
    auto* verify_cmd = app.add_subcommand( "verify", "Verify an animation trace against a program" );
    verify_cmd->add_option( "--trace", va.trace, "Animation trace JSON" )->required();
    verify_cmd->add_option( "--svg", va.svg, "SVG supplying object shapes and colors" );
    verify_cmd->add_option( "--program", va.program, "MoVer program" )->required();
    verify_cmd->add_option( "--config", va.config, "Tolerance overrides (JSON)" );
    verify_cmd->add_option( "--masks", va.masks, "Relation mask table (JSON)" );
    verify_cmd->add_option( "--format", va.format, "Report format" )->check( CLI::IsMember( { "json", "text" } ) );
    verify_cmd->add_option( "--out", va.out, "Write the report here instead of stdout" );

    std::string check_path, check_masks;
    auto* check_cmd = app.add_subcommand( "check", "Parse and type-check a program" );
    check_cmd->add_option( "program", check_path, "MoVer program" )->required();
    check_cmd->add_option( "--masks", check_masks, "Relation mask table (JSON)" );

    cli_detail::gen_args ga;
    auto* gen_cmd = app.add_subcommand( "gen", "Generate programs and traces from scene graph specs" );
    gen_cmd->add_option( "--spec", ga.spec, "Scene graph spec JSON" );
    gen_cmd->add_option( "--suite", ga.suite, "Named suite (default)" );
    gen_cmd->add_option( "--out-dir", ga.out_dir, "Output directory" );
    gen_cmd->add_option( "--seed", ga.seed, "Suite seed" );

    cli_detail::relations_args ra;
    std::size_t frame = 0;
    auto* rel_cmd = app.add_subcommand( "relations", "Print per-frame rectangle relations of two objects" );
    rel_cmd->add_option( "--trace", ra.trace, "Animation trace JSON" )->required();
    rel_cmd->add_option( "--svg", ra.svg, "SVG supplying object shapes and colors" );
    rel_cmd->add_option( "--objects", ra.objects, "Two object ids" )->required()->expected( 2 );
    auto* frame_opt = rel_cmd->add_option( "--frame", frame, "Single frame (1-based)" );
    rel_cmd->add_option( "--tau", ra.tau, "Spatial tolerance in px" );

    cli_detail::refine_args fa;
    auto* refine_cmd = app.add_subcommand( "refine", "Ask a chat-completions endpoint for an animation until it verifies" );
    refine_cmd->add_option( "--prompt", fa.prompt, "Animation description" )->required();
    refine_cmd->add_option( "--program", fa.program, "MoVer program" )->required();
    refine_cmd->add_option( "--endpoint", fa.endpoint, "Chat-completions URL" );
    refine_cmd->add_option( "--model", fa.model, "Model name" );
    refine_cmd->add_option( "--max-iters", fa.max_iters, "Correction round cap" );
    refine_cmd->add_option( "--feedback", fa.feedback, "full, minimal or none" )->check( CLI::IsMember( { "full", "minimal", "none" } ) );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e, out, err );
        return code == 0 ? exit_pass : exit_error;
    }

    try
    {
        if ( *verify_cmd )
            return cli_detail::cmd_verify( va, out );
        if ( *check_cmd )
            return cli_detail::cmd_check( check_path, check_masks, out );
        if ( *gen_cmd )
            return cli_detail::cmd_gen( ga, out );
        if ( *rel_cmd )
        {
            if ( ra.objects.size() != 2 )
                throw error{ error_kind::unknown_object_id, "--objects takes two ids" };
            if ( *frame_opt )
                ra.frame = frame;
            return cli_detail::cmd_relations( ra, out );
        }
        if ( *refine_cmd )
        {
            if ( fa.endpoint.empty() && !transport )
                throw error{ error_kind::endpoint_error, "--endpoint is required" };
            return cli_detail::cmd_refine( fa, out, transport );
        }
    }
    catch ( const error& e )
    {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}

} // namespace mover
