#pragma once

#include "algebra.hpp"
#include "config.hpp"
#include "error.hpp"
#include "lang.hpp"
#include "report.hpp"
#include "synth.hpp"
#include "verify.hpp"

#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mover
{

enum class feedback_mode
{
    full,    // the whole verification report
    minimal, // pass/fail only
    none,    // a bare retry request
};

inline std::optional< feedback_mode > parse_feedback_mode( std::string_view s )
{
    if ( s == "full" )
        return feedback_mode::full;
    if ( s == "minimal" )
        return feedback_mode::minimal;
    if ( s == "none" )
        return feedback_mode::none;
    return std::nullopt;
}

// Sends one chat-completions request body and returns the raw response body.
// Implementations throw EndpointError on transport or HTTP failures.
using chat_transport = std::function< std::string( const nlohmann::json& request ) >;

struct refine_session
{
    std::string prompt;
    std::string model = "gpt-4o";
    std::size_t cap = 50;
    feedback_mode feedback = feedback_mode::full;
    chat_transport transport;
    tolerances tol;
    mask_table masks = default_masks();
};

struct refine_attempt
{
    nlohmann::ordered_json spec;
    nlohmann::ordered_json report;
};

enum class refine_status
{
    passed,
    cap_reached,
};

inline std::string to_string( refine_status s ) { return s == refine_status::passed ? "Passed" : "CapReached"; }

struct refine_result
{
    refine_status status = refine_status::passed;
    scene_graph_spec spec;
    report final_report;
    std::size_t iterations = 0; // correction rounds after the first attempt
    std::vector< refine_attempt > history;
};

inline constexpr std::size_t malformed_budget = 3;

// Predicate reference sent to the model ahead of every request.
inline std::string dsl_documentation()
{
    return R"(MoVer programs are lines of `name = expr` bindings or bare statements.
Quantifiers: iota(Object|Motion, lambda v: body) picks the unique match, exists(...) any, all(...) every.
Connectives: not, and, or (in decreasing precedence). Comments start with #.

Object predicates:
  color(o, "css-name")   shape(o, "circle|square|rectangle|triangle|ellipse|path|letter")   id(o, "svg-id")
Motion predicates:
  type(m, "translate|rotate|scale")
  direction(m, [x, y])            translate: y-up vector; scale: per-axis sign, 0 = any
  direction(m, "clockwise"|"counterclockwise")
  magnitude(m, px|degrees)   magnitude(m, [sx, sy])   scale factors, 0 = unchanged
  origin(m, [x, y])               px or "p%" of the object's box
  duration(m, seconds)   agent(m, o)   post(m, spatial-relation)
Temporal relations over motions: t_before(a, b), t_while(a, b), t_after(a, b), t_rel(a, b, "allen-name")
Spatial relations over objects (y-down screen): s_top, s_bottom, s_left, s_right, s_intersect, s_border,
  s_left_border, s_right_border, s_top_border, s_bottom_border, s_bottom_border_flush

Reply with one JSON scene graph: {"fps", "objects": [{"id", "shape", "color", "bbox": [x, y, w, h]}],
"motions": [{"id", "agent", "type", "direction", "magnitude", "origin", "duration", "start", "easing", "post"}],
"relations": [{"kind": "before|while|after", "a", "b"}]}.
)";
}

namespace refine_detail
{

// Content of the first choice; EndpointError when the envelope is not chat-completions shaped.
inline std::string message_content( const std::string& body )
{
    const nlohmann::json j = nlohmann::json::parse( body, nullptr, false );
    if ( j.is_discarded() || !j.contains( "choices" ) || !j[ "choices" ].is_array() || j[ "choices" ].empty() )
        throw error{ error_kind::endpoint_error, "response is not a chat-completions object" };
    const auto& msg = j[ "choices" ][ 0 ].value( "message", nlohmann::json::object() );
    if ( !msg.contains( "content" ) || !msg[ "content" ].is_string() )
        throw error{ error_kind::endpoint_error, "response has no message content" };
    return msg[ "content" ].get< std::string >();
}

// Strips a ```json fence if present and parses the spec.
inline std::optional< scene_graph_spec > spec_from_content( const std::string& content )
{
    std::string text = content;
    if ( const auto open = text.find( "```" ); open != std::string::npos )
    {
        const auto body = text.find( '\n', open );
        const auto close = body == std::string::npos ? std::string::npos : text.find( "```", body );
        if ( close != std::string::npos )
            text = text.substr( body + 1, close - body - 1 );
    }
    const nlohmann::json j = nlohmann::json::parse( text, nullptr, false );
    if ( j.is_discarded() )
        return std::nullopt;
    try
    {
        return spec_from_json( j );
    }
    catch ( const error& )
    {
        return std::nullopt;
    }
}

inline std::string correction_message( const std::string& program, const report& r, feedback_mode mode )
{
    std::string out = "## DSL Documentation\n" + dsl_documentation() + "\n## MoVer Program\n" + program + "\n";
    if ( mode == feedback_mode::full )
        out += "## MoVer Verification Report\n" + to_text( r ) + "\n";
    else if ( mode == feedback_mode::minimal )
        out += "## MoVer Verification Report\noverall: FAIL\n\n";
    out += "## Instruction\nThe animation does not satisfy the program. Return a corrected scene graph as JSON.\n";
    return out;
}

} // namespace refine_detail

// Requests specs until one verifies, the cap is hit, or the model keeps returning junk.
inline refine_result refine( const refine_session& session, const std::string& program_source )
{
    if ( !session.transport )
        throw error{ error_kind::endpoint_error, "no transport configured" };
    compile( program_source, session.masks ); // the program is fixed for the whole session

    nlohmann::json messages = nlohmann::json::array();
    messages.push_back( { { "role", "system" }, { "content", dsl_documentation() } } );
    messages.push_back( { { "role", "user" }, { "content", session.prompt + "\n\n## MoVer Program\n" + program_source } } );

    refine_result out;
    std::size_t malformed = 0;
    while ( true )
    {
        const nlohmann::json request{ { "model", session.model }, { "messages", messages } };
        const std::string content = refine_detail::message_content( session.transport( request ) );
        messages.push_back( { { "role", "assistant" }, { "content", content } } );

        const auto spec = refine_detail::spec_from_content( content );
        if ( !spec )
        {
            if ( ++malformed == malformed_budget )
                throw error{ error_kind::malformed_model_output,
                             std::to_string( malformed_budget ) + " consecutive responses were not a valid scene graph" };
            messages.push_back( { { "role", "user" }, { "content", "The reply was not a valid scene graph JSON object. Reply with JSON only." } } );
            continue;
        }
        malformed = 0;

        report r = verify( program_source, render_trace( *spec ), session.tol, session.masks );
        out.history.push_back( { to_json( *spec ), to_json( r ) } );
        out.spec = *spec;
        out.final_report = r;
        out.iterations = out.history.size() - 1;
        if ( r.result.overall )
        {
            out.status = refine_status::passed;
            return out;
        }
        if ( out.history.size() == session.cap + 1 )
        {
            out.status = refine_status::cap_reached;
            return out;
        }
        messages.push_back( { { "role", "user" }, { "content", refine_detail::correction_message( program_source, r, session.feedback ) } } );
    }
}

// Bearer token from the environment, if set.
inline std::optional< std::string > api_token_from_env( const char* var = "MOVER_API_KEY" )
{
    if ( const char* v = std::getenv( var ); v && *v )
        return std::string{ v };
    return std::nullopt;
}

} // namespace mover
