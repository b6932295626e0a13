#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace mover;

namespace
{

const char* good_spec = R"({"fps": 60,
  "objects": [{"id": "sq", "shape": "square", "color": "black", "bbox": [100, 100, 40, 40]}],
  "motions": [{"id": "up", "agent": "sq", "type": "translate", "direction": [0, 1], "magnitude": 100, "duration": 1}]})";

const char* wrong_spec = R"({"fps": 60,
  "objects": [{"id": "sq", "shape": "square", "color": "black", "bbox": [100, 100, 40, 40]}],
  "motions": [{"id": "up", "agent": "sq", "type": "translate", "direction": [0, -1], "magnitude": 100, "duration": 1}]})";

const std::string ground_truth = compile_program( spec_from_json( nlohmann::json::parse( good_spec ) ) ).source;

std::string envelope( const std::string& content )
{
    return nlohmann::json{ { "choices", { { { "message", { { "role", "assistant" }, { "content", content } } } } } } }.dump();
}

// Replays canned replies in order, repeating the last one, and records every request.
struct scripted_endpoint
{
    std::vector< std::string > replies;
    std::vector< nlohmann::json > requests;

    chat_transport transport()
    {
        return [ this ]( const nlohmann::json& req ) {
            requests.push_back( req );
            const std::size_t i = std::min( requests.size() - 1, replies.size() - 1 );
            return envelope( replies[ i ] );
        };
    }
};

refine_session session_for( scripted_endpoint& ep, std::size_t cap = 50 )
{
    refine_session s;
    s.prompt = "Move the black square up by 100 pixels.";
    s.cap = cap;
    s.transport = ep.transport();
    return s;
}

} // namespace

TEST( Refine, PassOnFirstAttempt )
{
    scripted_endpoint ep{ { good_spec }, {} };
    const refine_result r = refine( session_for( ep ), ground_truth );
    EXPECT_EQ( r.status, refine_status::passed );
    EXPECT_EQ( r.iterations, 0u );
    EXPECT_EQ( r.history.size(), 1u );
    EXPECT_EQ( ep.requests.size(), 1u );
    EXPECT_EQ( ep.requests[ 0 ][ "messages" ][ 0 ][ "role" ], "system" );
}

TEST( Refine, OneCorrection )
{
    scripted_endpoint ep{ { wrong_spec, "```json\n" + std::string{ good_spec } + "\n```" }, {} };
    const refine_result r = refine( session_for( ep ), ground_truth );
    EXPECT_EQ( r.status, refine_status::passed );
    EXPECT_EQ( r.iterations, 1u );
    ASSERT_EQ( r.history.size(), 2u );
    EXPECT_FALSE( r.history[ 0 ].report[ "overall" ].get< bool >() );
    EXPECT_TRUE( r.history[ 1 ].report[ "overall" ].get< bool >() );
    // the correction request carries the report and the unchanged ground_truth
    const std::string last = ep.requests[ 1 ][ "messages" ].back()[ "content" ];
    EXPECT_NE( last.find( "## MoVer Verification Report" ), std::string::npos );
    EXPECT_NE( last.find( "direction: false" ), std::string::npos ) << last;
    EXPECT_NE( last.find( ground_truth ), std::string::npos );
}

TEST( Refine, CapExhaustion )
{
    scripted_endpoint ep{ { wrong_spec }, {} };
    const refine_result r = refine( session_for( ep, 4 ), ground_truth );
    EXPECT_EQ( r.status, refine_status::cap_reached );
    EXPECT_EQ( r.history.size(), 5u );
    EXPECT_EQ( r.iterations, 4u );
    EXPECT_EQ( ep.requests.size(), 5u );
}

TEST( Refine, FeedbackModes )
{
    for ( const auto mode : { feedback_mode::minimal, feedback_mode::none } )
    {
        scripted_endpoint ep{ { wrong_spec, good_spec }, {} };
        refine_session s = session_for( ep );
        s.feedback = mode;
        refine( s, ground_truth );
        const std::string last = ep.requests[ 1 ][ "messages" ].back()[ "content" ];
        EXPECT_EQ( last.find( "direction: false" ), std::string::npos );
        EXPECT_EQ( last.find( "overall: FAIL" ) != std::string::npos, mode == feedback_mode::minimal );
    }
}

TEST( Refine, MalformedBudget )
{
    scripted_endpoint ep{ { "not json", "{\"objects\": 5}", "still not json" }, {} };
    try
    {
        refine( session_for( ep ), ground_truth );
        FAIL();
    }
    catch ( const error& e )
    {
        EXPECT_EQ( e.kind(), error_kind::malformed_model_output );
    }
    EXPECT_EQ( ep.requests.size(), 3u );
}

TEST( Refine, MalformedCounterResetsOnValidReply )
{
    scripted_endpoint ep{ { "junk", "junk", wrong_spec, "junk", "junk", good_spec }, {} };
    const refine_result r = refine( session_for( ep ), ground_truth );
    EXPECT_EQ( r.status, refine_status::passed );
    EXPECT_EQ( r.history.size(), 2u );
}

TEST( Refine, EndpointErrorsPropagate )
{
    refine_session s;
    s.transport = []( const nlohmann::json& ) -> std::string { throw error{ error_kind::endpoint_error, "HTTP 500" }; };
    EXPECT_THROW( refine( s, ground_truth ), error );
    s.transport = []( const nlohmann::json& ) { return std::string{ "{\"unexpected\": true}" }; };
    try
    {
        refine( s, ground_truth );
        FAIL();
    }
    catch ( const error& e )
    {
        EXPECT_EQ( e.kind(), error_kind::endpoint_error );
    }
}

TEST( Refine, BadProgramIsRejectedBeforeAnyRequest )
{
    scripted_endpoint ep{ { good_spec }, {} };
    EXPECT_THROW( refine( session_for( ep ), "exists(Object, lambda o: colour(o, \"red\"))" ), error );
    EXPECT_TRUE( ep.requests.empty() );
}
