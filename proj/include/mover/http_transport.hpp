#pragma once

#include "error.hpp"
#include "refine.hpp"

#include <httplib.h>
#include <json.hpp>

#include <optional>
#include <string>

namespace mover
{

// POSTs chat-completions requests to `url`, e.g. http://localhost:8000/v1/chat/completions.
inline chat_transport http_transport( const std::string& url, std::optional< std::string > token, int timeout_s = 120 )
{
    const auto scheme_end = url.find( "://" );
    if ( scheme_end == std::string::npos )
        throw error{ error_kind::endpoint_error, "endpoint must be an absolute http(s) URL" };
    const auto path_start = url.find( '/', scheme_end + 3 );
    const std::string base = path_start == std::string::npos ? url : url.substr( 0, path_start );
    const std::string path = path_start == std::string::npos ? "/" : url.substr( path_start );

    return [ base, path, token = std::move( token ), timeout_s ]( const nlohmann::json& request ) {
        httplib::Client client{ base };
        client.set_connection_timeout( timeout_s );
        client.set_read_timeout( timeout_s );
        httplib::Headers headers;
        if ( token )
            headers.emplace( "Authorization", "Bearer " + *token );
        const auto res = client.Post( path, headers, request.dump(), "application/json" );
        if ( !res )
            throw error{ error_kind::endpoint_error, "request to " + base + path + " failed: " + httplib::to_string( res.error() ) };
        if ( res->status < 200 || res->status >= 300 )
            throw error{ error_kind::endpoint_error, "endpoint returned HTTP " + std::to_string( res->status ) };
        return res->body;
    };
}

} // namespace mover
