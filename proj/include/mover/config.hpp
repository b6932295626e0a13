#pragma once

#include "error.hpp"
#include "scene.hpp"

#include <json.hpp>

#include <string>

namespace mover
{

// Numeric knobs of the engine. Every field can be overridden from a JSON config file.
struct tolerances
{
    // Channel activity: a frame is active when its delta exceeds the threshold, or
    // exceeds the floor while connected to an above-threshold frame (eased tails).
    double t_eps = 0.1;   // px/frame
    double r_eps = 0.05;  // deg/frame
    double s_eps = 0.002; // |ratio - 1| per frame
    double t_floor = 1e-4;
    double r_floor = 1e-4;
    double s_floor = 1e-5;

    double dir_tol_deg = 15.0;
    double mag_rel = 0.02;
    double mag_abs_px = 1.0;
    double mag_abs_deg = 1.0;
    double mag_abs_ratio = 0.02;
    double origin_tol_px = 5.0;
    double origin_unstable_px = 5.0;
    double duration_rel = 0.02;
    double tau_space = 2.0;
    int color_tol = 0;

    double fixed_point_eps = 1e-6; // ||L - I||_inf below this: no fixed point reported
    double shear_rel = 1e-6;
};

namespace detail
{

template < typename F >
void for_each_tolerance( F&& f, tolerances& t )
{
    f( "t_eps", t.t_eps );
    f( "r_eps", t.r_eps );
    f( "s_eps", t.s_eps );
    f( "t_floor", t.t_floor );
    f( "r_floor", t.r_floor );
    f( "s_floor", t.s_floor );
    f( "dir_tol_deg", t.dir_tol_deg );
    f( "mag_rel", t.mag_rel );
    f( "mag_abs_px", t.mag_abs_px );
    f( "mag_abs_deg", t.mag_abs_deg );
    f( "mag_abs_ratio", t.mag_abs_ratio );
    f( "origin_tol_px", t.origin_tol_px );
    f( "origin_unstable_px", t.origin_unstable_px );
    f( "duration_rel", t.duration_rel );
    f( "tau_space", t.tau_space );
    f( "fixed_point_eps", t.fixed_point_eps );
    f( "shear_rel", t.shear_rel );
}

} // namespace detail

inline nlohmann::ordered_json to_json( const tolerances& tol )
{
    nlohmann::ordered_json j;
    auto copy = tol;
    detail::for_each_tolerance( [ & ]( const char* key, double& v ) { j[ key ] = round6( v ); }, copy );
    j[ "color_tol" ] = tol.color_tol;
    return j;
}

inline tolerances tolerances_from_json( const nlohmann::json& j )
{
    if ( !j.is_object() )
        throw error{ error_kind::invalid_config, "tolerance config must be a JSON object" };
    tolerances tol;
    std::size_t matched = 0;
    detail::for_each_tolerance(
        [ & ]( const char* key, double& v ) {
            if ( !j.contains( key ) )
                return;
            if ( !j[ key ].is_number() || j[ key ].get< double >() < 0.0 )
                throw error{ error_kind::invalid_config, std::string{ key } + " must be a non-negative number" };
            v = j[ key ].get< double >();
            ++matched;
        },
        tol );
    if ( j.contains( "color_tol" ) )
    {
        if ( !j[ "color_tol" ].is_number_integer() || j[ "color_tol" ].get< int >() < 0 )
            throw error{ error_kind::invalid_config, "color_tol must be a non-negative integer" };
        tol.color_tol = j[ "color_tol" ].get< int >();
        ++matched;
    }
    if ( matched != j.size() )
        for ( const auto& [ key, _ ] : j.items() )
        {
            bool known = key == "color_tol";
            auto probe = tolerances{};
            detail::for_each_tolerance( [ & ]( const char* k, double& ) { known = known || key == k; }, probe );
            if ( !known )
                throw error{ error_kind::invalid_config, "unknown tolerance '" + key + "'" };
        }
    return tol;
}

inline tolerances load_tolerances( const std::string& path )
{
    try
    {
        return tolerances_from_json( nlohmann::json::parse( read_text_file( path ) ) );
    }
    catch ( const nlohmann::json::parse_error& e )
    {
        throw error{ error_kind::invalid_config, path + ": " + e.what() };
    }
}

} // namespace mover
