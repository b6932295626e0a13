#pragma once

#include "config.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mover
{

// Translation / rotation / scale factoring of one matrix, as
//   M = T(e, f) * R(angle) * [sx shear; 0 sy]
struct decomposition
{
    vec2 translation;
    double angle = 0.0; // degrees in (-180, 180]
    double sx = 1.0;    // always > 0
    double sy = 1.0;    // carries the sign of the determinant
    double shear = 0.0; // residual; unsupported by the channels

    [[nodiscard]] bool sheared( double rel = 1e-6 ) const { return std::abs( shear ) > rel * sx; }
};

inline decomposition decompose( const affine& m )
{
    const double det = m.det();
    if ( !( std::abs( det ) > min_abs_det ) )
        throw error{ error_kind::degenerate_matrix, "determinant " + std::to_string( det ) };
    decomposition out;
    out.translation = { m.e, m.f };
    out.sx = std::hypot( m.a, m.b );
    out.angle = rad_to_deg( std::atan2( m.b, m.a ) );
    if ( out.angle <= -180.0 )
        out.angle += 360.0;
    out.sy = det / out.sx;
    out.shear = ( m.a * m.c + m.b * m.d ) / out.sx;
    return out;
}

inline affine recompose( const decomposition& d, bool with_shear = false )
{
    const affine s{ d.sx, 0.0, with_shear ? d.shear : 0.0, d.sy, 0.0, 0.0 };
    return affine::translation( d.translation ) * affine::rotation( d.angle ) * s;
}

enum class channel
{
    translate,
    rotate,
    scale,
};

inline constexpr std::array< channel, 3 > all_channels{ channel::translate, channel::rotate, channel::scale };

constexpr std::string_view to_string( channel c )
{
    switch ( c )
    {
    case channel::translate: return "translate";
    case channel::rotate: return "rotate";
    case channel::scale: return "scale";
    }
    return "translate";
}

// Fixed point of the frame-to-frame relative transform. An axis is free when the
// relative transform leaves it unchanged (e.g. a pure horizontal stretch fixes a line).
struct origin_fix
{
    vec2 point;
    bool x_free = false;
    bool y_free = false;
};

struct frame_attributes
{
    vec2 center_world;
    double angle = 0.0; // unwrapped, degrees
    vec2 scale{ 1.0, 1.0 };
    vec2 d_translate;
    double d_rotate = 0.0;
    vec2 d_scale{ 1.0, 1.0 };
    std::optional< origin_fix > origin;
    bbox bbox_world;
    bool shear_warning = false;
};

struct motion_segment
{
    std::size_t object_index = 0;
    mover::channel channel = channel::translate;
    std::size_t start_frame = 1;
    std::size_t end_frame = 1;
    // T: straight-line displacement in px; R: signed degrees; S: per-axis ratio (positive).
    double net_magnitude = 0.0;
    vec2 net_ratio{ 1.0, 1.0 };
    vec2 net_displacement;
    bool flipped = false;
    std::optional< vec2 > mean_origin;
    double origin_spread = 0.0;

    [[nodiscard]] std::size_t length() const { return end_frame - start_frame + 1; }
};

class motion_channels
{
public:
    std::size_t num_objects = 0;
    std::size_t num_frames = 0;
    double fps = 60.0;
    std::vector< frame_attributes > grid;            // row-major [object][frame - 1]
    std::vector< std::vector< bool > > active;       // [object * 3 + channel][frame - 1]
    std::vector< std::vector< motion_segment > > segments; // [object * 3 + channel]

    [[nodiscard]] const frame_attributes& at( std::size_t object, std::size_t frame ) const
    {
        return grid[ object * num_frames + frame - 1 ];
    }
    [[nodiscard]] bool is_active( std::size_t object, channel c, std::size_t frame ) const
    {
        return active[ object * 3 + static_cast< std::size_t >( c ) ][ frame - 1 ];
    }
    [[nodiscard]] const std::vector< motion_segment >& segments_of( std::size_t object, channel c ) const
    {
        return segments[ object * 3 + static_cast< std::size_t >( c ) ];
    }
};

namespace motion_detail
{

inline std::optional< origin_fix > relative_fixed_point( const affine& prev, const affine& cur, double eps )
{
    const affine rel = cur * prev.inverse();
    // (I - L) x = t
    const double m00 = 1.0 - rel.a, m01 = -rel.c, m10 = -rel.b, m11 = 1.0 - rel.d;
    const double inf_norm = std::max( { std::abs( m00 ), std::abs( m01 ), std::abs( m10 ), std::abs( m11 ) } );
    if ( !( inf_norm > eps ) )
        return std::nullopt;
    const double det = m00 * m11 - m01 * m10;
    if ( std::abs( det ) > eps * inf_norm )
        return origin_fix{ { ( rel.e * m11 - m01 * rel.f ) / det, ( m00 * rel.f - m10 * rel.e ) / det }, false, false };
    // Rank one: only the axis that actually changes is pinned.
    if ( std::abs( m01 ) <= eps && std::abs( m10 ) <= eps )
    {
        origin_fix fix;
        fix.x_free = std::abs( m00 ) <= eps;
        fix.y_free = std::abs( m11 ) <= eps;
        fix.point.x = fix.x_free ? 0.0 : rel.e / m00;
        fix.point.y = fix.y_free ? 0.0 : rel.f / m11;
        return fix;
    }
    return std::nullopt;
}

inline double channel_delta( const frame_attributes& fa, channel c )
{
    switch ( c )
    {
    case channel::translate: return fa.d_translate.norm();
    case channel::rotate: return std::abs( fa.d_rotate );
    case channel::scale: return std::max( std::abs( fa.d_scale.x - 1.0 ), std::abs( fa.d_scale.y - 1.0 ) );
    }
    return 0.0;
}

// Frames above `strong`, widened over contiguous neighbours above `weak`.
inline std::vector< bool > hysteresis( const std::vector< double >& delta, double strong, double weak )
{
    const std::size_t n = delta.size();
    std::vector< bool > out( n, false );
    std::size_t i = 0;
    while ( i < n )
    {
        if ( !( delta[ i ] > weak ) )
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        bool has_strong = false;
        for ( ; j < n && delta[ j ] > weak; ++j )
            has_strong = has_strong || delta[ j ] > strong;
        if ( has_strong )
            std::fill( out.begin() + static_cast< std::ptrdiff_t >( i ), out.begin() + static_cast< std::ptrdiff_t >( j ), true );
        i = j;
    }
    return out;
}

} // namespace motion_detail

// Maximal runs of true entries as 1-based inclusive [start, end] pairs.
inline std::vector< std::pair< std::size_t, std::size_t > > true_runs( const std::vector< bool >& bits )
{
    std::vector< std::pair< std::size_t, std::size_t > > runs;
    std::size_t i = 0;
    while ( i < bits.size() )
    {
        if ( !bits[ i ] )
        {
            ++i;
            continue;
        }
        std::size_t j = i;
        while ( j < bits.size() && bits[ j ] )
            ++j;
        runs.emplace_back( i + 1, j );
        i = j;
    }
    return runs;
}

inline motion_channels build_channels( const scene& sc, const animation_trace& tr, const tolerances& tol = {} )
{
    motion_channels mc;
    mc.num_objects = sc.size();
    mc.num_frames = tr.num_frames;
    mc.fps = tr.fps;
    mc.grid.resize( mc.num_objects * mc.num_frames );
    mc.active.assign( mc.num_objects * 3, std::vector< bool >( mc.num_frames, false ) );
    mc.segments.assign( mc.num_objects * 3, {} );

    for ( std::size_t o = 0; o < mc.num_objects; ++o )
    {
        const local_box& box = sc[ o ].bbox_local;
        double prev_raw_angle = 0.0;
        for ( std::size_t f = 1; f <= mc.num_frames; ++f )
        {
            const affine& m = tr.at( o, f );
            const decomposition dec = decompose( m );
            frame_attributes& fa = mc.grid[ o * mc.num_frames + f - 1 ];
            fa.center_world = m.apply( box.center() );
            fa.scale = { dec.sx, dec.sy };
            fa.bbox_world = box.transformed( m );
            fa.shear_warning = dec.sheared( tol.shear_rel );
            if ( f == 1 )
            {
                fa.angle = dec.angle;
            }
            else
            {
                const frame_attributes& pa = mc.grid[ o * mc.num_frames + f - 2 ];
                fa.angle = pa.angle + wrap_degrees( dec.angle - prev_raw_angle );
                fa.d_translate = fa.center_world - pa.center_world;
                fa.d_rotate = fa.angle - pa.angle;
                fa.d_scale = { fa.scale.x / pa.scale.x, fa.scale.y / pa.scale.y };
                fa.origin = motion_detail::relative_fixed_point( tr.at( o, f - 1 ), m, tol.fixed_point_eps );
            }
            prev_raw_angle = dec.angle;
        }

        for ( const channel c : all_channels )
        {
            const double strong = c == channel::translate ? tol.t_eps : c == channel::rotate ? tol.r_eps : tol.s_eps;
            const double weak = c == channel::translate ? tol.t_floor : c == channel::rotate ? tol.r_floor : tol.s_floor;
            std::vector< double > delta( mc.num_frames, 0.0 );
            for ( std::size_t f = 2; f <= mc.num_frames; ++f )
                delta[ f - 1 ] = motion_detail::channel_delta( mc.at( o, f ), c );
            auto& act = mc.active[ o * 3 + static_cast< std::size_t >( c ) ];
            act = motion_detail::hysteresis( delta, strong, std::min( weak, strong ) );

            auto& segs = mc.segments[ o * 3 + static_cast< std::size_t >( c ) ];
            for ( const auto& [ s, e ] : true_runs( act ) )
            {
                motion_segment seg;
                seg.object_index = o;
                seg.channel = c;
                seg.start_frame = s;
                seg.end_frame = e;
                const frame_attributes& before = mc.at( o, s - 1 );
                const frame_attributes& last = mc.at( o, e );
                seg.net_displacement = last.center_world - before.center_world;
                switch ( c )
                {
                case channel::translate: seg.net_magnitude = seg.net_displacement.norm(); break;
                case channel::rotate: seg.net_magnitude = last.angle - before.angle; break;
                case channel::scale: {
                    const vec2 r{ last.scale.x / before.scale.x, last.scale.y / before.scale.y };
                    seg.flipped = r.x < 0.0 || r.y < 0.0;
                    seg.net_ratio = { std::abs( r.x ), std::abs( r.y ) };
                    seg.net_magnitude = std::max( seg.net_ratio.x, seg.net_ratio.y );
                    break;
                }
                }
                if ( c != channel::translate )
                {
                    double sx = 0.0, sy = 0.0;
                    std::size_t nx = 0, ny = 0;
                    for ( std::size_t f = s; f <= e; ++f )
                        if ( const auto& fix = mc.at( o, f ).origin )
                        {
                            if ( !fix->x_free )
                                sx += fix->point.x, ++nx;
                            if ( !fix->y_free )
                                sy += fix->point.y, ++ny;
                        }
                    if ( nx + ny > 0 )
                    {
                        const vec2 mean{ nx ? sx / static_cast< double >( nx ) : 0.0, ny ? sy / static_cast< double >( ny ) : 0.0 };
                        seg.mean_origin = mean;
                        for ( std::size_t f = s; f <= e; ++f )
                            if ( const auto& fix = mc.at( o, f ).origin )
                            {
                                const double dx = fix->x_free || !nx ? 0.0 : fix->point.x - mean.x;
                                const double dy = fix->y_free || !ny ? 0.0 : fix->point.y - mean.y;
                                seg.origin_spread = std::max( seg.origin_spread, std::hypot( dx, dy ) );
                            }
                    }
                }
                segs.push_back( seg );
            }
        }
    }
    return mc;
}

} // namespace mover
