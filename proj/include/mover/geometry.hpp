#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace mover
{

struct vec2
{
    double x = 0.0;
    double y = 0.0;

    friend vec2 operator+( vec2 a, vec2 b ) { return { a.x + b.x, a.y + b.y }; }
    friend vec2 operator-( vec2 a, vec2 b ) { return { a.x - b.x, a.y - b.y }; }
    friend vec2 operator*( double s, vec2 a ) { return { s * a.x, s * a.y }; }
    friend bool operator==( vec2, vec2 ) = default;

    [[nodiscard]] double norm() const { return std::hypot( x, y ); }
};

inline double deg_to_rad( double deg ) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg( double rad ) { return rad * 180.0 / std::numbers::pi; }

// Wraps an angle difference into (-180, 180].
inline double wrap_degrees( double deg )
{
    double w = std::fmod( deg, 360.0 );
    if ( w <= -180.0 )
        w += 360.0;
    else if ( w > 180.0 )
        w -= 360.0;
    return w;
}

// SVG matrix(a b c d e f): x' = a*x + c*y + e, y' = b*x + d*y + f.
struct affine
{
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0, e = 0.0, f = 0.0;

    static affine identity() { return {}; }
    static affine translation( vec2 t ) { return { 1.0, 0.0, 0.0, 1.0, t.x, t.y }; }
    static affine scaling( double sx, double sy ) { return { sx, 0.0, 0.0, sy, 0.0, 0.0 }; }

    // Positive angles turn clockwise on a y-down screen.
    static affine rotation( double degrees )
    {
        const double r = deg_to_rad( degrees );
        const double cs = std::cos( r );
        const double sn = std::sin( r );
        return { cs, sn, -sn, cs, 0.0, 0.0 };
    }

    static affine about( vec2 pivot, const affine& linear )
    {
        return translation( pivot ) * linear * translation( { -pivot.x, -pivot.y } );
    }

    static affine from_array( const std::array< double, 6 >& m ) { return { m[ 0 ], m[ 1 ], m[ 2 ], m[ 3 ], m[ 4 ], m[ 5 ] }; }
    [[nodiscard]] std::array< double, 6 > to_array() const { return { a, b, c, d, e, f }; }

    [[nodiscard]] double det() const { return a * d - b * c; }

    [[nodiscard]] vec2 apply( vec2 p ) const { return { a * p.x + c * p.y + e, b * p.x + d * p.y + f }; }

    [[nodiscard]] affine inverse() const
    {
        const double k = det();
        const double ia = d / k, ib = -b / k, ic = -c / k, id = a / k;
        return { ia, ib, ic, id, -( ia * e + ic * f ), -( ib * e + id * f ) };
    }

    friend affine operator*( const affine& l, const affine& r )
    {
        return { l.a * r.a + l.c * r.b,
                 l.b * r.a + l.d * r.b,
                 l.a * r.c + l.c * r.d,
                 l.b * r.c + l.d * r.d,
                 l.a * r.e + l.c * r.f + l.e,
                 l.b * r.e + l.d * r.f + l.f };
    }

    [[nodiscard]] double max_abs_diff( const affine& o ) const
    {
        const auto x = to_array();
        const auto y = o.to_array();
        double m = 0.0;
        for ( std::size_t i = 0; i < 6; ++i )
            m = std::max( m, std::abs( x[ i ] - y[ i ] ) );
        return m;
    }
};

// Axis-aligned box in world coordinates (y-down).
struct bbox
{
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    [[nodiscard]] double width() const { return xmax - xmin; }
    [[nodiscard]] double height() const { return ymax - ymin; }
    [[nodiscard]] vec2 center() const { return { ( xmin + xmax ) / 2.0, ( ymin + ymax ) / 2.0 }; }

    friend bool operator==( const bbox&, const bbox& ) = default;
};

// Object-local box as written in SVG: origin corner plus extent.
struct local_box
{
    double x = 0.0, y = 0.0, w = 0.0, h = 0.0;

    [[nodiscard]] vec2 center() const { return { x + w / 2.0, y + h / 2.0 }; }
    [[nodiscard]] vec2 at_fraction( double fx, double fy ) const { return { x + fx * w, y + fy * h }; }

    [[nodiscard]] bbox transformed( const affine& m ) const
    {
        const std::array< vec2, 4 > corners{ m.apply( { x, y } ), m.apply( { x + w, y } ),
                                             m.apply( { x, y + h } ), m.apply( { x + w, y + h } ) };
        bbox out{ corners[ 0 ].x, corners[ 0 ].y, corners[ 0 ].x, corners[ 0 ].y };
        for ( const auto& p : corners )
        {
            out.xmin = std::min( out.xmin, p.x );
            out.ymin = std::min( out.ymin, p.y );
            out.xmax = std::max( out.xmax, p.x );
            out.ymax = std::max( out.ymax, p.y );
        }
        return out;
    }

    friend bool operator==( const local_box&, const local_box& ) = default;
};

// Fixed six-decimal rendering used by every serialized float; "-0.000000" folds to "0.000000".
inline std::string fixed6( double v )
{
    char buf[ 64 ];
    std::snprintf( buf, sizeof buf, "%.6f", v );
    std::string s{ buf };
    if ( s == "-0.000000" )
        s = "0.000000";
    return s;
}

inline double round6( double v )
{
    const double r = std::round( v * 1e6 ) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

} // namespace mover
