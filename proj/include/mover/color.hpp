#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace mover
{

struct rgb
{
    std::uint8_t r = 0, g = 0, b = 0;

    friend bool operator==( rgb, rgb ) = default;
};

struct named_color
{
    std::string_view name;
    rgb value;
};

// CSS Color Module Level 3 extended keywords, alphabetical. Where two keywords
// share a value (gray/grey, aqua/cyan, ...) the first one listed is canonical.
inline constexpr std::array< named_color, 147 > css_colors{ {
    { "aliceblue", { 240, 248, 255 } },       { "antiquewhite", { 250, 235, 215 } },
    { "aqua", { 0, 255, 255 } },              { "aquamarine", { 127, 255, 212 } },
    { "azure", { 240, 255, 255 } },           { "beige", { 245, 245, 220 } },
    { "bisque", { 255, 228, 196 } },          { "black", { 0, 0, 0 } },
    { "blanchedalmond", { 255, 235, 205 } },  { "blue", { 0, 0, 255 } },
    { "blueviolet", { 138, 43, 226 } },       { "brown", { 165, 42, 42 } },
    { "burlywood", { 222, 184, 135 } },       { "cadetblue", { 95, 158, 160 } },
    { "chartreuse", { 127, 255, 0 } },        { "chocolate", { 210, 105, 30 } },
    { "coral", { 255, 127, 80 } },            { "cornflowerblue", { 100, 149, 237 } },
    { "cornsilk", { 255, 248, 220 } },        { "crimson", { 220, 20, 60 } },
    { "cyan", { 0, 255, 255 } },              { "darkblue", { 0, 0, 139 } },
    { "darkcyan", { 0, 139, 139 } },          { "darkgoldenrod", { 184, 134, 11 } },
    { "darkgray", { 169, 169, 169 } },        { "darkgreen", { 0, 100, 0 } },
    { "darkgrey", { 169, 169, 169 } },        { "darkkhaki", { 189, 183, 107 } },
    { "darkmagenta", { 139, 0, 139 } },       { "darkolivegreen", { 85, 107, 47 } },
    { "darkorange", { 255, 140, 0 } },        { "darkorchid", { 153, 50, 204 } },
    { "darkred", { 139, 0, 0 } },             { "darksalmon", { 233, 150, 122 } },
    { "darkseagreen", { 143, 188, 143 } },    { "darkslateblue", { 72, 61, 139 } },
    { "darkslategray", { 47, 79, 79 } },      { "darkslategrey", { 47, 79, 79 } },
    { "darkturquoise", { 0, 206, 209 } },     { "darkviolet", { 148, 0, 211 } },
    { "deeppink", { 255, 20, 147 } },         { "deepskyblue", { 0, 191, 255 } },
    { "dimgray", { 105, 105, 105 } },         { "dimgrey", { 105, 105, 105 } },
    { "dodgerblue", { 30, 144, 255 } },       { "firebrick", { 178, 34, 34 } },
    { "floralwhite", { 255, 250, 240 } },     { "forestgreen", { 34, 139, 34 } },
    { "fuchsia", { 255, 0, 255 } },           { "gainsboro", { 220, 220, 220 } },
    { "ghostwhite", { 248, 248, 255 } },      { "gold", { 255, 215, 0 } },
    { "goldenrod", { 218, 165, 32 } },        { "gray", { 128, 128, 128 } },
    { "green", { 0, 128, 0 } },               { "greenyellow", { 173, 255, 47 } },
    { "grey", { 128, 128, 128 } },            { "honeydew", { 240, 255, 240 } },
    { "hotpink", { 255, 105, 180 } },         { "indianred", { 205, 92, 92 } },
    { "indigo", { 75, 0, 130 } },             { "ivory", { 255, 255, 240 } },
    { "khaki", { 240, 230, 140 } },           { "lavender", { 230, 230, 250 } },
    { "lavenderblush", { 255, 240, 245 } },   { "lawngreen", { 124, 252, 0 } },
    { "lemonchiffon", { 255, 250, 205 } },    { "lightblue", { 173, 216, 230 } },
    { "lightcoral", { 240, 128, 128 } },      { "lightcyan", { 224, 255, 255 } },
    { "lightgoldenrodyellow", { 250, 250, 210 } }, { "lightgray", { 211, 211, 211 } },
    { "lightgreen", { 144, 238, 144 } },      { "lightgrey", { 211, 211, 211 } },
    { "lightpink", { 255, 182, 193 } },       { "lightsalmon", { 255, 160, 122 } },
    { "lightseagreen", { 32, 178, 170 } },    { "lightskyblue", { 135, 206, 250 } },
    { "lightslategray", { 119, 136, 153 } },  { "lightslategrey", { 119, 136, 153 } },
    { "lightsteelblue", { 176, 196, 222 } },  { "lightyellow", { 255, 255, 224 } },
    { "lime", { 0, 255, 0 } },                { "limegreen", { 50, 205, 50 } },
    { "linen", { 250, 240, 230 } },           { "magenta", { 255, 0, 255 } },
    { "maroon", { 128, 0, 0 } },              { "mediumaquamarine", { 102, 205, 170 } },
    { "mediumblue", { 0, 0, 205 } },          { "mediumorchid", { 186, 85, 211 } },
    { "mediumpurple", { 147, 112, 219 } },    { "mediumseagreen", { 60, 179, 113 } },
    { "mediumslateblue", { 123, 104, 238 } }, { "mediumspringgreen", { 0, 250, 154 } },
    { "mediumturquoise", { 72, 209, 204 } },  { "mediumvioletred", { 199, 21, 133 } },
    { "midnightblue", { 25, 25, 112 } },      { "mintcream", { 245, 255, 250 } },
    { "mistyrose", { 255, 228, 225 } },       { "moccasin", { 255, 228, 181 } },
    { "navajowhite", { 255, 222, 173 } },     { "navy", { 0, 0, 128 } },
    { "oldlace", { 253, 245, 230 } },         { "olive", { 128, 128, 0 } },
    { "olivedrab", { 107, 142, 35 } },        { "orange", { 255, 165, 0 } },
    { "orangered", { 255, 69, 0 } },          { "orchid", { 218, 112, 214 } },
    { "palegoldenrod", { 238, 232, 170 } },   { "palegreen", { 152, 251, 152 } },
    { "paleturquoise", { 175, 238, 238 } },   { "palevioletred", { 219, 112, 147 } },
    { "papayawhip", { 255, 239, 213 } },      { "peachpuff", { 255, 218, 185 } },
    { "peru", { 205, 133, 63 } },             { "pink", { 255, 192, 203 } },
    { "plum", { 221, 160, 221 } },            { "powderblue", { 176, 224, 230 } },
    { "purple", { 128, 0, 128 } },            { "red", { 255, 0, 0 } },
    { "rosybrown", { 188, 143, 143 } },       { "royalblue", { 65, 105, 225 } },
    { "saddlebrown", { 139, 69, 19 } },       { "salmon", { 250, 128, 114 } },
    { "sandybrown", { 244, 164, 96 } },       { "seagreen", { 46, 139, 87 } },
    { "seashell", { 255, 245, 238 } },        { "sienna", { 160, 82, 45 } },
    { "silver", { 192, 192, 192 } },          { "skyblue", { 135, 206, 235 } },
    { "slateblue", { 106, 90, 205 } },        { "slategray", { 112, 128, 144 } },
    { "slategrey", { 112, 128, 144 } },       { "snow", { 255, 250, 250 } },
    { "springgreen", { 0, 255, 127 } },       { "steelblue", { 70, 130, 180 } },
    { "tan", { 210, 180, 140 } },             { "teal", { 0, 128, 128 } },
    { "thistle", { 216, 191, 216 } },         { "tomato", { 255, 99, 71 } },
    { "turquoise", { 64, 224, 208 } },        { "violet", { 238, 130, 238 } },
    { "wheat", { 245, 222, 179 } },           { "white", { 255, 255, 255 } },
    { "whitesmoke", { 245, 245, 245 } },      { "yellow", { 255, 255, 0 } },
    { "yellowgreen", { 154, 205, 50 } },
} };

struct color
{
    rgb value;
    std::optional< std::string > name; // canonical CSS keyword when the value has one

    friend bool operator==( const color&, const color& ) = default;
};

inline std::string to_lower( std::string_view s )
{
    std::string out{ s };
    std::ranges::transform( out, out.begin(), []( unsigned char c ) { return static_cast< char >( std::tolower( c ) ); } );
    return out;
}

inline std::optional< rgb > lookup_color_name( std::string_view name )
{
    const std::string key = to_lower( name );
    const auto it = std::ranges::find_if( css_colors, [ & ]( const named_color& c ) { return c.name == key; } );
    if ( it == css_colors.end() )
        return std::nullopt;
    return it->value;
}

inline std::optional< std::string > canonical_name( rgb value )
{
    const auto it = std::ranges::find_if( css_colors, [ & ]( const named_color& c ) { return c.value == value; } );
    if ( it == css_colors.end() )
        return std::nullopt;
    return std::string{ it->name };
}

inline color canonicalize( rgb value ) { return { value, canonical_name( value ) }; }
inline color canonicalize( const color& c ) { return canonicalize( c.value ); }

inline std::string to_hex( rgb value )
{
    char buf[ 8 ];
    std::snprintf( buf, sizeof buf, "#%02x%02x%02x", value.r, value.g, value.b );
    return buf;
}

namespace detail
{

inline std::string_view trim( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
        s.remove_suffix( 1 );
    return s;
}

inline std::optional< int > hex_digit( char c )
{
    if ( c >= '0' && c <= '9' )
        return c - '0';
    if ( c >= 'a' && c <= 'f' )
        return c - 'a' + 10;
    if ( c >= 'A' && c <= 'F' )
        return c - 'A' + 10;
    return std::nullopt;
}

inline std::optional< rgb > parse_hex( std::string_view s )
{
    std::array< int, 6 > d{};
    if ( s.size() != 3 && s.size() != 6 )
        return std::nullopt;
    for ( std::size_t i = 0; i < s.size(); ++i )
    {
        const auto v = hex_digit( s[ i ] );
        if ( !v )
            return std::nullopt;
        d[ i ] = *v;
    }
    if ( s.size() == 3 )
        return rgb{ static_cast< std::uint8_t >( d[ 0 ] * 17 ), static_cast< std::uint8_t >( d[ 1 ] * 17 ),
                    static_cast< std::uint8_t >( d[ 2 ] * 17 ) };
    return rgb{ static_cast< std::uint8_t >( d[ 0 ] * 16 + d[ 1 ] ), static_cast< std::uint8_t >( d[ 2 ] * 16 + d[ 3 ] ),
                static_cast< std::uint8_t >( d[ 4 ] * 16 + d[ 5 ] ) };
}

inline std::optional< rgb > parse_rgb_function( std::string_view s )
{
    // rgb(r, g, b) with integers or percentages
    if ( !s.starts_with( "rgb(" ) || !s.ends_with( ")" ) )
        return std::nullopt;
    s = s.substr( 4, s.size() - 5 );
    std::array< std::uint8_t, 3 > ch{};
    for ( std::size_t i = 0; i < 3; ++i )
    {
        const auto comma = s.find( ',' );
        if ( ( i < 2 ) != ( comma != std::string_view::npos ) )
            return std::nullopt;
        std::string part{ trim( s.substr( 0, comma ) ) };
        s = comma == std::string_view::npos ? std::string_view{} : s.substr( comma + 1 );
        const bool percent = !part.empty() && part.back() == '%';
        if ( percent )
            part.pop_back();
        char* end = nullptr;
        const double v = std::strtod( part.c_str(), &end );
        if ( part.empty() || end != part.c_str() + part.size() )
            return std::nullopt;
        const double scaled = percent ? v * 255.0 / 100.0 : v;
        ch[ i ] = static_cast< std::uint8_t >( std::clamp( std::lround( scaled ), 0L, 255L ) );
    }
    return rgb{ ch[ 0 ], ch[ 1 ], ch[ 2 ] };
}

} // namespace detail

// Accepts "#rgb", "#rrggbb", "rgb(...)" or a CSS keyword (case-insensitive).
inline std::optional< rgb > parse_color( std::string_view text )
{
    const std::string s = to_lower( detail::trim( text ) );
    if ( s.empty() )
        return std::nullopt;
    if ( s.front() == '#' )
        return detail::parse_hex( std::string_view{ s }.substr( 1 ) );
    if ( s.starts_with( "rgb(" ) )
        return detail::parse_rgb_function( s );
    return lookup_color_name( s );
}

} // namespace mover
