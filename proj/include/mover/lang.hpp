#pragma once

#include "algebra.hpp"
#include "error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mover
{

struct source_span
{
    std::size_t begin = 0; // byte offsets into the program source
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t col = 1;
};

enum class expr_kind
{
    quantifier,
    and_op,
    or_op,
    not_op,
    call,
    var,
    number,
    string,
    list,
};

enum class quantifier_kind
{
    exists,
    iota,
    all,
};

enum class sort
{
    object,
    motion,
};

constexpr std::string_view to_string( quantifier_kind q )
{
    return q == quantifier_kind::exists ? "exists" : q == quantifier_kind::iota ? "iota" : "all";
}

constexpr std::string_view to_string( sort s ) { return s == sort::object ? "Object" : "Motion"; }

struct expr
{
    expr_kind kind = expr_kind::number;
    source_span span;
    quantifier_kind quantifier = quantifier_kind::exists;
    mover::sort sort = sort::object;
    std::string name; // bound variable, predicate name, variable reference, or string literal
    double number = 0.0;
    std::vector< expr > children; // quantifier body, operands, call arguments, list items

    [[nodiscard]] bool is_literal() const
    {
        return kind == expr_kind::number || kind == expr_kind::string || kind == expr_kind::list;
    }
};

// Structural equality, ignoring source spans.
inline bool same_ast( const expr& a, const expr& b )
{
    if ( a.kind != b.kind || a.children.size() != b.children.size() )
        return false;
    switch ( a.kind )
    {
    case expr_kind::quantifier:
        if ( a.quantifier != b.quantifier || a.sort != b.sort || a.name != b.name )
            return false;
        break;
    case expr_kind::call:
    case expr_kind::var:
    case expr_kind::string:
        if ( a.name != b.name )
            return false;
        break;
    case expr_kind::number:
        if ( a.number != b.number )
            return false;
        break;
    default: break;
    }
    for ( std::size_t i = 0; i < a.children.size(); ++i )
        if ( !same_ast( a.children[ i ], b.children[ i ] ) )
            return false;
    return true;
}

struct statement
{
    std::optional< std::string > binding;
    expr body;
    source_span span;
    std::string source; // the statement's own text
};

struct program
{
    std::vector< statement > statements;
    std::vector< std::string > warnings;
};

inline bool same_ast( const program& a, const program& b )
{
    if ( a.statements.size() != b.statements.size() )
        return false;
    for ( std::size_t i = 0; i < a.statements.size(); ++i )
        if ( a.statements[ i ].binding != b.statements[ i ].binding || !same_ast( a.statements[ i ].body, b.statements[ i ].body ) )
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Predicate table

enum class arg_kind
{
    object,      // object variable or inline Object quantifier
    motion,      // motion variable
    boolean,     // predicate expression
    string,      // string literal
    number,      // number literal
    number_list, // number or [number, number]
    direction,   // "clockwise" | "counterclockwise" | [number, number]
    point,       // [number|"p%", number|"p%"]
};

struct predicate_signature
{
    std::string name;
    std::vector< arg_kind > args;
};

namespace lang_detail
{

inline const std::map< std::string, std::string, std::less<> >& predicate_aliases()
{
    static const std::map< std::string, std::string, std::less<> > aliases{
        { "shp", "shape" },
        { "clr", "color" },
        { "dir", "direction" },
        { "mag", "magnitude" },
        { "orig", "origin" },
        { "dur", "duration" },
        { "agt", "agent" },
        { "before", "t_before" },
        { "while", "t_while" },
        { "after", "t_after" },
        { "top", "s_top" },
        { "bottom", "s_bottom" },
        { "left", "s_left" },
        { "right", "s_right" },
        { "border", "s_border" },
        { "intersect", "s_intersect" },
        { "top_border", "s_top_border" },
        { "bottom_border", "s_bottom_border" },
        { "left_border", "s_left_border" },
        { "right_border", "s_right_border" },
    };
    return aliases;
}

inline const std::map< std::string, std::string, std::less<> >& type_aliases()
{
    static const std::map< std::string, std::string, std::less<> > aliases{
        { "trn", "translate" },
        { "rot", "rotate" },
        { "scl", "scale" },
    };
    return aliases;
}

inline std::size_t edit_distance( std::string_view a, std::string_view b )
{
    std::vector< std::size_t > row( b.size() + 1 );
    for ( std::size_t j = 0; j <= b.size(); ++j )
        row[ j ] = j;
    for ( std::size_t i = 1; i <= a.size(); ++i )
    {
        std::size_t diag = row[ 0 ];
        row[ 0 ] = i;
        for ( std::size_t j = 1; j <= b.size(); ++j )
        {
            const std::size_t up = row[ j ];
            row[ j ] = std::min( { row[ j ] + 1, row[ j - 1 ] + 1, diag + ( a[ i - 1 ] == b[ j - 1 ] ? 0 : 1 ) } );
            diag = up;
        }
    }
    return row[ b.size() ];
}

} // namespace lang_detail

// Canonical predicate signatures; temporal and spatial names come from the mask table.
inline std::map< std::string, predicate_signature, std::less<> > predicate_table( const mask_table& masks = default_masks() )
{
    using ak = arg_kind;
    std::map< std::string, predicate_signature, std::less<> > t;
    auto add = [ & ]( std::string name, std::vector< arg_kind > args ) { t[ name ] = { name, std::move( args ) }; };
    add( "shape", { ak::object, ak::string } );
    add( "color", { ak::object, ak::string } );
    add( "id", { ak::object, ak::string } );
    add( "type", { ak::motion, ak::string } );
    add( "direction", { ak::motion, ak::direction } );
    add( "magnitude", { ak::motion, ak::number_list } );
    add( "origin", { ak::motion, ak::point } );
    add( "duration", { ak::motion, ak::number } );
    add( "agent", { ak::motion, ak::object } );
    add( "post", { ak::motion, ak::boolean } );
    add( "t_rel", { ak::motion, ak::motion, ak::string } );
    add( "s_rel", { ak::object, ak::object, ak::string, ak::string } );
    for ( const auto r : all_allen_relations )
        add( "t_" + std::string{ to_string( r ) }, { ak::motion, ak::motion } );
    for ( const auto& [ name, m ] : masks )
    {
        if ( m.is_temporal() )
            add( "t_" + name, { ak::motion, ak::motion } );
        else
            add( "s_" + name, { ak::object, ak::object } );
    }
    return t;
}

// Canonical name for `name`, or nullopt if it is neither canonical nor an alias.
inline std::optional< std::string > canonical_predicate( std::string_view name, const mask_table& masks = default_masks() )
{
    const auto table = predicate_table( masks );
    if ( table.contains( name ) )
        return std::string{ name };
    if ( const auto it = lang_detail::predicate_aliases().find( name ); it != lang_detail::predicate_aliases().end() )
        return it->second;
    // Mask-defined names also accept the unprefixed surface, e.g. bottom_border_flush.
    if ( const auto it = masks.find( name ); it != masks.end() )
        return ( it->second.is_temporal() ? "t_" : "s_" ) + std::string{ name };
    return std::nullopt;
}

inline std::string suggest_predicate( std::string_view name, const mask_table& masks = default_masks() )
{
    std::string best;
    std::size_t best_d = static_cast< std::size_t >( -1 );
    auto consider = [ & ]( const std::string& candidate ) {
        const std::size_t d = lang_detail::edit_distance( name, candidate );
        if ( d < best_d )
            best_d = d, best = candidate;
    };
    for ( const auto& [ n, _ ] : predicate_table( masks ) )
        consider( n );
    for ( const auto& [ n, _ ] : lang_detail::predicate_aliases() )
        consider( n );
    return best;
}

// ---------------------------------------------------------------------------
// Lexer

enum class token_kind
{
    ident,
    number,
    string,
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    colon,
    equals,
    end,
};

struct token
{
    token_kind kind = token_kind::end;
    std::string text;
    double number = 0.0;
    source_span span;
};

constexpr std::string_view describe( token_kind k )
{
    switch ( k )
    {
    case token_kind::ident: return "identifier";
    case token_kind::number: return "number";
    case token_kind::string: return "string";
    case token_kind::lparen: return "'('";
    case token_kind::rparen: return "')'";
    case token_kind::lbracket: return "'['";
    case token_kind::rbracket: return "']'";
    case token_kind::comma: return "','";
    case token_kind::colon: return "':'";
    case token_kind::equals: return "'='";
    case token_kind::end: return "end of input";
    }
    return "token";
}

namespace lang_detail
{

inline error syntax_error( const source_span& at, const std::string& msg )
{
    return error{ error_kind::syntax_error, "line " + std::to_string( at.line ) + ", col " + std::to_string( at.col ) + ": " + msg };
}

inline bool ident_start( char c ) { return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || c == '_'; }
inline bool ident_char( char c ) { return ident_start( c ) || ( c >= '0' && c <= '9' ); }
inline bool digit( char c ) { return c >= '0' && c <= '9'; }

} // namespace lang_detail

inline std::vector< token > tokenize( std::string_view src )
{
    std::vector< token > out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [ & ]( std::size_t n ) {
        for ( std::size_t k = 0; k < n && i < src.size(); ++k, ++i )
        {
            if ( src[ i ] == '\n' )
                ++line, col = 1;
            else
                ++col;
        }
    };
    while ( i < src.size() )
    {
        const char c = src[ i ];
        if ( c == ' ' || c == '\t' || c == '\r' || c == '\n' )
        {
            advance( 1 );
            continue;
        }
        if ( c == '#' )
        {
            while ( i < src.size() && src[ i ] != '\n' )
                advance( 1 );
            continue;
        }
        token t;
        t.span = { i, i, line, col };
        const std::size_t start = i;
        if ( lang_detail::ident_start( c ) )
        {
            while ( i < src.size() && lang_detail::ident_char( src[ i ] ) )
                advance( 1 );
            t.kind = token_kind::ident;
            t.text = std::string{ src.substr( start, i - start ) };
        }
        else if ( lang_detail::digit( c ) || c == '.' ||
                  ( ( c == '-' || c == '+' ) && i + 1 < src.size() && ( lang_detail::digit( src[ i + 1 ] ) || src[ i + 1 ] == '.' ) ) )
        {
            std::size_t j = i + ( c == '-' || c == '+' ? 1 : 0 );
            while ( j < src.size() && lang_detail::digit( src[ j ] ) )
                ++j;
            if ( j < src.size() && src[ j ] == '.' )
            {
                ++j;
                while ( j < src.size() && lang_detail::digit( src[ j ] ) )
                    ++j;
            }
            if ( j < src.size() && ( src[ j ] == 'e' || src[ j ] == 'E' ) )
            {
                std::size_t k = j + 1;
                if ( k < src.size() && ( src[ k ] == '-' || src[ k ] == '+' ) )
                    ++k;
                if ( k < src.size() && lang_detail::digit( src[ k ] ) )
                {
                    j = k;
                    while ( j < src.size() && lang_detail::digit( src[ j ] ) )
                        ++j;
                }
            }
            std::string text{ src.substr( i, j - i ) };
            if ( text.front() == '+' )
                text.erase( 0, 1 );
            double v = 0.0;
            const auto res = std::from_chars( text.data(), text.data() + text.size(), v );
            if ( res.ec != std::errc{} || res.ptr != text.data() + text.size() )
                throw lang_detail::syntax_error( t.span, "malformed number '" + text + "'" );
            advance( j - i );
            t.kind = token_kind::number;
            t.number = v;
            t.text = std::string{ src.substr( start, i - start ) };
        }
        else if ( c == '"' )
        {
            advance( 1 );
            std::string value;
            bool closed = false;
            while ( i < src.size() )
            {
                const char d = src[ i ];
                if ( d == '"' )
                {
                    advance( 1 );
                    closed = true;
                    break;
                }
                if ( d == '\n' )
                    break;
                if ( d == '\\' && i + 1 < src.size() )
                {
                    value += src[ i + 1 ];
                    advance( 2 );
                    continue;
                }
                value += d;
                advance( 1 );
            }
            if ( !closed )
                throw lang_detail::syntax_error( t.span, "unterminated string" );
            t.kind = token_kind::string;
            t.text = std::move( value );
        }
        else
        {
            switch ( c )
            {
            case '(': t.kind = token_kind::lparen; break;
            case ')': t.kind = token_kind::rparen; break;
            case '[': t.kind = token_kind::lbracket; break;
            case ']': t.kind = token_kind::rbracket; break;
            case ',': t.kind = token_kind::comma; break;
            case ':': t.kind = token_kind::colon; break;
            case '=': t.kind = token_kind::equals; break;
            default: throw lang_detail::syntax_error( t.span, std::string{ "unexpected character '" } + c + "'" );
            }
            advance( 1 );
            t.text = std::string( 1, c );
        }
        t.span.end = i;
        out.push_back( std::move( t ) );
    }
    token eof;
    eof.span = { src.size(), src.size(), line, col };
    out.push_back( eof );
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace lang_detail
{

inline bool is_keyword( std::string_view s )
{
    return s == "and" || s == "or" || s == "not" || s == "lambda" || s == "iota" || s == "exists" || s == "all";
}

class parser
{
    const std::vector< token >& _toks;
    std::size_t _pos = 0;

    [[nodiscard]] const token& peek( std::size_t ahead = 0 ) const
    {
        return _toks[ std::min( _pos + ahead, _toks.size() - 1 ) ];
    }
    const token& take() { return _toks[ std::min( _pos++, _toks.size() - 1 ) ]; }

    [[nodiscard]] bool at_ident( std::string_view word ) const
    {
        return peek().kind == token_kind::ident && peek().text == word;
    }

    [[noreturn]] void fail( const std::string& expected ) const
    {
        const token& t = peek();
        const std::string found = t.kind == token_kind::end      ? "end of input"
                                  : t.kind == token_kind::string ? "string \"" + t.text + "\""
                                                                 : "'" + t.text + "'";
        throw syntax_error( t.span, "expected " + expected + ", found " + found );
    }

    const token& expect( token_kind k )
    {
        if ( peek().kind != k )
            fail( std::string{ describe( k ) } );
        return take();
    }

    static source_span join( const source_span& a, const source_span& b ) { return { a.begin, b.end, a.line, a.col }; }

    expr parse_quantifier()
    {
        const token& head = take();
        expr e;
        e.kind = expr_kind::quantifier;
        e.quantifier = head.text == "iota" ? quantifier_kind::iota : head.text == "exists" ? quantifier_kind::exists : quantifier_kind::all;
        expect( token_kind::lparen );
        if ( at_ident( "Object" ) )
            e.sort = sort::object;
        else if ( at_ident( "Motion" ) )
            e.sort = sort::motion;
        else
            fail( "'Object' or 'Motion'" );
        take();
        expect( token_kind::comma );
        if ( !at_ident( "lambda" ) )
            fail( "'lambda'" );
        take();
        if ( peek().kind != token_kind::ident || is_keyword( peek().text ) )
            fail( "a variable name" );
        e.name = take().text;
        expect( token_kind::colon );
        e.children.push_back( parse_or() );
        const token& close = expect( token_kind::rparen );
        e.span = join( head.span, close.span );
        return e;
    }

    expr parse_literal()
    {
        const token& t = peek();
        expr e;
        e.span = t.span;
        if ( t.kind == token_kind::number )
        {
            e.kind = expr_kind::number;
            e.number = take().number;
            return e;
        }
        if ( t.kind == token_kind::string )
        {
            e.kind = expr_kind::string;
            e.name = take().text;
            return e;
        }
        const token& open = expect( token_kind::lbracket );
        e.kind = expr_kind::list;
        if ( peek().kind != token_kind::rbracket )
        {
            for ( ;; )
            {
                if ( peek().kind != token_kind::number && peek().kind != token_kind::string && peek().kind != token_kind::lbracket )
                    fail( "a number, string or list" );
                e.children.push_back( parse_literal() );
                if ( peek().kind == token_kind::comma )
                {
                    take();
                    continue;
                }
                break;
            }
        }
        const token& close = expect( token_kind::rbracket );
        e.span = join( open.span, close.span );
        return e;
    }

    expr parse_argument()
    {
        const auto k = peek().kind;
        if ( k == token_kind::number || k == token_kind::string || k == token_kind::lbracket )
            return parse_literal();
        return parse_or();
    }

    expr parse_unary()
    {
        const token& t = peek();
        if ( t.kind == token_kind::ident && t.text == "not" )
        {
            take();
            expr e;
            e.kind = expr_kind::not_op;
            e.children.push_back( parse_unary() );
            e.span = join( t.span, e.children.back().span );
            return e;
        }
        if ( t.kind == token_kind::lparen )
        {
            take();
            expr inner = parse_or();
            expect( token_kind::rparen );
            return inner;
        }
        if ( t.kind == token_kind::ident && ( t.text == "iota" || t.text == "exists" || t.text == "all" ) &&
             peek( 1 ).kind == token_kind::lparen )
            return parse_quantifier();
        if ( t.kind == token_kind::ident && !is_keyword( t.text ) )
        {
            take();
            expr e;
            e.span = t.span;
            e.name = t.text;
            if ( peek().kind != token_kind::lparen )
            {
                e.kind = expr_kind::var;
                return e;
            }
            take();
            e.kind = expr_kind::call;
            if ( peek().kind != token_kind::rparen )
            {
                for ( ;; )
                {
                    e.children.push_back( parse_argument() );
                    if ( peek().kind == token_kind::comma )
                    {
                        take();
                        continue;
                    }
                    break;
                }
            }
            const token& close = expect( token_kind::rparen );
            e.span = join( t.span, close.span );
            return e;
        }
        fail( "a predicate, quantifier, 'not' or '('" );
    }

    expr parse_binary( expr_kind kind, std::string_view word, expr ( parser::*next )() )
    {
        expr left = ( this->*next )();
        while ( at_ident( word ) )
        {
            take();
            expr right = ( this->*next )();
            expr e;
            e.kind = kind;
            e.span = join( left.span, right.span );
            e.children.push_back( std::move( left ) );
            e.children.push_back( std::move( right ) );
            left = std::move( e );
        }
        return left;
    }

    expr parse_and() { return parse_binary( expr_kind::and_op, "and", &parser::parse_unary ); }

public:
    explicit parser( const std::vector< token >& toks )
        : _toks( toks )
    {
    }

    expr parse_or() { return parse_binary( expr_kind::or_op, "or", &parser::parse_and ); }

    program parse_program( std::string_view src )
    {
        program p;
        while ( peek().kind != token_kind::end )
        {
            statement st;
            const token& first = peek();
            if ( first.kind == token_kind::ident && peek( 1 ).kind == token_kind::equals )
            {
                if ( is_keyword( first.text ) )
                    fail( "a statement" );
                st.binding = take().text;
                take();
            }
            st.body = parse_or();
            st.span = join( first.span, st.body.span );
            st.source = std::string{ src.substr( st.span.begin, st.span.end - st.span.begin ) };
            p.statements.push_back( std::move( st ) );
        }
        return p;
    }
};

} // namespace lang_detail

// ---------------------------------------------------------------------------
// Checking

enum class term_sort
{
    object,
    motion,
    boolean,
};

namespace lang_detail
{

struct checker
{
    const mask_table& masks;
    bool require_known = false; // unknown predicates: error (after alias resolution) or skip (at parse time)
    std::vector< std::pair< std::string, term_sort > > scope;

    [[nodiscard]] std::optional< term_sort > lookup( const std::string& name ) const
    {
        for ( auto it = scope.rbegin(); it != scope.rend(); ++it )
            if ( it->first == name )
                return it->second;
        return std::nullopt;
    }

    static error at( error_kind k, const expr& e, const std::string& msg )
    {
        return error{ k, "line " + std::to_string( e.span.line ) + ", col " + std::to_string( e.span.col ) + ": " + msg };
    }

    static bool is_number_or_percent( const expr& e )
    {
        if ( e.kind == expr_kind::number )
            return true;
        if ( e.kind != expr_kind::string || e.name.size() < 2 || e.name.back() != '%' )
            return false;
        double v = 0.0;
        const auto res = std::from_chars( e.name.data(), e.name.data() + e.name.size() - 1, v );
        return res.ec == std::errc{} && res.ptr == e.name.data() + e.name.size() - 1;
    }

    void check_value( const std::string& pred, arg_kind k, const expr& a )
    {
        auto shape_error = [ & ]( const std::string& what ) {
            return at( error_kind::bad_argument_shape, a, pred + ": " + what );
        };
        switch ( k )
        {
        case arg_kind::string:
            if ( a.kind != expr_kind::string )
                throw at( error_kind::sort_error, a, pred + ": expected a string argument" );
            if ( pred == "type" && !( a.name == "translate" || a.name == "rotate" || a.name == "scale" ||
                                      type_aliases().contains( a.name ) ) )
                throw shape_error( "motion type must be translate, rotate or scale" );
            return;
        case arg_kind::number:
            if ( a.kind != expr_kind::number )
                throw at( error_kind::sort_error, a, pred + ": expected a number" );
            return;
        case arg_kind::number_list:
            if ( a.kind == expr_kind::number )
                return;
            if ( a.kind != expr_kind::list )
                throw at( error_kind::sort_error, a, pred + ": expected a number or a list of two numbers" );
            if ( a.children.size() != 2 || !std::ranges::all_of( a.children, []( const expr& c ) { return c.kind == expr_kind::number; } ) )
                throw shape_error( "expected a list of two numbers" );
            return;
        case arg_kind::direction:
            if ( a.kind == expr_kind::string )
            {
                if ( a.name != "clockwise" && a.name != "counterclockwise" )
                    throw shape_error( "rotation direction must be \"clockwise\" or \"counterclockwise\"" );
                return;
            }
            if ( a.kind != expr_kind::list )
                throw at( error_kind::sort_error, a, pred + ": expected a direction string or vector" );
            if ( a.children.size() != 2 || !std::ranges::all_of( a.children, []( const expr& c ) { return c.kind == expr_kind::number; } ) )
                throw shape_error( "expected a list of two numbers" );
            return;
        case arg_kind::point:
            if ( a.kind != expr_kind::list )
                throw at( error_kind::sort_error, a, pred + ": expected a point [x, y]" );
            if ( a.children.size() != 2 || !std::ranges::all_of( a.children, is_number_or_percent ) )
                throw shape_error( "expected [x, y] with numbers or percent strings" );
            return;
        default: return;
        }
    }

    // Sort of a term or formula.
    term_sort check( const expr& e )
    {
        switch ( e.kind )
        {
        case expr_kind::number:
        case expr_kind::string:
        case expr_kind::list: throw at( error_kind::sort_error, e, "literal used where a formula was expected" );
        case expr_kind::var: {
            const auto s = lookup( e.name );
            if ( !s )
                throw at( error_kind::unbound_variable, e, "unbound variable '" + e.name + "'" );
            return *s;
        }
        case expr_kind::not_op:
        case expr_kind::and_op:
        case expr_kind::or_op:
            for ( const auto& c : e.children )
                if ( check( c ) != term_sort::boolean )
                    throw at( error_kind::sort_error, c, "operand of a logical operator must be a formula" );
            return term_sort::boolean;
        case expr_kind::quantifier: {
            scope.emplace_back( e.name, e.sort == sort::object ? term_sort::object : term_sort::motion );
            const term_sort body = check( e.children.front() );
            scope.pop_back();
            if ( body != term_sort::boolean )
                throw at( error_kind::sort_error, e.children.front(), "quantifier body must be a formula" );
            if ( e.quantifier == quantifier_kind::exists )
                return term_sort::boolean;
            return e.sort == sort::object ? term_sort::object : term_sort::motion;
        }
        case expr_kind::call: return check_call( e );
        }
        return term_sort::boolean;
    }

    term_sort check_call( const expr& e )
    {
        std::optional< std::string > canon = canonical_predicate( e.name, masks );
        if ( !canon )
        {
            if ( require_known )
                throw at( error_kind::unknown_predicate, e,
                          "unknown predicate '" + e.name + "'; did you mean '" + suggest_predicate( e.name, masks ) + "'?" );
            for ( const auto& a : e.children )
                if ( !a.is_literal() )
                    check( a );
            return term_sort::boolean;
        }
        const auto table = predicate_table( masks );
        const predicate_signature& sig = table.at( *canon );
        if ( e.children.size() != sig.args.size() )
            throw at( error_kind::arity_error, e,
                      e.name + " expects " + std::to_string( sig.args.size() ) + " arguments, got " + std::to_string( e.children.size() ) );
        for ( std::size_t i = 0; i < sig.args.size(); ++i )
        {
            const expr& a = e.children[ i ];
            const arg_kind k = sig.args[ i ];
            if ( k == arg_kind::object || k == arg_kind::motion || k == arg_kind::boolean )
            {
                if ( a.is_literal() )
                    throw at( error_kind::sort_error, a, e.name + ": argument " + std::to_string( i + 1 ) + " must not be a literal" );
                const term_sort s = check( a );
                const term_sort want = k == arg_kind::object ? term_sort::object : k == arg_kind::motion ? term_sort::motion : term_sort::boolean;
                if ( s != want )
                {
                    const char* names[] = { "an object", "a motion", "a formula" };
                    throw at( error_kind::sort_error, a,
                              e.name + ": argument " + std::to_string( i + 1 ) + " must be " + names[ static_cast< int >( want ) ] );
                }
            }
            else
                check_value( e.name, k, a );
        }
        if ( *canon == "t_rel" && !parse_allen( e.children[ 2 ].name ) )
            throw at( error_kind::bad_argument_shape, e.children[ 2 ], "t_rel: unknown Allen relation '" + e.children[ 2 ].name + "'" );
        if ( *canon == "s_rel" )
            for ( std::size_t i = 2; i < 4; ++i )
                if ( !parse_allen( e.children[ i ].name ) )
                    throw at( error_kind::bad_argument_shape, e.children[ i ], "s_rel: unknown Allen relation '" + e.children[ i ].name + "'" );
        return term_sort::boolean;
    }

    void check_program( program& p )
    {
        scope.clear();
        p.warnings.clear();
        for ( const auto& st : p.statements )
        {
            const term_sort s = check( st.body );
            if ( st.binding )
            {
                if ( lookup( *st.binding ) )
                    throw at( error_kind::syntax_error, st.body, "variable '" + *st.binding + "' is already bound" );
                scope.emplace_back( *st.binding, s );
            }
            else if ( st.body.kind == expr_kind::quantifier && st.body.quantifier == quantifier_kind::iota )
                p.warnings.push_back( "line " + std::to_string( st.span.line ) + ": iota result is not bound to a variable" );
        }
    }
};

} // namespace lang_detail

// Syntax plus scope, arity and sort checks for every predicate name it recognises.
inline program parse( std::string_view source, const mask_table& masks = default_masks() )
{
    const auto toks = tokenize( source );
    lang_detail::parser ps{ toks };
    program p = ps.parse_program( source );
    lang_detail::checker ck{ masks, false, {} };
    ck.check_program( p );
    return p;
}

namespace lang_detail
{

inline void resolve( expr& e, const mask_table& masks )
{
    if ( e.kind == expr_kind::call )
    {
        if ( const auto canon = canonical_predicate( e.name, masks ) )
            e.name = *canon;
        if ( e.name == "type" && e.children.size() == 2 && e.children[ 1 ].kind == expr_kind::string )
            if ( const auto it = type_aliases().find( e.children[ 1 ].name ); it != type_aliases().end() )
                e.children[ 1 ].name = it->second;
    }
    for ( auto& c : e.children )
        resolve( c, masks );
}

} // namespace lang_detail

// Canonical predicate and motion-type names; rejects names outside the table.
inline program resolve_aliases( program p, const mask_table& masks = default_masks() )
{
    for ( auto& st : p.statements )
        lang_detail::resolve( st.body, masks );
    lang_detail::checker ck{ masks, true, {} };
    ck.check_program( p );
    return p;
}

// parse + resolve_aliases
inline program compile( std::string_view source, const mask_table& masks = default_masks() )
{
    return resolve_aliases( parse( source, masks ), masks );
}

// ---------------------------------------------------------------------------
// Printing

inline std::string format_number( double v )
{
    if ( std::isfinite( v ) && v == std::trunc( v ) && std::abs( v ) < 1e15 )
    {
        char buf[ 32 ];
        std::snprintf( buf, sizeof buf, "%.1f", v );
        return buf;
    }
    char buf[ 64 ];
    const auto res = std::to_chars( buf, buf + sizeof buf, v );
    return { buf, res.ptr };
}

inline std::string quote( std::string_view s )
{
    std::string out = "\"";
    for ( const char c : s )
    {
        if ( c == '"' || c == '\\' )
            out += '\\';
        out += c;
    }
    return out + "\"";
}

namespace lang_detail
{

inline int precedence( const expr& e )
{
    switch ( e.kind )
    {
    case expr_kind::or_op: return 1;
    case expr_kind::and_op: return 2;
    case expr_kind::not_op: return 3;
    default: return 4;
    }
}

inline void print( const expr& e, std::string& out );

inline void print_at( const expr& e, int min_prec, std::string& out )
{
    if ( precedence( e ) < min_prec )
    {
        out += '(';
        print( e, out );
        out += ')';
    }
    else
        print( e, out );
}

inline void print( const expr& e, std::string& out )
{
    switch ( e.kind )
    {
    case expr_kind::number: out += format_number( e.number ); break;
    case expr_kind::string: out += quote( e.name ); break;
    case expr_kind::var: out += e.name; break;
    case expr_kind::list:
        out += '[';
        for ( std::size_t i = 0; i < e.children.size(); ++i )
        {
            if ( i )
                out += ", ";
            print( e.children[ i ], out );
        }
        out += ']';
        break;
    case expr_kind::call:
        out += e.name;
        out += '(';
        for ( std::size_t i = 0; i < e.children.size(); ++i )
        {
            if ( i )
                out += ", ";
            print( e.children[ i ], out );
        }
        out += ')';
        break;
    case expr_kind::quantifier:
        out += to_string( e.quantifier );
        out += '(';
        out += to_string( e.sort );
        out += ", lambda ";
        out += e.name;
        out += ": ";
        print( e.children.front(), out );
        out += ')';
        break;
    case expr_kind::not_op:
        out += "not ";
        print_at( e.children.front(), 3, out );
        break;
    case expr_kind::and_op:
    case expr_kind::or_op: {
        const int p = precedence( e );
        print_at( e.children[ 0 ], p, out );
        out += e.kind == expr_kind::and_op ? " and " : " or ";
        print_at( e.children[ 1 ], p + 1, out );
        break;
    }
    }
}

} // namespace lang_detail

inline std::string to_source( const expr& e )
{
    std::string out;
    lang_detail::print( e, out );
    return out;
}

inline std::string to_source( const statement& st )
{
    return ( st.binding ? *st.binding + " = " : std::string{} ) + to_source( st.body );
}

inline std::string to_source( const program& p )
{
    std::string out;
    for ( const auto& st : p.statements )
        out += to_source( st ) + "\n";
    return out;
}

} // namespace mover
