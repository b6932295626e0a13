#pragma once

#include "algebra.hpp"
#include "color.hpp"
#include "config.hpp"
#include "error.hpp"
#include "lang.hpp"
#include "motion.hpp"
#include "scene.hpp"
#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mover
{

// Machine-stable failure class plus human-readable detail.
struct note
{
    std::string code;
    std::string text;

    friend bool operator==( const note&, const note& ) = default;
};

namespace note_code
{
inline constexpr const char* iota_empty = "IotaEmpty";
inline constexpr const char* unresolved_object = "UnresolvedObject";
inline constexpr const char* no_valid_runs = "NoValidRuns";
inline constexpr const char* post_not_satisfied = "PostNotSatisfied";
inline constexpr const char* post_per_run = "PostPerRun";
inline constexpr const char* origin_unstable = "OriginUnstable";
inline constexpr const char* unknown_color_name = "UnknownColorName";
inline constexpr const char* unknown_shape_name = "UnknownShapeName";
inline constexpr const char* empty_set = "EmptySet";
} // namespace note_code

struct predicate_trace
{
    std::string name;
    std::vector< std::string > args;
    bool value = false;
    std::vector< frame_interval > true_ranges;
    std::optional< note > remark;
};

struct verdict
{
    std::string source;
    std::optional< std::string > binding;
    source_span span;
    bool value = false;
    std::optional< note > remark;
    std::vector< predicate_trace > predicates;
};

struct evaluation
{
    std::vector< verdict > verdicts;
    bool overall = true; // conjunction over statements without a binding
    std::vector< std::string > warnings;
};

struct eval_inputs
{
    const mover::scene& scene;
    const animation_trace& trace;
    const motion_channels& channels;
    const tolerances& tol;
    const mask_table& masks;
};

// ---------------------------------------------------------------------------
// Object predicates

// Full-row tensor of objects whose shape / color / id matches `value`.
inline tensor_value eval_object_pred( const std::string& name, const std::vector< std::size_t >& rows, const std::string& value,
                                      const mover::scene& sc, std::size_t num_frames, int color_tol = 0 )
{
    tensor_value t = tensor_value::cells( sc.size(), num_frames );
    std::function< bool( const object_info& ) > match;
    if ( name == "shape" )
    {
        const auto s = parse_shape( to_lower( value ) );
        match = [ s ]( const object_info& o ) { return s && o.shape == *s; };
    }
    else if ( name == "color" )
    {
        const auto target = parse_color( value );
        if ( !target )
            throw error{ error_kind::unknown_color_name, "'" + value + "' is not a CSS color" };
        match = [ target, color_tol ]( const object_info& o ) {
            return std::abs( o.fill.value.r - target->r ) <= color_tol && std::abs( o.fill.value.g - target->g ) <= color_tol &&
                   std::abs( o.fill.value.b - target->b ) <= color_tol;
        };
    }
    else
        match = [ &value ]( const object_info& o ) { return o.id == value; };
    for ( const std::size_t r : rows )
        if ( match( sc[ r ] ) )
            for ( std::size_t c = 0; c < num_frames; ++c )
                t.set( r, c, true );
    return t;
}

// ---------------------------------------------------------------------------
// Bindings

struct object_binding
{
    std::vector< std::size_t > rows; // one row for iota, any number for all
    bool resolved = true;
};

struct motion_binding
{
    tensor_value mask; // per-cell: the frames this motion occupies
    std::vector< std::size_t > rows;
    std::vector< channel > channels; // type context the motion was described with
    bool resolved = true;

    [[nodiscard]] std::vector< frame_interval > runs() const
    {
        std::vector< frame_interval > out;
        for ( const std::size_t r : rows )
            for ( const auto& iv : runs_of( mask.row( r ) ) )
                out.push_back( iv );
        std::ranges::sort( out );
        return out;
    }
};

struct free_variable
{
    mover::sort sort;
    std::vector< channel > channels;
};

using binding = std::variant< object_binding, motion_binding, tensor_value, free_variable >;

namespace eval_detail
{

struct object_term
{
    bool free = false;
    std::vector< std::size_t > rows;
    bool resolved = true;
    std::string label;
};

struct motion_term
{
    bool free = false;
    tensor_value mask;
    std::vector< std::size_t > rows;
    std::vector< channel > channels;
    bool resolved = true;
    std::string label;
};

struct pending_entry
{
    predicate_trace entry;
    tensor_value tensor;
    std::size_t group = 0;
    std::optional< note > remark;
    std::vector< std::size_t > agent_rows;
    // post: report the run end and the last true frame of the relation when it fails
    std::function< std::optional< note >( const std::vector< std::size_t >& ) > on_false;
};

struct focus_group
{
    std::optional< std::vector< std::size_t > > chosen;
};

inline std::optional< channel > parse_channel( const std::string& s )
{
    if ( s == "translate" )
        return channel::translate;
    if ( s == "rotate" )
        return channel::rotate;
    if ( s == "scale" )
        return channel::scale;
    return std::nullopt;
}

inline void flatten_and( const expr& e, std::vector< const expr* >& out )
{
    if ( e.kind == expr_kind::and_op )
    {
        for ( const auto& c : e.children )
            flatten_and( c, out );
        return;
    }
    out.push_back( &e );
}

// Channels named by type(var, ...) conjuncts of the body.
inline std::vector< channel > type_context( const expr& body, const std::string& var )
{
    std::vector< const expr* > conj;
    flatten_and( body, conj );
    std::vector< channel > out;
    for ( const expr* c : conj )
        if ( c->kind == expr_kind::call && c->name == "type" && c->children.size() == 2 && c->children[ 0 ].kind == expr_kind::var &&
             c->children[ 0 ].name == var && c->children[ 1 ].kind == expr_kind::string )
            if ( const auto ch = parse_channel( c->children[ 1 ].name ) )
                if ( std::ranges::find( out, *ch ) == out.end() )
                    out.push_back( *ch );
    return out;
}

inline std::vector< frame_interval > merged( std::vector< frame_interval > ivs )
{
    std::ranges::sort( ivs );
    std::vector< frame_interval > out;
    for ( const auto& iv : ivs )
    {
        if ( !out.empty() && iv.start <= out.back().end )
            out.back().end = std::max( out.back().end, iv.end );
        else
            out.push_back( iv );
    }
    return out;
}

class evaluator
{
    const eval_inputs& _in;
    std::size_t _rows;
    std::size_t _cols;
    std::vector< std::pair< std::string, binding > > _env;
    std::vector< pending_entry > _entries;
    std::vector< focus_group > _groups;
    std::vector< std::size_t > _group_stack;

    // -- environment ---------------------------------------------------------

    [[nodiscard]] const binding* lookup( const std::string& name ) const
    {
        for ( auto it = _env.rbegin(); it != _env.rend(); ++it )
            if ( it->first == name )
                return &it->second;
        return nullptr;
    }

    [[nodiscard]] std::vector< std::size_t > all_rows() const
    {
        std::vector< std::size_t > r( _rows );
        for ( std::size_t i = 0; i < _rows; ++i )
            r[ i ] = i;
        return r;
    }

    [[nodiscard]] tensor_value falses() const { return tensor_value::scalar( false, _rows, _cols ); }

    std::string row_label( const std::vector< std::size_t >& rows ) const
    {
        std::string s;
        for ( const std::size_t r : rows )
            s += ( s.empty() ? "" : "," ) + _in.scene[ r ].id;
        return s;
    }

    // -- terms ----------------------------------------------------------------

    object_term eval_object_term( const expr& e )
    {
        object_term t;
        if ( e.kind == expr_kind::var )
        {
            const binding* b = lookup( e.name );
            if ( std::holds_alternative< free_variable >( *b ) )
            {
                t.free = true;
                t.rows = all_rows();
                t.label = e.name;
            }
            else if ( const auto* ob = std::get_if< object_binding >( b ) )
            {
                t.rows = ob->rows;
                t.resolved = ob->resolved && !ob->rows.empty();
                t.label = t.resolved ? row_label( ob->rows ) : e.name + " (unresolved)";
            }
            return t;
        }
        // inline quantifier
        const auto q = eval_quantifier( e );
        t.resolved = q.object && q.object->resolved && !q.object->rows.empty();
        if ( t.resolved )
            t.rows = q.object->rows;
        t.label = t.resolved ? row_label( t.rows ) : to_source( e ) + " (unresolved)";
        return t;
    }

    motion_term eval_motion_term( const expr& e )
    {
        motion_term t;
        t.label = e.name;
        if ( e.kind == expr_kind::var )
        {
            const binding* b = lookup( e.name );
            if ( const auto* fv = std::get_if< free_variable >( b ) )
            {
                t.free = true;
                t.mask = tensor_value::scalar( true, _rows, _cols );
                t.rows = all_rows();
                t.channels = fv->channels;
                return t;
            }
            if ( const auto* mb = std::get_if< motion_binding >( b ) )
            {
                t.mask = mb->mask;
                t.rows = mb->rows;
                t.channels = mb->channels;
                t.resolved = mb->resolved;
                return t;
            }
        }
        const auto q = eval_quantifier( e );
        t.label = to_source( e );
        if ( q.motion )
        {
            t.mask = q.motion->mask;
            t.rows = q.motion->rows;
            t.channels = q.motion->channels;
            t.resolved = q.motion->resolved;
        }
        else
        {
            t.mask = falses();
            t.resolved = false;
        }
        return t;
    }

    [[nodiscard]] std::vector< channel > channels_or( const motion_term& m, std::vector< channel > fallback ) const
    {
        return m.channels.empty() ? fallback : m.channels;
    }

    // Runs of a motion term on one row: bound motions use their own mask; a free
    // variable stands for each channel segment of the row.
    [[nodiscard]] std::vector< frame_interval > runs_for( const motion_term& m, std::size_t row ) const
    {
        if ( !m.free )
            return runs_of( m.mask.row( row ) );
        std::vector< frame_interval > out;
        for ( const channel c : channels_or( m, { all_channels.begin(), all_channels.end() } ) )
            for ( const auto& s : _in.channels.segments_of( row, c ) )
                out.push_back( { s.start_frame, s.end_frame } );
        std::ranges::sort( out );
        return out;
    }

    [[nodiscard]] std::vector< frame_interval > runs_for( const motion_term& m ) const
    {
        std::vector< frame_interval > out;
        for ( const std::size_t r : m.rows )
            for ( const auto& iv : runs_for( m, r ) )
                out.push_back( iv );
        std::ranges::sort( out );
        return out;
    }

    // -- predicates -------------------------------------------------------------

    tensor_value segments_where( const std::vector< channel >& chans,
                                 const std::function< bool( const motion_segment& ) >& accept ) const
    {
        tensor_value t = tensor_value::cells( _rows, _cols );
        for ( std::size_t r = 0; r < _rows; ++r )
            for ( const channel c : chans )
                for ( const auto& s : _in.channels.segments_of( r, c ) )
                    if ( accept( s ) )
                        for ( std::size_t f = s.start_frame; f <= s.end_frame; ++f )
                            t.set( r, f - 1, true );
        return t;
    }

    tensor_value cells_where( const std::function< bool( std::size_t, std::size_t ) >& pred ) const
    {
        tensor_value t = tensor_value::cells( _rows, _cols );
        for ( std::size_t r = 0; r < _rows; ++r )
            for ( std::size_t f = 1; f <= _cols; ++f )
                if ( pred( r, f ) )
                    t.set( r, f - 1, true );
        return t;
    }

    static std::vector< channel > intersect( const std::vector< channel >& a, std::initializer_list< channel > b )
    {
        std::vector< channel > out;
        for ( const channel c : a )
            if ( std::find( b.begin(), b.end(), c ) != b.end() )
                out.push_back( c );
        return out;
    }

    tensor_value eval_type( const std::string& value ) const
    {
        const auto ch = parse_channel( value );
        if ( !ch )
            return falses();
        return cells_where( [ & ]( std::size_t r, std::size_t f ) { return _in.channels.is_active( r, *ch, f ); } );
    }

    tensor_value eval_direction( const motion_term& m, const expr& value ) const
    {
        const auto& mc = _in.channels;
        if ( value.kind == expr_kind::string )
        {
            const bool cw = value.name == "clockwise";
            return cells_where( [ & ]( std::size_t r, std::size_t f ) {
                if ( !mc.is_active( r, channel::rotate, f ) )
                    return false;
                const double d = mc.at( r, f ).d_rotate;
                return cw ? d > 0.0 : d < 0.0;
            } );
        }
        const vec2 target{ value.children[ 0 ].number, value.children[ 1 ].number };
        const auto chans = intersect( channels_or( m, { channel::translate, channel::scale } ), { channel::translate, channel::scale } );
        const bool use_t = std::ranges::find( chans, channel::translate ) != chans.end();
        const bool use_s = std::ranges::find( chans, channel::scale ) != chans.end();
        const double cos_tol = std::cos( deg_to_rad( _in.tol.dir_tol_deg ) );
        const double tnorm = target.norm();
        return cells_where( [ & ]( std::size_t r, std::size_t f ) {
            const frame_attributes& fa = mc.at( r, f );
            if ( use_t && tnorm > 0.0 && mc.is_active( r, channel::translate, f ) )
            {
                const vec2 d{ fa.d_translate.x, -fa.d_translate.y }; // logical y-up
                const double dn = d.norm();
                if ( dn > 0.0 && ( d.x * target.x + d.y * target.y ) / ( dn * tnorm ) >= cos_tol - 1e-12 )
                    return true;
            }
            if ( use_s && mc.is_active( r, channel::scale, f ) )
            {
                auto axis_ok = [ & ]( double want, double ratio ) {
                    if ( want == 0.0 )
                        return true;
                    return want > 0.0 ? ratio > 1.0 : ratio < 1.0;
                };
                if ( axis_ok( target.x, fa.d_scale.x ) && axis_ok( target.y, fa.d_scale.y ) )
                    return true;
            }
            return false;
        } );
    }

    tensor_value eval_magnitude( const motion_term& m, const expr& value ) const
    {
        const auto& tol = _in.tol;
        auto close = [ & ]( double got, double want, double floor ) {
            return std::abs( got - want ) <= std::max( tol.mag_rel * std::abs( want ), floor ) + 1e-9;
        };
        if ( value.kind == expr_kind::list )
        {
            const double tx = value.children[ 0 ].number, ty = value.children[ 1 ].number;
            const auto chans = intersect( channels_or( m, { channel::scale } ), { channel::scale } );
            return segments_where( chans, [ & ]( const motion_segment& s ) {
                return ( tx == 0.0 || close( s.net_ratio.x, tx, tol.mag_abs_ratio ) ) &&
                       ( ty == 0.0 || close( s.net_ratio.y, ty, tol.mag_abs_ratio ) );
            } );
        }
        const double target = std::abs( value.number );
        const auto chans = channels_or( m, { channel::translate, channel::rotate } );
        return segments_where( chans, [ & ]( const motion_segment& s ) {
            switch ( s.channel )
            {
            case channel::translate: return close( s.net_magnitude, target, tol.mag_abs_px );
            case channel::rotate: return close( std::abs( s.net_magnitude ), target, tol.mag_abs_deg );
            case channel::scale:
                return close( s.net_ratio.x, target, tol.mag_abs_ratio ) && close( s.net_ratio.y, target, tol.mag_abs_ratio );
            }
            return false;
        } );
    }

    // Percent coordinates are points of the object's own box, carried by its current matrix.
    [[nodiscard]] vec2 resolve_origin( const expr& value, std::size_t row, std::size_t frame ) const
    {
        auto fraction = [ & ]( const expr& c, bool& is_percent ) {
            is_percent = c.kind == expr_kind::string;
            return is_percent ? std::stod( c.name.substr( 0, c.name.size() - 1 ) ) / 100.0 : c.number;
        };
        bool px = false, py = false;
        const double vx = fraction( value.children[ 0 ], px );
        const double vy = fraction( value.children[ 1 ], py );
        const local_box& box = _in.scene[ row ].bbox_local;
        const vec2 local = box.at_fraction( px ? vx : 0.0, py ? vy : 0.0 );
        const vec2 world = _in.trace.at( row, frame ).apply( local );
        return { px ? world.x : vx, py ? world.y : vy };
    }

    tensor_value eval_origin( const motion_term&, const expr& value ) const
    {
        const auto& mc = _in.channels;
        return cells_where( [ & ]( std::size_t r, std::size_t f ) {
            const auto& fix = mc.at( r, f ).origin;
            if ( !fix || ( fix->x_free && fix->y_free ) )
                return false;
            const vec2 want = resolve_origin( value, r, f );
            const double dx = fix->x_free ? 0.0 : fix->point.x - want.x;
            const double dy = fix->y_free ? 0.0 : fix->point.y - want.y;
            return std::hypot( dx, dy ) <= _in.tol.origin_tol_px;
        } );
    }

    tensor_value eval_duration( const motion_term& m, double seconds ) const
    {
        const double fps = _in.channels.fps;
        const double allowed = std::max( 1.0 / fps, _in.tol.duration_rel * std::abs( seconds ) ) + 1e-9;
        return segments_where( channels_or( m, { all_channels.begin(), all_channels.end() } ), [ & ]( const motion_segment& s ) {
            return std::abs( static_cast< double >( s.length() ) / fps - seconds ) <= allowed;
        } );
    }

    tensor_value eval_agent( const motion_term&, const object_term& o ) const
    {
        tensor_value t = tensor_value::cells( _rows, _cols );
        if ( !o.resolved )
            return t;
        for ( const std::size_t r : o.rows )
            for ( std::size_t f = 1; f <= _cols; ++f )
                for ( const channel c : all_channels )
                    if ( _in.channels.is_active( r, c, f ) )
                    {
                        t.set( r, f - 1, true );
                        break;
                    }
        return t;
    }

    // Spatial mask per frame (or per cell when a side is the quantified variable).
    tensor_value eval_spatial( const std::function< bool( const bbox&, const bbox& ) >& rel, const object_term& a,
                               const object_term& b ) const
    {
        if ( !a.resolved || !b.resolved )
            return falses();
        auto holds = [ & ]( std::size_t ra, std::size_t rb, std::size_t f ) {
            return rel( _in.channels.at( ra, f ).bbox_world, _in.channels.at( rb, f ).bbox_world );
        };
        // every pair of set members must satisfy the relation
        auto pairs_hold = [ & ]( const std::vector< std::size_t >& as, const std::vector< std::size_t >& bs, std::size_t f ) {
            for ( const std::size_t ra : as )
                for ( const std::size_t rb : bs )
                    if ( ( as.size() == 1 && bs.size() == 1 ) || ra != rb )
                        if ( !holds( ra, rb, f ) )
                            return false;
            return true;
        };
        if ( !a.free && !b.free )
        {
            std::vector< bool > bits( _cols );
            for ( std::size_t f = 1; f <= _cols; ++f )
                bits[ f - 1 ] = pairs_hold( a.rows, b.rows, f );
            return tensor_value::per_frame( std::move( bits ), _rows );
        }
        return cells_where( [ & ]( std::size_t r, std::size_t f ) {
            const std::vector< std::size_t > as = a.free ? std::vector< std::size_t >{ r } : a.rows;
            const std::vector< std::size_t > bs = b.free ? std::vector< std::size_t >{ r } : b.rows;
            return pairs_hold( as, bs, f );
        } );
    }

    // -- recording ----------------------------------------------------------------

    std::size_t reserve_entry( const expr& call )
    {
        pending_entry p;
        p.entry.name = call.name;
        p.group = _group_stack.back();
        _entries.push_back( std::move( p ) );
        return _entries.size() - 1;
    }

    std::string literal_label( const expr& e ) const { return to_source( e ); }

    tensor_value eval_call( const expr& e )
    {
        const std::size_t slot = reserve_entry( e );
        std::vector< std::string > args;
        std::optional< note > remark;
        tensor_value result = falses();
        const std::string& n = e.name;
        const auto& a = e.children;

        auto unresolved_note = [ & ]( const std::string& label ) {
            remark = note{ note_code::unresolved_object, "object " + label + " did not resolve" };
        };

        try
        {
            if ( n == "shape" || n == "color" || n == "id" )
            {
                const object_term o = eval_object_term( a[ 0 ] );
                args = { o.label, literal_label( a[ 1 ] ) };
                if ( !o.resolved )
                    unresolved_note( o.label );
                else
                {
                    result = eval_object_pred( n, o.rows, a[ 1 ].name, _in.scene, _cols, _in.tol.color_tol );
                    if ( n == "shape" && !parse_shape( to_lower( a[ 1 ].name ) ) )
                        remark = note{ note_code::unknown_shape_name, "'" + a[ 1 ].name + "' is not a shape class" };
                }
            }
            else if ( n == "agent" )
            {
                const motion_term m = eval_motion_term( a[ 0 ] );
                const object_term o = eval_object_term( a[ 1 ] );
                args = { m.label, o.label };
                if ( !o.resolved )
                    unresolved_note( o.label );
                result = eval_agent( m, o ) && m.mask;
                if ( o.resolved )
                    _entries[ slot ].agent_rows = o.rows;
            }
            else if ( n == "type" || n == "direction" || n == "magnitude" || n == "origin" || n == "duration" )
            {
                const motion_term m = eval_motion_term( a[ 0 ] );
                args = { m.label, literal_label( a[ 1 ] ) };
                tensor_value t;
                if ( n == "type" )
                    t = eval_type( a[ 1 ].name );
                else if ( n == "direction" )
                    t = eval_direction( m, a[ 1 ] );
                else if ( n == "magnitude" )
                    t = eval_magnitude( m, a[ 1 ] );
                else if ( n == "origin" )
                {
                    t = eval_origin( m, a[ 1 ] );
                    const auto chans = channels_or( m, { channel::rotate, channel::scale } );
                    for ( const std::size_t r : m.rows )
                        for ( const channel c : chans )
                            for ( const auto& s : _in.channels.segments_of( r, c ) )
                                if ( c != channel::translate && s.origin_spread > _in.tol.origin_unstable_px && m.mask.row_any( r ) )
                                    remark = note{ note_code::origin_unstable, "origin of " + _in.scene[ r ].id + " moves by " +
                                                                                   fixed6( s.origin_spread ) + " px over frames " +
                                                                                   std::to_string( s.start_frame ) + "-" +
                                                                                   std::to_string( s.end_frame ) };
                }
                else
                    t = eval_duration( m, a[ 1 ].number );
                if ( !m.resolved )
                    remark = note{ note_code::no_valid_runs, "motion " + m.label + " has no valid runs" };
                result = t && m.mask;
            }
            else if ( n == "post" )
                result = eval_post( e, slot, args, remark );
            else if ( n.starts_with( "t_" ) )
                result = eval_temporal( e, args, remark, slot );
            else if ( n.starts_with( "s_" ) )
            {
                const object_term oa = eval_object_term( a[ 0 ] );
                const object_term ob = eval_object_term( a[ 1 ] );
                args = { oa.label, ob.label };
                if ( !oa.resolved )
                    unresolved_note( oa.label );
                else if ( !ob.resolved )
                    unresolved_note( ob.label );
                const double tau = _in.tol.tau_space;
                if ( n == "s_rel" )
                {
                    args.push_back( literal_label( a[ 2 ] ) );
                    args.push_back( literal_label( a[ 3 ] ) );
                    const rect_relation want{ *parse_allen( a[ 2 ].name ), *parse_allen( a[ 3 ].name ) };
                    result = eval_spatial( [ & ]( const bbox& x, const bbox& y ) { return classify_rects( x, y, tau ) == want; }, oa, ob );
                }
                else
                {
                    const relation_mask& mask = _in.masks.find( n.substr( 2 ) )->second;
                    result = eval_spatial( [ & ]( const bbox& x, const bbox& y ) { return mask.matches( x, y, tau ); }, oa, ob );
                }
            }
        }
        catch ( const error& err )
        {
            if ( err.kind() != error_kind::unknown_color_name )
                throw;
            remark = note{ note_code::unknown_color_name, err.what() };
            result = falses();
        }

        auto& p = _entries[ slot ];
        p.entry.args = std::move( args );
        p.tensor = result;
        if ( remark )
            p.remark = remark;
        return result;
    }

    tensor_value eval_post( const expr& e, std::size_t slot, std::vector< std::string >& args, std::optional< note >& remark )
    {
        const motion_term m = eval_motion_term( e.children[ 0 ] );
        const tensor_value rel = eval_formula( e.children[ 1 ] );
        args = { m.label, to_source( e.children[ 1 ] ) };
        if ( !m.resolved )
            remark = note{ note_code::no_valid_runs, "motion " + m.label + " has no valid runs" };
        tensor_value t = tensor_value::cells( _rows, _cols );
        std::size_t total_runs = 0;
        for ( std::size_t r = 0; r < _rows; ++r )
        {
            if ( !m.mask.row_any( r ) )
                continue;
            for ( const auto& run : runs_for( m, r ) )
            {
                ++total_runs;
                if ( rel.at( r, run.end - 1 ) )
                    for ( std::size_t f = run.start; f <= run.end; ++f )
                        t.set( r, f - 1, true );
            }
        }
        t = t && m.mask;
        const std::string rel_name = e.children[ 1 ].kind == expr_kind::call ? e.children[ 1 ].name : "relation";
        _entries[ slot ].on_false = [ this, m, rel, rel_name ]( const std::vector< std::size_t >& focus ) -> std::optional< note > {
            for ( const std::size_t r : focus )
            {
                if ( r >= _rows || !m.mask.row_any( r ) )
                    continue;
                const auto runs = runs_for( m, r );
                if ( runs.empty() )
                    continue;
                const std::size_t end = runs.back().end;
                std::optional< std::size_t > last_true;
                for ( std::size_t f = _cols; f >= 1; --f )
                    if ( rel.at( r, f - 1 ) )
                    {
                        last_true = f;
                        break;
                    }
                std::string text = "motion " + m.label + " of " + _in.scene[ r ].id + " ends at frame " + std::to_string( end ) + "; " +
                                   rel_name;
                text += last_true ? " last true at frame " + std::to_string( *last_true ) : std::string{ " never true" };
                return note{ note_code::post_not_satisfied, text };
            }
            return std::nullopt;
        };
        if ( !remark && total_runs > 1 && t.any() )
            remark = note{ note_code::post_per_run, "checked at the end of each of " + std::to_string( total_runs ) + " runs" };
        return t;
    }

    tensor_value eval_temporal( const expr& e, std::vector< std::string >& args, std::optional< note >& remark, std::size_t slot )
    {
        const motion_term ma = eval_motion_term( e.children[ 0 ] );
        const motion_term mb = eval_motion_term( e.children[ 1 ] );
        args = { ma.label, mb.label };
        relation_mask mask;
        const std::string rel = e.name.substr( 2 );
        if ( e.name == "t_rel" )
        {
            args.push_back( literal_label( e.children[ 2 ] ) );
            mask = temporal_mask( "rel", { *parse_allen( e.children[ 2 ].name ) } );
        }
        else if ( const auto r = parse_allen( rel ) )
            mask = temporal_mask( rel, { *r } );
        else
            mask = _in.masks.find( rel )->second;

        auto empty_note = [ & ]( const motion_term& m ) {
            remark = note{ note_code::no_valid_runs, "operand " + m.label + " has no valid runs" };
        };

        if ( !ma.free && !mb.free )
        {
            const auto ra = ma.resolved ? runs_for( ma ) : std::vector< frame_interval >{};
            const auto rb = mb.resolved ? runs_for( mb ) : std::vector< frame_interval >{};
            if ( ra.empty() )
                empty_note( ma );
            else if ( rb.empty() )
                empty_note( mb );
            const temporal_result res = eval_mask_temporal( mask, ra, rb );
            if ( res.witness )
                _entries[ slot ].entry.true_ranges = merged( { res.witness->a, res.witness->b } );
            return tensor_value::scalar( res.value, _rows, _cols );
        }
        tensor_value t = tensor_value::cells( _rows, _cols );
        for ( std::size_t r = 0; r < _rows; ++r )
        {
            const auto ra = ma.free ? runs_for( ma, r ) : runs_for( ma );
            const auto rb = mb.free ? runs_for( mb, r ) : runs_for( mb );
            if ( eval_mask_temporal( mask, ra, rb ).value )
                for ( std::size_t c = 0; c < _cols; ++c )
                    t.set( r, c, true );
        }
        return t;
    }

    // -- formulas -------------------------------------------------------------------

    tensor_value eval_formula( const expr& e )
    {
        switch ( e.kind )
        {
        case expr_kind::and_op: {
            tensor_value l = eval_formula( e.children[ 0 ] );
            tensor_value r = eval_formula( e.children[ 1 ] );
            return l && r;
        }
        case expr_kind::or_op: {
            tensor_value l = eval_formula( e.children[ 0 ] );
            tensor_value r = eval_formula( e.children[ 1 ] );
            return l || r;
        }
        case expr_kind::not_op: return !eval_formula( e.children[ 0 ] );
        case expr_kind::call: return eval_call( e );
        case expr_kind::var: {
            if ( const auto* t = std::get_if< tensor_value >( lookup( e.name ) ) )
                return *t;
            return falses();
        }
        case expr_kind::quantifier: {
            const auto q = eval_quantifier( e );
            return tensor_value::scalar( q.value, _rows, _cols );
        }
        default: return falses();
        }
    }

public:
    struct quantifier_result
    {
        bool value = false;
        tensor_value body;
        std::optional< object_binding > object;
        std::optional< motion_binding > motion;
        std::optional< note > remark;
    };

    quantifier_result eval_quantifier( const expr& e )
    {
        const std::size_t group = _groups.size();
        _groups.emplace_back();
        _group_stack.push_back( group );
        free_variable fv{ e.sort, e.sort == sort::motion ? type_context( e.children.front(), e.name ) : std::vector< channel >{} };
        _env.emplace_back( e.name, fv );
        quantifier_result q;
        q.body = eval_formula( e.children.front() );
        _env.pop_back();
        _group_stack.pop_back();

        std::vector< std::size_t > hits;
        for ( std::size_t r = 0; r < _rows; ++r )
            if ( q.body.row_any( r ) )
                hits.push_back( r );

        switch ( e.quantifier )
        {
        case quantifier_kind::exists:
            q.value = !hits.empty();
            if ( q.value )
                _groups[ group ].chosen = std::vector< std::size_t >{ hits.front() };
            break;
        case quantifier_kind::iota:
        case quantifier_kind::all: {
            const bool one = e.quantifier == quantifier_kind::iota;
            std::vector< std::size_t > rows = hits;
            if ( one && !rows.empty() )
                rows.resize( 1 );
            q.value = !rows.empty();
            if ( q.value )
                _groups[ group ].chosen = rows;
            else
                q.remark = one ? note{ note_code::iota_empty, std::string{ "no " } + ( e.sort == sort::object ? "object" : "motion" ) +
                                                                  " satisfies the description" }
                               : note{ note_code::empty_set, "no row satisfies the description" };
            if ( e.sort == sort::object )
                q.object = object_binding{ rows, q.value };
            else
            {
                motion_binding mb;
                mb.mask = tensor_value::cells( _rows, _cols );
                for ( const std::size_t r : rows )
                    for ( std::size_t c = 0; c < _cols; ++c )
                        if ( q.body.at( r, c ) )
                            mb.mask.set( r, c, true );
                mb.rows = rows;
                mb.channels = fv.channels;
                mb.resolved = q.value;
                q.motion = std::move( mb );
            }
            break;
        }
        }
        return q;
    }

    evaluator( const eval_inputs& in )
        : _in( in ), _rows( in.scene.size() ), _cols( in.trace.num_frames )
    {
    }

    verdict run_statement( const statement& st )
    {
        _entries.clear();
        _groups.assign( 1, {} );
        _group_stack.assign( 1, 0 );

        verdict v;
        v.source = st.source.empty() ? to_source( st ) : st.source;
        v.binding = st.binding;
        v.span = st.span;

        std::optional< binding > bound;
        if ( st.body.kind == expr_kind::quantifier )
        {
            auto q = eval_quantifier( st.body );
            v.value = q.value;
            v.remark = q.remark;
            if ( q.object )
                bound = *q.object;
            else if ( q.motion )
                bound = *q.motion;
            else
                bound = tensor_value::scalar( q.value, _rows, _cols );
        }
        else
        {
            tensor_value t = eval_formula( st.body );
            v.value = t.any();
            bound = t;
        }
        if ( st.binding )
            _env.emplace_back( *st.binding, *bound );

        // focus rows per group: chosen binding, else the agents named, else every row
        std::vector< std::vector< std::size_t > > focus( _groups.size() );
        for ( std::size_t g = 0; g < _groups.size(); ++g )
        {
            if ( _groups[ g ].chosen )
            {
                focus[ g ] = *_groups[ g ].chosen;
                continue;
            }
            std::vector< std::size_t > agents;
            for ( const auto& p : _entries )
                if ( p.group == g )
                    for ( const std::size_t r : p.agent_rows )
                        if ( std::ranges::find( agents, r ) == agents.end() )
                            agents.push_back( r );
            std::ranges::sort( agents );
            focus[ g ] = agents.empty() ? all_rows() : agents;
        }

        for ( auto& p : _entries )
        {
            predicate_trace tr = std::move( p.entry );
            const auto& rows = focus[ p.group ];
            if ( p.tensor.kind() == tensor_kind::scalar )
            {
                tr.value = p.tensor.at( 0, 0 ) && _rows > 0;
                if ( tr.value && tr.true_ranges.empty() && _cols > 0 )
                    tr.true_ranges = { { 1, _cols } };
                if ( !tr.value )
                    tr.true_ranges.clear();
            }
            else
            {
                const auto bits = p.tensor.kind() == tensor_kind::per_frame ? p.tensor.row( 0 ) : p.tensor.column_any( rows );
                tr.true_ranges = runs_of( bits );
                tr.value = !tr.true_ranges.empty();
            }
            tr.remark = p.remark;
            if ( !tr.value && p.on_false && ( !tr.remark || tr.remark->code == note_code::post_per_run ) )
                if ( auto n = p.on_false( rows ) )
                    tr.remark = n;
            v.predicates.push_back( std::move( tr ) );
        }
        return v;
    }
};

} // namespace eval_detail

inline evaluation run_program( const program& prog, const eval_inputs& in )
{
    evaluation out;
    out.warnings = prog.warnings;
    eval_detail::evaluator ev{ in };
    for ( const auto& st : prog.statements )
    {
        out.verdicts.push_back( ev.run_statement( st ) );
        if ( !st.binding && !out.verdicts.back().value )
            out.overall = false;
    }
    return out;
}

} // namespace mover
