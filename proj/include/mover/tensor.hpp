#pragma once

#include "algebra.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

namespace mover
{

enum class tensor_kind
{
    scalar,
    per_frame,
    per_cell,
};

// Object x frame boolean matrix. Scalars and per-frame vectors broadcast over rows.
class tensor_value
{
    tensor_kind _kind = tensor_kind::scalar;
    std::size_t _rows = 0;
    std::size_t _cols = 0;
    std::vector< bool > _bits{ false };

    [[nodiscard]] std::size_t index( std::size_t row, std::size_t col ) const
    {
        switch ( _kind )
        {
        case tensor_kind::scalar: return 0;
        case tensor_kind::per_frame: return col;
        case tensor_kind::per_cell: return row * _cols + col;
        }
        return 0;
    }

public:
    tensor_value() = default;

    static tensor_value scalar( bool v, std::size_t rows, std::size_t cols )
    {
        tensor_value t;
        t._rows = rows;
        t._cols = cols;
        t._bits = { v };
        return t;
    }

    static tensor_value per_frame( std::vector< bool > bits, std::size_t rows )
    {
        tensor_value t;
        t._kind = tensor_kind::per_frame;
        t._rows = rows;
        t._cols = bits.size();
        t._bits = std::move( bits );
        return t;
    }

    static tensor_value cells( std::size_t rows, std::size_t cols, bool fill = false )
    {
        tensor_value t;
        t._kind = tensor_kind::per_cell;
        t._rows = rows;
        t._cols = cols;
        t._bits.assign( rows * cols, fill );
        return t;
    }

    [[nodiscard]] tensor_kind kind() const { return _kind; }
    [[nodiscard]] std::size_t rows() const { return _rows; }
    [[nodiscard]] std::size_t cols() const { return _cols; }

    // Column index is 0-based here; frame f lives at column f - 1.
    [[nodiscard]] bool at( std::size_t row, std::size_t col ) const { return _bits[ index( row, col ) ]; }

    void set( std::size_t row, std::size_t col, bool v )
    {
        assert( _kind == tensor_kind::per_cell );
        _bits[ row * _cols + col ] = v;
    }

    [[nodiscard]] tensor_value expanded() const
    {
        tensor_value out = cells( _rows, _cols );
        for ( std::size_t r = 0; r < _rows; ++r )
            for ( std::size_t c = 0; c < _cols; ++c )
                out._bits[ r * _cols + c ] = at( r, c );
        return out;
    }

    [[nodiscard]] std::vector< bool > row( std::size_t r ) const
    {
        std::vector< bool > out( _cols );
        for ( std::size_t c = 0; c < _cols; ++c )
            out[ c ] = at( r, c );
        return out;
    }

    [[nodiscard]] bool row_any( std::size_t r ) const
    {
        for ( std::size_t c = 0; c < _cols; ++c )
            if ( at( r, c ) )
                return true;
        return false;
    }

    [[nodiscard]] bool any() const
    {
        if ( _rows == 0 || _cols == 0 )
            return false;
        return std::ranges::find( _bits, true ) != _bits.end();
    }

    // Frames (0-based columns) true in at least one of `rows`.
    [[nodiscard]] std::vector< bool > column_any( const std::vector< std::size_t >& rows ) const
    {
        std::vector< bool > out( _cols, false );
        for ( const std::size_t r : rows )
            for ( std::size_t c = 0; c < _cols; ++c )
                out[ c ] = out[ c ] || at( r, c );
        return out;
    }

    template < typename Op >
    static tensor_value combine( const tensor_value& a, const tensor_value& b, Op op )
    {
        assert( a._rows == b._rows && a._cols == b._cols );
        const tensor_kind k = std::max( a._kind, b._kind );
        tensor_value out;
        out._kind = k;
        out._rows = a._rows;
        out._cols = a._cols;
        if ( k == tensor_kind::scalar )
            out._bits = { op( a._bits[ 0 ], b._bits[ 0 ] ) };
        else if ( k == tensor_kind::per_frame )
        {
            out._bits.resize( a._cols );
            for ( std::size_t c = 0; c < a._cols; ++c )
                out._bits[ c ] = op( a.at( 0, c ), b.at( 0, c ) );
        }
        else
        {
            out._bits.resize( a._rows * a._cols );
            for ( std::size_t r = 0; r < a._rows; ++r )
                for ( std::size_t c = 0; c < a._cols; ++c )
                    out._bits[ r * a._cols + c ] = op( a.at( r, c ), b.at( r, c ) );
        }
        return out;
    }

    friend tensor_value operator&&( const tensor_value& a, const tensor_value& b )
    {
        return combine( a, b, []( bool x, bool y ) { return x && y; } );
    }
    friend tensor_value operator||( const tensor_value& a, const tensor_value& b )
    {
        return combine( a, b, []( bool x, bool y ) { return x || y; } );
    }
    friend tensor_value operator!( const tensor_value& a )
    {
        tensor_value out = a;
        out._bits.flip();
        return out;
    }

    // Same value at every cell, regardless of representation.
    friend bool equivalent( const tensor_value& a, const tensor_value& b )
    {
        if ( a._rows != b._rows || a._cols != b._cols )
            return false;
        for ( std::size_t r = 0; r < a._rows; ++r )
            for ( std::size_t c = 0; c < a._cols; ++c )
                if ( a.at( r, c ) != b.at( r, c ) )
                    return false;
        return true;
    }
};

// Maximal true runs of a 0-based bit vector, as 1-based frame intervals.
inline std::vector< frame_interval > runs_of( const std::vector< bool >& bits )
{
    std::vector< frame_interval > out;
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
        out.push_back( { i + 1, j } );
        i = j;
    }
    return out;
}

} // namespace mover
