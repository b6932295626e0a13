#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace mover
{

template < typename T >
struct closed_interval
{
    T start{};
    T end{};

    friend bool operator==( const closed_interval&, const closed_interval& ) = default;
    friend auto operator<=>( const closed_interval&, const closed_interval& ) = default;
};

// Static interval tree: intervals sorted by start, laid out as an implicit balanced
// BST (midpoint = subtree root), each subtree annotated with its largest end.
// Queries return ids of the stored intervals in (start, end, id) order.
template < typename T >
class interval_index
{
    struct entry
    {
        closed_interval< T > iv;
        std::size_t id;
    };

    std::vector< entry > _sorted;
    std::vector< T > _max_end; // indexed by subtree root (midpoint)

    T build( std::size_t lo, std::size_t hi )
    {
        const std::size_t mid = lo + ( hi - lo ) / 2;
        T m = _sorted[ mid ].iv.end;
        if ( lo < mid )
            m = std::max( m, build( lo, mid ) );
        if ( mid + 1 < hi )
            m = std::max( m, build( mid + 1, hi ) );
        _max_end[ mid ] = m;
        return m;
    }

    void query( std::size_t lo, std::size_t hi, T qs, T qe, std::vector< std::size_t >& out ) const
    {
        if ( lo >= hi )
            return;
        const std::size_t mid = lo + ( hi - lo ) / 2;
        if ( _max_end[ mid ] < qs )
            return;
        query( lo, mid, qs, qe, out );
        const auto& e = _sorted[ mid ];
        if ( e.iv.start <= qe && qs <= e.iv.end )
            out.push_back( e.id );
        if ( e.iv.start <= qe )
            query( mid + 1, hi, qs, qe, out );
    }

public:
    interval_index() = default;

    explicit interval_index( std::span< const closed_interval< T > > intervals )
    {
        _sorted.reserve( intervals.size() );
        for ( std::size_t i = 0; i < intervals.size(); ++i )
            _sorted.push_back( { intervals[ i ], i } );
        std::ranges::sort( _sorted, []( const entry& a, const entry& b ) {
            if ( a.iv != b.iv )
                return a.iv < b.iv;
            return a.id < b.id;
        } );
        _max_end.resize( _sorted.size() );
        if ( !_sorted.empty() )
            build( 0, _sorted.size() );
    }

    [[nodiscard]] std::size_t size() const { return _sorted.size(); }

    // Ids of intervals containing `point`.
    [[nodiscard]] std::vector< std::size_t > stab( T point ) const { return overlapping( { point, point } ); }

    // Ids of intervals sharing at least one point with `q`.
    [[nodiscard]] std::vector< std::size_t > overlapping( closed_interval< T > q ) const
    {
        std::vector< std::size_t > out;
        query( 0, _sorted.size(), q.start, q.end, out );
        return out;
    }
};

} // namespace mover
