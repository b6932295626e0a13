// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include "helpers.hpp"
#include "quantifier_oracle.hpp"

#include "mover/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace mover;
using namespace mover::testing;
namespace fs = std::filesystem;

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point t0 ) { return std::chrono::duration< double >( clock_type::now() - t0 ).count(); }

// Each relation's endpoint condition on half-open [s, e + 1), tested independently of the others.
bool holds( allen_relation r, frame_interval a, frame_interval b )
{
    const long long as = static_cast< long long >( a.start ), ae = static_cast< long long >( a.end ) + 1;
    const long long bs = static_cast< long long >( b.start ), be = static_cast< long long >( b.end ) + 1;
    switch ( r )
    {
    case allen_relation::precedes: return ae < bs;
    case allen_relation::meets: return ae == bs;
    case allen_relation::overlaps: return as < bs && bs < ae && ae < be;
    case allen_relation::starts: return as == bs && ae < be;
    case allen_relation::during: return bs < as && ae < be;
    case allen_relation::finishes: return bs < as && ae == be;
    case allen_relation::equals: return as == bs && ae == be;
    case allen_relation::finished_by: return as < bs && ae == be;
    case allen_relation::contains: return as < bs && be < ae;
    case allen_relation::started_by: return as == bs && be < ae;
    case allen_relation::overlapped_by: return bs < as && as < be && be < ae;
    case allen_relation::met_by: return be == as;
    case allen_relation::preceded_by: return be < as;
    }
    return false;
}

struct outcome
{
    bool ok;
    std::string detail;
};

outcome allen_algebra()
{
    const auto t0 = clock_type::now();
    std::mt19937_64 rng{ 1 };
    std::uniform_int_distribution< std::size_t > start( 1, 200 ), len( 0, 40 );
    std::size_t violations = 0;
    for ( int i = 0; i < 100000; ++i )
    {
        const std::size_t as = start( rng ), bs = start( rng );
        const frame_interval a{ as, as + len( rng ) }, b{ bs, bs + len( rng ) };
        const allen_relation r = allen( a, b );
        std::size_t holding = 0;
        for ( const auto c : all_allen_relations )
            holding += holds( c, a, b ) ? 1 : 0;
        if ( holding != 1 || !holds( r, a, b ) || allen( b, a ) != inverse( r ) || !holds( inverse( r ), b, a ) )
            ++violations;
    }
    const double secs = seconds_since( t0 );
    return { violations == 0 && secs < 5.0, std::to_string( violations ) + " violations in 100000 pairs, " + std::to_string( secs ) + " s" };
}

outcome aggregation_partition()
{
    const mask_table m = default_masks();
    const auto& b = m.at( "before" ).relations;
    const auto& w = m.at( "while" ).relations;
    const auto& a = m.at( "after" ).relations;
    bool ok = w.size() == 9;
    for ( const auto r : all_allen_relations )
        ok = ok && b.count( r ) + w.count( r ) + a.count( r ) == 1;
    return { ok, "|before|=" + std::to_string( b.size() ) + " |while|=" + std::to_string( w.size() ) + " |after|=" + std::to_string( a.size() ) };
}

outcome decomposition_round_trip()
{
    std::mt19937_64 rng{ 11 };
    std::uniform_real_distribution< double > ang( -179.0, 179.0 ), sc( 0.1, 5.0 ), tr( -500, 500 );
    double worst = 0.0;
    for ( int i = 0; i < 10000; ++i )
    {
        const affine m = affine::translation( { tr( rng ), tr( rng ) } ) * affine::rotation( ang( rng ) ) * affine::scaling( sc( rng ), sc( rng ) );
        worst = std::max( worst, recompose( decompose( m ) ).max_abs_diff( m ) );
    }
    double origin_err = 0.0;
    std::uniform_real_distribution< double > piv( -300, 300 ), turn( 20, 170 );
    for ( int i = 0; i < 20; ++i )
    {
        const vec2 pivot{ piv( rng ), piv( rng ) };
        const double degrees = turn( rng ) * ( i % 2 ? 1 : -1 );
        object_track t;
        t.id = "a";
        t.box = { 0, 0, 20, 20 };
        t.at = [ pivot, degrees ]( std::size_t f ) { return affine::about( pivot, affine::rotation( degrees * ramp( f, 1, 31 ) ) ); };
        const animation a = make_animation( { t }, 31 );
        const motion_channels mc = build_channels( a.scene, a.trace );
        const auto& segs = mc.segments_of( 0, channel::rotate );
        if ( segs.size() != 1 || !segs[ 0 ].mean_origin )
            return { false, "rotation segment not recovered" };
        origin_err = std::max( { origin_err, std::abs( segs[ 0 ].mean_origin->x - pivot.x ), std::abs( segs[ 0 ].mean_origin->y - pivot.y ) } );
    }
    std::ostringstream d;
    d << "max recomposition error " << worst << ", max origin error " << origin_err << " px";
    return { worst < 1e-6 && origin_err < 1e-6, d.str() };
}

outcome oracle_soundness()
{
    const auto t0 = clock_type::now();
    const auto suite = default_suite();
    std::size_t passed = 0;
    for ( const auto& s : suite )
        passed += verify( compile_program( s ).source, render_trace( s ) ).result.overall ? 1 : 0;
    const double secs = seconds_since( t0 );
    return { passed == 56 && suite.size() == 56 && secs < 30.0,
             std::to_string( passed ) + "/" + std::to_string( suite.size() ) + " in " + std::to_string( secs ) + " s" };
}

outcome targeted_failures()
{
    std::size_t cases = 0, exact = 0;
    for ( const auto& s : default_suite() )
    {
        const compiled_program prog = compile_program( s );
        for ( const auto& p : applicable_perturbations( s ) )
        {
            const failure_expectation ex = expected_failures( s, p, prog );
            const report r = verify( prog.source, render_trace( perturb( s, p ) ) );
            std::set< predicate_key > got;
            for ( std::size_t i = 0; i < r.result.verdicts.size(); ++i )
                for ( const auto& pr : r.result.verdicts[ i ].predicates )
                    if ( !pr.value )
                        got.insert( { i, pr.name } );
            bool ok = !ex.targets.empty();
            for ( const auto& t : ex.targets )
                ok = ok && got.contains( t );
            for ( const auto& g : got )
                ok = ok && ( ex.targets.contains( g ) || ex.cone.contains( g ) );
            exact += ok ? 1 : 0;
            ++cases;
        }
    }
    return { cases >= 200 && exact == cases, std::to_string( exact ) + "/" + std::to_string( cases ) + " cases flip exactly their targets" };
}

outcome post_semantics()
{
    object_track a;
    a.id = "a";
    a.color = "orange";
    a.box = { 0, 100, 20, 20 };
    a.at = []( std::size_t f ) { return affine::translation( { 2.0 * static_cast< double >( f - 1 ), 0 } ); };
    object_track e;
    e.id = "E";
    e.shape = shape_class::letter;
    e.box = { 178, 90, 30, 40 };
    const report r = run( R"(a = iota(Object, lambda o: color(o, "orange"))
E = iota(Object, lambda o: shape(o, "letter"))
exists(Motion, lambda m: type(m, "translate") and post(m, s_left_border(a, E)))
)",
                          make_animation( { a, e }, 120 ) );
    const verdict& v = r.result.verdicts[ 2 ];
    const auto* post = find_predicate( v, "post" );
    const auto* border = find_predicate( v, "s_left_border" );
    if ( !post || !border )
        return { false, "post or s_left_border missing from the report" };
    bool covers_80 = false;
    for ( const auto& range : border->true_ranges )
        covers_80 = covers_80 || ( range.start <= 80 && 80 <= range.end );
    return { !v.value && !post->value && border->value && covers_80,
             std::string{ "post=" } + ( post->value ? "true" : "false" ) + ", s_left_border=" + ( border->value ? "true" : "false" ) +
                 " on " + format_ranges( border->true_ranges ) };
}

outcome verify_determinism()
{
    const fs::path dir = fs::temp_directory_path() / "mover_acceptance_determinism";
    fs::remove_all( dir );
    fs::create_directories( dir );
    const scene_graph_spec s = default_suite()[ 40 ];
    std::ofstream( dir / "trace.json" ) << serialize_trace( render_trace( s ) );
    std::ofstream( dir / "prog.mover" ) << compile_program( s ).source;
    const std::string trace = ( dir / "trace.json" ).string(), prog = ( dir / "prog.mover" ).string();
    const char* argv[] = { "mover", "verify", "--trace", trace.c_str(), "--program", prog.c_str() };
    std::ostringstream first, second, err;
    const int c1 = run_cli( 6, argv, first, err );
    const int c2 = run_cli( 6, argv, second, err );
    fs::remove_all( dir );
    return { c1 == c2 && !first.str().empty() && first.str() == second.str(),
             std::to_string( first.str().size() ) + " bytes, exit codes " + std::to_string( c1 ) + "/" + std::to_string( c2 ) };
}

outcome quantifier_equivalence()
{
    std::mt19937_64 rng{ 2024 };
    for ( int trial = 0; trial < 600; ++trial )
        if ( const auto mismatch = quantifier_trial( rng, trial ) )
            return { false, "disagreement on:\n" + *mismatch };
    return { true, "600 random programs agree with row enumeration" };
}

outcome refine_mock()
{
    const std::string good = R"({"fps": 60,
      "objects": [{"id": "sq", "shape": "square", "color": "black", "bbox": [100, 100, 40, 40]}],
      "motions": [{"id": "up", "agent": "sq", "type": "translate", "direction": [0, 1], "magnitude": 100, "duration": 1}]})";
    std::string wrong = good;
    wrong.replace( wrong.find( "[0, 1]" ), 6, "[0, -1]" );
    const std::string program = compile_program( spec_from_json( nlohmann::json::parse( good ) ) ).source;
    auto scripted = []( std::vector< std::string > replies ) {
        auto calls = std::make_shared< std::size_t >( 0 );
        return [ replies, calls ]( const nlohmann::json& ) {
            const std::string& content = replies[ std::min( ( *calls )++, replies.size() - 1 ) ];
            return nlohmann::json{ { "choices", { { { "message", { { "content", content } } } } } } }.dump();
        };
    };
    auto history = [ & ]( std::vector< std::string > replies, std::size_t cap, refine_status expect ) {
        refine_session s;
        s.prompt = "Move the black square up by 100 pixels.";
        s.cap = cap;
        s.transport = scripted( std::move( replies ) );
        const refine_result r = refine( s, program );
        return r.status == expect ? r.history.size() : 0;
    };
    const std::size_t h0 = history( { good }, 50, refine_status::passed );
    const std::size_t h1 = history( { wrong, good }, 50, refine_status::passed );
    const std::size_t hc = history( { wrong }, 5, refine_status::cap_reached );
    return { h0 == 1 && h1 == 2 && hc == 6,
             "history lengths " + std::to_string( h0 ) + "/" + std::to_string( h1 ) + "/" + std::to_string( hc ) + " (cap 5)" };
}

outcome interval_index_equivalence()
{
    std::mt19937_64 rng{ 3 };
    std::uniform_int_distribution< int > start( 0, 1000 ), len( 0, 60 );
    std::vector< closed_interval< int > > ivs;
    for ( int i = 0; i < 1000; ++i )
    {
        const int s = start( rng );
        ivs.push_back( { s, s + len( rng ) } );
    }
    const interval_index< int > index{ std::span< const closed_interval< int > >{ ivs } };
    auto as_set = []( const std::vector< std::size_t >& v ) { return std::set< std::size_t >( v.begin(), v.end() ); };
    std::size_t discrepancies = 0;
    for ( int q = 0; q < 100; ++q )
    {
        const int s = start( rng );
        const closed_interval< int > query{ s, s + len( rng ) };
        std::set< std::size_t > overlap, stab;
        for ( std::size_t i = 0; i < ivs.size(); ++i )
        {
            if ( ivs[ i ].start <= query.end && query.start <= ivs[ i ].end )
                overlap.insert( i );
            if ( ivs[ i ].start <= s && s <= ivs[ i ].end )
                stab.insert( i );
        }
        discrepancies += as_set( index.overlapping( query ) ) != overlap ? 1 : 0;
        discrepancies += as_set( index.stab( s ) ) != stab ? 1 : 0;
    }
    return { discrepancies == 0, std::to_string( discrepancies ) + " discrepancies over 1000 intervals x 100 queries" };
}

} // namespace

int main()
{
    const std::pair< const char*, outcome ( * )() > criteria[] = {
        { "allen-algebra", allen_algebra },
        { "aggregation-partition", aggregation_partition },
        { "decomposition-round-trip", decomposition_round_trip },
        { "oracle-soundness", oracle_soundness },
        { "targeted-failures", targeted_failures },
        { "post-semantics", post_semantics },
        { "verify-determinism", verify_determinism },
        { "quantifier-equivalence", quantifier_equivalence },
        { "refine-mock", refine_mock },
        { "interval-index-equivalence", interval_index_equivalence },
    };
    int failures = 0;
    int n = 0;
    for ( const auto& [ name, check ] : criteria )
    {
        ++n;
        outcome o;
        try
        {
            o = check();
        }
        catch ( const std::exception& e )
        {
            o = { false, std::string{ "exception: " } + e.what() };
        }
        failures += o.ok ? 0 : 1;
        std::cout << ( o.ok ? "PASS" : "FAIL" ) << " " << n << " " << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
