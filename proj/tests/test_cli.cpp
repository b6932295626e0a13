#include "helpers.hpp"

#include "mover/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mover;
namespace fs = std::filesystem;

namespace
{

struct cli_result
{
    int code;
    std::string out;
    std::string err;
};

cli_result cli( std::vector< std::string > args, const chat_transport& transport = {} )
{
    args.insert( args.begin(), "mover" );
    std::vector< const char* > argv;
    for ( const auto& a : args )
        argv.push_back( a.c_str() );
    std::ostringstream out, err;
    const int code = run_cli( static_cast< int >( argv.size() ), argv.data(), out, err, transport );
    return { code, out.str(), err.str() };
}

class CliTest : public ::testing::Test
{
protected:
    fs::path dir;

    void SetUp() override
    {
        dir = fs::temp_directory_path() / ( "mover_cli_" + std::string{ ::testing::UnitTest::GetInstance()->current_test_info()->name() } );
        fs::remove_all( dir );
        fs::create_directories( dir );
    }
    void TearDown() override { fs::remove_all( dir ); }

    fs::path write( const std::string& name, const std::string& text ) const
    {
        std::ofstream( dir / name ) << text;
        return dir / name;
    }
};

const char* spec_json = R"({"fps": 60,
  "objects": [{"id": "sq", "shape": "square", "color": "black", "bbox": [100, 100, 40, 40]},
              {"id": "ref", "shape": "circle", "color": "red", "bbox": [300, 100, 40, 40]}],
  "motions": [{"id": "up", "agent": "sq", "type": "translate", "direction": [0, 1], "magnitude": 100, "duration": 1}]})";

} // namespace

TEST_F( CliTest, GenThenVerifyPasses )
{
    const auto spec = write( "spec.json", spec_json );
    ASSERT_EQ( cli( { "gen", "--spec", spec.string(), "--out-dir", ( dir / "case" ).string() } ).code, exit_pass );
    ASSERT_TRUE( fs::exists( dir / "case" / "prog.mover" ) );
    const auto r = cli( { "verify", "--trace", ( dir / "case" / "trace.json" ).string(), "--program", ( dir / "case" / "prog.mover" ).string() } );
    EXPECT_EQ( r.code, exit_pass ) << r.out << r.err;
    const auto j = nlohmann::json::parse( r.out );
    EXPECT_TRUE( j[ "overall" ].get< bool >() );
}

TEST_F( CliTest, PerturbedTraceFailsWithExitOne )
{
    const auto spec = write( "spec.json", spec_json );
    cli( { "gen", "--spec", spec.string(), "--out-dir", ( dir / "ok" ).string() } );
    auto flipped = spec_from_json( nlohmann::json::parse( spec_json ) );
    flipped = perturb( flipped, { perturbation_kind::flip_direction, "up", 0 } );
    write( "flipped.json", serialize_trace( render_trace( flipped ) ) );
    const auto r = cli( { "verify", "--trace", ( dir / "flipped.json" ).string(), "--program", ( dir / "ok" / "prog.mover" ).string(),
                          "--format", "text" } );
    EXPECT_EQ( r.code, exit_fail );
    EXPECT_NE( r.out.find( "direction: false" ), std::string::npos ) << r.out;
}

TEST_F( CliTest, VerifyIsByteDeterministic )
{
    const auto spec = write( "spec.json", spec_json );
    cli( { "gen", "--spec", spec.string(), "--out-dir", dir.string() } );
    const std::vector< std::string > args{ "verify", "--trace", ( dir / "trace.json" ).string(), "--program", ( dir / "prog.mover" ).string() };
    EXPECT_EQ( cli( args ).out, cli( args ).out );
}

TEST_F( CliTest, VerifyWritesOutFile )
{
    const auto spec = write( "spec.json", spec_json );
    cli( { "gen", "--spec", spec.string(), "--out-dir", dir.string() } );
    const auto r = cli( { "verify", "--trace", ( dir / "trace.json" ).string(), "--program", ( dir / "prog.mover" ).string(), "--out",
                          ( dir / "report.json" ).string() } );
    EXPECT_EQ( r.code, exit_pass );
    EXPECT_TRUE( r.out.empty() );
    EXPECT_TRUE( fs::exists( dir / "report.json" ) );
}

TEST_F( CliTest, ErrorsExitTwo )
{
    const auto spec = write( "spec.json", spec_json );
    cli( { "gen", "--spec", spec.string(), "--out-dir", dir.string() } );
    auto r = cli( { "verify", "--trace", ( dir / "trace.json" ).string(), "--program", ( dir / "missing.mover" ).string() } );
    EXPECT_EQ( r.code, exit_error );
    EXPECT_NE( r.err.find( "error:" ), std::string::npos );
    const auto bad = write( "bad.mover", "exists(Object, lambda o: colour(o, \"red\"))\n" );
    r = cli( { "verify", "--trace", ( dir / "trace.json" ).string(), "--program", bad.string() } );
    EXPECT_EQ( r.code, exit_error );
    EXPECT_NE( r.err.find( "UnknownPredicate" ), std::string::npos ) << r.err;
    EXPECT_EQ( cli( { "verify", "--program", bad.string() } ).code, exit_error );
    EXPECT_EQ( cli( {} ).code, exit_error );
    EXPECT_EQ( cli( { "frobnicate" } ).code, exit_error );
    EXPECT_EQ( cli( { "--help" } ).code, exit_pass );
}

TEST_F( CliTest, CheckReportsOkOrError )
{
    const auto good = write( "good.mover", "o = iota(Object, lambda v: shp(v, \"circle\"))\n" );
    auto r = cli( { "check", good.string() } );
    EXPECT_EQ( r.code, exit_pass );
    EXPECT_NE( r.out.find( "ok: 1 statement" ), std::string::npos );
    const auto bad = write( "bad.mover", "o = iota(Object, lambda v: shp(v, \"circle\")\n" );
    r = cli( { "check", bad.string() } );
    EXPECT_EQ( r.code, exit_error );
    EXPECT_NE( r.err.find( "SyntaxError" ), std::string::npos );
}

TEST_F( CliTest, RelationsTable )
{
    const auto trace = write( "adjacent.json", R"({"objects": [
        {"id": "a", "shape": "square", "color": "red", "bbox_local": [0, 0, 10, 10], "frames": [[1,0,0,1,0,0], [1,0,0,1,0,0]]},
        {"id": "b", "shape": "square", "color": "blue", "bbox_local": [10, 0, 10, 10], "frames": [[1,0,0,1,0,0], [1,0,0,1,0,0]]}]})" );
    auto r = cli( { "relations", "--trace", trace.string(), "--objects", "a", "b" } );
    EXPECT_EQ( r.code, exit_pass );
    EXPECT_EQ( r.out, "frame\tx_rel\ty_rel\n1\tmeets\tequals\n2\tmeets\tequals\n" );
    r = cli( { "relations", "--trace", trace.string(), "--objects", "a", "b", "--frame", "2" } );
    EXPECT_EQ( r.out, "frame\tx_rel\ty_rel\n2\tmeets\tequals\n" );
    r = cli( { "relations", "--trace", trace.string(), "--objects", "a", "zz" } );
    EXPECT_EQ( r.code, exit_error );
    EXPECT_NE( r.err.find( "UnknownObjectId" ), std::string::npos );
}

TEST_F( CliTest, RelationsAcrossAnApproach )
{
    // a moves right into b: precedes, then meets, then overlaps
    const auto s = spec_from_json( nlohmann::json::parse( R"({
      "objects": [{"id": "a", "shape": "square", "color": "red", "bbox": [0, 0, 10, 10]},
                  {"id": "b", "shape": "square", "color": "blue", "bbox": [30, 0, 10, 10]}],
      "motions": [{"id": "m", "agent": "a", "type": "translate", "direction": [1, 0], "magnitude": 25, "duration": 1}]})" ) );
    write( "approach.json", serialize_trace( render_trace( s ) ) );
    const auto r = cli( { "relations", "--trace", ( dir / "approach.json" ).string(), "--objects", "a", "b", "--tau", "0.5" } );
    const auto first_precedes = r.out.find( "\tprecedes\t" );
    const auto first_meets = r.out.find( "\tmeets\t" );
    const auto first_overlaps = r.out.find( "\toverlaps\t" );
    ASSERT_NE( first_precedes, std::string::npos );
    ASSERT_NE( first_meets, std::string::npos ) << r.out;
    ASSERT_NE( first_overlaps, std::string::npos );
    EXPECT_LT( first_precedes, first_meets );
    EXPECT_LT( first_meets, first_overlaps );
}

TEST_F( CliTest, GenSuiteWritesEveryCase )
{
    const auto r = cli( { "gen", "--suite", "default", "--out-dir", dir.string(), "--seed", "7" } );
    EXPECT_EQ( r.code, exit_pass );
    std::size_t cases = 0;
    for ( const auto& e : fs::directory_iterator( dir ) )
        cases += fs::exists( e.path() / "prog.mover" ) && fs::exists( e.path() / "trace.json" ) ? 1 : 0;
    EXPECT_EQ( cases, 56u );
    // generated pairs verify through the CLI as well
    const auto v = cli( { "verify", "--trace", ( dir / "spatial_03" / "trace.json" ).string(), "--program",
                          ( dir / "spatial_03" / "prog.mover" ).string() } );
    EXPECT_EQ( v.code, exit_pass ) << v.out;
}

TEST_F( CliTest, RefineWithMockTransport )
{
    const auto prompt = write( "prompt.txt", "Move the black square up by 100 pixels." );
    cli( { "gen", "--spec", write( "spec.json", spec_json ).string(), "--out-dir", dir.string() } );
    const chat_transport mock = []( const nlohmann::json& ) {
        return nlohmann::json{ { "choices", { { { "message", { { "content", spec_json } } } } } } }.dump();
    };
    const auto r = cli( { "refine", "--prompt", prompt.string(), "--program", ( dir / "prog.mover" ).string() }, mock );
    EXPECT_EQ( r.code, exit_pass ) << r.err;
    EXPECT_EQ( nlohmann::json::parse( r.out )[ "iterations" ], 0 );
    EXPECT_EQ( cli( { "refine", "--prompt", prompt.string(), "--program", ( dir / "prog.mover" ).string() } ).code, exit_error );
}
