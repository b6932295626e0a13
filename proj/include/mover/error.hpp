#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mover
{

// Every failure the engine can raise carries a stable kind so callers (the CLI,
// the refine loop) can branch on it without parsing messages.
enum class error_kind
{
    malformed_trace,
    inconsistent_frame_count,
    degenerate_matrix,
    svg_parse_error,
    missing_id,
    unsupported_node,
    syntax_error,
    arity_error,
    sort_error,
    unbound_variable,
    unknown_predicate,
    unknown_color_name,
    bad_argument_shape,
    unresolved_object,
    iota_empty,
    invalid_spec,
    invalid_selector,
    invalid_config,
    unknown_object_id,
    endpoint_error,
    malformed_model_output,
    io_error,
};

constexpr std::string_view to_string( error_kind kind )
{
    switch ( kind )
    {
    case error_kind::malformed_trace: return "MalformedTrace";
    case error_kind::inconsistent_frame_count: return "InconsistentFrameCount";
    case error_kind::degenerate_matrix: return "DegenerateMatrix";
    case error_kind::svg_parse_error: return "SvgParseError";
    case error_kind::missing_id: return "MissingId";
    case error_kind::unsupported_node: return "UnsupportedNode";
    case error_kind::syntax_error: return "SyntaxError";
    case error_kind::arity_error: return "ArityError";
    case error_kind::sort_error: return "SortError";
    case error_kind::unbound_variable: return "UnboundVariable";
    case error_kind::unknown_predicate: return "UnknownPredicate";
    case error_kind::unknown_color_name: return "UnknownColorName";
    case error_kind::bad_argument_shape: return "BadArgumentShape";
    case error_kind::unresolved_object: return "UnresolvedObject";
    case error_kind::iota_empty: return "IotaEmpty";
    case error_kind::invalid_spec: return "InvalidSpec";
    case error_kind::invalid_selector: return "InvalidSelector";
    case error_kind::invalid_config: return "InvalidConfig";
    case error_kind::unknown_object_id: return "UnknownObjectId";
    case error_kind::endpoint_error: return "EndpointError";
    case error_kind::malformed_model_output: return "MalformedModelOutput";
    case error_kind::io_error: return "IoError";
    }
    return "Error";
}

class error : public std::runtime_error
{
    error_kind _kind;

public:
    error( error_kind kind, const std::string& message )
        : std::runtime_error{ std::string{ to_string( kind ) } + ": " + message }, _kind{ kind } {}

    [[nodiscard]] error_kind kind() const { return _kind; }
};

} // namespace mover
