#pragma once

#include "algebra.hpp"
#include "config.hpp"
#include "evaluator.hpp"
#include "lang.hpp"
#include "motion.hpp"
#include "report.hpp"
#include "scene.hpp"

#include <string>

namespace mover
{

// Compiles `source`, extracts motion channels and evaluates every statement.
inline report verify( const std::string& source, const animation& anim, const tolerances& tol = {},
                      const mask_table& masks = default_masks() )
{
    const program prog = compile( source, masks );
    const motion_channels channels = build_channels( anim.scene, anim.trace, tol );
    evaluation result = run_program( prog, eval_inputs{ anim.scene, anim.trace, channels, tol, masks } );
    return make_report( source, anim.scene, anim.trace, std::move( result ), tol );
}

} // namespace mover
