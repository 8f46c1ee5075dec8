#pragma once

#include <iosfwd>

namespace qwgrow::cli {

/*
 * Entry point of the qwgrow tool. Subcommands:
 *
 *   grow      one growth run      --walkers --tau --steps --seed --out --format {edgelist,graphml,trace-json}
 *   sweep     ensemble experiment --config [--workers] [--out-dir]
 *   analyze   metrics of a graph  --in [--spectrum]
 *   stars     analytic star table --tau --max-k
 *   charpoly  recurrence audit    --chain "3,2,4"
 *
 * Returns 0 on success; on failure writes one line to `err` and returns nonzero.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qwgrow::cli
