#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include "mdsc/code_model.hpp"
#include "mdsc/polyalg.hpp"

namespace mdsc {

// Matrix text format: a header line "gamma kappa X" where X is m (partition),
// z (lifting) or M (relocation), followed by gamma rows of kappa integers.
struct GridFile {
    std::array<int, 3> header{};
    IntGrid grid;
};

GridFile read_grid(std::istream& in);
GridFile read_grid_file(const std::string& path);
void write_grid(std::ostream& out, const IntGrid& g, int third);
void write_grid_file(const std::string& path, const IntGrid& g, int third);

// JSON descriptor: {"params": {...}, "K": path, "Lf": path, "Mr": path, "P": [[...]]}.
// Relative paths resolve against the descriptor's directory.
struct CodeDescriptor {
    CodeParams params;
    std::optional<IntGrid> K;
    std::optional<IntGrid> Lf;
    std::optional<IntGrid> Mr;
    std::optional<ProbabilityMatrix> P;
};

CodeDescriptor load_descriptor(const std::string& path);

void write_alist(std::ostream& out, const SparseBinaryMatrix& H);
SparseBinaryMatrix read_alist(std::istream& in);

}  // namespace mdsc
