#pragma once

#include <filesystem>
#include <iosfwd>

#include "spanlab/dirichlet.hpp"

namespace spanlab {

/// Plain-text model format. Every real is written as a C99 hexadecimal
/// float, so a round trip is exact.
///
///   spanlab-model 1
///   curves <K>
///   curve <nodes> <2d+1>        (K times, outer first, holes clockwise)
///   <re> <im>                   (one line per coefficient c_{-d}..c_d)
///   anchors <K-1>
///   <re> <im>
///   degrees <outer> <hole_1> ... <hole_{K-1}>
///   max_order <n>
///   residual <hermitian residual>
///   blocks <B>
///   block <size> <rank>
///   columns <size indices>
///   gram                        (size*size lines "re im", row-major)
///   scale <size reals>
///   pivots <size indices>
///   factor                      (rank*rank lines "re im", row-major)
///   end
void write_model(std::ostream& out, const KernelModel& model);
KernelModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const KernelModel& model);
KernelModel load_model(const std::filesystem::path& path);

}  // namespace spanlab
