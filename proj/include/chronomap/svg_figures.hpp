#pragma once

#include <string>
#include <vector>

#include "chronomap/mds_check.hpp"
#include "chronomap/profiling.hpp"
#include "chronomap/som_string.hpp"

namespace chronomap {

/// One panel per unit: its code vector across the week, day boundaries
/// marked. Pass class sizes to annotate each panel; empty vector omits them.
void write_codevector_figure(const std::string& path, const SomModel& model,
                             const std::vector<long>& class_sizes);

/// The string in the recovered plane: numbered points joined in unit order.
void write_embedding_figure(const std::string& path, const MdsEmbedding& embedding);

/// One panel per superclass: average share at work across the week.
void write_curves_figure(const std::string& path, const ActivityCurve& curves);

}  // namespace chronomap
