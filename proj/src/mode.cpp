#include "gpop/mode.hpp"

namespace gpop {

double sc_model_cost(const ModeInputs& m) {
  const double si = m.id_bytes, sv = m.value_bytes;
  const double ea = static_cast<double>(m.active_edges);
  const double msgs = m.exact_count ? static_cast<double>(m.active_messages)
                                    : m.aggregation * ea;
  return 2.0 * msgs * sv + 3.0 * ea * si + static_cast<double>(m.active_vertices) * si;
}

double pc_model_cost(const ModeInputs& m) {
  const double si = m.id_bytes, sv = m.value_bytes;
  const double e = static_cast<double>(m.part_edges);
  return e * ((m.aggregation + 1.0) * si + 2.0 * m.aggregation * sv) +
         static_cast<double>(m.k) * si;
}

Mode select_mode(const ModeInputs& m) {
  if (m.active_edges == 0 && m.active_vertices == 0) return Mode::sc;
  return pc_model_cost(m) <= m.bw_ratio * sc_model_cost(m) ? Mode::pc : Mode::sc;
}

}  // namespace gpop
