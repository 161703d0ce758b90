#pragma once

#include <iosfwd>
#include <string>

#include "glmgee/integrator.hpp"
#include "glmgee/order.hpp"
#include "glmgee/stability.hpp"
#include "glmgee/tableau.hpp"

namespace glmgee::io {

/// Tableau <-> JSON document {name, s, r, form, gamma, p, A, U, B, V} with
/// matrix entries as "num/den" strings (rational) or decimal floats.
std::string tableau_to_json(const TableauQ& t);
std::string tableau_to_json(const TableauD& t);
TableauQ tableau_from_json(const std::string& text);

std::string order_report_to_json(const OrderReport& rep);

/// 17-significant-digit decimal, enough to round-trip binary64.
std::string format_double(double x);

/// Trace CSV: step,t,dt,y_*,eps_global_*,eps_local_*,yhat_* and true_err_*
/// when available (one column per component).
void write_trace_csv(std::ostream& os, const IntegrationTrace& trace, bool with_true_err);
std::string trace_to_json(const IntegrationTrace& trace, bool with_true_err);

/// Convergence CSV: dt,err_y,err_estimate_gap,err_yhat rows plus a footer row
/// labeled "slope".
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

/// Scan CSV: re,im,rho,inside.
void write_scan_csv(std::ostream& os, const StabilityScan& scan);

}  // namespace glmgee::io
