#include <stdexcept>
#include <string>

#include "opfrelax/case_io.hpp"

namespace opfrelax {

namespace {

// Three-bus network (100 MVA base). Infinite generator limits and unlimited
// lines (rateA = 0) are kept as given.
std::string case3_text(const char* name, const char* angle_deg) {
  std::string a = angle_deg;
  std::string t;
  t += "function mpc = ";
  t += name;
  t += R"(
mpc.version = '2';
mpc.baseMVA = 100.0;

%% bus data
%	bus_i	type	Pd	Qd	Gs	Bs	area	Vm	Va	baseKV	zone	Vmax	Vmin
mpc.bus = [
	1	3	110.0	40.0	0.0	0.0	1	1.0	0.0	240.0	1	1.1	0.9;
	2	2	110.0	40.0	0.0	0.0	1	1.0	0.0	240.0	1	1.1	0.9;
	3	2	95.0	50.0	0.0	0.0	1	1.0	0.0	240.0	1	1.1	0.9;
];

%% generator data
%	bus	Pg	Qg	Qmax	Qmin	Vg	mBase	status	Pmax	Pmin
mpc.gen = [
	1	0.0	0.0	Inf	-Inf	1.0	100.0	1	Inf	0.0;
	2	0.0	0.0	Inf	-Inf	1.0	100.0	1	Inf	0.0;
	3	0.0	0.0	Inf	-Inf	1.0	100.0	1	0.0	0.0;
];

%% branch data
%	fbus	tbus	r	x	b	rateA	rateB	rateC	ratio	angle	status	angmin	angmax
mpc.branch = [
	1	2	0.042	0.90	0.30	0.0	0.0	0.0	0.0	0.0	1	-)" + a + "\t" + a + R"(;
	2	3	0.025	0.75	0.70	50.0	0.0	0.0	0.0	0.0	1	-)" + a + "\t" + a + R"(;
	1	3	0.065	0.62	0.45	0.0	0.0	0.0	0.0	0.0	1	-)" + a + "\t" + a + R"(;
];

%% generator cost data
%	2	startup	shutdown	n	c(n-1)	...	c0
mpc.gencost = [
	2	0.0	0.0	3	0.110	5.0	0.0;
	2	0.0	0.0	3	0.085	1.2	0.0;
	2	0.0	0.0	3	0.000	0.0	0.0;
];
)";
  return t;
}

}  // namespace

std::vector<std::string> builtin_case_names() { return {"case3_base", "case3_sad18"}; }

std::string builtin_case_text(std::string_view name) {
  if (name == "case3_base") return case3_text("case3_base", "30.0");
  if (name == "case3_sad18") return case3_text("case3_sad18", "18.0");
  throw std::invalid_argument("unknown builtin case '" + std::string(name) + "'");
}

Network builtin_case(std::string_view name) { return parse_case(builtin_case_text(name), std::string(name)); }

}  // namespace opfrelax
