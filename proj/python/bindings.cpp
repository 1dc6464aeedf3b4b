#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "efx/annealer.hpp"
#include "efx/baselines.hpp"
#include "efx/descent.hpp"
#include "efx/experiment.hpp"
#include "efx/generators.hpp"
#include "efx/io.hpp"
#include "efx/violations.hpp"

namespace py = pybind11;
using namespace efx;

namespace {

using Owners = std::vector<Agent>;

Allocation to_alloc(const Instance& inst, const Owners& owner) {
  Allocation a{owner};
  check_allocation(inst, a);
  return a;
}

std::vector<std::vector<Value>> rows_of(const Instance& inst) {
  std::vector<std::vector<Value>> rows(inst.agents());
  for (Agent i = 0; i < inst.agents(); ++i) rows[i].assign(inst.row(i).begin(), inst.row(i).end());
  return rows;
}

py::dict trial_to_dict(const TrialResult& r) {
  py::dict d;
  d["owner"] = r.allocation.owner;
  d["solved"] = r.solved;
  d["steps"] = r.steps;
  d["restarts"] = r.restarts;
  d["violations"] = r.violations;
  return d;
}

py::dict stats_to_dict(const Stats& s) {
  py::dict d;
  d["count"] = s.count;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  d["median"] = s.median;
  d["min"] = s.min;
  d["max"] = s.max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_efxsa, m) {
  m.doc() = "EFX allocations by simulated annealing";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SearchCapExceeded>(m, "SearchCapExceeded", PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def(py::init([](const std::vector<std::vector<Value>>& rows, Value scale) {
             return Instance::from_rows(rows, scale);
           }),
           py::arg("values"), py::arg("scale") = kDefaultScale)
      .def_property_readonly("n", &Instance::agents)
      .def_property_readonly("m", &Instance::goods)
      .def_property_readonly("scale", &Instance::scale)
      .def_property_readonly("values", &rows_of)
      .def("value", &Instance::value, py::arg("agent"), py::arg("good"))
      .def("digest", &instance_digest)
      .def("to_json", [](const Instance& inst) {
        std::ostringstream out;
        write_instance(inst, out);
        return out.str();
      })
      .def_static("from_json", [](const std::string& text) { return parse_instance(text); },
                  py::arg("text"))
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& inst) {
        return "Instance(n=" + std::to_string(inst.agents()) +
               ", m=" + std::to_string(inst.goods()) + ")";
      });

  m.def("gen_uniform", &gen_uniform, py::arg("n"), py::arg("m"), py::arg("seed"),
        py::arg("scale") = kDefaultScale);
  m.def("gen_correlated", &gen_correlated, py::arg("n"), py::arg("m"), py::arg("rho"),
        py::arg("seed"), py::arg("scale") = kDefaultScale);
  m.def(
      "gen_identical",
      [](std::size_t n, std::size_t mm, std::uint64_t seed, Value scale) {
        return gen_identical(n, mm, seed, scale).lift();
      },
      py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("scale") = kDefaultScale,
      "Identical-valuation instance; every row holds the common good values.");

  m.def(
      "count_violations",
      [](const Instance& inst, const Owners& owner) {
        const auto vc = count_violations(inst, to_alloc(inst, owner));
        std::vector<std::vector<Count>> pairs(vc.n, std::vector<Count>(vc.n));
        for (Agent i = 0; i < vc.n; ++i) {
          for (Agent j = 0; j < vc.n; ++j) pairs[i][j] = vc.at(i, j);
        }
        return py::make_tuple(vc.total, pairs);
      },
      py::arg("instance"), py::arg("owner"),
      "Returns (total, per_pair) where per_pair[i][j] counts violations of i against j.");
  m.def(
      "is_efx",
      [](const Instance& inst, const Owners& owner) { return is_efx(inst, to_alloc(inst, owner)); },
      py::arg("instance"), py::arg("owner"));
  m.def(
      "list_violations",
      [](const Instance& inst, const Owners& owner) {
        std::vector<std::tuple<Agent, Agent, Good>> out;
        for (const auto& v : list_violations(inst, to_alloc(inst, owner))) {
          out.emplace_back(v.envious, v.holder, v.good);
        }
        return out;
      },
      py::arg("instance"), py::arg("owner"));
  m.def(
      "delta_violations",
      [](const Instance& inst, const Owners& owner, Good good, Agent target) {
        const Allocation a = to_alloc(inst, owner);
        return delta_violations(inst, build_utilities(inst, a), a, good, target);
      },
      py::arg("instance"), py::arg("owner"), py::arg("good"), py::arg("target"));

  m.def(
      "anneal_solve",
      [](const Instance& inst, std::uint64_t seed, double t_initial, double t_min,
         std::uint64_t steps_per_level, double cooling, std::optional<std::uint64_t> max_steps,
         std::optional<Owners> start) {
        AnnealParams p;
        p.seed = seed;
        p.t_initial = t_initial;
        p.t_min = t_min;
        p.steps_per_level = steps_per_level;
        p.cooling = cooling;
        p.max_total_steps = max_steps;
        TrialResult r;
        {
          py::gil_scoped_release release;
          r = start ? anneal_solve(inst, p, to_alloc(inst, *start)) : anneal_solve(inst, p);
        }
        return trial_to_dict(r);
      },
      py::arg("instance"), py::arg("seed") = 0, py::arg("t_initial") = 5.0,
      py::arg("t_min") = 1e-4, py::arg("steps_per_level") = 0, py::arg("cooling") = 0.99,
      py::arg("max_steps") = py::none(), py::arg("start") = py::none(),
      "steps_per_level = 0 means 100 * n * m.");

  m.def(
      "descent_solve",
      [](const Instance& inst, const Owners& start) {
        const IdenticalInstance ident = IdenticalInstance::from_instance(inst);
        const DescentTrace trace = descent_solve(ident, Allocation{start});
        py::list moves;
        for (const auto& s : trace.moves) {
          moves.append(py::make_tuple(s.move.good, s.move.from, s.move.to, s.phi_before.value(),
                                      s.phi_after.value()));
        }
        return py::make_tuple(trace.allocation.owner, moves);
      },
      py::arg("instance"), py::arg("start"),
      "Instance must have identical rows. Returns (owner, moves) with moves as "
      "(good, from, to, phi_before, phi_after).");

  m.def(
      "brute_force_efx",
      [](const Instance& inst, std::uint64_t cap) -> std::optional<Owners> {
        auto r = brute_force_efx(inst, cap);
        if (!r.allocation) return std::nullopt;
        return r.allocation->owner;
      },
      py::arg("instance"), py::arg("cap") = kDefaultBruteForceCap);
  m.def("round_robin", [](const Instance& inst) { return round_robin(inst).owner; },
        py::arg("instance"));
  m.def("n_plus_one_pick", [](const Instance& inst) { return n_plus_one_pick(inst).owner; },
        py::arg("instance"));
  m.def("welfare_max_allocation",
        [](const Instance& inst) { return welfare_max_allocation(inst).owner; },
        py::arg("instance"));

  m.def(
      "allocation_to_json",
      [](const Instance& inst, const Owners& owner) {
        std::ostringstream out;
        write_allocation(inst, to_alloc(inst, owner), out);
        return out.str();
      },
      py::arg("instance"), py::arg("owner"));
  m.def(
      "allocation_from_json",
      [](const std::string& text, const Instance* inst) {
        return parse_allocation(text, inst).allocation.owner;
      },
      py::arg("text"), py::arg("instance") = nullptr,
      "Owners are 0-based in Python and 1-based in the file.");

  m.def(
      "bench",
      [](const std::string& kind, std::size_t n, std::size_t mm, std::uint64_t seed,
         std::uint64_t trials, double rho, const std::string& solver, unsigned workers,
         bool warm_start, std::optional<std::uint64_t> max_steps) {
        ExperimentConfig c;
        c.gen.kind = parse_gen_kind(kind);
        c.gen.n = n;
        c.gen.m = mm;
        c.gen.rho = rho;
        c.gen.seed = seed;
        c.solver = parse_solver_kind(solver);
        c.trials = trials;
        c.workers = workers;
        c.warm_start = warm_start;
        c.params.max_total_steps = max_steps;
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(c);
        }
        py::list records;
        for (const auto& r : res.records) {
          py::dict d;
          d["trial"] = r.trial;
          d["seed"] = r.seed;
          d["solved"] = r.solved;
          d["steps"] = r.steps;
          d["restarts"] = r.restarts;
          d["violations"] = r.violations;
          d["owner"] = r.allocation.owner;
          records.append(d);
        }
        py::dict summary;
        summary["trials"] = res.summary.trials;
        summary["solved"] = res.summary.solved;
        summary["success_rate"] = res.summary.success_rate;
        summary["steps"] = stats_to_dict(res.summary.steps);
        return py::make_tuple(records, summary);
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("seed"), py::arg("trials") = 100,
      py::arg("rho") = 0.0, py::arg("solver") = "anneal", py::arg("workers") = 1,
      py::arg("warm_start") = false, py::arg("max_steps") = py::none(),
      "Returns (records, summary).");
}
