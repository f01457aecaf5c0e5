#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "combnet/analysis.hpp"
#include "combnet/errors.hpp"
#include "combnet/mds.hpp"
#include "combnet/rng.hpp"
#include "combnet/schemes.hpp"
#include "combnet/sweep.hpp"
#include "combnet/topology.hpp"
#include "combnet/verify.hpp"

namespace py = pybind11;
using namespace combnet;

namespace {

py::object to_fraction(const Rat& q) {
    static py::object Fraction =
        py::module_::import("fractions").attr("Fraction");
    return Fraction(to_fraction_string(q));
}

py::int_ to_py_int(const BigInt& v) {
    return py::cast<py::int_>(py::str(v.get_str()));
}

Rat rat_from(py::handle obj) {
    return parse_fraction(py::str(obj).cast<std::string>());
}

std::vector<std::uint8_t> to_bytes_vec(const py::bytes& b) {
    std::string s = b;
    return {s.begin(), s.end()};
}

py::bytes to_py_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

NetworkTopology build(int relays, int fanout, int files, std::uint64_t size) {
    NetworkParams params;
    params.relay_count = relays;
    params.fanout = fanout;
    params.file_count = files;
    params.file_size = size;
    return build_network(params);
}

py::dict simulate(int relays, int fanout, const std::string& scheme, int gain,
                  const std::string& cache_fraction, int files,
                  std::uint64_t block_request, py::object demand_obj,
                  std::uint64_t seed) {
    using namespace schemes;
    SchemeConfig config;
    config.kind = scheme_from_name(scheme);
    if (config.kind == SchemeKind::Routing) {
        if (cache_fraction.empty())
            throw SpecError("routing needs cache_fraction");
        config.cache_fraction = parse_fraction(cache_fraction);
    } else {
        config.gain = gain;
    }
    NetworkParams params;
    params.relay_count = relays;
    params.fanout = fanout;
    params.validate();
    params.file_count =
        files > 0 ? files : static_cast<int>(to_long(params.user_count()));
    NetworkTopology topo = build_network(params);
    params.file_size = pick_block_size(topo, config, block_request);
    topo = build_network(params);

    DemandVector demand;
    if (demand_obj.is_none())
        demand = worst_case_demand(topo);
    else
        demand = demand_obj.cast<DemandVector>();

    auto library = random_library(seed, params.file_count, params.file_size);
    auto placement = place(topo, config, library);
    auto transcript = deliver(topo, config, placement, demand);
    auto loads = measure_loads(transcript, params.file_size);

    bool ok = true;
    py::list users;
    for (int k = 1; k <= topo.user_count(); ++k) {
        bool user_ok = false;
        try {
            auto bytes = decode(topo, config, k, placement.caches[k - 1],
                                messages_for_user(transcript, k), demand);
            user_ok = bytes == library[demand[k - 1] - 1];
        } catch (const std::exception&) {
            user_ok = false;
        }
        users.append(user_ok);
        ok = ok && user_ok;
    }

    Rat memory = cache_size_files(topo, config);
    Rat fraction = memory / params.file_count;
    fraction.canonicalize();
    py::dict out;
    out["scheme"] = scheme_name(config.kind);
    out["H"] = relays;
    out["r"] = fanout;
    out["N"] = params.file_count;
    out["K"] = topo.user_count();
    out["B"] = params.file_size;
    out["n"] = placement.layout.n;
    out["k1"] = placement.layout.k1;
    out["k2"] = placement.layout.k2;
    out["k3"] = placement.layout.k3;
    out["M"] = to_fraction(memory);
    out["M_over_N"] = to_fraction(fraction);
    out["R1"] = to_fraction(loads.r1);
    out["R2"] = to_fraction(loads.r2);
    out["users_ok"] = users;
    out["ok"] = ok;
    return out;
}

}  // namespace

PYBIND11_MODULE(combnet, m) {
    m.doc() = "coded caching over combination networks: exact tradeoff "
              "analysis and bit-exact delivery simulation";

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<CheckError>(m, "CheckError", PyExc_RuntimeError);

    py::class_<NetworkTopology>(m, "NetworkTopology")
        .def_property_readonly("relay_count", &NetworkTopology::relay_count)
        .def_property_readonly("fanout", &NetworkTopology::fanout)
        .def_property_readonly("user_count", &NetworkTopology::user_count)
        .def_property_readonly("users_per_relay",
                               &NetworkTopology::users_per_relay)
        .def("relays_of", &NetworkTopology::relays_of, py::arg("user"))
        .def("users_of", &NetworkTopology::users_of, py::arg("relay"))
        .def("common_relays", &NetworkTopology::common_relays, py::arg("users"))
        .def("common_users", &NetworkTopology::common_users, py::arg("relays"))
        .def(
            "groups",
            [](const NetworkTopology& t, int size) { return t.enumerate_z(size); },
            py::arg("size"),
            "all size-t user groups with at least one common relay, colex order");

    m.def("build_network", &build, py::arg("H"), py::arg("r"),
          py::arg("N") = 1, py::arg("B") = 0);
    m.def(
        "k_i",
        [](int relays, int fanout, int i) { return to_py_int(k_i(relays, fanout, i)); },
        py::arg("H"), py::arg("r"), py::arg("i"));
    m.def(
        "count_z",
        [](int relays, int fanout, int t) {
            return to_py_int(count_z(relays, fanout, t));
        },
        py::arg("H"), py::arg("r"), py::arg("t"));
    m.def(
        "per_user_incidence",
        [](int relays, int fanout, int t) {
            return to_py_int(per_user_incidence(relays, fanout, t));
        },
        py::arg("H"), py::arg("r"), py::arg("t"));

    m.def(
        "memory_symmetric",
        [](int files, int relays, int fanout, int gain) {
            return to_fraction(analysis::memory_symmetric(files, relays, fanout, gain));
        },
        py::arg("N"), py::arg("H"), py::arg("r"), py::arg("g"));
    m.def(
        "memory_asymmetric",
        [](int files, int relays, int fanout, int gain) {
            return to_fraction(analysis::memory_asymmetric(files, relays, fanout, gain));
        },
        py::arg("N"), py::arg("H"), py::arg("r"), py::arg("g"));
    m.def(
        "load_at",
        [](int files, int relays, int fanout, int gain, py::object memory) {
            return to_fraction(
                analysis::load_at(files, relays, fanout, gain, rat_from(memory)));
        },
        py::arg("N"), py::arg("H"), py::arg("r"), py::arg("g"), py::arg("M"));
    m.def(
        "compare_memories",
        [](int relays, int fanout, int files) {
            auto report = analysis::compare_memories(relays, fanout, files);
            py::dict out;
            out["K1"] = report.users_per_relay;
            out["K2"] = report.users_per_relay2;
            out["equality_threshold"] = report.equality_threshold;
            py::list rows;
            for (const auto& row : report.rows) {
                py::dict r;
                r["g"] = row.gain;
                r["M_symmetric"] = to_fraction(row.m_symmetric);
                r["M_asymmetric"] = to_fraction(row.m_asymmetric);
                r["equal"] = row.equal;
                rows.append(r);
            }
            out["rows"] = rows;
            return out;
        },
        py::arg("H"), py::arg("r"), py::arg("N") = 1);
    m.def(
        "envelope",
        [](const std::vector<std::pair<py::object, py::object>>& raw) {
            std::vector<analysis::SchemePoint> points;
            for (const auto& [m_obj, r_obj] : raw)
                points.push_back({"points", 0, rat_from(m_obj), rat_from(r_obj), 0});
            auto curve = analysis::envelope(std::move(points));
            py::list out;
            for (const auto& [mem, load] : curve.envelope)
                out.append(py::make_tuple(to_fraction(mem), to_fraction(load)));
            return out;
        },
        py::arg("points"),
        "lower convex envelope vertices of (memory, load) points");

    m.def(
        "mds_encode",
        [](int n, int k, const std::vector<py::bytes>& message) {
            MdsCode code = make_mds_code(n, k);
            std::vector<std::vector<std::uint8_t>> pieces;
            pieces.reserve(message.size());
            for (const auto& b : message) pieces.push_back(to_bytes_vec(b));
            py::list out;
            for (const auto& blk : mds_encode(code, pieces))
                out.append(py::make_tuple(blk.index, to_py_bytes(blk.payload)));
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("message"));
    m.def(
        "mds_decode",
        [](int n, int k,
           const std::vector<std::pair<int, py::bytes>>& blocks) {
            MdsCode code = make_mds_code(n, k);
            std::vector<CodedSymbolBlock> in;
            in.reserve(blocks.size());
            for (const auto& [idx, payload] : blocks)
                in.push_back({idx, to_bytes_vec(payload)});
            py::list out;
            for (const auto& piece : mds_decode(code, in))
                out.append(to_py_bytes(piece));
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("blocks"));

    m.def("simulate", &simulate, py::arg("H"), py::arg("r"), py::arg("scheme"),
          py::arg("g") = 0, py::arg("cache_fraction") = std::string(),
          py::arg("N") = 0, py::arg("B") = 1, py::arg("demand") = py::none(),
          py::arg("seed") = 1,
          "place, deliver and decode one configuration; returns exact loads");

    m.def(
        "sweep_csv",
        [](int relays, int fanout, int files, int g_min, int g_max, int grid) {
            if (g_max <= 0)
                g_max = static_cast<int>(to_long(k_i(relays, fanout, 1)));
            auto result = sweep::run(
                relays, fanout, files, g_min, g_max,
                {schemes::SchemeKind::Symmetric, schemes::SchemeKind::Asymmetric},
                grid);
            std::ostringstream out;
            sweep::write_csv(out, result);
            return out.str();
        },
        py::arg("H"), py::arg("r"), py::arg("N"), py::arg("g_min") = 1,
        py::arg("g_max") = 0, py::arg("grid") = 200);

    m.def(
        "verify_network",
        [](int relays, int fanout, std::uint64_t seed, int jobs) {
            verify::Options options;
            options.seed = seed;
            options.jobs = jobs;
            py::list out;
            for (const auto& res : verify::verify_network(relays, fanout, options))
                out.append(py::make_tuple(res.name, res.pass, res.detail));
            return out;
        },
        py::arg("H"), py::arg("r"), py::arg("seed") = 1, py::arg("jobs") = 1,
        "counting, memory-comparison and simulation checks for one network");

    m.def(
        "min_block_size",
        [](int relays, int fanout, const std::string& scheme, int gain,
           const std::string& cache_fraction) {
            schemes::SchemeConfig config;
            config.kind = schemes::scheme_from_name(scheme);
            if (config.kind == schemes::SchemeKind::Routing)
                config.cache_fraction = parse_fraction(cache_fraction);
            else
                config.gain = gain;
            return schemes::min_block_size(build(relays, fanout, 1, 0), config);
        },
        py::arg("H"), py::arg("r"), py::arg("scheme"), py::arg("g") = 0,
        py::arg("cache_fraction") = std::string("0"));
}
