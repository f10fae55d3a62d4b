#pragma once

#include <memory>
#include <optional>

#include <json.hpp>

#include "scatternet/analysis.hpp"

namespace scatternet {

// -----------------------------------------------------------------------------
// Run configuration schema
//
// The network description is a recursive tagged record mirroring NetworkNode;
// cells are tagged {type: free | pt_table | bragg | matrix}.  Scalar cell
// fields may hold the string "$<parameter>" instead of a number, which binds
// them to the sweep parameter; a pt_table cell is implicitly bound through its
// omega column.  Exactly one cell may carry the binding.
// -----------------------------------------------------------------------------

struct ValidationIssue {
    std::string path;     // JSON-pointer-style location
    std::string message;
};

/// A scalar that is either a literal or bound to the control parameter.
struct BindableScalar {
    Complex value{0.0, 0.0};
    bool bound = false;

    [[nodiscard]] Complex resolve(double omega) const {
        return bound ? Complex(omega, 0.0) : value;
    }
};

struct NodeBlueprint;

struct FreeCellBlueprint {
    double length = 0.0;
    BindableScalar k_forward;
    BindableScalar k_backward;
    double mass = 1.0;
};

struct PTTableCellBlueprint {
    PTCellTable table;
};

struct BraggCellBlueprint {
    BraggParams params;
    BindableScalar k;
};

struct MatrixCellBlueprint {
    Mat2 mat;
};

using CellBlueprint = std::variant<FreeCellBlueprint, PTTableCellBlueprint,
                                   BraggCellBlueprint, MatrixCellBlueprint>;

struct LeafBlueprint {
    CellBlueprint cell;
};

struct SerialBlueprint {
    std::vector<NodeBlueprint> children;
};

struct SerialRepeatBlueprint {
    std::shared_ptr<const NodeBlueprint> child;
    int count = 1;
};

struct VertexBlueprint {
    Complex contact_potential{0.0, 0.0};
    BindableScalar k;
    BindableScalar k_back;
    double mass = 1.0;
    bool k_given = false;       // otherwise inherit the first branch wavevector
    bool k_back_given = false;  // otherwise mirror k
    bool mass_given = false;    // otherwise use the configured default mass
};

struct BranchBlueprint {
    std::shared_ptr<const NodeBlueprint> node;
    BindableScalar k_in, k_in_back, k_out, k_out_back;
    double mass_in = 1.0;
    double mass_out = 1.0;
    bool mass_given = false;
};

struct ParallelBlueprint {
    std::vector<BranchBlueprint> branches;
    VertexBlueprint vertex_in;
    VertexBlueprint vertex_out;
    int reference = 1;
};

struct NodeBlueprint {
    std::variant<LeafBlueprint, SerialBlueprint, SerialRepeatBlueprint, ParallelBlueprint>
        value;
};

namespace detail {

[[nodiscard]] inline TransferMatrix instantiate_cell(const CellBlueprint& cell, double omega) {
    // free cells carry their own mass field; the other kinds have none
    if (const auto* free_cell = std::get_if<FreeCellBlueprint>(&cell)) {
        FreeSegment seg;
        seg.length = free_cell->length;
        seg.k_forward = free_cell->k_forward.resolve(omega);
        seg.k_backward = free_cell->k_backward.resolve(omega);
        seg.mass = free_cell->mass;
        return free_segment_matrix(seg);
    }
    if (const auto* table_cell = std::get_if<PTTableCellBlueprint>(&cell)) {
        return pt_cell(table_cell->table.eval(omega));
    }
    if (const auto* bragg_cell = std::get_if<BraggCellBlueprint>(&cell)) {
        return bragg_matrix(bragg_cell->params, bragg_cell->k.resolve(omega).real());
    }
    return TransferMatrix::from(std::get<MatrixCellBlueprint>(cell).mat);
}

[[nodiscard]] inline NetworkNode instantiate_node(const NodeBlueprint& bp, double omega,
                                                  const PhysicalConstants& consts) {
    if (const auto* leaf_bp = std::get_if<LeafBlueprint>(&bp.value)) {
        return leaf(instantiate_cell(leaf_bp->cell, omega));
    }
    if (const auto* chain = std::get_if<SerialBlueprint>(&bp.value)) {
        std::vector<NetworkNode> children;
        children.reserve(chain->children.size());
        for (const NodeBlueprint& child : chain->children) {
            children.push_back(instantiate_node(child, omega, consts));
        }
        return serial(std::move(children));
    }
    if (const auto* rep = std::get_if<SerialRepeatBlueprint>(&bp.value)) {
        return serial_repeat(instantiate_node(*rep->child, omega, consts), rep->count);
    }
    const auto& par = std::get<ParallelBlueprint>(bp.value);
    ParallelNode node;
    node.reference = par.reference;
    node.branches.reserve(par.branches.size());
    for (const BranchBlueprint& branch : par.branches) {
        BranchSpec spec;
        spec.node = make_node(instantiate_node(*branch.node, omega, consts));
        spec.k_in = branch.k_in.resolve(omega);
        spec.k_in_back = branch.k_in_back.resolve(omega);
        spec.k_out = branch.k_out.resolve(omega);
        spec.k_out_back = branch.k_out_back.resolve(omega);
        spec.mass_in = branch.mass_given ? branch.mass_in : consts.default_mass;
        spec.mass_out = branch.mass_given ? branch.mass_out : consts.default_mass;
        node.branches.push_back(spec);
    }
    const auto resolve_vertex = [&](const VertexBlueprint& v, bool input) {
        VertexParams vp;
        vp.contact_potential = v.contact_potential;
        vp.mass = v.mass_given ? v.mass : consts.default_mass;
        vp.hbar = consts.hbar;
        if (v.k_given) {
            vp.k = v.k.resolve(omega);
        } else if (!node.branches.empty()) {
            vp.k = input ? node.branches.front().k_in : node.branches.front().k_out;
        }
        vp.k_back = v.k_back_given ? v.k_back.resolve(omega) : vp.k;
        return vp;
    };
    node.vertex_in = resolve_vertex(par.vertex_in, true);
    node.vertex_out = resolve_vertex(par.vertex_out, false);
    return NetworkNode{node};
}

}  // namespace detail

// -----------------------------------------------------------------------------
// RunConfig
// -----------------------------------------------------------------------------

struct SweepSpec {
    bool present = false;
    std::string parameter = "omega";
    double lo = 0.0;
    double hi = 1.0;
    int steps = 2;
};

struct AnalysisSpec {
    enum class Kind { singularities, exceptional_points, atr };
    Kind kind = Kind::singularities;
    SingularityKind singularity_kind = SingularityKind::lasing;
    EPMode ep_mode = EPMode::single;
    int ep_n = 1;
    double tol = kDefaultFinderTol;
};

struct OutputSpec {
    std::string directory = ".";
    std::string basename = "run";
};

struct RunConfig {
    NodeBlueprint network;
    SweepSpec sweep;
    std::vector<AnalysisSpec> analyses;
    OutputSpec output;
    PhysicalConstants constants;
    int bound_cells = 0;

    [[nodiscard]] NetworkNode instantiate(double omega) const {
        return detail::instantiate_node(network, omega, constants);
    }

    [[nodiscard]] NetworkFamily family() const {
        // capture copies so the family outlives the config
        const NodeBlueprint bp = network;
        const PhysicalConstants consts = constants;
        return [bp, consts](double omega) {
            return detail::instantiate_node(bp, omega, consts);
        };
    }
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;

    [[nodiscard]] bool ok() const { return config.has_value() && errors.empty(); }
};

// -----------------------------------------------------------------------------
// Parser
// -----------------------------------------------------------------------------

namespace detail {

class ConfigParser {
public:
    explicit ConfigParser(ParseResult& result, std::string parameter)
        : result_(result), parameter_(std::move(parameter)) {}

    int bound_cells = 0;

    void error(const std::string& path, const std::string& message) {
        result_.errors.push_back({path, message});
    }

    void warn(const std::string& path, const std::string& message) {
        result_.warnings.push_back({path, message});
    }

    [[nodiscard]] double number(const nlohmann::json& obj, const char* key,
                                const std::string& path, double fallback,
                                bool required = false) {
        if (!obj.contains(key)) {
            if (required) {
                error(path + "/" + key, "missing required number");
            }
            return fallback;
        }
        const auto& j = obj.at(key);
        if (!j.is_number()) {
            error(path + "/" + key, "expected a number");
            return fallback;
        }
        return j.get<double>();
    }

    [[nodiscard]] int integer(const nlohmann::json& obj, const char* key,
                              const std::string& path, int fallback, bool required = false) {
        if (!obj.contains(key)) {
            if (required) {
                error(path + "/" + key, "missing required integer");
            }
            return fallback;
        }
        const auto& j = obj.at(key);
        if (!j.is_number_integer()) {
            error(path + "/" + key, "expected an integer");
            return fallback;
        }
        return j.get<int>();
    }

    [[nodiscard]] Complex complex_value(const nlohmann::json& j, const std::string& path) {
        if (j.is_number()) {
            return Complex(j.get<double>(), 0.0);
        }
        if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
            return Complex(j[0].get<double>(), j[1].get<double>());
        }
        error(path, "expected a number or [re, im] pair");
        return Complex(0.0, 0.0);
    }

    /// A scalar field that may carry the "$<parameter>" binding token.
    [[nodiscard]] BindableScalar bindable(const nlohmann::json& obj, const char* key,
                                          const std::string& path, const Complex& fallback,
                                          bool* cell_has_binding, bool required = false) {
        BindableScalar out;
        out.value = fallback;
        if (!obj.contains(key)) {
            if (required) {
                error(path + "/" + key, "missing required value");
            }
            return out;
        }
        const auto& j = obj.at(key);
        if (j.is_string()) {
            const std::string token = j.get<std::string>();
            if (token == "$" + parameter_) {
                out.bound = true;
                if (cell_has_binding != nullptr) {
                    *cell_has_binding = true;
                }
            } else {
                error(path + "/" + key,
                      "unknown binding '" + token + "' (sweep parameter is '" + parameter_ +
                          "')");
            }
            return out;
        }
        out.value = complex_value(j, path + "/" + key);
        return out;
    }

    [[nodiscard]] CellBlueprint parse_cell(const nlohmann::json& j, const std::string& path) {
        if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
            error(path, "cell must be an object with a string 'type'");
            return MatrixCellBlueprint{Mat2::identity()};
        }
        const std::string type = j.at("type").get<std::string>();
        bool has_binding = false;
        CellBlueprint out{MatrixCellBlueprint{Mat2::identity()}};
        if (type == "free") {
            FreeCellBlueprint cell;
            cell.length = number(j, "length", path, 0.0, true);
            if (j.contains("k")) {
                cell.k_forward = bindable(j, "k", path, Complex(0.0, 0.0), &has_binding);
                cell.k_backward = cell.k_forward;
            }
            if (j.contains("k_forward")) {
                cell.k_forward =
                    bindable(j, "k_forward", path, cell.k_forward.value, &has_binding);
            }
            if (j.contains("k_backward")) {
                cell.k_backward =
                    bindable(j, "k_backward", path, cell.k_backward.value, &has_binding);
            }
            if (!j.contains("k") && !j.contains("k_forward")) {
                error(path, "free cell requires 'k' or 'k_forward'/'k_backward'");
            }
            cell.mass = number(j, "mass", path, 1.0);
            out = cell;
        } else if (type == "pt_table") {
            PTTableCellBlueprint cell;
            const auto column = [&](const char* key, auto& dst) {
                using Value = typename std::decay_t<decltype(dst)>::value_type;
                if (!j.contains(key) || !j.at(key).is_array()) {
                    error(path + "/" + key, "missing required array");
                    return;
                }
                for (std::size_t i = 0; i < j.at(key).size(); ++i) {
                    const auto& item = j.at(key)[i];
                    const std::string item_path =
                        path + "/" + key + "/" + std::to_string(i);
                    if constexpr (std::is_same_v<Value, Complex>) {
                        dst.push_back(complex_value(item, item_path));
                    } else {
                        if (!item.is_number()) {
                            error(item_path, "expected a number");
                            dst.push_back({});
                            continue;
                        }
                        dst.push_back(item.get<double>());
                    }
                }
            };
            column("omega", cell.table.omega);
            column("a", cell.table.a);
            column("b", cell.table.b);
            column("c", cell.table.c);
            if (cell.table.omega.size() < 2 || cell.table.a.size() != cell.table.omega.size() ||
                cell.table.b.size() != cell.table.omega.size() ||
                cell.table.c.size() != cell.table.omega.size()) {
                error(path, "pt_table requires >= 2 rows with equally long columns");
            }
            has_binding = true;  // the omega column is the binding
            out = cell;
        } else if (type == "bragg") {
            BraggCellBlueprint cell;
            cell.params.n0 = number(j, "n0", path, 1.0, true);
            cell.params.n1 = number(j, "n1", path, 0.0, true);
            cell.params.n2 = number(j, "n2", path, 0.0, true);
            cell.params.grating = number(j, "grating", path, 1.0, true);
            cell.params.length = number(j, "length", path, 1.0, true);
            cell.k = bindable(j, "k", path, Complex(1.0, 0.0), &has_binding, true);
            out = cell;
        } else if (type == "matrix") {
            MatrixCellBlueprint cell;
            const auto entry = [&](const char* key, Complex& dst) {
                if (!j.contains(key)) {
                    error(path + "/" + key, "missing required matrix entry");
                    return;
                }
                dst = complex_value(j.at(key), path + "/" + key);
            };
            entry("m11", cell.mat.m11);
            entry("m12", cell.mat.m12);
            entry("m21", cell.mat.m21);
            entry("m22", cell.mat.m22);
            out = cell;
        } else {
            error(path + "/type",
                  "unknown cell type '" + type + "' (expected free|pt_table|bragg|matrix)");
        }
        if (has_binding) {
            ++bound_cells;
        }
        return out;
    }

    [[nodiscard]] VertexBlueprint parse_vertex(const nlohmann::json& j,
                                               const std::string& path) {
        VertexBlueprint v;
        if (!j.is_object()) {
            error(path, "vertex must be an object");
            return v;
        }
        if (j.contains("V0")) {
            v.contact_potential = complex_value(j.at("V0"), path + "/V0");
        }
        if (j.contains("k")) {
            v.k = bindable(j, "k", path, Complex(1.0, 0.0), nullptr);
            v.k_given = true;
        }
        if (j.contains("k_back")) {
            v.k_back = bindable(j, "k_back", path, Complex(1.0, 0.0), nullptr);
            v.k_back_given = true;
        }
        if (j.contains("mass")) {
            v.mass = number(j, "mass", path, 1.0);
            v.mass_given = true;
        }
        return v;
    }

    [[nodiscard]] NodeBlueprint parse_node(const nlohmann::json& j, const std::string& path) {
        NodeBlueprint bp{LeafBlueprint{MatrixCellBlueprint{Mat2::identity()}}};
        if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
            error(path, "network node must be an object with a string 'type'");
            return bp;
        }
        const std::string type = j.at("type").get<std::string>();
        if (type == "leaf") {
            if (!j.contains("cell")) {
                error(path + "/cell", "leaf requires a cell");
                return bp;
            }
            bp.value = LeafBlueprint{parse_cell(j.at("cell"), path + "/cell")};
        } else if (type == "serial") {
            SerialBlueprint chain;
            if (!j.contains("children") || !j.at("children").is_array() ||
                j.at("children").empty()) {
                error(path + "/children", "serial requires a non-empty children array");
                return bp;
            }
            for (std::size_t i = 0; i < j.at("children").size(); ++i) {
                chain.children.push_back(parse_node(j.at("children")[i],
                                                    path + "/children/" + std::to_string(i)));
            }
            bp.value = std::move(chain);
        } else if (type == "serial_repeat") {
            SerialRepeatBlueprint rep;
            if (!j.contains("cell")) {
                error(path + "/cell", "serial_repeat requires a cell (node)");
                return bp;
            }
            rep.child = std::make_shared<const NodeBlueprint>(
                parse_node(j.at("cell"), path + "/cell"));
            rep.count = integer(j, "count", path, 1, true);
            if (rep.count < 1) {
                error(path + "/count", "count must be >= 1");
                rep.count = 1;
            }
            bp.value = std::move(rep);
        } else if (type == "parallel") {
            ParallelBlueprint par;
            if (!j.contains("branches") || !j.at("branches").is_array() ||
                j.at("branches").empty()) {
                error(path + "/branches", "parallel requires a non-empty branches array");
                return bp;
            }
            const auto& branches = j.at("branches");
            if (branches.size() == 1) {
                warn(path + "/branches", "N=1 parallel is a pass-through");
            }
            for (std::size_t i = 0; i < branches.size(); ++i) {
                const std::string bpath = path + "/branches/" + std::to_string(i);
                const auto& bj = branches[i];
                BranchBlueprint branch;
                if (!bj.is_object()) {
                    error(bpath, "branch must be an object");
                    continue;
                }
                if (bj.contains("node")) {
                    branch.node = std::make_shared<const NodeBlueprint>(
                        parse_node(bj.at("node"), bpath + "/node"));
                } else if (bj.contains("cell")) {
                    branch.node = std::make_shared<const NodeBlueprint>(NodeBlueprint{
                        LeafBlueprint{parse_cell(bj.at("cell"), bpath + "/cell")}});
                } else {
                    error(bpath, "branch requires 'node' or 'cell'");
                    continue;
                }
                // default branch wavevectors and mass: inherit a free cell's
                // values when the branch wraps one
                BindableScalar default_k{Complex(1.0, 0.0), false};
                BindableScalar default_k_back{Complex(1.0, 0.0), false};
                double default_mass = 1.0;
                bool mass_from_cell = false;
                if (const auto* leaf_bp = std::get_if<LeafBlueprint>(&branch.node->value)) {
                    if (const auto* free_cell =
                            std::get_if<FreeCellBlueprint>(&leaf_bp->cell)) {
                        default_k = free_cell->k_forward;
                        default_k_back = free_cell->k_backward;
                        default_mass = free_cell->mass;
                        mass_from_cell = true;
                    }
                }
                branch.k_in = bj.contains("k") ? bindable(bj, "k", bpath, default_k.value,
                                                          nullptr)
                                               : default_k;
                branch.k_in_back = bj.contains("k_back")
                                       ? bindable(bj, "k_back", bpath, default_k_back.value,
                                                  nullptr)
                                       : default_k_back;
                branch.k_out =
                    bj.contains("k_out") ? bindable(bj, "k_out", bpath, branch.k_in.value,
                                                    nullptr)
                                         : branch.k_in;
                branch.k_out_back = bj.contains("k_out_back")
                                        ? bindable(bj, "k_out_back", bpath,
                                                   branch.k_in_back.value, nullptr)
                                        : branch.k_in_back;
                branch.mass_given =
                    bj.contains("mass") || bj.contains("mass_out") || mass_from_cell;
                branch.mass_in = number(bj, "mass", bpath, default_mass);
                branch.mass_out = number(bj, "mass_out", bpath, branch.mass_in);
                par.branches.push_back(std::move(branch));
            }
            if (j.contains("vertex_in")) {
                par.vertex_in = parse_vertex(j.at("vertex_in"), path + "/vertex_in");
            }
            if (j.contains("vertex_out")) {
                par.vertex_out = parse_vertex(j.at("vertex_out"), path + "/vertex_out");
            }
            par.reference = integer(j, "reference", path, 1);
            if (par.reference < 1 || par.reference > static_cast<int>(par.branches.size())) {
                error(path + "/reference", "reference channel index out of range");
                par.reference = 1;
            }
            bp.value = std::move(par);
        } else {
            error(path + "/type", "unknown node type '" + type +
                                      "' (expected leaf|serial|serial_repeat|parallel)");
        }
        return bp;
    }

private:
    ParseResult& result_;
    std::string parameter_;
};

}  // namespace detail

/// Parses and validates a JSON run configuration, collecting every validation
/// problem instead of stopping at the first one.
[[nodiscard]] inline ParseResult parse_config(const std::string& text) {
    ParseResult result;
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        result.errors.push_back({"/", std::string("invalid JSON: ") + e.what()});
        return result;
    }
    if (!root.is_object()) {
        result.errors.push_back({"/", "top-level configuration must be an object"});
        return result;
    }

    RunConfig config;
    std::string parameter = "omega";
    if (root.contains("sweep") && root.at("sweep").is_object() &&
        root.at("sweep").contains("parameter") && root.at("sweep").at("parameter").is_string()) {
        parameter = root.at("sweep").at("parameter").get<std::string>();
    }
    detail::ConfigParser parser(result, parameter);

    if (!root.contains("network")) {
        parser.error("/network", "missing required network description");
    } else {
        config.network = parser.parse_node(root.at("network"), "/network");
    }

    if (root.contains("sweep")) {
        const auto& sj = root.at("sweep");
        if (!sj.is_object()) {
            parser.error("/sweep", "sweep must be an object");
        } else {
            config.sweep.present = true;
            config.sweep.parameter = parameter;
            config.sweep.lo = parser.number(sj, "lo", "/sweep", 0.0, true);
            config.sweep.hi = parser.number(sj, "hi", "/sweep", 1.0, true);
            config.sweep.steps = parser.integer(sj, "steps", "/sweep", 2, true);
            if (config.sweep.steps < 2) {
                parser.error("/sweep/steps", "steps must be >= 2");
            }
            if (!(config.sweep.lo < config.sweep.hi)) {
                parser.error("/sweep/lo", "sweep requires lo < hi");
            }
        }
    }

    if (root.contains("analyses")) {
        const auto& aj = root.at("analyses");
        if (!aj.is_array()) {
            parser.error("/analyses", "analyses must be an array");
        } else {
            for (std::size_t i = 0; i < aj.size(); ++i) {
                const std::string path = "/analyses/" + std::to_string(i);
                const auto& item = aj[i];
                if (!item.is_object() || !item.contains("kind") ||
                    !item.at("kind").is_string()) {
                    parser.error(path, "analysis must be an object with a string 'kind'");
                    continue;
                }
                AnalysisSpec spec;
                const std::string kind = item.at("kind").get<std::string>();
                const nlohmann::json opts =
                    item.contains("options") ? item.at("options") : nlohmann::json::object();
                spec.tol = parser.number(opts, "tol", path + "/options", kDefaultFinderTol);
                if (kind == "singularities") {
                    spec.kind = AnalysisSpec::Kind::singularities;
                    const std::string sk =
                        opts.contains("kind") && opts.at("kind").is_string()
                            ? opts.at("kind").get<std::string>()
                            : "lasing";
                    if (sk == "lasing") {
                        spec.singularity_kind = SingularityKind::lasing;
                    } else if (sk == "cpa") {
                        spec.singularity_kind = SingularityKind::cpa;
                    } else {
                        parser.error(path + "/options/kind", "expected lasing|cpa");
                    }
                } else if (kind == "exceptional_points") {
                    spec.kind = AnalysisSpec::Kind::exceptional_points;
                    const std::string mode =
                        opts.contains("mode") && opts.at("mode").is_string()
                            ? opts.at("mode").get<std::string>()
                            : "single";
                    if (mode == "single") {
                        spec.ep_mode = EPMode::single;
                    } else if (mode == "serial") {
                        spec.ep_mode = EPMode::serial;
                    } else if (mode == "parallel") {
                        spec.ep_mode = EPMode::parallel;
                    } else {
                        parser.error(path + "/options/mode",
                                     "expected single|serial|parallel");
                    }
                    spec.ep_n = parser.integer(opts, "N", path + "/options",
                                               spec.ep_mode == EPMode::single ? 1 : 2);
                    if (spec.ep_mode != EPMode::single && spec.ep_n < 2) {
                        parser.error(path + "/options/N", "coupled modes require N >= 2");
                    }
                } else if (kind == "atr") {
                    spec.kind = AnalysisSpec::Kind::atr;
                    spec.tol = parser.number(opts, "tol", path + "/options", kDefaultAtrTol);
                } else {
                    parser.error(path + "/kind",
                                 "unknown analysis kind '" + kind +
                                     "' (expected singularities|exceptional_points|atr)");
                    continue;
                }
                config.analyses.push_back(spec);
            }
        }
    }

    if (root.contains("constants")) {
        const auto& cj = root.at("constants");
        if (!cj.is_object()) {
            parser.error("/constants", "constants must be an object");
        } else {
            config.constants.hbar = parser.number(cj, "hbar", "/constants", 1.0);
            config.constants.e_charge = parser.number(cj, "e_charge", "/constants", 1.0);
            config.constants.c_light = parser.number(cj, "c_light", "/constants", 1.0);
            config.constants.default_mass =
                parser.number(cj, "default_mass", "/constants", 1.0);
            if (!(config.constants.hbar > 0.0) || !(config.constants.e_charge > 0.0) ||
                !(config.constants.c_light > 0.0) ||
                !(config.constants.default_mass > 0.0)) {
                parser.error("/constants", "constants must be strictly positive");
            }
        }
    }

    if (root.contains("output")) {
        const auto& oj = root.at("output");
        if (!oj.is_object()) {
            parser.error("/output", "output must be an object");
        } else {
            if (oj.contains("directory") && oj.at("directory").is_string()) {
                config.output.directory = oj.at("directory").get<std::string>();
            }
            if (oj.contains("basename") && oj.at("basename").is_string()) {
                config.output.basename = oj.at("basename").get<std::string>();
            }
        }
    }

    config.bound_cells = parser.bound_cells;
    if (config.sweep.present && parser.bound_cells != 1) {
        parser.error("/sweep/parameter",
                     "sweep parameter must be bound in exactly one cell (found " +
                         std::to_string(parser.bound_cells) + ")");
    }

    if (result.errors.empty()) {
        result.config = std::move(config);
    }
    return result;
}

}  // namespace scatternet
