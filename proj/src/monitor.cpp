#include "ofo/monitor.hpp"

#include <cmath>
#include <limits>

#include "ofo/errors.hpp"

namespace ofo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MonitorSet MonitorSet::standard(const Network& network) {
    MonitorSet set;
    const int slack = network.slack_index();
    for (int i = 0; i < static_cast<int>(network.buses.size()); ++i)
        if (i != slack) set.outputs.push_back({MonitoredOutput::Kind::bus_vm, i});
    for (int k = 0; k < static_cast<int>(network.branches.size()); ++k)
        if (network.branches[k].s_max > 0.0)
            set.outputs.push_back({MonitoredOutput::Kind::branch_flow, k});
    if (network.pcc_branch) {
        set.pcc_p_row = set.size();
        set.outputs.push_back({MonitoredOutput::Kind::pcc_p, *network.pcc_branch});
        set.pcc_q_row = set.size();
        set.outputs.push_back({MonitoredOutput::Kind::pcc_q, *network.pcc_branch});
    }
    return set;
}

Eigen::VectorXd MonitorSet::measure(const PowerFlowSolution& sol) const {
    Eigen::VectorXd y(size());
    for (int r = 0; r < size(); ++r) {
        const MonitoredOutput& o = outputs[r];
        switch (o.kind) {
            case MonitoredOutput::Kind::bus_vm: y(r) = std::abs(sol.v(o.index)); break;
            case MonitoredOutput::Kind::branch_flow: y(r) = sol.branch_s(o.index); break;
            case MonitoredOutput::Kind::pcc_p: y(r) = sol.branch_p(o.index); break;
            case MonitoredOutput::Kind::pcc_q: y(r) = sol.branch_q(o.index); break;
        }
    }
    return y;
}

Eigen::VectorXd MonitorSet::lower_bounds(const Network& network) const {
    Eigen::VectorXd lo(size());
    for (int r = 0; r < size(); ++r) {
        const MonitoredOutput& o = outputs[r];
        lo(r) = (o.kind == MonitoredOutput::Kind::bus_vm) ? network.buses[o.index].v_min : -kInf;
    }
    return lo;
}

Eigen::VectorXd MonitorSet::upper_bounds(const Network& network) const {
    Eigen::VectorXd hi(size());
    for (int r = 0; r < size(); ++r) {
        const MonitoredOutput& o = outputs[r];
        switch (o.kind) {
            case MonitoredOutput::Kind::bus_vm: hi(r) = network.buses[o.index].v_max; break;
            case MonitoredOutput::Kind::branch_flow: hi(r) = network.branches[o.index].s_max; break;
            default: hi(r) = kInf; break;
        }
    }
    return hi;
}

std::vector<std::string> MonitorSet::labels(const Network& network) const {
    std::vector<std::string> out;
    out.reserve(outputs.size());
    for (const MonitoredOutput& o : outputs) {
        switch (o.kind) {
            case MonitoredOutput::Kind::bus_vm:
                out.push_back("vm_" + std::to_string(network.buses[o.index].id));
                break;
            case MonitoredOutput::Kind::branch_flow:
                out.push_back("s_br" + std::to_string(o.index));
                break;
            case MonitoredOutput::Kind::pcc_p: out.push_back("pcc_p"); break;
            case MonitoredOutput::Kind::pcc_q: out.push_back("pcc_q"); break;
        }
    }
    return out;
}

} // namespace ofo
