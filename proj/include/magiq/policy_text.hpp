#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "magiq/policy.hpp"

namespace magiq {

/// Line-oriented policy text. '#' starts a comment; blank lines are
/// skipped. Three record kinds:
///   <direction> <pattern> <budget>          contact rule
///   rcp <responder> <initiator> <q> <delta>
///   icp <initiator> <q_tot> <delta_tot> <m> <n>
struct PolicyFile {
    ContactPolicy cp;
    std::vector<ResponderPolicy> rcp;
    std::vector<InitiatorPolicy> icp;
};

inline Outcome<PolicyFile> parse_policy_text(const std::string& text) {
    PolicyFile out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        return err(Errc::scenario_parse_error, Party::none,
                   "policy line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hashpos = line.find('#');
        if (hashpos != std::string::npos) line.erase(hashpos);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;

        if (head == "send" || head == "receive") {
            ContactRule rule;
            rule.direction = head == "send" ? Direction::send : Direction::receive;
            std::uint64_t budget = 0;
            if (!(ls >> rule.pattern >> budget)) return fail("expected: direction pattern budget");
            if (!pattern_specificity(rule.pattern)) return fail("bad pattern " + rule.pattern);
            rule.budget = budget;
            out.cp.rules.push_back(rule);
        } else if (head == "rcp") {
            ResponderPolicy rp;
            if (!(ls >> rp.responder_aid >> rp.initiator_aid >> rp.q >> rp.delta))
                return fail("expected: rcp responder initiator q delta");
            if (rp.q < 1 || rp.delta < 1) return fail("rcp budgets must be >= 1");
            out.rcp.push_back(rp);
        } else if (head == "icp") {
            InitiatorPolicy ip;
            if (!(ls >> ip.initiator_aid >> ip.q_tot >> ip.delta_tot >> ip.chain_count >>
                  ip.chain_len))
                return fail("expected: icp initiator q_tot delta_tot m n");
            if (ip.q_tot != ip.chain_count * ip.chain_len)
                return fail("icp requires q_tot = m * n");
            if (ip.delta_tot < 1) return fail("icp time budget must be >= 1");
            out.icp.push_back(ip);
        } else {
            return fail("unknown record '" + head + "'");
        }
        std::string extra;
        if (ls >> extra) return fail("trailing tokens");
    }
    return out;
}

} // namespace magiq
