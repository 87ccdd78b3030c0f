// Random class hierarchies, returned together with the raw edge list they
// were built from so tests can compute subtype facts without consulting any
// production code.

#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

struct GenHierarchy {
    std::string source;                     // declarations only, no members
    std::vector<std::string> names;         // declaration order
    std::vector<bool> interface_;           // per declaration
    std::vector<std::vector<int>> parents;  // direct supertypes, by index

    bool isInterface(int i) const { return interface_[static_cast<size_t>(i)]; }

    // Index and every index reachable downward through the recorded edges.
    std::set<int> cone(int root) const {
        std::set<int> seen{root};
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i = 0; i < static_cast<int>(names.size()); ++i) {
                if (seen.count(i)) continue;
                for (int p : parents[static_cast<size_t>(i)])
                    if (seen.count(p)) {
                        seen.insert(i);
                        grew = true;
                        break;
                    }
            }
        }
        return seen;
    }

    std::set<int> instantiableCone(int root) const {
        std::set<int> out;
        for (int i : cone(root))
            if (!isInterface(i)) out.insert(i);
        return out;
    }
};

// `n` declarations named T0..T{n-1}. T0 is always a plain concrete class;
// later entries are interfaces (no parents) or classes extending at most one
// earlier class and implementing at most two earlier interfaces. No members,
// so every class is concrete.
inline GenHierarchy randomHierarchy(std::mt19937_64& rng, int n) {
    auto pick = [&](int lo, int hi) {
        return static_cast<int>(rng() % static_cast<unsigned long long>(hi - lo + 1)) + lo;
    };
    GenHierarchy h;
    for (int i = 0; i < n; ++i) {
        std::string name = "T" + std::to_string(i);
        h.names.push_back(name);
        bool iface = i > 0 && pick(0, 9) < 3;
        h.interface_.push_back(iface);
        h.parents.emplace_back();
        if (iface) {
            h.source += "interface " + name + " {}\n";
            continue;
        }
        std::string decl = "class " + name;
        if (i > 0) {
            std::vector<int> classes, ifaces;
            for (int j = 0; j < i; ++j)
                (h.interface_[static_cast<size_t>(j)] ? ifaces : classes).push_back(j);
            if (!classes.empty() && pick(0, 9) < 7) {
                int sup = classes[static_cast<size_t>(pick(0, static_cast<int>(classes.size()) - 1))];
                h.parents.back().push_back(sup);
                decl += " extends " + h.names[static_cast<size_t>(sup)];
            }
            if (!ifaces.empty() && pick(0, 9) < 5) {
                std::set<int> chosen;
                int want = pick(1, 2);
                for (int k = 0; k < want; ++k)
                    chosen.insert(
                        ifaces[static_cast<size_t>(pick(0, static_cast<int>(ifaces.size()) - 1))]);
                decl += " implements ";
                bool first = true;
                for (int p : chosen) {
                    h.parents.back().push_back(p);
                    if (!first) decl += ", ";
                    decl += h.names[static_cast<size_t>(p)];
                    first = false;
                }
            }
        }
        h.source += decl + " {}\n";
    }
    return h;
}

}  // namespace testsupport
