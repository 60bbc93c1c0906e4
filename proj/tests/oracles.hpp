#pragma once

// Straightforward reference implementations, written without sharing code
// with the library, used to cross-check the optimised versions.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace oracle {

using Doc = std::vector<std::string>;

inline std::vector<std::string> ngrams(const Doc& d, int n) {
    std::vector<std::string> out;
    for (int i = 0; i + n <= static_cast<int>(d.size()); ++i) {
        std::string g;
        for (int j = 0; j < n; ++j) g += d[i + j] + '\x1f';
        out.push_back(g);
    }
    return out;
}

inline double distinct(const std::vector<Doc>& docs, int n) {
    std::vector<std::string> all;
    for (const auto& d : docs)
        for (auto& g : ngrams(d, n)) all.push_back(g);
    const double total = static_cast<double>(all.size());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return static_cast<double>(all.size()) / total;
}

inline long count_of(const std::vector<std::string>& v, const std::string& g) {
    return std::count(v.begin(), v.end(), g);
}

// BLEU-n of each document against every other document, averaged.
inline double self_bleu(const std::vector<Doc>& docs, int n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const Doc& hyp = docs[i];
        if (hyp.empty()) continue;
        double log_p = 0.0;
        bool zero = false;
        for (int k = 1; k <= n; ++k) {
            const auto h = ngrams(hyp, k);
            if (h.empty()) {
                zero = true;
                break;
            }
            std::vector<std::string> uniq = h;
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            long matched = 0;
            for (const auto& g : uniq) {
                long best = 0;
                for (std::size_t j = 0; j < docs.size(); ++j)
                    if (j != i) best = std::max(best, count_of(ngrams(docs[j], k), g));
                matched += std::min(count_of(h, g), best);
            }
            double p = static_cast<double>(matched) / static_cast<double>(h.size());
            if (matched == 0) {
                if (k == 1) {
                    zero = true;
                    break;
                }
                p = 1.0 / (static_cast<double>(h.size()) + 1.0);
            }
            log_p += std::log(p);
        }
        if (zero) continue;
        // closest reference length, shorter wins a tie
        long best_len = -1;
        for (std::size_t j = 0; j < docs.size(); ++j) {
            if (j == i) continue;
            const long len = static_cast<long>(docs[j].size());
            const long hl = static_cast<long>(hyp.size());
            if (best_len < 0 || std::labs(len - hl) < std::labs(best_len - hl) ||
                (std::labs(len - hl) == std::labs(best_len - hl) && len < best_len))
                best_len = len;
        }
        const double c = static_cast<double>(hyp.size());
        const double bp = c >= static_cast<double>(best_len) ? 1.0 : std::exp(1.0 - best_len / c);
        sum += bp * std::exp(log_p / n);
    }
    return sum / static_cast<double>(docs.size());
}

struct Recursion {
    std::vector<double> agent;
    std::vector<double> traveler;
    bool agreed = false;
    double final_price = 0.0;
};

// Closed-form steps with per-party round counters, mirrored traveler form,
// closure when the traveler is within phi of the agent.
inline Recursion recursion(double pt, double pa, double ca, double ct, double phi, int max_rounds, double floor) {
    Recursion r;
    r.agent.push_back(pa);
    r.traveler.push_back(pt);
    auto closes = [&] { return pt >= (1.0 - phi) * pa; };
    if (closes()) {
        r.agreed = true;
        r.final_price = pa;
        return r;
    }
    for (int k = 1; k <= max_rounds; ++k) {
        pa = std::max(floor, pt + (pa - pt) * std::exp(-ca * k));
        r.agent.push_back(pa);
        if (closes()) {
            r.traveler.push_back(pt);
            r.agreed = true;
            r.final_price = pa;
            return r;
        }
        pt = pa - (pa - pt) * std::exp(-ct * k);
        r.traveler.push_back(pt);
        if (closes()) {
            r.agreed = true;
            r.final_price = pa;
            return r;
        }
    }
    r.final_price = pa;
    return r;
}

}  // namespace oracle
