#include "tvr/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace tvr {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_)
        if (p <= 0) throw std::invalid_argument("partition parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int Partition::size() const {
    int s = 0;
    for (int p : parts_) s += p;
    return s;
}

int Partition::multiplicity(int j) const { return static_cast<int>(std::count(parts_.begin(), parts_.end(), j)); }

Partition Partition::conjugate() const {
    std::vector<int> c;
    if (parts_.empty()) return Partition();
    for (int j = 1; j <= parts_.front(); ++j) {
        int cnt = 0;
        for (int p : parts_)
            if (p >= j) ++cnt;
        c.push_back(cnt);
    }
    return Partition(std::move(c));
}

std::string Partition::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << "]";
    return os.str();
}

Partition Partition::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("partition must look like [3,1,1]: '" + text + "'");
    std::vector<int> parts;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty part in '" + text + "'");
        std::size_t used = 0;
        int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad part '" + item + "'");
        parts.push_back(v);
    }
    std::vector<int> sorted = parts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    if (sorted != parts) throw std::invalid_argument("partition parts must be weakly decreasing: '" + text + "'");
    return Partition(std::move(parts));
}

const PartitionStats& partition_stats(const Partition& mu) {
    static std::mutex m;
    static std::map<std::vector<int>, PartitionStats> memo;
    std::lock_guard<std::mutex> lock(m);
    auto it = memo.find(mu.parts());
    if (it != memo.end()) return it->second;
    PartitionStats s;
    s.size = mu.size();
    s.length = mu.length();
    const auto& p = mu.parts();
    for (std::size_t i = 0; i < p.size();) {
        std::size_t j = i;
        while (j < p.size() && p[j] == p[i]) ++j;
        BigInt f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(j - i));
        s.aut *= f;
        i = j;
    }
    s.z = s.aut;
    for (int v : p) s.z *= v;
    for (std::size_t i = 0; i < p.size(); ++i) s.kappa += static_cast<long>(p[i]) * (p[i] - 2 * static_cast<long>(i + 1) + 1);
    return memo.emplace(mu.parts(), s).first->second;
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    if (n < 0) return out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxp) {
        if (rest == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rest, maxp); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

int total_size(const PartitionTriple& t) { return t[0].size() + t[1].size() + t[2].size(); }
int total_length(const PartitionTriple& t) { return t[0].length() + t[1].length() + t[2].length(); }

BigInt triple_aut(const PartitionTriple& t) {
    return partition_stats(t[0]).aut * partition_stats(t[1]).aut * partition_stats(t[2]).aut;
}

std::string triple_to_string(const PartitionTriple& t) {
    return "[" + t[0].to_string() + "|" + t[1].to_string() + "|" + t[2].to_string() + "]";
}

PartitionTriple parse_triple(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("triple must look like [[2,1]|[]|[1]]: '" + text + "'");
    std::string body = s.substr(1, s.size() - 2);
    PartitionTriple t;
    std::size_t start = 0;
    for (int leg = 0; leg < 3; ++leg) {
        std::size_t bar = body.find('|', start);
        if ((leg < 2) != (bar != std::string::npos)) throw std::invalid_argument("triple needs three legs: '" + text + "'");
        std::string part = body.substr(start, leg < 2 ? bar - start : std::string::npos);
        t[leg] = Partition::parse(part);
        start = bar + 1;
    }
    return t;
}

std::vector<PartitionTriple> enumerate_triples(int max_total_size) {
    std::vector<PartitionTriple> out;
    for (int n = 1; n <= max_total_size; ++n)
        for (int s1 = n; s1 >= 0; --s1)
            for (int s2 = n - s1; s2 >= 0; --s2) {
                int s3 = n - s1 - s2;
                for (const auto& p1 : partitions_of(s1))
                    for (const auto& p2 : partitions_of(s2))
                        for (const auto& p3 : partitions_of(s3)) out.push_back({p1, p2, p3});
            }
    return out;
}

}  // namespace tvr
