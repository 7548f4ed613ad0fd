#include "tvr/intersection.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>

namespace tvr {

int TauSpec::psi_degree() const {
    int s = 0;
    for (int b : psi) s += b;
    return s;
}

int LambdaMonomial::degree() const {
    int s = 0;
    for (int i : indices) s += i;
    return s;
}

BigRat genus0_psi(const std::vector<int>& b) {
    int n = static_cast<int>(b.size());
    if (n < 3) throw std::invalid_argument("genus0_psi needs n >= 3; use unstable_convention");
    int s = 0;
    for (int x : b) {
        if (x < 0) return 0;
        s += x;
    }
    if (s != n - 3) return 0;
    BigRat r = factorial(static_cast<unsigned>(n - 3));
    for (int x : b) r /= factorial(static_cast<unsigned>(x));
    return r;
}

namespace {

std::mutex dvv_mutex;
std::map<std::pair<int, std::vector<int>>, BigRat> dvv_memo;

BigRat dvv_rec(int g, std::vector<int> k) {
    std::sort(k.begin(), k.end(), std::greater<>());
    int n = static_cast<int>(k.size());
    if (g < 0 || n == 0 || 2 * g - 2 + n <= 0) return 0;
    int s = 0;
    for (int x : k) {
        if (x < 0) return 0;
        s += x;
    }
    if (s != 3 * g - 3 + n) return 0;
    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return rat(1, 24);
    {
        std::lock_guard<std::mutex> lock(dvv_mutex);
        auto it = dvv_memo.find({g, k});
        if (it != dvv_memo.end()) return it->second;
    }
    const int k1 = k[0];
    std::vector<int> rest(k.begin() + 1, k.end());
    BigRat total = 0;
    for (std::size_t j = 0; j < rest.size(); ++j) {
        std::vector<int> t = rest;
        int kj = t[j];
        t[j] = k1 + kj - 1;
        if (t[j] < 0) continue;
        total += double_factorial_odd(k1 + kj) / double_factorial_odd(kj) * dvv_rec(g, t);
    }
    for (int r = 0; r <= k1 - 2; ++r) {
        int sidx = k1 - 2 - r;
        BigRat w = double_factorial_odd(r + 1) * double_factorial_odd(sidx + 1) / 2;
        std::vector<int> t = rest;
        t.push_back(r);
        t.push_back(sidx);
        BigRat part = dvv_rec(g - 1, t);
        const std::size_t m = rest.size();
        for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
            std::vector<int> I{r}, J{sidx};
            for (std::size_t i = 0; i < m; ++i) (mask >> i & 1 ? I : J).push_back(rest[i]);
            for (int g1 = 0; g1 <= g; ++g1) {
                BigRat x = dvv_rec(g1, I);
                if (is_zero(x)) continue;
                part += x * dvv_rec(g - g1, J);
            }
        }
        total += w * part;
    }
    total /= double_factorial_odd(k1 + 1);
    std::lock_guard<std::mutex> lock(dvv_mutex);
    dvv_memo.emplace(std::make_pair(g, k), total);
    return total;
}

}  // namespace

BigRat dvv_psi(const TauSpec& spec) { return dvv_rec(spec.genus, spec.psi); }

std::vector<LambdaMonomial> expand_T(int g) {
    static std::mutex m;
    static std::map<int, std::vector<LambdaMonomial>> memo;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
    }
    // Lambda(u) = sum_i (-1)^i lambda_i u^(g-i) at u = 1, a, -1-a.
    const PolyA u[3] = {PolyA(1), PolyA::variable(), PolyA{-1, -1}};
    std::map<std::vector<int>, PolyA> acc;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j)
            for (int k = 0; k <= g; ++k) {
                PolyA c = pow(u[0], g - i) * pow(u[1], g - j) * pow(u[2], g - k);
                if ((i + j + k) % 2) c = -c;
                std::vector<int> idx;
                for (int x : {i, j, k})
                    if (x > 0) idx.push_back(x);
                std::sort(idx.begin(), idx.end());
                acc[idx] += c;
            }
    std::vector<LambdaMonomial> out;
    for (auto& [idx, c] : acc)
        if (!c.is_zero()) out.push_back({idx, c});
    std::stable_sort(out.begin(), out.end(),
                     [](const LambdaMonomial& x, const LambdaMonomial& y) { return x.degree() < y.degree(); });
    std::lock_guard<std::mutex> lock(m);
    memo.emplace(g, out);
    return out;
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Genus0ClosedForm: return "genus0-closed-form";
        case Strategy::DvvPsiOnly: return "dvv-psi-only";
        case Strategy::BuiltinGenus1: return "builtin-genus1";
        case Strategy::ExternalTable: return "external-table";
        case Strategy::EoExtracted: return "eo-extracted";
    }
    return "?";
}

BigRat builtin_genus1_lambda1(const std::vector<int>& b) {
    int n = static_cast<int>(b.size());
    int s = 0;
    for (int x : b) s += x;
    if (n < 1 || s != n - 1) return 0;
    BigRat r = factorial(static_cast<unsigned>(n - 1)) / 24;
    for (int x : b) r /= factorial(static_cast<unsigned>(x));
    return r;
}

HodgeProvider::HodgeProvider(const HodgeProvider& o)
    : table_(o.table_), extracted_(o.extracted_), table_genera_(o.table_genera_) {}

HodgeProvider& HodgeProvider::operator=(const HodgeProvider& o) {
    if (this == &o) return *this;
    table_ = o.table_;
    extracted_ = o.extracted_;
    table_genera_ = o.table_genera_;
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.clear();
    return *this;
}

void HodgeProvider::add_table_entry(int g, std::vector<int> psi, std::vector<int> lambdas, const BigRat& value) {
    std::sort(psi.begin(), psi.end(), std::greater<>());
    std::sort(lambdas.begin(), lambdas.end());
    TableKey key{g, psi, lambdas};
    auto it = table_.find(key);
    if (it != table_.end()) {
        if (it->second != value) throw std::invalid_argument("conflicting duplicate table entry");
        return;
    }
    table_.emplace(std::move(key), value);
    table_genera_[g]++;
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.clear();
}

void HodgeProvider::load_table_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto ints = [](const std::string& field) {
        std::vector<int> v;
        std::stringstream ss(field);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
            if (item.empty()) continue;
            v.push_back(std::stoi(item));
        }
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ';')) fields.push_back(f);
        if (fields.size() != 4)
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected 4 ';'-separated fields");
        try {
            std::string value = fields[3];
            value.erase(std::remove_if(value.begin(), value.end(), ::isspace), value.end());
            add_table_entry(std::stoi(fields[0]), ints(fields[1]), ints(fields[2]), parse_bigrat(value));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void HodgeProvider::load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    load_table_text(buf.str());
}

void HodgeProvider::set_extracted(int g, std::vector<int> psi, const PolyA& bracket) {
    std::sort(psi.begin(), psi.end(), std::greater<>());
    extracted_[{g, psi}] = bracket;
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.clear();
}

bool HodgeProvider::has_extracted(int g, int n) const {
    for (const auto& [key, v] : extracted_)
        if (key.first == g && static_cast<int>(key.second.size()) == n) return true;
    return false;
}

std::vector<Strategy> HodgeProvider::strategies_for(int g) const {
    if (g == 0) return {Strategy::Genus0ClosedForm};
    std::vector<Strategy> s;
    if (g == 1) s = {Strategy::DvvPsiOnly, Strategy::BuiltinGenus1};
    if (g >= 2 && table_genera_.count(g)) s.push_back(Strategy::ExternalTable);
    for (const auto& [key, v] : extracted_)
        if (key.first == g) {
            s.push_back(Strategy::EoExtracted);
            break;
        }
    return s;
}

BigRat HodgeProvider::lambda_integral(int g, const std::vector<int>& psi, const std::vector<int>& lambdas) const {
    TauSpec spec{g, psi};
    int ldeg = 0;
    for (int i : lambdas) {
        if (i < 1 || i > g) return 0;
        ldeg += i;
    }
    if (!spec.stable()) throw std::invalid_argument("lambda_integral: unstable moduli space");
    if (spec.psi_degree() + ldeg != spec.dimension()) return 0;
    if (lambdas.empty() && g <= 1) return g == 0 ? genus0_psi(psi) : dvv_psi(spec);
    if (g == 1) {
        // lambda_1^2 = 0 on Mbar_{1,n}
        if (lambdas.size() == 1) return builtin_genus1_lambda1(psi);
        return 0;
    }
    std::vector<int> p = psi;
    std::sort(p.begin(), p.end(), std::greater<>());
    auto it = table_.find(TableKey{g, p, lambdas});
    if (it != table_.end()) return it->second;
    if (lambdas.empty()) return dvv_psi(spec);
    std::string idx;
    for (int i : lambdas) idx += (idx.empty() ? "" : ",") + std::to_string(i);
    std::string bs;
    for (int b : p) bs += (bs.empty() ? "" : ",") + std::to_string(b);
    throw ProviderGap("no source for genus " + std::to_string(g) + " psi (" + bs + ") lambda monomial (" + idx + ")");
}

RatFuncA HodgeProvider::correlator(int g, const std::vector<int>& psi) const {
    calls_++;
    if (g > 0) positive_genus_calls_++;
    TauSpec spec{g, psi};
    if (!spec.stable()) throw std::invalid_argument("correlator: unstable (g, n); use unstable_convention");
    if (g == 0) return RatFuncA(genus0_psi(psi));
    std::vector<int> p = psi;
    std::sort(p.begin(), p.end(), std::greater<>());
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find({g, p});
        if (it != memo_.end()) return it->second;
    }
    if (g >= 2) {
        auto it = extracted_.find({g, p});
        if (it != extracted_.end()) return RatFuncA(it->second);
        if (!table_genera_.count(g)) {
            if (spec.psi_degree() > spec.dimension()) return RatFuncA();
            throw ProviderGap("no source for genus " + std::to_string(g) + " with " + std::to_string(spec.n()) +
                              " points (load a table or extract brackets from the recursion)");
        }
    }
    PolyA acc;
    for (const auto& m : expand_T(g)) {
        BigRat v = lambda_integral(g, p, m.indices);
        if (!is_zero(v)) acc += m.coeff * v;
    }
    RatFuncA r(acc);
    if (!r.is_polynomial() || r.num().degree() > 3 * g)
        throw std::logic_error("correlator is not a polynomial of degree <= 3g");
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(std::make_pair(g, p), r);
    return r;
}

BigRat HodgeProvider::correlator_w(int g, const std::vector<int>& psi, const std::array<BigRat, 3>& w) const {
    TauSpec spec{g, psi};
    if (!spec.stable()) throw std::invalid_argument("correlator_w: unstable (g, n)");
    if (g == 0) return genus0_psi(psi);
    // Lambda(w) = sum_i (-1)^i lambda_i w^(g-i)
    BigRat acc = 0;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j)
            for (int k = 0; k <= g; ++k) {
                std::vector<int> idx;
                for (int x : {i, j, k})
                    if (x > 0) idx.push_back(x);
                std::sort(idx.begin(), idx.end());
                int deg = i + j + k;
                if (spec.psi_degree() + deg != spec.dimension()) continue;
                BigRat v = lambda_integral(g, psi, idx);
                if (is_zero(v)) continue;
                BigRat c = pow(w[0], g - i) * pow(w[1], g - j) * pow(w[2], g - k);
                if (deg % 2) c = -c;
                acc += c * v;
            }
    return acc;
}

}  // namespace tvr
