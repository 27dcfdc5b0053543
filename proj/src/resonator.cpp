#include "resonance/resonator.hpp"

#include "resonance/arith.hpp"
#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace resonance {

namespace {

constexpr std::size_t kBlock = 4096;

double coefficient_at_prime(const ResonatorSpec& spec, std::int64_t p) {
    const double sp = std::sqrt(static_cast<double>(p));
    double v = 0.0;
    switch (spec.scheme) {
    case Scheme::frequency_a:
        v = *spec.A / sp;
        break;
    case Scheme::theorem21:
    case Scheme::signed_theorem21:
    case Scheme::dirichlet_f:
    case Scheme::dirichlet_signed:
        v = spec.resolved_L() / (sp * std::log(static_cast<double>(p)));
        break;
    case Scheme::custom:
        throw DomainError("custom tables have no coefficient formula");
    }
    return is_signed(spec.scheme) ? -v : v;
}

bool odd_only(Scheme s) { return s == Scheme::dirichlet_f || s == Scheme::dirichlet_signed; }

std::vector<PrimeValue> window_primes(const ResonatorSpec& spec, const PrimeWindow& w) {
    std::vector<PrimeValue> out;
    if (!(w.hi >= 2.0) || w.hi < w.lo) return out;
    const auto hi = static_cast<std::int64_t>(std::floor(w.hi));
    if (hi < 2) return out;
    for (const std::int64_t p : arith::sieve_primes(hi).primes) {
        if (static_cast<double>(p) < w.lo) continue;
        if (odd_only(spec.scheme) && p == 2) continue;
        out.push_back({p, coefficient_at_prime(spec, p)});
    }
    return out;
}

std::string window_text(const PrimeWindow& w) {
    std::ostringstream os;
    os << "[" << format_double(w.lo) << ", " << format_double(w.hi) << "]";
    return os.str();
}

} // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::theorem21: return "theorem21";
    case Scheme::frequency_a: return "frequencyA";
    case Scheme::signed_theorem21: return "signed-theorem21";
    case Scheme::dirichlet_f: return "dirichlet-f";
    case Scheme::dirichlet_signed: return "dirichlet-signed";
    case Scheme::custom: return "custom";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (auto s : {Scheme::theorem21, Scheme::frequency_a, Scheme::signed_theorem21, Scheme::dirichlet_f,
                   Scheme::dirichlet_signed, Scheme::custom})
        if (to_string(s) == name) return s;
    throw DomainError("unknown scheme '" + std::string(name) + "'");
}

bool is_signed(Scheme s) { return s == Scheme::signed_theorem21 || s == Scheme::dirichlet_signed; }

double default_L(std::int64_t N) {
    if (N < 3) return 1.0;
    const double lg = std::log(static_cast<double>(N));
    return std::sqrt(lg * std::log(lg));
}

double ResonatorSpec::resolved_L() const { return L ? *L : default_L(N); }

PrimeWindow ResonatorSpec::default_window() const {
    switch (scheme) {
    case Scheme::frequency_a: {
        const double a = A.value_or(1.0);
        return {a * a, std::pow(static_cast<double>(N), 1.0 / (2.0 * a * a))};
    }
    case Scheme::custom:
        return {2.0, static_cast<double>(N)};
    default: {
        const double l = resolved_L();
        const double ll = std::log(l);
        return {l * l, std::exp(ll * ll)};
    }
    }
}

PrimeWindow ResonatorSpec::resolved_window() const { return window ? *window : default_window(); }

bool ResonatorSpec::admissible() const {
    if (scheme != Scheme::frequency_a) return true;
    const double a = A.value_or(0.0);
    return 10.0 * a * a * std::log(a) <= std::log(static_cast<double>(N));
}

void ResonatorSpec::validate() const {
    if (N < 1) throw DomainError("resonator: N must be >= 1");
    if (scheme != Scheme::custom && N < 2) throw DomainError("resonator: N must be >= 2");
    if (scheme == Scheme::frequency_a) {
        if (!A || !(*A > 0.0)) throw DomainError("resonator: frequencyA needs A > 0");
    } else if (L && !(*L > 0.0)) {
        throw DomainError("resonator: L must be > 0");
    }
    if (window && !(window->lo < window->hi))
        throw DomainError("resonator: window needs P0 < P1, got " + window_text(*window));
}

ResonatorSpec ResonatorSpec::with_sign(bool signed_variant) const {
    ResonatorSpec out = *this;
    switch (scheme) {
    case Scheme::theorem21:
    case Scheme::signed_theorem21:
        out.scheme = signed_variant ? Scheme::signed_theorem21 : Scheme::theorem21;
        break;
    case Scheme::dirichlet_f:
    case Scheme::dirichlet_signed:
        out.scheme = signed_variant ? Scheme::dirichlet_signed : Scheme::dirichlet_f;
        break;
    default:
        if (signed_variant) throw DomainError("scheme has no signed variant: " + std::string(to_string(scheme)));
    }
    return out;
}

std::string ResonatorSpec::summary() const {
    std::ostringstream os;
    os << to_string(scheme) << " N=" << N;
    if (scheme == Scheme::frequency_a)
        os << " A=" << format_double(A.value_or(0.0));
    else if (scheme != Scheme::custom)
        os << " L=" << format_double(resolved_L());
    os << " window=" << window_text(resolved_window());
    return os.str();
}

PrimeWindow desk_window(std::int64_t N, double c1, double c2) {
    const double l = default_L(N);
    return {c1 * l * l, c1 * c2 * l * l};
}

CoefficientTable CoefficientTable::build(const ResonatorSpec& spec) {
    spec.validate();
    if (spec.scheme == Scheme::custom) throw DomainError("build_table: custom scheme has no generator");

    CoefficientTable table;
    table.spec_ = spec;
    const PrimeWindow w = spec.resolved_window();
    table.primes_ = window_primes(spec, w);
    if (table.primes_.empty() && !spec.window)
        throw ConstructionError("resonator: default prime window " + window_text(w) +
                                " contains no prime for N=" + std::to_string(spec.N) +
                                "; supply an override window");

    struct Node {
        std::int64_t n;
        double r;
        std::vector<std::int64_t> primes;
    };
    std::vector<Node> found;
    std::vector<std::int64_t> stack_primes;
    const auto& pv = table.primes_;
    // depth-first over ascending primes, pruned once the product passes N
    auto dfs = [&](auto&& self, std::size_t start, std::int64_t n, double r) -> void {
        if (found.size() >= kMaxSupport)
            throw ResourceError("resonator: support exceeds 2^22 entries");
        found.push_back({n, r, stack_primes});
        for (std::size_t i = start; i < pv.size(); ++i) {
            if (pv[i].p > spec.N / n) break;
            stack_primes.push_back(pv[i].p);
            self(self, i + 1, n * pv[i].p, r * pv[i].r);
            stack_primes.pop_back();
        }
    };
    dfs(dfs, 0, 1, 1.0);
    std::sort(found.begin(), found.end(), [](const Node& a, const Node& b) { return a.n < b.n; });

    table.entries_.reserve(found.size());
    table.factor_offsets_.reserve(found.size() + 1);
    table.factor_offsets_.push_back(0);
    for (const auto& node : found) {
        table.entries_.push_back({node.n, node.r});
        for (auto p : node.primes) table.factor_data_.emplace_back(p, 1);
        table.factor_offsets_.push_back(table.factor_data_.size());
    }
    return table;
}

CoefficientTable CoefficientTable::from_entries(ResonatorSpec spec, std::vector<TableEntry> entries) {
    spec.validate();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].n < 1) throw DomainError("table keys must be positive");
        if (i > 0 && entries[i].n <= entries[i - 1].n) throw DomainError("table keys must be strictly increasing");
        if (entries[i].n > spec.N) throw DomainError("table key exceeds support bound N");
        if (!std::isfinite(entries[i].r)) throw DomainError("table coefficient is not finite");
    }
    if (entries.size() > kMaxSupport) throw ResourceError("resonator: support exceeds 2^22 entries");

    CoefficientTable table;
    table.spec_ = spec;
    table.entries_ = std::move(entries);
    if (spec.scheme == Scheme::custom) {
        for (const auto& e : table.entries_)
            if (e.n >= 2 && arith::mu_and_squarefree(e.n).squarefree && arith::factorize(e.n).factors.size() == 1)
                table.primes_.push_back({e.n, e.r});
    } else {
        table.primes_ = window_primes(spec, spec.resolved_window());
    }

    table.factor_offsets_.reserve(table.entries_.size() + 1);
    table.factor_offsets_.push_back(0);
    for (const auto& e : table.entries_) {
        for (const auto& f : arith::factorize(e.n).factors) table.factor_data_.push_back(f);
        table.factor_offsets_.push_back(table.factor_data_.size());
    }
    return table;
}

std::optional<std::size_t> CoefficientTable::index_of(std::int64_t n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const TableEntry& e, std::int64_t key) { return e.n < key; });
    if (it == entries_.end() || it->n != n) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
}

std::optional<double> CoefficientTable::find(std::int64_t n) const {
    if (auto i = index_of(n)) return entries_[*i].r;
    return std::nullopt;
}

std::span<const std::pair<std::int64_t, int>> CoefficientTable::factors(std::size_t i) const {
    return {factor_data_.data() + factor_offsets_[i], factor_offsets_[i + 1] - factor_offsets_[i]};
}

namespace {

// Calls fn(m) for every divisor m of entry i.
template <typename Fn>
void for_each_divisor(const CoefficientTable& table, std::size_t i, Fn&& fn) {
    const auto f = table.factors(i);
    std::vector<std::int64_t> divs{1};
    for (const auto& [p, a] : f) {
        const std::size_t base = divs.size();
        std::int64_t pk = 1;
        for (int j = 0; j < a; ++j) {
            pk *= p;
            for (std::size_t k = 0; k < base; ++k) divs.push_back(divs[k] * pk);
        }
    }
    for (auto m : divs) fn(m);
}

double reduce(const std::vector<CompensatedSum>& partials) {
    CompensatedSum total;
    for (const auto& p : partials) total += p;
    return total.value();
}

} // namespace

double numerator_exact(const CoefficientTable& table) {
    const auto entries = table.entries();
    auto partials = parallel::map_blocks<CompensatedSum>(entries.size(), kBlock, [&](std::size_t lo, std::size_t hi) {
        CompensatedSum acc;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto [n, rn] = entries[i];
            for_each_divisor(table, i, [&](std::int64_t m) {
                if (auto rm = table.find(m))
                    acc += *rm * rn / std::sqrt(static_cast<double>(n / m));
            });
        }
        return acc;
    });
    return reduce(partials);
}

double denominator_exact(const CoefficientTable& table) {
    CompensatedSum acc;
    for (const auto& e : table.entries()) acc += e.r * e.r;
    return acc.value();
}

double euler_product(const CoefficientTable& table, EulerForm form) {
    CompensatedSum log_sum;
    for (const auto& [p, r] : table.prime_values()) {
        const double f = std::fabs(r);
        const double sp = std::sqrt(static_cast<double>(p));
        double factor = 1.0;
        switch (form) {
        case EulerForm::plain: factor = 1.0 + f * f; break;
        case EulerForm::plus: factor = 1.0 + f * f + f / sp; break;
        case EulerForm::minus2: factor = 1.0 + f * f - 2.0 * f / sp; break;
        case EulerForm::fourth: factor = 1.0 + 4.0 * f * f + f * f * f * f; break;
        case EulerForm::cusp: factor = 1.0 + f * f * (1.0 + 1.0 / static_cast<double>(p)) + 2.0 * f / sp; break;
        }
        if (!(factor > 0.0))
            throw DomainError("euler_product: non-positive factor at p=" + std::to_string(p));
        log_sum += std::log(factor);
    }
    return std::exp(log_sum.value());
}

double rankin_tail_ratio(const CoefficientTable& table, double alpha) {
    if (!(alpha >= 0.0)) throw DomainError("rankin_tail_ratio: alpha must be >= 0");
    CompensatedSum log_ratio(-alpha * std::log(static_cast<double>(table.support_bound())));
    for (const auto& [p, r] : table.prime_values()) {
        const double f = std::fabs(r);
        const double pd = static_cast<double>(p);
        const double pa = std::pow(pd, alpha);
        const double sp = std::sqrt(pd);
        log_ratio += std::log(1.0 + pa * f * f + f * pa / sp);
        log_ratio += -std::log(1.0 + f * f + f / sp);
    }
    return std::exp(log_ratio.value());
}

AmGmCertificate amgm_upper_certificate(const CoefficientTable& table, std::optional<double> L) {
    const std::int64_t N = table.support_bound();
    if (N > kAmGmSieveCap)
        throw ResourceError("amgm_upper_certificate: N=" + std::to_string(N) + " exceeds the sieve cap; use N <= " +
                            std::to_string(kAmGmSieveCap));
    const double l = L ? *L : table.spec().resolved_L();
    if (!(l > 0.0)) throw DomainError("amgm_upper_certificate: L must be > 0");

    auto g_prime_power = [l](std::int64_t p, int k) {
        const double pd = static_cast<double>(p);
        return std::min(1.0, l / (std::pow(pd, 0.5 * k) * std::log(pd)));
    };

    // prefix[x] = sum_{k <= x} g(k)/sqrt(k), g extended multiplicatively
    std::vector<double> prefix(static_cast<std::size_t>(N) + 1, 0.0);
    {
        const arith::SmallestFactorSieve sieve(std::max<std::int64_t>(N, 1));
        std::vector<double> g(static_cast<std::size_t>(N) + 1, 1.0);
        CompensatedSum run;
        for (std::int64_t k = 2; k <= N; ++k) {
            const std::int64_t p = sieve.smallest_factor(k);
            std::int64_t rest = k;
            int a = 0;
            while (rest % p == 0) {
                rest /= p;
                ++a;
            }
            g[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(rest)] * g_prime_power(p, a);
        }
        for (std::int64_t k = 1; k <= N; ++k) {
            run += g[static_cast<std::size_t>(k)] / std::sqrt(static_cast<double>(k));
            prefix[static_cast<std::size_t>(k)] = run.value();
        }
    }

    const auto entries = table.entries();
    auto partials = parallel::map_blocks<CompensatedSum>(entries.size(), kBlock, [&](std::size_t lo, std::size_t hi) {
        CompensatedSum acc;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto [n, r] = entries[i];
            double divisor_sum = 1.0;
            for (const auto& [p, a] : table.factors(i)) {
                double local = 1.0;
                for (int j = 1; j <= a; ++j)
                    local += 1.0 / (std::pow(static_cast<double>(p), 0.5 * j) * g_prime_power(p, j));
                divisor_sum *= local;
            }
            acc += r * r * (prefix[static_cast<std::size_t>(N / n)] + divisor_sum);
        }
        return acc;
    });

    AmGmCertificate cert;
    cert.bound = 0.5 * reduce(partials);
    cert.numerator = numerator_exact(table);
    cert.holds = std::fabs(cert.numerator) <= cert.bound * (1.0 + 1e-12);
    return cert;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("table: bad number '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("table: bad integer '" + std::string(s) + "'");
    return v;
}

} // namespace

void write_table(std::ostream& out, const CoefficientTable& table) {
    const auto& s = table.spec();
    const PrimeWindow w = s.resolved_window();
    out << "resonator-table v1 scheme=" << to_string(s.scheme) << " N=" << s.N
        << " L=" << (s.L ? format_double(*s.L) : std::string("default"))
        << " A=" << (s.A ? format_double(*s.A) : std::string("none"))
        << " P0=" << format_double(w.lo) << " P1=" << format_double(w.hi) << "\n";
    for (const auto& e : table.entries()) out << e.n << " " << format_double(e.r) << "\n";
}

CoefficientTable read_table(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DomainError("table: missing header");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "resonator-table" || version != "v1") throw DomainError("table: unrecognised header");

    std::map<std::string, std::string> fields;
    for (std::string tok; hs >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("table: bad header field '" + tok + "'");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    for (const char* key : {"scheme", "N", "L", "A", "P0", "P1"})
        if (!fields.count(key)) throw DomainError(std::string("table: header lacks ") + key);

    ResonatorSpec spec;
    spec.scheme = parse_scheme(fields["scheme"]);
    spec.N = parse_int(fields["N"]);
    if (fields["L"] != "default") spec.L = parse_double(fields["L"]);
    if (fields["A"] != "none") spec.A = parse_double(fields["A"]);
    if (spec.scheme != Scheme::custom)
        spec.window = PrimeWindow{parse_double(fields["P0"]), parse_double(fields["P1"])};

    std::vector<TableEntry> entries;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        const auto sp = line.find(' ');
        if (sp == std::string::npos) throw DomainError("table: bad line '" + line + "'");
        entries.push_back({parse_int(std::string_view(line).substr(0, sp)),
                           parse_double(std::string_view(line).substr(sp + 1))});
    }
    return CoefficientTable::from_entries(spec, std::move(entries));
}

} // namespace resonance
