#include "cmheight/characters.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace cmheight::dirichlet {

long gcd(long a, long b) { return std::gcd(a, b); }
long lcm(long a, long b) { return std::lcm(a, b); }

long mod(long a, long n) {
    long r = a % n;
    return r < 0 ? r + n : r;
}

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> f;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

long euler_phi(long n) {
    long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

namespace {

long powmod(long a, long k, long n) {
    long r = 1 % n;
    a = mod(a, n);
    while (k > 0) {
        if (k & 1) r = r * a % n;
        a = a * a % n;
        k >>= 1;
    }
    return r;
}

long mult_order(long a, long n) {
    long k = 1, x = mod(a, n);
    while (x != 1 % n) {
        x = x * a % n;
        ++k;
    }
    return k;
}

long smallest_primitive_root_mod_p2(long p) {
    long q = p * p;
    long target = p * (p - 1);
    for (long g = 2; g < q; ++g) {
        if (g % p == 0) continue;
        if (mult_order(g, q) == target) return g;
    }
    throw ConsistencyError("no primitive root found");
}

// x = a mod m1, x = b mod m2 with gcd(m1, m2) = 1.
long crt(long a, long m1, long b, long m2) {
    for (long x = mod(a, m1); x < m1 * m2; x += m1)
        if (x % m2 == mod(b, m2)) return x;
    throw ConsistencyError("crt failed");
}

// Residue mod n that is g mod q and 1 mod n/q.
long lift_component(long g, long q, long n) {
    if (q == n) return mod(g, n);
    return crt(g, q, 1, n / q);
}

}  // namespace

UnitGroup::UnitGroup(long n) : n_(n) {
    if (n < 1) throw DomainError("modulus must be positive");
    iota_ = mod(-1, n);
    for (auto [p, e] : factorize(n)) {
        long q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        if (p == 2) {
            if (e >= 2) gens_.push_back({lift_component(q - 1, q, n), 2, 2});
            if (e >= 3) gens_.push_back({lift_component(5, q, n), q / 4, 2});
        } else {
            long g = smallest_primitive_root_mod_p2(p);
            gens_.push_back({lift_component(g, q, n), q / p * (p - 1), p});
        }
    }
    for (const auto& c : gens_) exponent_ = std::lcm(exponent_, c.order);

    index_.assign(n, -1);
    for (long a = 0; a < n; ++a)
        if (std::gcd(a, n) == 1) elements_.push_back(a);
    if (n == 1) elements_ = {0};
    for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = static_cast<long>(i);

    dlogs_.assign(elements_.size(), std::vector<long>(gens_.size(), 0));
    std::vector<long> x(gens_.size(), 0);
    std::size_t visited = 0;
    while (true) {
        long a = 1 % n;
        for (std::size_t i = 0; i < gens_.size(); ++i) a = a * powmod(gens_[i].generator, x[i], n) % n;
        long idx = index_[a];
        if (idx < 0) throw ConsistencyError("generator product is not a unit");
        dlogs_[idx] = x;
        ++visited;
        bool done = true;
        for (std::size_t i = gens_.size(); i-- > 0;) {
            if (++x[i] < gens_[i].order) {
                done = false;
                break;
            }
            x[i] = 0;
        }
        if (done) break;
    }
    if (visited != elements_.size()) throw ConsistencyError("cyclic decomposition does not cover the group");
}

bool UnitGroup::contains(long a) const { return index_of(a) >= 0; }

long UnitGroup::index_of(long a) const { return index_[mod(a, n_)]; }

const std::vector<long>& UnitGroup::dlog(long a) const {
    long i = index_of(a);
    if (i < 0) throw DomainError("dlog of a non-unit");
    return dlogs_[i];
}

long UnitGroup::mul(long a, long b) const { return mod(a, n_) * mod(b, n_) % n_; }

long UnitGroup::inverse(long a) const { return power(a, order() - 1); }

long UnitGroup::power(long a, long k) const { return powmod(a, k, n_); }

UnitGroupPtr unit_group_any(long n) {
    static std::mutex mu;
    static std::map<long, UnitGroupPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto g = std::make_shared<const UnitGroup>(n);
    cache.emplace(n, g);
    return g;
}

UnitGroupPtr unit_group(long n) {
    if (n < 3) throw DomainError("unit_group: modulus must be at least 3");
    return unit_group_any(n);
}

ResidueCharacter::ResidueCharacter(UnitGroupPtr group, std::vector<long> exponents)
    : group_(std::move(group)), exps_(std::move(exponents)) {
    const auto& gens = group_->generators();
    if (exps_.size() != gens.size()) throw DomainError("exponent vector has wrong length");
    long L = group_->exponent();
    long g = L;
    weights_.resize(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        exps_[i] = mod(exps_[i], gens[i].order);
        weights_[i] = exps_[i] * (L / gens[i].order);
        g = std::gcd(g, weights_[i]);
    }
    order_ = L / g;
    scale_ = L / order_;
}

long ResidueCharacter::value_exponent(long a) const {
    long idx = group_->index_of(a);
    if (idx < 0) return -1;
    const auto& d = group_->dlog(a);
    long L = group_->exponent();
    long k = 0;
    for (std::size_t i = 0; i < d.size(); ++i) k = (k + weights_[i] * d[i]) % L;
    return k / scale_;
}

Complex ResidueCharacter::value(long a, mpfr_prec_t prec) const {
    long k = value_exponent(a);
    if (k < 0) return Complex(prec);
    return root_of_unity(k, order_, prec);
}

ResidueCharacter ResidueCharacter::conj() const {
    std::vector<long> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = mod(-exps_[i], group_->generators()[i].order);
    return ResidueCharacter(group_, std::move(e));
}

ResidueCharacter ResidueCharacter::operator*(const ResidueCharacter& o) const {
    if (modulus() != o.modulus()) throw DomainError("character product across moduli");
    std::vector<long> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = exps_[i] + o.exps_[i];
    return ResidueCharacter(group_, std::move(e));
}

std::string ResidueCharacter::to_string() const {
    std::ostringstream os;
    os << "chi[" << modulus() << ";";
    for (std::size_t i = 0; i < exps_.size(); ++i) os << (i ? "," : "") << exps_[i];
    os << "]";
    return os.str();
}

bool operator<(const ResidueCharacter& a, const ResidueCharacter& b) {
    if (a.modulus() != b.modulus()) return a.modulus() < b.modulus();
    return a.exps_ < b.exps_;
}

std::vector<ResidueCharacter> characters(const UnitGroupPtr& G) {
    const auto& gens = G->generators();
    std::vector<ResidueCharacter> out;
    out.reserve(G->order());
    std::vector<long> e(gens.size(), 0);
    while (true) {
        out.emplace_back(G, e);
        bool done = true;
        for (std::size_t i = gens.size(); i-- > 0;) {
            if (++e[i] < gens[i].order) {
                done = false;
                break;
            }
            e[i] = 0;
        }
        if (done) break;
    }
    return out;
}

long conductor(const ResidueCharacter& chi) {
    const auto& gens = chi.group().generators();
    const auto& e = chi.exponents();
    long f = 1;
    std::size_t i = 0;
    while (i < gens.size()) {
        long p = gens[i].prime;
        if (p == 2) {
            bool odd_on_minus_one = e[i] != 0;
            long u_order = 1;
            if (i + 1 < gens.size() && gens[i + 1].prime == 2) {
                u_order = gens[i + 1].order / std::gcd(gens[i + 1].order, e[i + 1]);
                i += 2;
            } else {
                i += 1;
            }
            if (u_order > 1)
                f *= 4 * u_order;
            else if (odd_on_minus_one)
                f *= 4;
        } else {
            long d = gens[i].order / std::gcd(gens[i].order, e[i]);
            if (d > 1) {
                long pk = p;
                while (d % p == 0) {
                    d /= p;
                    pk *= p;
                }
                f *= pk;
            }
            i += 1;
        }
    }
    return f;
}

ResidueCharacter primitive_of(const ResidueCharacter& chi) {
    long f = conductor(chi);
    long n = chi.modulus();
    if (f == n) return chi;
    auto Gf = unit_group_any(f);
    const auto& gens = Gf->generators();
    std::vector<long> e(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        long h = gens[i].generator;
        long lift = h;
        while (std::gcd(lift, n) != 1) lift += f;
        long k = chi.value_exponent(lift);
        // chi(h) = exp(2 pi i k/ord chi) must have order dividing ord(h).
        long num = k * gens[i].order;
        if (num % chi.order() != 0) throw ConsistencyError("primitive_of: value order mismatch");
        e[i] = num / chi.order();
    }
    ResidueCharacter prim(Gf, std::move(e));
    if (conductor(prim) != f) throw ConsistencyError("primitive_of: result not primitive");
    return prim;
}

bool is_odd(const ResidueCharacter& chi) {
    long k = chi.value_exponent(chi.group().iota());
    return 2 * k == chi.order();
}

ResidueCharacter lift_to(const ResidueCharacter& chi, long m) {
    long n = chi.modulus();
    if (m % n != 0) throw DomainError("lift_to: target is not a multiple of the modulus");
    if (m == n) return chi;
    auto Gm = unit_group_any(m);
    const auto& gens = Gm->generators();
    std::vector<long> e(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        long k = chi.value_exponent(gens[i].generator % n);
        long num = k * gens[i].order;
        if (num % chi.order() != 0) throw ConsistencyError("lift_to: value order mismatch");
        e[i] = num / chi.order();
    }
    return ResidueCharacter(Gm, std::move(e));
}

}  // namespace cmheight::dirichlet
