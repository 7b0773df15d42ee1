#include "cmheight/fields.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace cmheight::fields {

using dirichlet::mod;

std::vector<long> generate_subgroup(long n, const std::vector<long>& generators) {
    std::vector<char> in(n, 0);
    std::vector<long> H{1 % n};
    in[1 % n] = 1;
    for (std::size_t i = 0; i < H.size(); ++i) {
        for (long gen : generators) {
            long x = mod(H[i] * mod(gen, n), n);
            if (!in[x]) {
                in[x] = 1;
                H.push_back(x);
            }
        }
    }
    std::sort(H.begin(), H.end());
    return H;
}

namespace {

bool trivial_on(const ResidueCharacter& chi, const std::vector<long>& H) {
    for (long h : H)
        if (chi.value_exponent(h) != 0) return false;
    return true;
}

std::vector<long> greedy_generators(long n, const std::vector<long>& H) {
    std::vector<long> gens;
    std::vector<long> span{1 % n};
    for (long h : H) {
        if (std::binary_search(span.begin(), span.end(), h)) continue;
        gens.push_back(h);
        span = generate_subgroup(n, gens);
    }
    return gens;
}

}  // namespace

AbelianField AbelianField::from_subgroup(long n, const std::vector<long>& H_in) {
    auto G = dirichlet::unit_group_any(n);
    std::vector<long> H = H_in;
    for (long& h : H) h = mod(h, n);
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    for (long h : H)
        if (!G->contains(h)) throw DomainError("subgroup element is not a unit");
    if (generate_subgroup(n, H) != H) throw DomainError("residues do not form a subgroup");
    if (G->order() % static_cast<long>(H.size()) != 0) throw ConsistencyError("subgroup order");

    std::vector<ResidueCharacter> chars;
    long f = 1;
    for (auto& chi : dirichlet::characters(G)) {
        if (!trivial_on(chi, H)) continue;
        f = std::lcm(f, dirichlet::conductor(chi));
        chars.push_back(std::move(chi));
    }
    if (f != n) {
        std::vector<long> Hf;
        for (long h : H) Hf.push_back(mod(h, f));
        return from_subgroup(f, Hf);
    }

    AbelianField K;
    K.n_ = n;
    K.H_ = std::move(H);
    K.G_ = G;
    K.chars_ = std::move(chars);
    K.degree_ = G->order() / static_cast<long>(K.H_.size());
    if (static_cast<long>(K.chars_.size()) != K.degree_) throw ConsistencyError("Galois correspondence count");
    K.cm_ = n >= 3 && !K.contains(n - 1);
    K.gens_ = greedy_generators(n, K.H_);

    K.coset_of_.assign(n, -1);
    for (long a : G->elements()) {
        if (K.coset_of_[a] >= 0) continue;
        std::vector<long> c;
        for (long h : K.H_) c.push_back(mod(a * h, n));
        std::sort(c.begin(), c.end());
        for (long x : c) K.coset_of_[x] = static_cast<long>(K.cosets_.size());
        K.cosets_.push_back(std::move(c));
    }
    const long d = K.degree_;
    K.mul_.assign(d * d, 0);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
            K.mul_[i * d + j] = K.coset_of_[mod(K.cosets_[i][0] * K.cosets_[j][0], n)];
    K.iota_coset_ = K.coset_of_[mod(-1, n)];
    if (K.cm_) {
        std::vector<char> seen(d, 0);
        for (long i = 0; i < d; ++i) {
            if (seen[i]) continue;
            long j = K.coset_mul(K.iota_coset_, i);
            seen[i] = seen[j] = 1;
            K.pairs_.emplace_back(i, j);
        }
    }
    return K;
}

bool AbelianField::contains(long a) const { return std::binary_search(H_.begin(), H_.end(), mod(a, n_)); }

std::vector<ResidueCharacter> AbelianField::odd_characters() const {
    std::vector<ResidueCharacter> out;
    for (const auto& chi : chars_)
        if (dirichlet::is_odd(chi)) out.push_back(chi);
    return out;
}

long AbelianField::coset_index(long a) const {
    long i = coset_of_[mod(a, n_)];
    if (i < 0) throw DomainError("coset_index: not a unit");
    return i;
}

std::string AbelianField::to_string() const {
    std::ostringstream os;
    os << "K(n=" << n_ << ";H=<";
    for (std::size_t i = 0; i < gens_.size(); ++i) os << (i ? "," : "") << gens_[i];
    os << ">)";
    return os.str();
}

bool operator<(const AbelianField& a, const AbelianField& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.H_ < b.H_;
}

AbelianField make_field(long n, const std::vector<long>& generators, bool require_cm) {
    if (n < 3) throw DomainError("make_field: modulus must be at least 3");
    for (long g : generators)
        if (dirichlet::gcd(mod(g, n), n) != 1) throw DomainError("make_field: generator not coprime to modulus");
    std::vector<long> H = generate_subgroup(n, generators);
    if (require_cm && std::binary_search(H.begin(), H.end(), n - 1))
        throw DomainError("make_field: -1 lies in the subgroup, field is totally real");
    return AbelianField::from_subgroup(n, H);
}

AbelianField rationals() { return AbelianField::from_subgroup(1, {0}); }

AbelianField cyclotomic(long k) {
    if (k < 1) throw DomainError("cyclotomic: k must be positive");
    return AbelianField::from_subgroup(k, {1 % k});
}

AbelianField max_real_subfield(const AbelianField& E) {
    if (!E.is_cm()) throw DomainError("max_real_subfield: field is not CM");
    std::vector<long> gens = E.subgroup();
    gens.push_back(E.modulus() - 1);
    return AbelianField::from_subgroup(E.modulus(), generate_subgroup(E.modulus(), gens));
}

CMType::CMType(std::shared_ptr<const AbelianField> field, std::uint64_t mask)
    : field_(std::move(field)), mask_(mask) {
    if (!field_->is_cm()) throw DomainError("CM type on a non-CM field");
    const long g = field_->g();
    if (g > 63) throw DomainError("CM type mask limited to g <= 63");
    if (g < 64 && (mask >> g) != 0) throw DomainError("CM type mask out of range");
    const auto& pairs = field_->pairs();
    cosets_.reserve(g);
    for (long k = 0; k < g; ++k) {
        bool flip = (mask >> (g - 1 - k)) & 1;
        cosets_.push_back(flip ? pairs[k].second : pairs[k].first);
    }
}

std::vector<std::vector<long>> CMType::cosets() const {
    std::vector<std::vector<long>> out;
    for (long i : cosets_) out.push_back(field_->cosets()[i]);
    return out;
}

std::vector<bool> CMType::lifted() const {
    std::vector<bool> v(field_->degree(), false);
    for (long i : cosets_) v[i] = true;
    return v;
}

CMType CMType::conjugate() const {
    std::uint64_t full = (field_->g() == 64) ? ~0ULL : ((1ULL << field_->g()) - 1);
    return CMType(field_, mask_ ^ full);
}

std::uint64_t cm_type_count(const AbelianField& E) {
    if (!E.is_cm()) throw DomainError("cm_type_count: field is not CM");
    if (E.g() > 63) throw DomainError("cm_type_count: too many CM types");
    return 1ULL << E.g();
}

std::vector<CMType> cm_types(const std::shared_ptr<const AbelianField>& E) {
    std::uint64_t count = cm_type_count(*E);
    if (E->g() > 24) throw DomainError("cm_types: refusing to materialise more than 2^24 types");
    std::vector<CMType> out;
    out.reserve(count);
    for (std::uint64_t m = 0; m < count; ++m) out.emplace_back(E, m);
    return out;
}

std::uint64_t mask_of(const AbelianField& E, const std::vector<bool>& lifted) {
    const long g = E.g();
    std::uint64_t mask = 0;
    for (long k = 0; k < g; ++k) {
        auto [a, b] = E.pairs()[k];
        if (lifted[a] == lifted[b]) throw DomainError("mask_of: not a CM type");
        if (lifted[b]) mask |= 1ULL << (g - 1 - k);
    }
    return mask;
}

std::vector<long> stabilizer(const CMType& phi) {
    const AbelianField& E = phi.field();
    std::vector<bool> lift = phi.lifted();
    std::vector<long> out;
    for (long j = 0; j < E.degree(); ++j) {
        bool same = true;
        for (long i = 0; i < E.degree() && same; ++i)
            if (lift[i] && !lift[E.coset_mul(j, i)]) same = false;
        if (same) out.insert(out.end(), E.cosets()[j].begin(), E.cosets()[j].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

AbelianField reflex_field(const CMType& phi) {
    return AbelianField::from_subgroup(phi.field().modulus(), stabilizer(phi));
}

LogProduct discriminant_log(const AbelianField& K) {
    LogProduct r;
    for (const auto& chi : K.character_group()) r += LogProduct::of(dirichlet::conductor(chi));
    return r;
}

mpz_class discriminant_exact(const AbelianField& K) {
    mpz_class d = 1;
    for (const auto& chi : K.character_group()) d *= dirichlet::conductor(chi);
    if (K.is_cm() && (K.degree() / 2) % 2 == 1) d = -d;
    return d;
}

Real discriminant_log_value(const AbelianField& K, mpfr_prec_t prec) { return discriminant_log(K).value(prec); }

namespace {

std::vector<long> preimage(const AbelianField& K, long m) {
    std::vector<long> out;
    for (long a : dirichlet::unit_group_any(m)->elements())
        if (K.contains(mod(a, K.modulus()))) out.push_back(a);
    return out;
}

}  // namespace

AbelianField compositum(const AbelianField& K1, const AbelianField& K2) {
    long m = std::lcm(K1.modulus(), K2.modulus());
    std::vector<long> a = preimage(K1, m), b = preimage(K2, m), c;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
    if (m == 1) c = {0};
    return AbelianField::from_subgroup(m, c);
}

bool is_subfield(const AbelianField& K1, const AbelianField& K2) { return compositum(K1, K2) == K2; }

long roots_of_unity_order(const AbelianField& E) {
    long n = E.modulus();
    long best = 2;
    for (long k = 1; k <= 2 * n; ++k) {
        if ((2 * n) % k) continue;
        if (k > best && is_subfield(cyclotomic(k), E)) best = k;
    }
    return best;
}

bool contains_imag_quadratic(const AbelianField& E) {
    for (const auto& chi : E.character_group())
        if (chi.order() == 2 && dirichlet::is_odd(chi)) return true;
    return false;
}

std::vector<AbelianField> fields_of_conductor(long n) {
    auto G = dirichlet::unit_group_any(n);
    std::set<std::vector<long>> seen;
    std::vector<std::vector<long>> queue{{1 % n}};
    seen.insert(queue[0]);
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (long a : G->elements()) {
            if (std::binary_search(queue[i].begin(), queue[i].end(), a)) continue;
            std::vector<long> gens = queue[i];
            gens.push_back(a);
            std::vector<long> S = generate_subgroup(n, gens);
            if (seen.insert(S).second) queue.push_back(std::move(S));
        }
    }
    std::vector<AbelianField> out;
    for (const auto& S : seen) {
        AbelianField K = AbelianField::from_subgroup(n, S);
        if (K.modulus() == n) out.push_back(std::move(K));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cmheight::fields
