#include "cmheight/colmez.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace cmheight::colmez {

namespace {

using Words = std::vector<std::uint64_t>;

Words make_words(long n) { return Words((n + 63) / 64, 0); }

void set_bit(Words& w, long i) { w[i >> 6] |= 1ULL << (i & 63); }

long popcount_and(const Words& a, const Words& b) {
    long c = 0;
    for (std::size_t i = 0; i < a.size(); ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

// S[sigma] = sum over nu in G/H of |nu Phi cap sigma nu Phi| (coset counts).
std::vector<long> a0_numerators(const AbelianField& E, const std::vector<long>& phi_cosets) {
    const long N = E.degree();
    std::vector<Words> T(N, make_words(N));
    for (long nu = 0; nu < N; ++nu)
        for (long c : phi_cosets) set_bit(T[nu], E.coset_mul(nu, c));
    std::vector<long> S(N, 0);
    for (long sigma = 0; sigma < N; ++sigma) {
        long s = 0;
        for (long nu = 0; nu < N; ++nu) s += popcount_and(T[nu], T[E.coset_mul(sigma, nu)]);
        S[sigma] = s;
    }
    return S;
}

// Least residues of the cosets of the subgroup S (sorted residues) in G.
std::vector<long> coset_representatives(const AbelianField& E, const std::vector<long>& S) {
    const long n = E.modulus();
    std::vector<char> seen(n, 0);
    std::vector<long> reps;
    for (long a : E.group()->elements()) {
        if (seen[a]) continue;
        reps.push_back(a);
        for (long s : S) seen[dirichlet::mod(a * s, n)] = 1;
    }
    return reps;
}

bool trivial_on(const ResidueCharacter& chi, const std::vector<long>& S) {
    for (long s : S)
        if (chi.value_exponent(s) != 0) return false;
    return true;
}

}  // namespace

std::map<long, mpq_class> a0_profile(const CMType& phi) {
    const AbelianField& E = phi.field();
    std::vector<long> S = a0_numerators(E, phi.coset_indices());
    std::vector<long> stab = fields::stabilizer(phi);
    std::map<long, mpq_class> out;
    for (long r : coset_representatives(E, stab)) {
        mpq_class q(S[E.coset_index(r)], E.degree());
        q.canonicalize();
        out.emplace(r, q);
    }
    return out;
}

ProfileEngine::ProfileEngine(std::shared_ptr<const AbelianField> E, const PrecisionContext& ctx)
    : E_(std::move(E)), ctx_(ctx) {
    if (!E_->is_cm()) throw DomainError("ProfileEngine: field is not CM");
    const mpfr_prec_t p = ctx_.work_prec();
    const auto& chars = E_->character_group();
    const long N = E_->degree();
    root_order_ = E_->group()->exponent();
    for (long k = 0; k < root_order_; ++k) roots_.push_back(root_of_unity(k, root_order_, p));
    chi_exp_.assign(chars.size(), std::vector<long>(N, 0));
    odd_index_.assign(chars.size(), -1);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const long scale = root_order_ / chars[i].order();
        for (long c = 0; c < N; ++c) chi_exp_[i][c] = chars[i].value_exponent(E_->cosets()[c][0]) * scale;
        bool odd = dirichlet::is_odd(chars[i]);
        chi_odd_.push_back(odd);
        if (!odd) continue;
        odd_index_[i] = static_cast<long>(odd_prim_.size());
        ResidueCharacter prim = dirichlet::primitive_of(chars[i]);
        Complex ld = lfun::l_log_deriv_at_zero(prim, ctx_);
        Real lf = log(Real(prim.modulus(), p));
        Complex w = ld;
        w.re += lf / 2;
        odd_prim_.push_back(std::move(prim));
        odd_logderiv_.push_back(std::move(ld));
        odd_weight_.push_back(std::move(w));
        odd_logf_.push_back(std::move(lf));
    }
}

std::map<long, mpq_class> ProfileEngine::a0(const CMType& phi) const { return a0_profile(phi); }

ColmezProfile ProfileEngine::profile(std::uint64_t mask) const { return profile(CMType(E_, mask)); }

ColmezProfile ProfileEngine::profile(const CMType& phi) const {
    const AbelianField& E = *E_;
    const mpfr_prec_t p = ctx_.work_prec();
    const long N = E.degree();
    const auto& chars = E.character_group();
    const Real& eps = ctx_.eps();

    ColmezProfile prof;
    prof.field = E_;
    prof.cm_type_mask = phi.mask();
    prof.stabilizer = fields::stabilizer(phi);
    std::vector<long> S = a0_numerators(E, phi.coset_indices());
    for (long r : coset_representatives(E, prof.stabilizer)) {
        mpq_class q(S[E.coset_index(r)], N);
        q.canonicalize();
        prof.a0.emplace(r, q);
    }

    // m(chi) = (1/N) sum_sigma A0(sigma) conj chi(sigma), A0 = S/N.
    mpq_class total(std::accumulate(S.begin(), S.end(), 0L), N * N);
    total.canonicalize();
    prof.trivial_multiplicity = total;
    mpq_class half_g(E.g(), 2);
    half_g.canonicalize();
    if (total != half_g) throw ConsistencyError("m(1) differs from g/2");

    std::vector<Complex> m(chars.size(), Complex(p));
    Real t(p);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        Complex& acc = m[i];
        for (long c = 0; c < N; ++c) {
            if (S[c] == 0) continue;
            long k = chi_exp_[i][c] ? root_order_ - chi_exp_[i][c] : 0;
            mpfr_mul_si(t.get(), roots_[k].re.get(), S[c], MPFR_RNDN);
            mpfr_add(acc.re.get(), acc.re.get(), t.get(), MPFR_RNDN);
            mpfr_mul_si(t.get(), roots_[k].im.get(), S[c], MPFR_RNDN);
            mpfr_add(acc.im.get(), acc.im.get(), t.get(), MPFR_RNDN);
        }
        acc.re /= N * N;
        acc.im /= N * N;
    }

    prof.mu = Real(p);
    Complex z(p);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const Complex& v = m[i];
        if (abs(v.im) > eps) throw ConsistencyError("multiplicity has an imaginary part");
        if (v.re < -eps) throw ConsistencyError("negative multiplicity");
        std::size_t ci = std::find(chars.begin(), chars.end(), chars[i].conj()) - chars.begin();
        if (abs(m[ci].re - v.re) > eps) throw ConsistencyError("m(chi) != m(conj chi)");
        bool reflex = trivial_on(chars[i], prof.stabilizer);
        if (!reflex) {
            if (abs(v) > eps) throw ConsistencyError("multiplicity outside the reflex character group");
            continue;
        }
        if (i > 0 && !chi_odd_[i] && abs(v) > eps) throw ConsistencyError("even character has nonzero multiplicity");
        prof.multiplicities.push_back({chars[i], v});
        if (!chi_odd_[i]) continue;
        long j = odd_index_[i];
        prof.mu += v.re * odd_logf_[j];
        z += v * odd_logderiv_[j];
    }
    if (abs(z.im) > eps * max(Real(1, p), abs(z.re))) throw ConsistencyError("Z has an imaginary part");
    prof.z = z.re;
    prof.height = -prof.z - prof.mu / 2;
    return prof;
}

Real ProfileEngine::averaged_rhs() const {
    const mpfr_prec_t p = ctx_.work_prec();
    Complex s(p);
    Real lf(p);
    for (std::size_t j = 0; j < odd_prim_.size(); ++j) {
        s += odd_logderiv_[j];
        lf += odd_logf_[j];
    }
    if (abs(s.im) > ctx_.eps() * max(Real(1, p), abs(s.re)))
        throw ConsistencyError("L'/L(0, chi_E/F) has an imaginary part");
    return -s.re / 2 - lf / 4;
}

std::vector<Multiplicity> multiplicities(const CMType& phi, const PrecisionContext& ctx) {
    return compute_profile(phi, ctx).multiplicities;
}

ColmezProfile compute_profile(const CMType& phi, const PrecisionContext& ctx) {
    ProfileEngine eng(phi.field_ptr(), ctx);
    return eng.profile(phi);
}

Real mu(const ColmezProfile& p) { return p.mu; }
Real z_value(const ColmezProfile& p) { return p.z; }

Real faltings_height(const CMType& phi, const PrecisionContext& ctx) { return compute_profile(phi, ctx).height; }

Real averaged_rhs(const AbelianField& E, const PrecisionContext& ctx) {
    ProfileEngine eng(std::make_shared<const AbelianField>(E), ctx);
    return eng.averaged_rhs();
}

LogProduct log_disc_ratio(const AbelianField& E) {
    LogProduct r;
    for (const auto& chi : E.odd_characters()) r += LogProduct::of(dirichlet::conductor(chi));
    return r;
}

bool is_fundamental_discriminant_magnitude(long d) {
    auto squarefree = [](long m) {
        for (long p = 2; p * p <= m; ++p)
            if (m % (p * p) == 0) return false;
        return true;
    };
    if (d < 3) return false;
    if (d % 4 == 3) return squarefree(d);
    if (d % 4 == 0) {
        long m = d / 4;
        return (m % 4 == 1 || m % 4 == 2) && squarefree(m);
    }
    return false;
}

Real chowla_selberg_oracle(long d, const PrecisionContext& ctx) {
    if (!is_fundamental_discriminant_magnitude(d)) throw DomainError("chowla_selberg_oracle: -d is not a fundamental discriminant");
    const mpfr_prec_t p = ctx.work_prec();
    mpz_class moddisc;
    Real L0(p), lg(p);
    for (long a = 1; a < d; ++a) {
        int k = mpz_si_kronecker(-d, mpz_class(a).get_mpz_t());
        if (k == 0) continue;
        L0 -= Real(mpq_class(k * a, d), p);
        Real l = arith::log_gamma(mpq_class(a, d), ctx);
        if (k > 0)
            lg += l;
        else
            lg -= l;
    }
    Real logd = log(Real(d, p));
    Real dL = lg - L0 * logd;
    return -(dL / L0) / 2 - logd / 4;
}

TypeSpace::TypeSpace(const AbelianField& E) : E_(&E), N_(E.degree()), g_(E.g()) {
    if (!E.is_cm()) throw DomainError("TypeSpace: field is not CM");
    if (N_ > 64) throw DomainError("TypeSpace: degree above 64");
    full_ = N_ == 64 ? ~0ULL : ((1ULL << N_) - 1);
    pos_coset_.assign(N_, 0);
    coset_pos_.assign(N_, 0);
    auto order_of = [&](long c) {
        long k = 1, x = c;
        while (x != 0) {
            x = E.coset_mul(x, c);
            ++k;
        }
        return k;
    };
    long gen = -1;
    for (long c = 0; c < N_ && gen < 0; ++c)
        if (order_of(c) == N_) gen = c;
    cyclic_ = gen >= 0;
    if (cyclic_) {
        long x = 0;
        for (long j = 0; j < N_; ++j) {
            pos_coset_[j] = x;
            coset_pos_[x] = j;
            x = E.coset_mul(x, gen);
        }
    } else {
        std::iota(pos_coset_.begin(), pos_coset_.end(), 0);
        std::iota(coset_pos_.begin(), coset_pos_.end(), 0);
    }
    for (long d = 1; d < N_; ++d)
        if (N_ % d == 0) divisors_.push_back(d);
    iota_pos_ = coset_pos_[E.iota_coset()];
    if (cyclic_ && iota_pos_ != g_) throw ConsistencyError("TypeSpace: iota is not gamma^g");
    for (const auto& [a, b] : E.pairs()) {
        pair_pos_.push_back(coset_pos_[a]);
        pair_conj_pos_.push_back(coset_pos_[b]);
    }
    mul_.assign(N_ * N_, 0);
    for (long i = 0; i < N_; ++i)
        for (long j = 0; j < N_; ++j) mul_[i * N_ + j] = coset_pos_[E.coset_mul(pos_coset_[i], pos_coset_[j])];
    for (long j = 1; j < N_; ++j) {
        long o = order_of(pos_coset_[j]);
        bool prime = o > 1;
        for (long q = 2; q * q <= o; ++q)
            if (o % q == 0) prime = false;
        if (prime && j != iota_pos_) prime_order_pos_.push_back(j);
    }
    if (!cyclic_) {
        const long bytes = (N_ + 7) / 8;
        table_.assign(static_cast<std::size_t>(N_) * 8 * 256, 0);
        for (long j = 0; j < N_; ++j)
            for (long b = 0; b < bytes; ++b)
                for (long v = 0; v < 256; ++v) {
                    std::uint64_t out = 0;
                    for (long t = 0; t < 8; ++t) {
                        long i = 8 * b + t;
                        if (i < N_ && ((v >> t) & 1)) out |= 1ULL << mul_[j * N_ + i];
                    }
                    table_[(j * 8 + b) * 256 + v] = out;
                }
    }
}

std::uint64_t TypeSpace::translate_table(std::uint64_t P, long j) const {
    const std::uint64_t* t = &table_[static_cast<std::size_t>(j) * 8 * 256];
    std::uint64_t out = 0;
    for (long b = 0; P; ++b, P >>= 8) out |= t[b * 256 + (P & 0xff)];
    return out;
}

std::uint64_t TypeSpace::pattern_of_mask(std::uint64_t mask) const {
    std::uint64_t P = 0;
    for (long k = 0; k < g_; ++k) {
        bool flip = (mask >> (g_ - 1 - k)) & 1;
        P |= 1ULL << (flip ? pair_conj_pos_[k] : pair_pos_[k]);
    }
    return P;
}

std::uint64_t TypeSpace::mask_of_pattern(std::uint64_t P) const {
    std::uint64_t mask = 0;
    for (long k = 0; k < g_; ++k)
        if ((P >> pair_conj_pos_[k]) & 1) mask |= 1ULL << (g_ - 1 - k);
    return mask;
}

std::uint64_t TypeSpace::flip(std::uint64_t P, long k) const {
    return P ^ ((1ULL << pair_pos_[k]) | (1ULL << pair_conj_pos_[k]));
}

std::uint64_t TypeSpace::stabilizer_key(std::uint64_t P) const {
    if (cyclic_) {
        for (long d : divisors_) {
            if (translate(P, d) != P) continue;
            std::uint64_t key = 0;
            for (long j = 0; j < N_; j += d) key |= 1ULL << j;
            return key;
        }
        return 1;
    }
    bool any = false;
    for (long j : prime_order_pos_)
        if (translate(P, j) == P) {
            any = true;
            break;
        }
    if (!any) return 1;
    std::uint64_t key = 1;
    for (long j = 1; j < N_; ++j)
        if (translate(P, j) == P) key |= 1ULL << j;
    return key;
}

std::vector<long> TypeSpace::residues_of_key(std::uint64_t key) const {
    std::vector<long> out;
    for (long j = 0; j < N_; ++j) {
        if (!((key >> j) & 1)) continue;
        const auto& c = E_->cosets()[pos_coset_[j]];
        out.insert(out.end(), c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> TypeSpace::stabilizer_positions(std::uint64_t P) const {
    std::vector<long> out;
    std::uint64_t key = stabilizer_key(P);
    for (long j = 0; j < N_; ++j)
        if ((key >> j) & 1) out.push_back(j);
    return out;
}

std::vector<long> TypeSpace::stabilizer_residues(std::uint64_t P) const { return residues_of_key(stabilizer_key(P)); }

void TypeSpace::a0_vector(std::uint64_t P, std::vector<int>& out) const {
    out.resize(N_);
    for (long j = 0; j < N_; ++j) out[j] = std::popcount(P & translate(P, j));
}

void TypeSpace::for_each_type(const std::function<void(std::uint64_t)>& f) const {
    const std::uint64_t count = 1ULL << g_;
    const std::uint64_t gmask = count - 1;
    if (cyclic_) {
        for (std::uint64_t b = 0; b < count; ++b) f(b | ((~b & gmask) << g_));
        return;
    }
    for (std::uint64_t b = 0; b < count; ++b) f(pattern_of_mask(b));
}

void TypeSpace::for_each_orbit(const std::function<void(std::uint64_t, long)>& f) const {
    const std::uint64_t count = 1ULL << g_;
    const std::uint64_t gmask = count - 1;
    for (std::uint64_t b = 0; b < count; ++b) {
        std::uint64_t P = cyclic_ ? (b | ((~b & gmask) << g_)) : pattern_of_mask(b);
        bool minimal = true;
        long stab = 1;
        long period = N_;
        for (long j = 1; j < N_; ++j) {
            std::uint64_t R = translate(P, j);
            if (R < P) {
                minimal = false;
                break;
            }
            if (R == P) {
                if (cyclic_) {
                    period = j;
                    break;
                }
                ++stab;
            }
        }
        if (!minimal) continue;
        f(P, cyclic_ ? period : N_ / stab);
    }
}

HeightKernel::HeightKernel(const TypeSpace& space, const ProfileEngine& engine)
    : space_(space), prec_(engine.context().work_prec()) {
    const AbelianField& E = engine.field();
    const auto odd = E.odd_characters();
    const auto& weights = engine.odd_weights();
    const long N = space.degree();
    W_.assign(N, Real(prec_));
    for (long j = 0; j < N; ++j) {
        long rep = E.cosets()[space.coset_at(j)][0];
        Complex w(prec_);
        for (std::size_t i = 0; i < odd.size(); ++i) w += conj(odd[i].value(rep, prec_)) * weights[i];
        Real scale = max(Real(1, prec_), abs(w.re));
        if (abs(w.im) > engine.context().eps() * scale) throw ConsistencyError("class weight is not real");
        W_[j] = w.re;
    }
}

Real HeightKernel::height(std::uint64_t P) const {
    const long N = space_.degree();
    const long g = space_.g();
    Real acc(prec_), t(prec_);
    if (space_.cyclic()) {
        for (long j = 0; j < g; ++j) {
            long c = 2L * std::popcount(P & space_.translate(P, j)) - g;
            if (c == 0) continue;
            mpfr_mul_si(t.get(), W_[j].get(), c, MPFR_RNDN);
            mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
        }
        mpfr_div_si(acc.get(), acc.get(), -2 * g, MPFR_RNDN);
        return acc;
    }
    for (long j = 0; j < N; ++j) {
        long c = std::popcount(P & space_.translate(P, j));
        if (c == 0) continue;
        mpfr_mul_si(t.get(), W_[j].get(), c, MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    }
    mpfr_div_si(acc.get(), acc.get(), -N, MPFR_RNDN);
    return acc;
}

StructuralStats structural_check(const AbelianField& E, const PrecisionContext& ctx) {
    TypeSpace space(E);
    const long N = space.degree();
    const long g = space.g();
    const mpfr_prec_t p = ctx.work_prec();

    // One position per {sigma, iota sigma}.
    std::vector<long> reps, partner;
    std::vector<char> seen(N, 0);
    long iota_coset = E.iota_coset();
    for (long j = 0; j < N; ++j) {
        if (seen[j]) continue;
        long c = space.coset_at(j);
        long k = space.position_of_coset(E.coset_mul(iota_coset, c));
        seen[j] = seen[k] = 1;
        reps.push_back(j);
        partner.push_back(k);
    }

    // conj chi(rep) for the even nontrivial characters of E.
    std::vector<std::vector<Complex>> even_vals;
    for (const auto& chi : E.character_group()) {
        if (chi.is_trivial() || dirichlet::is_odd(chi)) continue;
        std::vector<Complex> v;
        for (long j : reps) v.push_back(conj(chi.value(E.cosets()[space.coset_at(j)][0], p)));
        even_vals.push_back(std::move(v));
    }

    auto evaluate = [&](const std::vector<int>& b) {
        Real worst(p), t(p);
        for (const auto& vals : even_vals) {
            Complex acc(p);
            for (std::size_t r = 0; r < reps.size(); ++r) {
                mpfr_mul_si(t.get(), vals[r].re.get(), b[r], MPFR_RNDN);
                mpfr_add(acc.re.get(), acc.re.get(), t.get(), MPFR_RNDN);
                mpfr_mul_si(t.get(), vals[r].im.get(), b[r], MPFR_RNDN);
                mpfr_add(acc.im.get(), acc.im.get(), t.get(), MPFR_RNDN);
            }
            acc.re /= N;
            acc.im /= N;
            worst = max(worst, abs(acc));
        }
        return worst;
    };

    StructuralStats st;
    st.max_even = Real(p);
    std::map<std::vector<int>, Real> memo;
    std::vector<int> last_key(reps.size(), -1), key(reps.size());
    auto record = [&]() {
        if (key == last_key) return;
        last_key = key;
        auto it = memo.find(key);
        if (it == memo.end()) {
            it = memo.emplace(key, evaluate(key)).first;
            st.max_even = max(st.max_even, it->second);
        }
    };
    const long want = N * g / 2;
    const std::uint64_t count = 1ULL << g;
    const std::uint64_t gmask = count - 1;
    if (space.cyclic()) {
        // positions j and j + g form the pairs
        const std::uint64_t full = N == 64 ? ~0ULL : ((1ULL << N) - 1);
        auto rot = [&](std::uint64_t P, long j) { return j == 0 ? P : (((P << j) | (P >> (N - j))) & full); };
        for (std::uint64_t b = 0; b < count; ++b) {
            const std::uint64_t P = b | ((~b & gmask) << g);
            long sum = 0;
            for (long j = 0; j < g; ++j) {
                int k = std::popcount(P & rot(P, j)) + std::popcount(P & rot(P, j + g));
                key[j] = k;
                sum += k;
            }
            if (sum != want) ++st.trivial_failures;
            record();
        }
        st.types = count;
    } else {
        std::vector<int> a0(N);
        for (std::uint64_t b = 0; b < count; ++b) {
            const std::uint64_t P = space.pattern_of_mask(b);
            long sum = 0;
            for (long j = 0; j < N; ++j) {
                a0[j] = std::popcount(P & space.translate(P, j));
                sum += a0[j];
            }
            if (sum != want) ++st.trivial_failures;
            for (std::size_t r = 0; r < reps.size(); ++r) key[r] = a0[reps[r]] + a0[partner[r]];
            record();
        }
        st.types = count;
    }
    st.distinct_pair_sums = memo.size();
    return st;
}

}  // namespace cmheight::colmez
