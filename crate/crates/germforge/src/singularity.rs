//! Singularity analysis of a certified scalar germ `g(x, λ)`.
//!
//! Everything here is phrased in terms of the two intrinsic ideals attached
//! to `g` — the high-order ideal `𝒫(g)` (perturbations that never change the
//! contact class) and the derivative staircase `𝒮(g)` (the least intrinsic
//! ideal containing `g`) — plus the restricted tangent ideal
//! `RT(g) = ⟨g, x·g_x, λ·g_x⟩` and the full tangent space
//! `T(g) = RT(g) ⊕ K{g_x, g_λ, λg_λ, …, λ^ℓ g_λ}`.
//!
//! All computations run in a jet ring whose degree is backed by a
//! [`TruncationCertificate`], so every membership answer is exact for the
//! original smooth germ, not merely for its truncation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::basis::{standard_basis, BasisComputation};
use crate::division::{remainder, IdealBasis, Ring};
use crate::error::{Error, Result};
use crate::germ::GermExpression;
use crate::ideal::{
    normal_set, verify_truncation_jets, TruncationCertificate, TruncationEvidence,
};
use crate::intrinsic::{
    intrinsic_decomposition, intrinsic_part, jet_columns, IntrinsicDecomposition, IntrinsicIdeal,
};
use crate::jet::{taylor_jet, Jet, TailSupport};
use crate::monomial::{monomials_of_degree, monomials_up_to_degree, Monomial};
use crate::order::MonomialOrder;
use crate::poly::{Polynomial, Term};
use crate::vars::{Var, VarList};
use crate::{int, Rat};

/// A germ certified singular at the origin: `g(0,0) = g_x(0,0) = 0`, carrying
/// its Taylor jet at the degree certified for the restricted tangent ideal.
#[derive(Clone, Debug)]
pub struct SingularGerm {
    pub expr: GermExpression,
    pub jet: Jet,
    pub certificate: TruncationCertificate,
}

impl SingularGerm {
    /// Certify `expr` as a singular germ, searching truncation degrees from
    /// `n0` upward for one at which `⟨g, x·g_x, λ·g_x⟩` is faithful.
    pub fn new(expr: GermExpression, n0: u32) -> Result<SingularGerm> {
        let vars = VarList::xl();
        let j1 = taylor_jet(&expr, 1)?;
        let c0 = j1.poly().coefficient_of(&Monomial::one(2));
        let cx = j1.poly().coefficient_of(&Monomial(vec![1, 0]));
        if !c0.is_zero() || !cx.is_zero() {
            return Err(Error::invalid(
                "not a singular germ: g(0,0) and g_x(0,0) must both vanish",
            ));
        }
        let global = if expr.is_polynomial() {
            Some(rt_generators(&expr.to_polynomial(&vars)?))
        } else {
            None
        };
        let certificate = verify_truncation_jets(|n| rt_jets(&expr, n), global.as_deref(), n0)?;
        let jet = taylor_jet(&expr, certificate.degree)?;
        Ok(SingularGerm {
            expr,
            jet,
            certificate,
        })
    }

    /// Wrap an exact polynomial germ.
    pub fn from_polynomial(p: &Polynomial, n0: u32) -> Result<SingularGerm> {
        SingularGerm::new(GermExpression::from_polynomial(p), n0)
    }

    /// The certified jet degree `N`.
    pub fn degree(&self) -> u32 {
        self.certificate.degree
    }
}

/// Exact generators of `RT(g)` for a polynomial germ.
fn rt_generators(g: &Polynomial) -> Vec<Polynomial> {
    let vars = g.vars().clone();
    let gx = g.partial_derivative(Var::X);
    let x = Polynomial::var_pow(vars.clone(), Var::X, 1);
    let l = Polynomial::var_pow(vars, Var::Lambda, 1);
    vec![g.clone(), gx.mul(&x), gx.mul(&l)]
}

/// Degree-`n` jets of the restricted-tangent generators `{g, x·g_x, λ·g_x}`,
/// with sound tail cones.
fn rt_jets(expr: &GermExpression, n: u32) -> Result<Vec<Jet>> {
    let base = taylor_jet(expr, n + 1)?;
    let vars = VarList::xl();
    let x = Polynomial::var_pow(vars.clone(), Var::X, 1);
    let l = Polynomial::var_pow(vars, Var::Lambda, 1);
    let gx = base.derivative(Var::X);
    Ok(vec![base.restrict(n), gx.mul_poly(&x), gx.mul_poly(&l)])
}

/// Exact generators of the high-order source ideal `⟨xg, λg, x²g_x, λg_x⟩`.
fn p_generators(g: &Polynomial) -> Vec<Polynomial> {
    let vars = g.vars().clone();
    let gx = g.partial_derivative(Var::X);
    let x = Polynomial::var_pow(vars.clone(), Var::X, 1);
    let x2 = Polynomial::var_pow(vars.clone(), Var::X, 2);
    let l = Polynomial::var_pow(vars, Var::Lambda, 1);
    vec![g.mul(&x), g.mul(&l), gx.mul(&x2), gx.mul(&l)]
}

/// Degree-`n` jets of the high-order generators.
fn p_jets(expr: &GermExpression, n: u32) -> Result<Vec<Jet>> {
    let g = taylor_jet(expr, n)?;
    let gx = taylor_jet(expr, n + 1)?.derivative(Var::X);
    let vars = VarList::xl();
    let x = Polynomial::var_pow(vars.clone(), Var::X, 1);
    let x2 = Polynomial::var_pow(vars.clone(), Var::X, 2);
    let l = Polynomial::var_pow(vars, Var::Lambda, 1);
    Ok(vec![
        g.mul_poly(&x),
        g.mul_poly(&l),
        gx.mul_poly(&x2),
        gx.mul_poly(&l),
    ])
}

/// The intrinsic ideal of high-order terms `𝒫(g)`: any perturbation of `g`
/// inside it leaves the contact class unchanged, so such terms may be deleted
/// from a normal form. Errors with `InfiniteCodimension` when the ideal
/// contains no power of the maximal ideal.
pub fn high_order_ideal(g: &SingularGerm) -> Result<IntrinsicIdeal> {
    let cert = high_order_certificate(g)?;
    match cert.evidence {
        TruncationEvidence::FinitePower { .. } => {}
        _ => {
            return Err(Error::InfiniteCodimension(
                "high-order ideal contains no power of the maximal ideal".into(),
            ))
        }
    }
    let basis = p_basis(g, cert.degree)?;
    intrinsic_part(&basis)
}

fn high_order_certificate(g: &SingularGerm) -> Result<TruncationCertificate> {
    let global = if g.expr.is_polynomial() {
        Some(p_generators(&g.expr.to_polynomial(&VarList::xl())?))
    } else {
        None
    };
    verify_truncation_jets(|n| p_jets(&g.expr, n), global.as_deref(), g.degree())
}

fn p_basis(g: &SingularGerm, n: u32) -> Result<IdealBasis> {
    let jets = p_jets(&g.expr, n)?;
    let polys: Vec<Polynomial> = jets.iter().map(|j| j.poly().clone()).collect();
    Ok(IdealBasis::new(
        polys,
        MonomialOrder::AlexLocal,
        Ring::LocalJet(n),
    ))
}

/// Corner data of the derivative staircase `𝒮(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeStairs {
    pub s: IntrinsicIdeal,
    /// Monomials of degree ≤ N outside `𝒮`: the zero-condition candidates.
    pub s_perp: Vec<Monomial>,
    /// The corner monomials `x^{m_i} λ^{n_i}` themselves.
    pub s_gens: Vec<Monomial>,
}

/// The least intrinsic ideal containing the certified jet of `g`, read off
/// the admissible corners of its coefficient support.
pub fn derivative_stairs(g: &SingularGerm) -> DerivativeStairs {
    let stairs = stairs_from_coefficients(g.jet.poly());
    let s = IntrinsicIdeal::new(stairs.clone());
    let mut s_perp: Vec<Monomial> = monomials_up_to_degree(2, g.degree())
        .into_iter()
        .filter(|m| !s.contains_monomial(m.exp(0), m.exp(1)))
        .collect();
    sort_monomials(&mut s_perp);
    let mut s_gens: Vec<Monomial> = stairs.iter().map(|&(m, n)| Monomial(vec![m, n])).collect();
    sort_monomials(&mut s_gens);
    DerivativeStairs { s, s_perp, s_gens }
}

/// Admissible corners of a support: `(m, n)` survives when no other support
/// point `(p, q)` has `q ≤ n` and `p + q ≤ m + n`. Sorted by ascending
/// λ-exponent they satisfy the intrinsic-ideal invariants.
pub(crate) fn stairs_from_coefficients(p: &Polynomial) -> Vec<(u32, u32)> {
    let pts: Vec<(u32, u32)> = p
        .terms()
        .iter()
        .map(|t| (t.mono.exp(0), t.mono.exp(1)))
        .collect();
    let mut corners: Vec<(u32, u32)> = pts
        .iter()
        .filter(|&&(m, n)| {
            !pts.iter()
                .any(|&(a, b)| (a, b) != (m, n) && b <= n && a + b <= m + n)
        })
        .copied()
        .collect();
    corners.sort_by_key(|&(_, n)| n);
    corners
}

/// Intermediate terms `A(g)`: monomials inside the staircase `𝒮(g)` but
/// outside `𝒫(g)` that are not corners. These are the only terms a shear can
/// still hope to remove from a normal form.
pub fn intermediate_terms(g: &SingularGerm) -> Result<Vec<Monomial>> {
    let p = high_order_ideal(g)?;
    let ds = derivative_stairs(g);
    Ok(intermediate_of(&p, &ds))
}

fn intermediate_of(p: &IntrinsicIdeal, ds: &DerivativeStairs) -> Vec<Monomial> {
    // Everything outside 𝒫 has degree below the first stair sum.
    let bound = p.stairs.first().map(|&(k, l)| k + l).unwrap_or(0);
    let mut out: Vec<Monomial> = monomials_up_to_degree(2, bound)
        .into_iter()
        .filter(|mo| {
            let (a, b) = (mo.exp(0), mo.exp(1));
            !p.contains_monomial(a, b) && ds.s.contains_monomial(a, b) && !ds.s_gens.contains(mo)
        })
        .collect();
    sort_monomials(&mut out);
    out
}

/// A computed normal form.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub poly: Polynomial,
    /// The shear coefficient `b` of `x ↦ x + bλ` that was applied (zero when
    /// no shear helped).
    pub shear: Rat,
    /// Intermediate terms still present after the shear.
    pub unremoved: Vec<Monomial>,
}

/// Degree-`n` normal form of `g`: delete every jet term inside `𝒫(g)`, then
/// annul as many intermediate terms as one shear `x ↦ x + bλ` can (greedy,
/// lowest degree first, keeping each new zero-coefficient constraint only
/// while all constraints still share a rational root), and delete the 𝒫-part
/// the shear re-introduces.
pub fn normal_form(g: &SingularGerm, n: u32) -> Result<NormalForm> {
    let p = high_order_ideal(g)?;
    let ds = derivative_stairs(g);
    let a_monos = intermediate_of(&p, &ds);
    let jet = taylor_jet(&g.expr, n)?;
    let mut h = delete_in(jet.poly(), &p);
    let mut roots: Option<Vec<Rat>> = None;
    for mu in &a_monos {
        let phi = shear_polynomial(&h, mu.exp(0), mu.exp(1));
        if phi.iter().all(|c| c.is_zero()) {
            continue; // no support on the anti-diagonal: every shear keeps it zero
        }
        let r = rational_roots(&phi);
        let merged: Vec<Rat> = match &roots {
            None => r,
            Some(cur) => cur.iter().filter(|b| r.contains(b)).cloned().collect(),
        };
        if !merged.is_empty() {
            roots = Some(merged);
        }
    }
    let b = pick_root(roots);
    if !b.is_zero() {
        let vars = h.vars().clone();
        let x_plus = Polynomial::var_pow(vars.clone(), Var::X, 1)
            .add(&Polynomial::var_pow(vars, Var::Lambda, 1).scale(&b));
        h = h.substitute(Var::X, &x_plus).truncate_above(n);
        h = delete_in(&h, &p);
    }
    let unremoved: Vec<Monomial> = a_monos
        .iter()
        .filter(|mo| !h.coefficient_of(mo).is_zero())
        .cloned()
        .collect();
    Ok(NormalForm {
        poly: h,
        shear: b,
        unremoved,
    })
}

/// Drop every term of `p` whose monomial lies in the intrinsic ideal.
fn delete_in(p: &Polynomial, itr: &IntrinsicIdeal) -> Polynomial {
    let kept: Vec<Term> = p
        .terms()
        .iter()
        .filter(|t| !itr.contains_monomial(t.mono.exp(0), t.mono.exp(1)))
        .cloned()
        .collect();
    Polynomial::new(p.vars().clone(), kept)
}

/// Coefficient polynomial `φ(b)` of `x^m λ^n` in `h(x + bλ, λ)`: the support
/// points `(m+i, n−i)` land on `(m, n)` with binomial weight `C(m+i, i)`.
fn shear_polynomial(h: &Polynomial, m: u32, n: u32) -> Vec<Rat> {
    (0..=n)
        .map(|i| h.coefficient_of(&Monomial(vec![m + i, n - i])) * binom(m + i, i))
        .collect()
}

fn binom(n: u32, k: u32) -> Rat {
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    Rat::new(num, den)
}

fn pick_root(roots: Option<Vec<Rat>>) -> Rat {
    let Some(rs) = roots else {
        return Rat::zero();
    };
    if rs.iter().any(|r| r.is_zero()) {
        return Rat::zero();
    }
    rs.into_iter()
        .min_by_key(|r| {
            (
                r.denom().magnitude().clone(),
                r.numer().magnitude().clone(),
                r.is_negative(),
            )
        })
        .unwrap_or_else(Rat::zero)
}

/// All rational roots of `Σ cᵢ bⁱ`, exact. Gives up (returning only the roots
/// found so far) when the coefficient bounds exceed the factoring budget.
fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut cs: Vec<Rat> = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.is_zero()) {
        cs.pop();
    }
    let mut out: Vec<Rat> = Vec::new();
    if cs.is_empty() {
        return out;
    }
    let mut low = 0;
    while cs[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        out.push(Rat::zero());
    }
    let cs = &cs[low..];
    if cs.len() <= 1 {
        return out;
    }
    if cs.len() == 2 {
        let r = -(cs[0].clone() / cs[1].clone());
        if !out.contains(&r) {
            out.push(r);
        }
        return out;
    }
    let mut den_lcm = BigInt::one();
    for c in cs {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = cs
        .iter()
        .map(|c| (c * Rat::from_integer(den_lcm.clone())).to_integer())
        .collect();
    let (Some(ps), Some(qs)) = (
        divisors_up_to_budget(&ints[0]),
        divisors_up_to_budget(ints.last().unwrap()),
    ) else {
        return out;
    };
    for p in &ps {
        for q in &qs {
            for sign in [BigInt::one(), -BigInt::one()] {
                let cand = Rat::new(p * &sign, q.clone());
                if eval_poly(cs, &cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Positive divisors by trial division, `None` past the budget.
fn divisors_up_to_budget(v: &BigInt) -> Option<Vec<BigInt>> {
    let n = v.magnitude().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn eval_poly(cs: &[Rat], b: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in cs.iter().rev() {
        acc = acc * b + c;
    }
    acc
}

/// Rescale `c · g(s·x, t·λ)` with positive rationals so every staircase
/// corner coefficient becomes `±1`, when such a rational scaling exists;
/// otherwise return the input unchanged (best effort — some corner systems
/// only normalize over field extensions).
pub fn normalize_corners(p: &Polynomial) -> Polynomial {
    let stairs = stairs_from_coefficients(p);
    if stairs.is_empty() {
        return p.clone();
    }
    let coefs: Vec<Rat> = stairs
        .iter()
        .map(|&(m, n)| p.coefficient_of(&Monomial(vec![m, n])))
        .collect();
    if coefs.iter().all(|c| c.abs().is_one()) {
        return p.clone();
    }
    let mut primes = std::collections::BTreeSet::new();
    for c in &coefs {
        if !collect_primes(c.numer(), &mut primes) || !collect_primes(c.denom(), &mut primes) {
            return p.clone();
        }
    }
    let mut c_scale = Rat::one();
    let mut s_scale = Rat::one();
    let mut t_scale = Rat::one();
    for &prime in &primes {
        let us: Vec<i64> = coefs.iter().map(|c| -valuation(c, prime)).collect();
        let Some((ec, es, et)) = solve_exponents(&stairs, &us) else {
            return p.clone();
        };
        c_scale *= rat_pow(prime, ec);
        s_scale *= rat_pow(prime, es);
        t_scale *= rat_pow(prime, et);
    }
    let vars = p.vars().clone();
    let xs = Polynomial::var_pow(vars.clone(), Var::X, 1).scale(&s_scale);
    let ls = Polynomial::var_pow(vars, Var::Lambda, 1).scale(&t_scale);
    p.substitute(Var::X, &xs)
        .substitute(Var::Lambda, &ls)
        .scale(&c_scale)
}

/// Collect the prime factors of `n` into `acc`; `false` past the budget.
fn collect_primes(n: &BigInt, acc: &mut std::collections::BTreeSet<u64>) -> bool {
    let Some(mut m) = n.magnitude().to_u64() else {
        return false;
    };
    if m == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m && d <= 1_000_000 {
        while m % d == 0 {
            acc.insert(d);
            m /= d;
        }
        d += 1;
    }
    if m > 1 {
        if m > 1_000_000_000_000 {
            return false;
        }
        acc.insert(m);
    }
    true
}

/// p-adic valuation of a rational.
fn valuation(c: &Rat, prime: u64) -> i64 {
    fn count(mut n: u64, p: u64) -> i64 {
        let mut v = 0;
        while n % p == 0 && n > 0 {
            n /= p;
            v += 1;
        }
        v
    }
    let num = c.numer().magnitude().to_u64().unwrap_or(0);
    let den = c.denom().magnitude().to_u64().unwrap_or(0);
    if num == 0 || den == 0 {
        return 0;
    }
    count(num, prime) - count(den, prime)
}

fn rat_pow(prime: u64, e: i64) -> Rat {
    let p = BigInt::from(prime);
    if e >= 0 {
        Rat::from_integer(p.pow(e as u32))
    } else {
        Rat::new(BigInt::one(), p.pow((-e) as u32))
    }
}

/// Solve `γ + m_i σ + n_i τ = u_i` over the integers (per-prime exponents of
/// the corner scaling). The staircase invariants make the difference rows
/// nonzero, so the system is either uniquely determined, a single extended-gcd
/// equation, or inconsistent.
fn solve_exponents(stairs: &[(u32, u32)], us: &[i64]) -> Option<(i64, i64, i64)> {
    let (m0, n0) = (stairs[0].0 as i64, stairs[0].1 as i64);
    let u0 = us[0];
    let rows: Vec<(i64, i64, i64)> = (1..stairs.len())
        .map(|i| {
            (
                stairs[i].0 as i64 - m0,
                stairs[i].1 as i64 - n0,
                us[i] - u0,
            )
        })
        .collect();
    let (s, t) = if rows.is_empty() {
        (0, 0)
    } else {
        let r0 = rows[0];
        match rows.iter().find(|r| r0.0 * r.1 - r0.1 * r.0 != 0) {
            Some(&r1) => {
                let det = r0.0 * r1.1 - r0.1 * r1.0;
                let sn = r0.2 * r1.1 - r0.1 * r1.2;
                let tn = r0.0 * r1.2 - r0.2 * r1.0;
                if sn % det != 0 || tn % det != 0 {
                    return None;
                }
                (sn / det, tn / det)
            }
            None => {
                let (a, b, r) = r0;
                let eg = a.extended_gcd(&b);
                if r % eg.gcd != 0 {
                    return None;
                }
                (eg.x * (r / eg.gcd), eg.y * (r / eg.gcd))
            }
        }
    };
    for &(a, b, r) in &rows {
        if a * s + b * t != r {
            return None;
        }
    }
    Some((u0 - m0 * s - n0 * t, s, t))
}

/// How a restricted tangent ideal is presented.
#[derive(Clone, Debug)]
pub enum IdealPresentation {
    /// The ideal is itself intrinsic and equals this staircase ideal.
    Intrinsic(IntrinsicIdeal),
    /// Intrinsic part plus explicit complement generators.
    Decomposed(IntrinsicDecomposition),
    /// A monomial wedge containing no power of the maximal ideal
    /// (infinite codimension).
    Wedge(Vec<Monomial>),
}

/// `RT(g) = ⟨g, x·g_x, λ·g_x⟩` with its certificate and reduced standard
/// basis in the certified jet ring.
#[derive(Clone, Debug)]
pub struct RestrictedTangent {
    pub presentation: IdealPresentation,
    pub certificate: TruncationCertificate,
    pub sb: BasisComputation,
}

pub fn restricted_tangent(g: &SingularGerm) -> Result<RestrictedTangent> {
    let certificate = g.certificate.clone();
    let n = certificate.degree;
    let jets = rt_jets(&g.expr, n)?;
    let polys: Vec<Polynomial> = jets.iter().map(|j| j.poly().clone()).collect();
    let basis = IdealBasis::new(polys, MonomialOrder::AlexLocal, Ring::LocalJet(n));
    let sb = standard_basis(&basis);
    let presentation = match &certificate.evidence {
        TruncationEvidence::FinitePower { .. } => {
            let itr = intrinsic_part(&basis)?;
            let vars = basis.vars().clone();
            let ideal_dim = normal_set(&sb.basis)?.dimension();
            let stair_dim = normal_set(&itr.to_basis(&vars, n)?)?.dimension();
            if ideal_dim == stair_dim {
                // Equal jet quotients and M^{N+1} ⊆ M·I ⇒ the ideal *is* its
                // intrinsic part.
                IdealPresentation::Intrinsic(itr)
            } else {
                IdealPresentation::Decomposed(intrinsic_decomposition(&basis)?)
            }
        }
        TruncationEvidence::Staircase { stairs } => {
            let itr = IntrinsicIdeal::new(stairs.clone());
            if jets.iter().all(|j| jet_inside(j, &itr)) {
                IdealPresentation::Intrinsic(itr)
            } else {
                IdealPresentation::Decomposed(intrinsic_decomposition(&basis)?)
            }
        }
        TruncationEvidence::MonomialWedge { gens } => {
            let mut gens = gens.clone();
            sort_monomials(&mut gens);
            IdealPresentation::Wedge(gens)
        }
    };
    Ok(RestrictedTangent {
        presentation,
        certificate,
        sb,
    })
}

/// Whether every term and every possible tail monomial of the jet lies in
/// the intrinsic ideal.
fn jet_inside(j: &Jet, itr: &IntrinsicIdeal) -> bool {
    let terms_in = j
        .poly()
        .terms()
        .iter()
        .all(|t| itr.contains_monomial(t.mono.exp(0), t.mono.exp(1)));
    let tail_in = match j.tail() {
        TailSupport::Cone(ms) => ms
            .iter()
            .all(|m| itr.contains_monomial(m.exp(0), m.exp(1))),
        TailSupport::Unknown => false,
    };
    terms_in && tail_in
}

/// The full tangent space `T(g)` of a finite-codimension germ.
#[derive(Clone, Debug)]
pub struct TangentSpace {
    pub rt: RestrictedTangent,
    /// Independent residues of `g_x, g_λ, λg_λ, …, λ^ℓ g_λ` modulo `RT(g)`,
    /// made monic and sorted by global-lex leading monomial.
    pub span: Vec<Polynomial>,
    /// The last power with `λ^ℓ g_λ ∉ RT(g)`.
    pub ell: u32,
    /// Monomial basis of `E / T(g)`; its length is the codimension.
    pub et_basis: Vec<Monomial>,
}

pub fn tangent_space(g: &SingularGerm) -> Result<TangentSpace> {
    let rt = restricted_tangent(g)?;
    tangent_space_with(g, rt)
}

pub(crate) fn tangent_space_with(g: &SingularGerm, rt: RestrictedTangent) -> Result<TangentSpace> {
    if rt.certificate.power().is_none() {
        return Err(Error::InfiniteCodimension(
            "tangent space requires a finite-codimension restricted tangent ideal".into(),
        ));
    }
    let n = rt.certificate.degree;
    let vars = VarList::xl();
    let base = taylor_jet(&g.expr, n + 1)?;
    let gx = base.derivative(Var::X);
    let gl = base.derivative(Var::Lambda);
    // Least l with λ^l·g_λ ∈ RT(g). The scan always terminates: past
    // N − ord(g_λ) the jet vanishes, and M^{N+1} ⊆ RT by the finite power.
    let mut ell_plus = 0;
    if !gl.poly().is_zero() {
        let ord = gl.poly().order_of_vanishing().unwrap_or(n + 1);
        let bound = n.saturating_sub(ord) + 1;
        for l in 0..=bound {
            let lam = Polynomial::var_pow(vars.clone(), Var::Lambda, l);
            if remainder(gl.mul_poly(&lam).poly(), &rt.sb.basis).is_zero() {
                ell_plus = l;
                break;
            }
            ell_plus = l + 1;
        }
    }
    let mut raw: Vec<Polynomial> = vec![gx.poly().clone()];
    for l in 0..ell_plus {
        let lam = Polynomial::var_pow(vars.clone(), Var::Lambda, l);
        raw.push(gl.mul_poly(&lam).poly().clone());
    }
    let (cols, index) = jet_columns(2, n);
    let mut space = RowSpace::new();
    let mut span = Vec::new();
    for p in &raw {
        let r = remainder(p, &rt.sb.basis);
        if space.try_insert(vector_of(&r, &index, cols.len())) {
            span.push(r);
        }
    }
    let mut span: Vec<Polynomial> = span
        .iter()
        .map(|p| p.monic(MonomialOrder::LexGlobal))
        .collect();
    span.sort_by(|a, b| {
        let (la, lb) = (
            a.leading_monomial(MonomialOrder::LexGlobal),
            b.leading_monomial(MonomialOrder::LexGlobal),
        );
        match (la, lb) {
            (Some(la), Some(lb)) => MonomialOrder::LexGlobal.compare(&la, &lb),
            _ => std::cmp::Ordering::Equal,
        }
    });
    let mut et_basis = Vec::new();
    let mut candidates = monomials_up_to_degree(2, n);
    sort_monomials(&mut candidates);
    for m in candidates {
        let p = Polynomial::from_monomial(vars.clone(), m.clone(), int(1));
        let r = remainder(&p, &rt.sb.basis);
        if space.try_insert(vector_of(&r, &index, cols.len())) {
            et_basis.push(m);
        }
    }
    Ok(TangentSpace {
        rt,
        span,
        ell: ell_plus.saturating_sub(1),
        et_basis,
    })
}

/// Rows held in echelon form for incremental rank queries over ℚ.
pub(crate) struct RowSpace {
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub(crate) fn new() -> RowSpace {
        RowSpace {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Reduce `v` against the rows; insert the nonzero residue and report
    /// whether the rank grew.
    pub(crate) fn try_insert(&mut self, mut v: Vec<Rat>) -> bool {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a = &*a - &(f.clone() * b);
                }
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(pc) => {
                let inv = v[pc].clone();
                for a in v.iter_mut() {
                    *a = &*a / &inv;
                }
                self.rows.push(v);
                self.pivots.push(pc);
                true
            }
        }
    }
}

/// Coefficient vector of `p` over the given monomial index.
pub(crate) fn vector_of(
    p: &Polynomial,
    index: &HashMap<Vec<u32>, usize>,
    width: usize,
) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); width];
    for t in p.terms() {
        if let Some(&i) = index.get(&t.mono.0) {
            v[i] = t.coef.clone();
        }
    }
    v
}

fn sort_monomials(ms: &mut [Monomial]) {
    ms.sort_by_key(|m| (m.total_degree(), m.exp(0)));
}

/// Zero/non-zero coefficient conditions characterizing the contact class of
/// a polynomial normal form whose staircase has finite codimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognition {
    pub zero_at: Vec<Monomial>,
    pub nonzero_at: Vec<Monomial>,
}

pub fn recognition_conditions(nf: &Polynomial) -> Result<Recognition> {
    if !nf.coefficient_of(&Monomial::one(2)).is_zero()
        || !nf.coefficient_of(&Monomial(vec![1, 0])).is_zero()
    {
        return Err(Error::invalid(
            "recognition requires a singular normal form",
        ));
    }
    let stairs = stairs_from_coefficients(nf);
    let m0 = match stairs.first() {
        Some(&(m, 0)) => m,
        _ => {
            return Err(Error::InfiniteCodimension(
                "staircase has no pure-x corner".into(),
            ))
        }
    };
    let s = IntrinsicIdeal::new(stairs.clone());
    let mut zero_at: Vec<Monomial> = monomials_up_to_degree(2, m0)
        .into_iter()
        .filter(|m| !s.contains_monomial(m.exp(0), m.exp(1)))
        .collect();
    sort_monomials(&mut zero_at);
    let mut nonzero_at: Vec<Monomial> =
        stairs.iter().map(|&(m, n)| Monomial(vec![m, n])).collect();
    sort_monomials(&mut nonzero_at);
    Ok(Recognition {
        zero_at,
        nonzero_at,
    })
}

/// An explicit strong contact equivalence `g = S · f(X(x,λ), λ)`, certified
/// to jet degree `degree`.
#[derive(Clone, Debug)]
pub struct ContactTransformation {
    pub x: Polynomial,
    pub s: Polynomial,
    pub degree: u32,
}

/// Solve `g = S·f(X, λ)` degree by degree up to jet degree `k`, taking the
/// representative with unit `x`-coefficient in `X` and zero free unknowns.
/// Each stage above the common vanishing order is linear in the newly
/// appearing pieces of `S` and `X`; an inconsistent stage means the jets are
/// not strongly contact equivalent under this normalization.
pub fn transformation_solve(
    g: &Polynomial,
    f: &Polynomial,
    k: u32,
) -> Result<ContactTransformation> {
    let vars = f.vars().clone();
    let gk = g.truncate_above(k);
    let fk = f.truncate_above(k);
    let x_poly = Polynomial::var_pow(vars.clone(), Var::X, 1);
    if gk.is_zero() || fk.is_zero() {
        if gk.is_zero() && fk.is_zero() {
            return Ok(ContactTransformation {
                x: x_poly,
                s: Polynomial::constant(vars, int(1)),
                degree: k,
            });
        }
        return Err(Error::Unsolvable(
            "one jet vanishes identically and the other does not".into(),
        ));
    }
    let rg = gk.order_of_vanishing().unwrap_or(0);
    let rf = fk.order_of_vanishing().unwrap_or(0);
    if rg != rf {
        return Err(Error::Unsolvable(format!(
            "vanishing orders differ: {rg} vs {rf}"
        )));
    }
    let r = rg;
    let fr = homogeneous_part(&fk, r);
    let gr = homogeneous_part(&gk, r);
    let imax = (0..=r)
        .rev()
        .find(|&i| !fr.coefficient_of(&Monomial(vec![i, r - i])).is_zero())
        .expect("nonzero homogeneous part");
    let ftop = fr.coefficient_of(&Monomial(vec![imax, r - imax]));
    let gtop = gr.coefficient_of(&Monomial(vec![imax, r - imax]));
    let s0 = gtop / ftop.clone();
    if !s0.is_positive() {
        return Err(Error::Unsolvable(
            "leading coefficient ratio is not positive".into(),
        ));
    }
    let b = if imax == 0 {
        Rat::zero()
    } else {
        let fprev = fr.coefficient_of(&Monomial(vec![imax - 1, r - imax + 1]));
        let gprev = gr.coefficient_of(&Monomial(vec![imax - 1, r - imax + 1]));
        (gprev / s0.clone() - fprev) / (int(imax as i64) * ftop)
    };
    let x1 = x_poly.add(&Polynomial::var_pow(vars.clone(), Var::Lambda, 1).scale(&b));
    if fr.substitute(Var::X, &x1).scale(&s0) != gr {
        return Err(Error::Unsolvable(format!(
            "order-{r} parts are not equivalent under x ↦ x + bλ"
        )));
    }
    let fr_x1 = fr.substitute(Var::X, &x1);
    let frx_x1 = fr.partial_derivative(Var::X).substitute(Var::X, &x1);
    let mut xs = x1;
    let mut ss = Polynomial::constant(vars.clone(), s0);
    for d in (r + 1)..=k {
        let err = contact_residual(&gk, &fk, &xs, &ss, k);
        let ed = homogeneous_part(&err, d);
        let umons = monomials_of_degree(2, d - r);
        let wmons = monomials_of_degree(2, d - r + 1);
        let rows: Vec<Monomial> = monomials_of_degree(2, d);
        let mut cols: Vec<Polynomial> = Vec::new();
        for u in &umons {
            cols.push(fr_x1.mul_term(u, &int(1)));
        }
        for w in &wmons {
            cols.push(frx_x1.mul_term(w, &int(1)));
        }
        let a: Vec<Vec<Rat>> = rows
            .iter()
            .map(|m| cols.iter().map(|c| c.coefficient_of(m)).collect())
            .collect();
        let rhs: Vec<Rat> = rows.iter().map(|m| ed.coefficient_of(m)).collect();
        let Some(sol) = solve_linear(a, rhs) else {
            return Err(Error::Unsolvable(format!(
                "jets are not strongly equivalent at degree {d}"
            )));
        };
        for (u, c) in umons.iter().zip(&sol) {
            if !c.is_zero() {
                ss = ss.add(&Polynomial::from_monomial(vars.clone(), u.clone(), c.clone()));
            }
        }
        for (w, c) in wmons.iter().zip(sol.iter().skip(umons.len())) {
            if !c.is_zero() {
                xs = xs.add(&Polynomial::from_monomial(vars.clone(), w.clone(), c.clone()));
            }
        }
    }
    if !contact_residual(&gk, &fk, &xs, &ss, k).is_zero() {
        return Err(Error::Unsolvable(
            "staged solve left a nonzero residual".into(),
        ));
    }
    Ok(ContactTransformation {
        x: xs,
        s: ss,
        degree: k,
    })
}

/// `J^k(g − S·f(X, λ))`: identically zero exactly when `(X, S)` realizes the
/// strong equivalence to jet degree `k`.
pub fn contact_residual(
    g: &Polynomial,
    f: &Polynomial,
    x_sub: &Polynomial,
    s: &Polynomial,
    k: u32,
) -> Polynomial {
    let transported = f.substitute(Var::X, x_sub).mul(s).truncate_above(k);
    g.truncate_above(k).sub(&transported)
}

fn homogeneous_part(p: &Polynomial, d: u32) -> Polynomial {
    let terms: Vec<Term> = p
        .terms()
        .iter()
        .filter(|t| t.mono.total_degree() == d)
        .cloned()
        .collect();
    Polynomial::new(p.vars().clone(), terms)
}

/// Gaussian elimination on `[A | b]` with free unknowns pinned to zero;
/// `None` when inconsistent.
fn solve_linear(a: Vec<Vec<Rat>>, b: Vec<Rat>) -> Option<Vec<Rat>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].clone();
        for c in col..=ncols {
            m[rank][c] = &m[rank][c] / &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    m[r][c] = &m[r][c] - &(f.clone() * &m[rank][c]);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    // A pivot row may still carry a nonzero rhs with all coefficients zero
    // when rank stopped early; the loop above catches every such row because
    // elimination moved them below `rank`.
    let mut x = vec![Rat::zero(); ncols];
    for (col, pr) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pr {
            x[col] = m[*r][ncols].clone();
        }
    }
    Some(x)
}

/// Every algebraic invariant of `g` in one bundle. With `allow_infinite`,
/// stages blocked by infinite codimension are reported as absent instead of
/// failing the call.
#[derive(Clone, Debug)]
pub struct AlgebraicObjects {
    pub p: Option<IntrinsicIdeal>,
    pub s: IntrinsicIdeal,
    pub s_perp: Vec<Monomial>,
    pub s_gens: Vec<Monomial>,
    pub intermediate: Option<Vec<Monomial>>,
    pub rt: RestrictedTangent,
    pub t: Option<TangentSpace>,
    pub et_basis: Option<Vec<Monomial>>,
}

pub fn algebraic_objects(g: &SingularGerm, allow_infinite: bool) -> Result<AlgebraicObjects> {
    let ds = derivative_stairs(g);
    let rt = restricted_tangent(g)?;
    let p = match high_order_ideal(g) {
        Ok(itr) => Some(itr),
        Err(Error::InfiniteCodimension(_)) if allow_infinite => None,
        Err(e) => return Err(e),
    };
    let intermediate = p.as_ref().map(|itr| intermediate_of(itr, &ds));
    let t = match tangent_space_with(g, rt.clone()) {
        Ok(t) => Some(t),
        Err(Error::InfiniteCodimension(_)) if allow_infinite => None,
        Err(e) => return Err(e),
    };
    let et_basis = t.as_ref().map(|t| t.et_basis.clone());
    Ok(AlgebraicObjects {
        p,
        s: ds.s,
        s_perp: ds.s_perp,
        s_gens: ds.s_gens,
        intermediate,
        rt,
        t,
        et_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;

    fn xl() -> VarList {
        VarList::xl()
    }

    fn poly(s: &str) -> Polynomial {
        parse_germ(s).unwrap().to_polynomial(&xl()).unwrap()
    }

    fn germ(s: &str, n0: u32) -> SingularGerm {
        SingularGerm::new(parse_germ(s).unwrap(), n0).unwrap()
    }

    fn m(a: u32, b: u32) -> Monomial {
        Monomial(vec![a, b])
    }

    #[test]
    fn rejects_non_singular_input() {
        let e = SingularGerm::new(parse_germ("x+lambda").unwrap(), 3).unwrap_err();
        assert!(matches!(e, Error::Invalid(_)));
        let e = SingularGerm::new(parse_germ("1+x^2").unwrap(), 3).unwrap_err();
        assert!(matches!(e, Error::Invalid(_)));
    }

    #[test]
    fn quintic_algebraic_objects() {
        let g = germ("x^5+lambda*x+lambda^2", 3);
        assert_eq!(g.degree(), 5);
        assert_eq!(g.certificate.power(), Some(5));
        assert!(matches!(g.certificate.ring_advice, Ring::LocalJet(5)));
        let obj = algebraic_objects(&g, false).unwrap();
        assert_eq!(
            obj.p.as_ref().unwrap().stairs,
            vec![(6, 0), (2, 1), (0, 2)]
        );
        assert_eq!(obj.s.stairs, vec![(5, 0), (1, 1)]);
        assert_eq!(
            obj.s_perp,
            vec![m(0, 0), m(0, 1), m(1, 0), m(2, 0), m(3, 0), m(4, 0)]
        );
        assert_eq!(obj.s_gens, vec![m(1, 1), m(5, 0)]);
        assert!(obj.intermediate.as_ref().unwrap().is_empty());
        match &obj.rt.presentation {
            IdealPresentation::Intrinsic(i) => assert_eq!(i.stairs, vec![(5, 0), (1, 1)]),
            other => panic!("expected intrinsic presentation, got {other:?}"),
        }
        let t = obj.t.as_ref().unwrap();
        assert_eq!(t.ell, 0);
        assert_eq!(t.span, vec![poly("x+2*lambda"), poly("x^4+1/5*lambda")]);
        assert_eq!(t.et_basis, vec![m(0, 0), m(0, 1), m(2, 0), m(3, 0)]);
    }

    #[test]
    fn quintic_without_lambda_square_matches() {
        // λ² lies in 𝒫, so x⁵+λx must produce the same invariants.
        let g = germ("x^5+lambda*x", 3);
        let obj = algebraic_objects(&g, false).unwrap();
        assert_eq!(
            obj.p.as_ref().unwrap().stairs,
            vec![(6, 0), (2, 1), (0, 2)]
        );
        assert_eq!(obj.s.stairs, vec![(5, 0), (1, 1)]);
        let t = obj.t.as_ref().unwrap();
        assert_eq!(t.et_basis, vec![m(0, 0), m(0, 1), m(2, 0), m(3, 0)]);
    }

    #[test]
    fn normal_form_of_paper_intro_germ() {
        let g = germ("exp(x^2)+2*cos(x)-3+sin(lambda)", 3);
        assert_eq!(g.degree(), 4);
        let nf = normal_form(&g, 5).unwrap();
        assert_eq!(nf.poly, poly("7/12*x^4+lambda"));
        assert!(nf.shear.is_zero());
        assert!(nf.unremoved.is_empty());
        assert_eq!(normalize_corners(&nf.poly), poly("x^4+lambda"));
    }

    #[test]
    fn normal_form_deletes_high_order_terms() {
        let g = germ("x^5+lambda*x+lambda^2", 3);
        let nf = normal_form(&g, 5).unwrap();
        assert_eq!(nf.poly, poly("x^5+lambda*x"));
        // Idempotence: the normal form of a normal form is itself.
        let g2 = SingularGerm::from_polynomial(&nf.poly, 3).unwrap();
        let nf2 = normal_form(&g2, 5).unwrap();
        assert_eq!(nf2.poly, nf.poly);
        assert!(nf2.shear.is_zero());
    }

    #[test]
    fn shear_removes_one_intermediate_term() {
        let g = germ("x^5+x*lambda^2+lambda^3", 3);
        let a = intermediate_terms(&g).unwrap();
        assert_eq!(a, vec![m(0, 3), m(4, 1)]);
        let nf = normal_form(&g, 6).unwrap();
        assert_eq!(nf.poly, poly("x^5-5*x^4*lambda+x*lambda^2"));
        assert_eq!(nf.shear, int(-1));
        assert_eq!(nf.unremoved, vec![m(4, 1)]);
        // The sheared output is a fixed point: re-running prefers the zero
        // shear because every removed term pins b = 0.
        let g2 = SingularGerm::from_polynomial(&nf.poly, 3).unwrap();
        let nf2 = normal_form(&g2, 6).unwrap();
        assert_eq!(nf2.poly, nf.poly);
        assert!(nf2.shear.is_zero());
        assert_eq!(nf2.unremoved, vec![m(4, 1)]);
    }

    #[test]
    fn high_order_ideal_examples() {
        // Infinite codimension: g = x² keeps λ-direction unconstrained.
        let g = germ("x^2", 3);
        assert!(matches!(
            high_order_ideal(&g),
            Err(Error::InfiniteCodimension(_))
        ));
        // Fold: λ³ is a high-order term of x²+λ.
        let g = germ("x^2+lambda", 3);
        let p = high_order_ideal(&g).unwrap();
        assert_eq!(p.stairs, vec![(3, 0), (1, 1)]);
        assert!(p.contains_monomial(0, 3));
    }

    #[test]
    fn derivative_stairs_of_pure_lambda() {
        let g = germ("lambda", 3);
        let ds = derivative_stairs(&g);
        assert_eq!(ds.s.stairs, vec![(0, 1)]);
        assert_eq!(ds.s_gens, vec![m(0, 1)]);
        assert_eq!(ds.s_perp, vec![m(0, 0), m(1, 0), m(2, 0), m(3, 0)]);
        match restricted_tangent(&g).unwrap().presentation {
            IdealPresentation::Intrinsic(i) => assert_eq!(i.stairs, vec![(0, 1)]),
            other => panic!("expected intrinsic presentation, got {other:?}"),
        }
    }

    #[test]
    fn restricted_tangent_infinite_staircase() {
        let g = germ("lambda^3*sin(x)", 3);
        let rt = restricted_tangent(&g).unwrap();
        match &rt.presentation {
            IdealPresentation::Intrinsic(i) => assert_eq!(i.stairs, vec![(1, 3)]),
            other => panic!("expected intrinsic presentation, got {other:?}"),
        }
        assert!(matches!(
            tangent_space(&g),
            Err(Error::InfiniteCodimension(_))
        ));
    }

    #[test]
    fn restricted_tangent_wedge() {
        let g = germ("x^2", 3);
        let rt = restricted_tangent(&g).unwrap();
        match &rt.presentation {
            IdealPresentation::Wedge(gens) => assert_eq!(gens, &vec![m(1, 1), m(2, 0)]),
            other => panic!("expected wedge presentation, got {other:?}"),
        }
    }

    #[test]
    fn fold_has_codimension_zero() {
        let g = germ("x^2+lambda", 3);
        let t = tangent_space(&g).unwrap();
        assert_eq!(t.ell, 0);
        assert_eq!(t.span, vec![poly("1"), poly("x")]);
        assert!(t.et_basis.is_empty());
    }

    #[test]
    fn quartic_tangent_codimension() {
        let g = germ("x^4+lambda*x", 3);
        let t = tangent_space(&g).unwrap();
        assert_eq!(t.et_basis, vec![m(0, 0), m(0, 1), m(2, 0)]);
    }

    #[test]
    fn recognition_examples() {
        let r = recognition_conditions(&poly("x^5+lambda*x")).unwrap();
        assert_eq!(
            r.zero_at,
            vec![m(0, 0), m(0, 1), m(1, 0), m(2, 0), m(3, 0), m(4, 0)]
        );
        assert_eq!(r.nonzero_at, vec![m(1, 1), m(5, 0)]);
        let r = recognition_conditions(&poly("x^4+lambda")).unwrap();
        assert_eq!(r.zero_at, vec![m(0, 0), m(1, 0), m(2, 0), m(3, 0)]);
        assert_eq!(r.nonzero_at, vec![m(0, 1), m(4, 0)]);
        assert!(matches!(
            recognition_conditions(&poly("lambda")),
            Err(Error::InfiniteCodimension(_))
        ));
        assert!(matches!(
            recognition_conditions(&poly("x+lambda")),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn transformation_identity_and_scaling() {
        let f = poly("x^5+lambda*x");
        let t = transformation_solve(&f, &f, 5).unwrap();
        assert_eq!(t.x, poly("x"));
        assert_eq!(t.s, poly("1"));
        let g = poly("2*x^5+2*lambda*x");
        let t = transformation_solve(&g, &f, 5).unwrap();
        assert_eq!(t.x, poly("x"));
        assert_eq!(t.s, poly("2"));
        assert!(contact_residual(&g, &f, &t.x, &t.s, 5).is_zero());
    }

    #[test]
    fn transformation_with_shear() {
        let f = poly("lambda*x");
        let g = poly("lambda*x+lambda^2");
        let t = transformation_solve(&g, &f, 2).unwrap();
        assert_eq!(t.x, poly("x+lambda"));
        assert_eq!(t.s, poly("1"));
        assert!(contact_residual(&g, &f, &t.x, &t.s, 2).is_zero());
    }

    #[test]
    fn transformation_detects_inequivalence() {
        let f = poly("lambda*x");
        assert!(matches!(
            transformation_solve(&poly("lambda*x+x^2"), &f, 2),
            Err(Error::Unsolvable(_))
        ));
        assert!(matches!(
            transformation_solve(&poly("0-lambda*x"), &f, 2),
            Err(Error::Unsolvable(_))
        ));
        assert!(matches!(
            transformation_solve(&poly("x^3"), &f, 3),
            Err(Error::Unsolvable(_))
        ));
    }

    #[test]
    fn transformation_from_normal_form_back_to_germ() {
        let expr = parse_germ("exp(x^2)+2*cos(x)-3+sin(lambda)").unwrap();
        let f = taylor_jet(&expr, 5).unwrap().poly().clone();
        let nf = poly("7/12*x^4+lambda");
        let t = transformation_solve(&nf, &f, 5).unwrap();
        assert_eq!(t.x, poly("x"));
        assert_eq!(t.s, poly("1+1/6*lambda^2+7/360*lambda^4"));
        assert!(contact_residual(&nf, &f, &t.x, &t.s, 5).is_zero());
    }

    #[test]
    fn normalize_corners_golden() {
        assert_eq!(
            normalize_corners(&poly("7/12*x^4+lambda")),
            poly("x^4+lambda")
        );
        // Already normalized inputs pass through untouched.
        let p = poly("x^5+lambda*x");
        assert_eq!(normalize_corners(&p), p);
    }
}
