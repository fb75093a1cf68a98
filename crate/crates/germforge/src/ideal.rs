//! Quotient-algebra analysis: normal sets, multiplication matrices, power
//! containment, colon ideals, intersections, and truncation certification.
//!
//! The certification logic mirrors the two Nakayama routes: a finite
//! certificate exhibits `M^k ⊆ I` inside the jet ring with `k ≤ N`, an
//! infinite certificate exhibits a staircase (or a monomial wedge) inside the
//! jet ideal whose soundness survives every truncation the computation
//! performed — each dropped monomial and each generator tail must lie in
//! `M · evidence`.

use crate::basis::{groebner_basis, reduce_basis, BasisComputation};
use crate::division::{dedup_monomials, divide, remainder, IdealBasis, Ring};
use crate::error::{Error, Result};
use crate::germ::GermExpression;
use crate::int;
use crate::jet::{taylor_jet, Jet};
use crate::monomial::{monomials_of_degree, monomials_up_to_degree, Monomial};
use crate::order::MonomialOrder;
use crate::poly::{Polynomial, Term};
use crate::vars::{Var, VarList};
use crate::Rat;

/// Default cap on the certified truncation degree searched by
/// [`verify_truncation`].
pub const TRUNCATION_CAP: u32 = 24;

/// Monomial basis of the quotient `K[x,λ]/(I + M^{N+1})`: every monomial of
/// degree ≤ N outside the leading-term ideal of a standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientBasis {
    pub monomials: Vec<Monomial>,
}

impl QuotientBasis {
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }
}

/// Matrix of multiplication by one variable on the quotient algebra, in
/// [`QuotientBasis`] coordinates, together with its nilpotency degree.
#[derive(Clone, Debug)]
pub struct MultMatrix {
    pub var: Var,
    pub basis: QuotientBasis,
    /// `matrix[i][j]` = coefficient of `basis[i]` in `var · basis[j]` reduced
    /// against the standard basis.
    pub matrix: Vec<Vec<Rat>>,
    /// Least `p` with `matrix^p = 0`.
    pub nilpotency: u32,
}

/// Result of the power-containment scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxPower {
    /// Least `k` with `M^k` contained in the ideal.
    Finite(u32),
    /// No power of the maximal ideal is ever contained (a non-unit monomial
    /// divides every generator).
    Infinite,
}

/// Reduced standard basis plus the normal set it carves out, shared plumbing
/// for the quotient-algebra operations.
struct Quotient {
    sb: IdealBasis,
    basis: Vec<Monomial>,
    degree: u32,
}

fn sort_normal(set: &mut [Monomial]) {
    set.sort_by_key(|m| (m.total_degree(), m.exp(0)));
}

fn quotient_of(comp: &BasisComputation, n: u32) -> Result<Quotient> {
    if comp.basis.is_empty() {
        return Err(Error::StaircaseEscapes {
            degree: n,
            msg: "zero ideal has no finite normal set".into(),
        });
    }
    let nvars = comp.basis.vars().len();
    let lts = comp.basis.leading_monomials();
    let mut normal = Vec::new();
    let mut escapes = Vec::new();
    for m in monomials_up_to_degree(nvars, n) {
        if lts.iter().any(|l| l.divides(&m)) {
            continue;
        }
        if m.total_degree() == n {
            escapes.push(m.clone());
        }
        normal.push(m);
    }
    if !escapes.is_empty() {
        return Err(Error::StaircaseEscapes {
            degree: n,
            msg: format!(
                "{} normal monomial(s) of degree {} survive, e.g. {:?}",
                escapes.len(),
                n,
                escapes[0].0
            ),
        });
    }
    sort_normal(&mut normal);
    Ok(Quotient {
        sb: comp.basis.clone(),
        basis: normal,
        degree: n,
    })
}

fn quotient(input: &IdealBasis) -> Result<Quotient> {
    let n = input.ring.truncation().ok_or_else(|| {
        Error::invalid("normal sets are defined in the local jet ring; pass a LocalJet basis")
    })?;
    let comp = reduce_basis(input);
    quotient_of(&comp, n)
}

/// All monomials of degree ≤ N outside the leading-term ideal (Eq. of the
/// staircase complement). Errors when the staircase is not finite within the
/// jet degree — evidence of infinite codimension or an insufficient `N`.
pub fn normal_set(input: &IdealBasis) -> Result<QuotientBasis> {
    let q = quotient(input)?;
    Ok(QuotientBasis {
        monomials: q.basis,
    })
}

fn reduce_in(sb: &IdealBasis, p: &Polynomial) -> Polynomial {
    remainder(p, sb)
}

/// Least `p` such that multiplication by `u^p` kills the whole quotient.
fn nilpotency_of(q: &Quotient, u: Var) -> u32 {
    if q.basis.is_empty() {
        return 0;
    }
    let vars = q.sb.vars().clone();
    let ui = vars.index_of(u).expect("variable in ring");
    for p in 1..=(q.degree + 1) {
        let step = Monomial::var(vars.len(), ui, p);
        let dead = q.basis.iter().all(|w| {
            let m = w.mul(&step);
            reduce_in(&q.sb, &Polynomial::from_monomial(vars.clone(), m, int(1))).is_zero()
        });
        if dead {
            return p;
        }
    }
    q.degree + 1
}

/// Matrix of `f ↦ u·f` on the quotient algebra (Eq. of φ_{u,J}).
pub fn mult_matrix(input: &IdealBasis, u: Var) -> Result<MultMatrix> {
    let q = quotient(input)?;
    let vars = q.sb.vars().clone();
    let ui = vars
        .index_of(u)
        .ok_or_else(|| Error::invalid(format!("variable {u} not in the ring")))?;
    let dim = q.basis.len();
    let step = Monomial::var(vars.len(), ui, 1);
    let mut matrix = vec![vec![int(0); dim]; dim];
    for (j, w) in q.basis.iter().enumerate() {
        let image = reduce_in(
            &q.sb,
            &Polynomial::from_monomial(vars.clone(), w.mul(&step), int(1)),
        );
        for t in image.terms() {
            let i = q
                .basis
                .iter()
                .position(|b| *b == t.mono)
                .expect("remainder supported on the normal set");
            matrix[i][j] = t.coef.clone();
        }
    }
    let nilpotency = nilpotency_of(&q, u);
    Ok(MultMatrix {
        var: u,
        basis: QuotientBasis {
            monomials: q.basis,
        },
        matrix,
        nilpotency,
    })
}

/// Least `k` with `M^k ⊆ ⟨B⟩`, scanned from `max{N_x, N_λ}` upward
/// (§3.1 inequality `max{N_x,N_λ} ≤ k < N_x+N_λ`); `Infinite` when a
/// non-unit monomial divides every generator term, so no power ever fits.
pub fn max_power_in_ideal(input: &IdealBasis) -> Result<MaxPower> {
    let n = input
        .ring
        .truncation()
        .ok_or_else(|| Error::invalid("power containment is scanned in the local jet ring"))?;
    if input.is_empty() {
        return Ok(MaxPower::Infinite);
    }
    match quotient(input) {
        Ok(q) => {
            let lo = nilpotency_of(&q, Var::X).max(nilpotency_of(&q, Var::Lambda));
            let vars = q.sb.vars().clone();
            for k in lo..=n {
                let all_in = monomials_of_degree(vars.len(), k).into_iter().all(|m| {
                    reduce_in(&q.sb, &Polynomial::from_monomial(vars.clone(), m, int(1)))
                        .is_zero()
                });
                if all_in {
                    return Ok(MaxPower::Finite(k));
                }
            }
            Err(Error::Certification(format!(
                "no power of the maximal ideal found up to degree {n}"
            )))
        }
        Err(Error::StaircaseEscapes { .. }) => {
            let mut common: Option<Monomial> = None;
            for g in &input.gens {
                for t in g.terms() {
                    common = Some(match common {
                        None => t.mono.clone(),
                        Some(h) => h.gcd(&t.mono),
                    });
                }
            }
            match common {
                Some(m) if !m.is_one() => Ok(MaxPower::Infinite),
                _ => Err(Error::Certification(format!(
                    "power containment inconclusive at degree {n}; raise the truncation degree"
                ))),
            }
        }
        Err(e) => Err(e),
    }
}

/// Does `M^i⟨λ^j⟩ ⊆ ⟨B⟩` hold in the jet ring? Tests the generating
/// monomials `x^s λ^{i+j-s}`, `s = 0..i`.
pub fn power_lambda_test(input: &IdealBasis, i: u32, j: u32) -> Result<bool> {
    let n = input
        .ring
        .truncation()
        .ok_or_else(|| Error::invalid("power tests run in the local jet ring"))?;
    if i + j > n {
        return Err(Error::invalid(format!(
            "stair degree {} exceeds the jet degree {n}",
            i + j
        )));
    }
    if input.is_empty() {
        return Ok(false);
    }
    let comp = reduce_basis(input);
    let vars = comp.basis.vars().clone();
    let xi = vars
        .index_of(Var::X)
        .ok_or_else(|| Error::invalid("ring without x"))?;
    let li = vars
        .index_of(Var::Lambda)
        .ok_or_else(|| Error::invalid("ring without lambda"))?;
    for s in 0..=i {
        let mut exps = vec![0u32; vars.len()];
        exps[xi] = s;
        exps[li] = i + j - s;
        let m = Monomial(exps);
        if !reduce_in(&comp.basis, &Polynomial::from_monomial(vars.clone(), m, int(1))).is_zero()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Polynomial generators of the same ideal: the reduced jet standard basis
/// together with all monomials of degree `k`, where `M^k ⊆ I` (Thm on the
/// finite-codimension remainder / Thm 2.18 part 3). Identity on global bases.
pub fn polynomialize(input: &IdealBasis) -> Result<IdealBasis> {
    match input.ring {
        Ring::GlobalPoly => Ok(input.clone()),
        Ring::LocalJet(_) => {
            let k = match max_power_in_ideal(input)? {
                MaxPower::Finite(k) => k,
                MaxPower::Infinite => {
                    return Err(Error::InfiniteCodimension(
                        "polynomial presentation needs a contained power of the maximal ideal"
                            .into(),
                    ))
                }
            };
            let comp = reduce_basis(input);
            let vars = comp.basis.vars().clone();
            let mut gens = comp.basis.gens.clone();
            for m in monomials_of_degree(vars.len(), k) {
                gens.push(Polynomial::from_monomial(vars.clone(), m, int(1)));
            }
            Ok(IdealBasis::new(gens, MonomialOrder::LexGlobal, Ring::GlobalPoly))
        }
    }
}

/// Gröbner basis of `⟨B₁⟩ ∩ ⟨B₂⟩` via the t-trick: eliminate `t` from
/// `⟨t·fᵢ, (1−t)·gⱼ⟩` with a block order putting `t` first.
pub fn ideal_intersection(b1: &IdealBasis, b2: &IdealBasis) -> Result<IdealBasis> {
    if b1.ring != Ring::GlobalPoly || b2.ring != Ring::GlobalPoly {
        return Err(Error::invalid(
            "ideal intersection runs on polynomial (global) bases",
        ));
    }
    if b1.is_empty() || b2.is_empty() {
        return Ok(IdealBasis::new(
            Vec::new(),
            MonomialOrder::LexGlobal,
            Ring::GlobalPoly,
        ));
    }
    let vars = b1.vars().clone();
    if *b2.vars() != vars {
        return Err(Error::VariableMismatch(
            "intersection operands live in different rings".into(),
        ));
    }
    let mut ext_list = vec![Var::T];
    ext_list.extend(vars.iter());
    let ext = VarList(ext_list);
    let t = Polynomial::var_pow(ext.clone(), Var::T, 1);
    let one_minus_t = Polynomial::one(ext.clone()).sub(&t);
    let mut gens = Vec::new();
    for f in &b1.gens {
        gens.push(t.mul(&f.embed(&ext)?));
    }
    for g in &b2.gens {
        gens.push(one_minus_t.mul(&g.embed(&ext)?));
    }
    let gb = groebner_basis(&IdealBasis::new(
        gens,
        MonomialOrder::Block { elim: 1 },
        Ring::GlobalPoly,
    ))
    .basis;
    let mut kept = Vec::new();
    for h in &gb.gens {
        if h.degree_in(Var::T) == 0 {
            kept.push(
                h.project_away(&[Var::T], &vars)
                    .expect("t-free element projects"),
            );
        }
    }
    // Re-reduce under plain lex so the returned basis is a reduced Gröbner
    // basis in the stated order, not just in the restricted block order.
    Ok(groebner_basis(&IdealBasis::new(kept, MonomialOrder::LexGlobal, Ring::GlobalPoly)).basis)
}

/// Colon ideal `I : ⟨g⟩` for a monomial `g` (Eq. Colon): polynomialize,
/// intersect with `⟨g⟩`, divide each generator by `g`.
pub fn colon_ideal(input: &IdealBasis, g: &Monomial) -> Result<IdealBasis> {
    let j = polynomialize(input)?;
    if j.is_empty() {
        return Ok(j);
    }
    let vars = j.vars().clone();
    if g.nvars() != vars.len() {
        return Err(Error::VariableMismatch(
            "colon divisor uses a different variable count".into(),
        ));
    }
    if g.is_one() {
        return Ok(j);
    }
    let gp = Polynomial::from_monomial(vars.clone(), g.clone(), int(1));
    let inter = ideal_intersection(
        &j,
        &IdealBasis::new(vec![gp], MonomialOrder::LexGlobal, Ring::GlobalPoly),
    )?;
    let mut out = Vec::new();
    for h in &inter.gens {
        let mut terms = Vec::new();
        for t in h.terms() {
            let m = t.mono.div(g).ok_or_else(|| {
                Error::invalid("intersection element not divisible by the colon divisor")
            })?;
            terms.push(Term {
                coef: t.coef.clone(),
                mono: m,
            });
        }
        out.push(Polynomial::new(vars.clone(), terms));
    }
    Ok(IdealBasis::new(out, MonomialOrder::LexGlobal, Ring::GlobalPoly))
}

/// Evidence backing a truncation certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TruncationEvidence {
    /// `M^k ⊆ I` verified in the jet ring with `k ≤ N` (Thm 2.18 part 5).
    FinitePower { k: u32 },
    /// A staircase `Σ M^{k_i}⟨λ^{l_i}⟩` lies in the jet ideal and every
    /// truncated or tail monomial lies in `M ·` that staircase
    /// (Thm 2.18 part 6).
    Staircase { stairs: Vec<(u32, u32)> },
    /// The reduced jet standard basis is a set of monomials `W`; every
    /// truncated or tail monomial is strictly divisible by one of them, so
    /// Nakayama applies to the finitely generated monomial ideal `⟨W⟩`.
    MonomialWedge { gens: Vec<Monomial> },
}

/// Certified truncation degree for a generator list, with ring advice.
#[derive(Clone, Debug)]
pub struct TruncationCertificate {
    /// The certified jet degree `N`.
    pub degree: u32,
    /// Ring the downstream computation should use: `GlobalPoly` when the
    /// generators are polynomial and the polynomial-ring power containment
    /// holds (Thm 2.18 part 2), otherwise `LocalJet(N)`.
    pub ring_advice: Ring,
    pub evidence: TruncationEvidence,
}

impl TruncationCertificate {
    /// The contained power `k` when the certificate is finite.
    pub fn power(&self) -> Option<u32> {
        match &self.evidence {
            TruncationEvidence::FinitePower { k } => Some(*k),
            _ => None,
        }
    }
}

fn in_m_times_staircase(m: &Monomial, stairs: &[(u32, u32)], xi: usize, li: usize) -> bool {
    let a = m.exp(xi);
    let b = m.exp(li);
    stairs
        .iter()
        .any(|&(k, l)| b >= l && a + b >= k + l + 1)
}

fn strictly_divisible_by_any(m: &Monomial, gens: &[Monomial]) -> bool {
    gens.iter().any(|w| w.divides(m) && w != m)
}

/// Maximal staircase contained in the jet ideal, probed edge-by-edge:
/// for each λ-power `l` find the least `k` with `M^k⟨λ^l⟩` reducing to zero,
/// keeping only strict `k+l` drops. Division drops of kept stairs are logged.
pub(crate) fn staircase_search(
    sb: &IdealBasis,
    n: u32,
    drops: &mut Vec<Monomial>,
) -> Vec<(u32, u32)> {
    let vars = sb.vars().clone();
    let xi = vars.index_of(Var::X).expect("ring with x");
    let li = vars.index_of(Var::Lambda).expect("ring with lambda");
    let mut stairs = Vec::new();
    let mut best: Option<u32> = None;
    for l in 0..=n {
        let mut found: Option<(u32, Vec<Monomial>)> = None;
        'scan: for k in 0..=(n - l) {
            let mut local = Vec::new();
            for s in 0..=k {
                let mut exps = vec![0u32; vars.len()];
                exps[xi] = s;
                exps[li] = k + l - s;
                let div = divide(
                    &Polynomial::from_monomial(vars.clone(), Monomial(exps), int(1)),
                    sb,
                );
                if !div.remainder.is_zero() {
                    continue 'scan;
                }
                local.extend(div.dropped);
            }
            found = Some((k, local));
            break;
        }
        if let Some((k, local)) = found {
            if best.map_or(true, |b| k + l < b) {
                stairs.push((k, l));
                best = Some(k + l);
                drops.extend(local);
            }
            if k == 0 {
                break;
            }
        }
    }
    dedup_monomials(drops);
    stairs
}

fn global_power_holds(polys: &[Polynomial], k: u32) -> bool {
    let vars = VarList::xl();
    let gb = groebner_basis(&IdealBasis::new(
        polys.to_vec(),
        MonomialOrder::LexGlobal,
        Ring::GlobalPoly,
    ))
    .basis;
    if gb.is_empty() {
        return false;
    }
    monomials_of_degree(vars.len(), k).into_iter().all(|m| {
        remainder(&Polynomial::from_monomial(vars.clone(), m, int(1)), &gb).is_zero()
    })
}

/// Search `N = N₀, N₀+1, …` (capped) for a degree at which the jet
/// computation is certified faithful: a finite power `M^k ⊆ I` with `k ≤ N`
/// (Thm 2.18 part 5), or staircase/wedge evidence whose tail conditions hold
/// (part 6). Fails loudly when no degree up to the cap certifies.
pub fn verify_truncation(
    gens: &[GermExpression],
    n0: u32,
) -> Result<TruncationCertificate> {
    let global = if gens.iter().all(|e| e.is_polynomial()) {
        let vars = VarList::xl();
        Some(
            gens.iter()
                .map(|e| e.to_polynomial(&vars))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    verify_truncation_jets(
        |n| gens.iter().map(|e| taylor_jet(e, n)).collect(),
        global.as_deref(),
        n0,
    )
}

/// [`verify_truncation`] over jets produced by a callback, for ideals whose
/// generators are derived from a germ (products with monomials, derivatives)
/// rather than parsed expressions. `global` supplies exact polynomial
/// generators of the same ideal when they exist; it unlocks the `GlobalPoly`
/// ring advice.
pub fn verify_truncation_jets(
    jets_at: impl Fn(u32) -> Result<Vec<Jet>>,
    global: Option<&[Polynomial]>,
    n0: u32,
) -> Result<TruncationCertificate> {
    let cap = TRUNCATION_CAP.max(n0);
    for n in n0..=cap {
        let jets = jets_at(n)?;
        let polys: Vec<Polynomial> = jets.iter().map(|j| j.poly().clone()).collect();
        let basis = IdealBasis::new(polys, MonomialOrder::AlexLocal, Ring::LocalJet(n));
        if basis.is_empty() {
            continue;
        }
        let comp = reduce_basis(&basis);
        match quotient_of(&comp, n) {
            Ok(q) => {
                let lo = nilpotency_of(&q, Var::X).max(nilpotency_of(&q, Var::Lambda));
                let vars = q.sb.vars().clone();
                let mut power = None;
                for k in lo..=n {
                    let all_in = monomials_of_degree(vars.len(), k).into_iter().all(|m| {
                        reduce_in(&q.sb, &Polynomial::from_monomial(vars.clone(), m, int(1)))
                            .is_zero()
                    });
                    if all_in {
                        power = Some(k);
                        break;
                    }
                }
                if let Some(k) = power {
                    let ring_advice = match global {
                        Some(polys) if global_power_holds(polys, k) => Ring::GlobalPoly,
                        _ => Ring::LocalJet(n),
                    };
                    return Ok(TruncationCertificate {
                        degree: n,
                        ring_advice,
                        evidence: TruncationEvidence::FinitePower { k },
                    });
                }
            }
            Err(Error::StaircaseEscapes { .. }) => {
                let vars = comp.basis.vars().clone();
                let xi = vars.index_of(Var::X);
                let li = vars.index_of(Var::Lambda);
                let (xi, li) = match (xi, li) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                let mut drops = comp.dropped.clone();
                let stairs = staircase_search(&comp.basis, n, &mut drops);
                if !stairs.is_empty() {
                    let sound_drops = drops
                        .iter()
                        .all(|m| in_m_times_staircase(m, &stairs, xi, li));
                    let mut sound_tails = true;
                    for j in &jets {
                        match j.tail().cone() {
                            Some(cone) => {
                                if !cone
                                    .iter()
                                    .all(|m| in_m_times_staircase(m, &stairs, xi, li))
                                {
                                    sound_tails = false;
                                }
                            }
                            None => {
                                return Err(Error::Certification(
                                    "generator tail support is unknown; cannot certify an \
                                     infinite-codimension truncation"
                                        .into(),
                                ))
                            }
                        }
                    }
                    if sound_drops && sound_tails {
                        return Ok(TruncationCertificate {
                            degree: n,
                            ring_advice: Ring::LocalJet(n),
                            evidence: TruncationEvidence::Staircase { stairs },
                        });
                    }
                }
                // Wedge fallback: a purely monomial reduced standard basis.
                if comp.basis.gens.iter().all(|g| g.num_terms() == 1) {
                    let lts = comp.basis.leading_monomials();
                    let sound_drops = drops
                        .iter()
                        .all(|m| strictly_divisible_by_any(m, &lts));
                    let mut sound_tails = true;
                    for j in &jets {
                        match j.tail().cone() {
                            Some(cone) => {
                                if !cone.iter().all(|m| strictly_divisible_by_any(m, &lts)) {
                                    sound_tails = false;
                                }
                            }
                            None => {
                                return Err(Error::Certification(
                                    "generator tail support is unknown; cannot certify an \
                                     infinite-codimension truncation"
                                        .into(),
                                ))
                            }
                        }
                    }
                    if sound_drops && sound_tails {
                        let mut gens_sorted = lts;
                        gens_sorted.sort_by_key(|m| (m.total_degree(), m.exp(0)));
                        return Ok(TruncationCertificate {
                            degree: n,
                            ring_advice: Ring::LocalJet(n),
                            evidence: TruncationEvidence::MonomialWedge { gens: gens_sorted },
                        });
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Certification(format!(
        "no truncation certificate found for degrees {n0}..={cap}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;
    use crate::rat;

    fn poly(s: &str) -> Polynomial {
        parse_germ(s)
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap()
    }

    fn mono(a: u32, b: u32) -> Monomial {
        Monomial(vec![a, b])
    }

    fn jet_basis(gens: &[&str], n: u32) -> IdealBasis {
        IdealBasis::new(
            gens.iter().map(|s| poly(s)).collect(),
            MonomialOrder::AlexLocal,
            Ring::LocalJet(n),
        )
    }

    fn global_basis(gens: &[&str]) -> IdealBasis {
        IdealBasis::new(
            gens.iter().map(|s| poly(s)).collect(),
            MonomialOrder::LexGlobal,
            Ring::GlobalPoly,
        )
    }

    #[test]
    fn normal_set_of_derivative_stair_ideal() {
        // M^5 + M⟨λ⟩ = ⟨x^5, xλ, λ^2⟩: complement {1, λ, x, x², x³, x⁴}.
        let b = jet_basis(&["x^5", "x*lambda", "lambda^2"], 5);
        let q = normal_set(&b).unwrap();
        assert_eq!(
            q.monomials,
            vec![
                mono(0, 0),
                mono(0, 1),
                mono(1, 0),
                mono(2, 0),
                mono(3, 0),
                mono(4, 0)
            ]
        );
        assert_eq!(q.dimension(), 6);
        let mx = mult_matrix(&b, Var::X).unwrap();
        let ml = mult_matrix(&b, Var::Lambda).unwrap();
        assert_eq!(mx.nilpotency, 5);
        assert_eq!(ml.nilpotency, 2);
    }

    #[test]
    fn normal_set_errors_when_staircase_escapes() {
        let b = jet_basis(&["x"], 3);
        match normal_set(&b) {
            Err(Error::StaircaseEscapes { degree: 3, .. }) => {}
            other => panic!("expected staircase escape, got {other:?}"),
        }
    }

    #[test]
    fn keyfitz_ideal_quotient_and_power() {
        // Example with x^5+x^3λ+λ² and friends: 9-dimensional local quotient,
        // N_x = 6, N_λ = 3, M^6 the first maximal-ideal power inside.
        let gens = [
            "x^5 + x^3*lambda + lambda^2",
            "5*x^5 + 3*x^3*lambda",
            "5*x^4*lambda + 3*x^2*lambda^2",
        ];
        let b = jet_basis(&gens, 6);
        let q = normal_set(&b).unwrap();
        assert_eq!(
            q.monomials,
            vec![
                mono(0, 0),
                mono(0, 1),
                mono(1, 0),
                mono(1, 1),
                mono(2, 0),
                mono(2, 1),
                mono(3, 0),
                mono(4, 0),
                mono(5, 0)
            ]
        );
        let mx = mult_matrix(&b, Var::X).unwrap();
        let ml = mult_matrix(&b, Var::Lambda).unwrap();
        assert_eq!(mx.nilpotency, 6);
        assert_eq!(ml.nilpotency, 3);
        assert_eq!(max_power_in_ideal(&b).unwrap(), MaxPower::Finite(6));
    }

    #[test]
    fn mult_matrix_on_square_maximal_ideal() {
        let b = jet_basis(&["x^2", "x*lambda", "lambda^2"], 2);
        let m = mult_matrix(&b, Var::X).unwrap();
        assert_eq!(m.basis.monomials, vec![mono(0, 0), mono(0, 1), mono(1, 0)]);
        let nonzero: Vec<(usize, usize)> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| m.matrix[i][j] != int(0))
            .collect();
        // Single entry: x·1 = x, i.e. basis[2] ← basis[0].
        assert_eq!(nonzero, vec![(2, 0)]);
        assert_eq!(m.matrix[2][0], int(1));
        assert_eq!(m.nilpotency, 2);
        assert_eq!(max_power_in_ideal(&b).unwrap(), MaxPower::Finite(2));
    }

    #[test]
    fn max_power_reports_infinite_on_common_factor() {
        let b = jet_basis(&["x*lambda^3", "lambda^4"], 6);
        assert_eq!(max_power_in_ideal(&b).unwrap(), MaxPower::Infinite);
    }

    fn p_ideal(n: u32) -> IdealBasis {
        // ⟨xg, λg, x²g_x, λg_x⟩ for g = x^5 + λx + λ².
        jet_basis(
            &[
                "x*(x^5 + lambda*x + lambda^2)",
                "lambda*(x^5 + lambda*x + lambda^2)",
                "x^2*(5*x^4 + lambda)",
                "lambda*(5*x^4 + lambda)",
            ],
            n,
        )
    }

    #[test]
    fn stair_tests_on_high_order_ideal() {
        let b = p_ideal(6);
        assert!(power_lambda_test(&b, 0, 2).unwrap());
        assert!(!power_lambda_test(&b, 1, 1).unwrap());
        assert!(power_lambda_test(&b, 2, 1).unwrap());
        assert!(power_lambda_test(&b, 6, 0).unwrap());
        assert!(!power_lambda_test(&b, 5, 0).unwrap());
        assert_eq!(max_power_in_ideal(&b).unwrap(), MaxPower::Finite(6));
    }

    #[test]
    fn colon_by_lambda_peels_one_stair() {
        // (⟨xg, λg, x²g_x, λg_x⟩ : ⟨λ⟩) contains M², the next stair of 𝒫.
        let b = p_ideal(6);
        let c = colon_ideal(&b, &mono(0, 1)).unwrap();
        let cj = IdealBasis::new(c.gens.clone(), MonomialOrder::AlexLocal, Ring::LocalJet(6));
        assert_eq!(max_power_in_ideal(&cj).unwrap(), MaxPower::Finite(2));
    }

    #[test]
    fn colon_of_monomial_ideal() {
        let b = global_basis(&["x^2", "x*lambda"]);
        let c = colon_ideal(&b, &mono(0, 1)).unwrap();
        assert_eq!(c.gens.len(), 1);
        assert_eq!(c.gens[0], poly("x"));
        // I : ⟨1⟩ = I.
        let id = colon_ideal(&b, &mono(0, 0)).unwrap();
        assert_eq!(id.gens, b.gens);
    }

    #[test]
    fn colon_completeness_against_brute_force() {
        let b = global_basis(&["x^3", "x*lambda^2", "lambda^3 + x^2*lambda"]);
        let g = mono(0, 2);
        let c = colon_ideal(&b, &g).unwrap();
        let gb = groebner_basis(&b).basis;
        for m in monomials_up_to_degree(2, 5) {
            let mp = Polynomial::from_monomial(VarList::xl(), m.clone(), int(1));
            let gp = Polynomial::from_monomial(VarList::xl(), g.clone(), int(1));
            let in_colon = remainder(&mp, &c).is_zero();
            let product_in = remainder(&mp.mul(&gp), &gb).is_zero();
            assert_eq!(in_colon, product_in, "mismatch at {:?}", m.0);
        }
    }

    #[test]
    fn intersection_of_principal_ideals() {
        let b1 = global_basis(&["x"]);
        let b2 = global_basis(&["lambda"]);
        let i = ideal_intersection(&b1, &b2).unwrap();
        assert_eq!(i.gens.len(), 1);
        assert_eq!(i.gens[0], poly("x*lambda"));
    }

    #[test]
    fn intersection_is_idempotent_on_leading_ideals() {
        let b = global_basis(&["x^2 - lambda", "x*lambda"]);
        let i = ideal_intersection(&b, &b).unwrap();
        let gb = groebner_basis(&b).basis;
        let mut lts_i = i.leading_monomials();
        let mut lts_g = gb.leading_monomials();
        lts_i.sort();
        lts_g.sort();
        assert_eq!(lts_i, lts_g);
    }

    #[test]
    fn intersection_matches_brute_force_membership() {
        let b1 = global_basis(&["x^2", "lambda^3"]);
        let b2 = global_basis(&["x*lambda"]);
        let i = ideal_intersection(&b1, &b2).unwrap();
        let g1 = groebner_basis(&b1).basis;
        let g2 = groebner_basis(&b2).basis;
        for m in monomials_up_to_degree(2, 6) {
            let mp = Polynomial::from_monomial(VarList::xl(), m.clone(), int(1));
            let both = remainder(&mp, &g1).is_zero() && remainder(&mp, &g2).is_zero();
            let inter = remainder(&mp, &i).is_zero();
            assert_eq!(both, inter, "mismatch at {:?}", m.0);
        }
    }

    #[test]
    fn certify_transcendental_triple() {
        let gens = vec![
            parse_germ("sin(lambda^7 + x) + exp(x^4) - x - 1 - lambda^9").unwrap(),
            parse_germ("x^5 - lambda^2").unwrap(),
            parse_germ("cos(x^6) - lambda - 1").unwrap(),
        ];
        let cert = verify_truncation(&gens, 1).unwrap();
        assert_eq!(cert.degree, 3);
        assert_eq!(cert.power(), Some(3));
        assert_eq!(cert.ring_advice, Ring::LocalJet(3));
        // The certified standard basis has leading ideal ⟨λ, x³⟩.
        let polys: Vec<Polynomial> = gens
            .iter()
            .map(|e| taylor_jet(e, cert.degree).unwrap().poly().clone())
            .collect();
        let b = IdealBasis::new(polys, MonomialOrder::AlexLocal, Ring::LocalJet(cert.degree));
        let mut lts = reduce_basis(&b).basis.leading_monomials();
        lts.sort();
        assert_eq!(lts, vec![mono(0, 1), mono(3, 0)]);
    }

    #[test]
    fn certify_keyfitz_ideal_prefers_jet_ring() {
        // Finite codimension (M^6 ⊆ I) yet the polynomial-ring containment
        // fails, so the advice must stay with the local jet ring.
        let gens = vec![
            parse_germ("x^5 + x^3*lambda + lambda^2").unwrap(),
            parse_germ("5*x^5 + 3*x^3*lambda").unwrap(),
            parse_germ("5*x^4*lambda + 3*x^2*lambda^2").unwrap(),
        ];
        let cert = verify_truncation(&gens, 2).unwrap();
        assert_eq!(cert.degree, 6);
        assert_eq!(cert.power(), Some(6));
        assert_eq!(cert.ring_advice, Ring::LocalJet(6));
    }

    #[test]
    fn certify_polynomial_ideal_allows_global_ring() {
        let gens = vec![
            parse_germ("x^2 - lambda").unwrap(),
            parse_germ("lambda^2").unwrap(),
        ];
        let cert = verify_truncation(&gens, 1).unwrap();
        assert_eq!(cert.ring_advice, Ring::GlobalPoly);
        assert!(cert.power().is_some());
    }

    #[test]
    fn certify_restricted_tangent_staircase() {
        // ⟨g, xg_x, λg_x⟩ for g = λ³ sin x: staircase M⟨λ³⟩.
        let gens = vec![
            parse_germ("lambda^3*sin(x)").unwrap(),
            parse_germ("x*lambda^3*cos(x)").unwrap(),
            parse_germ("lambda^4*cos(x)").unwrap(),
        ];
        let cert = verify_truncation(&gens, 1).unwrap();
        assert_eq!(cert.degree, 4);
        assert_eq!(
            cert.evidence,
            TruncationEvidence::Staircase {
                stairs: vec![(1, 3)]
            }
        );
        assert_eq!(cert.ring_advice, Ring::LocalJet(4));
    }

    #[test]
    fn certify_flat_principal_ideal_as_wedge() {
        let gens = vec![parse_germ("lambda^3*sin(x)").unwrap()];
        let cert = verify_truncation(&gens, 1).unwrap();
        assert_eq!(cert.degree, 4);
        assert_eq!(
            cert.evidence,
            TruncationEvidence::MonomialWedge {
                gens: vec![mono(1, 3)]
            }
        );
    }

    #[test]
    fn certification_respects_the_inequality() {
        // max{N_x, N_λ} ≤ k < N_x + N_λ on a finite-codimension instance.
        let b = jet_basis(
            &["2*lambda^3 - 3*lambda^2*x + x^5", "3*x*lambda^2 - 5*x^5", "3*lambda^3 - 5*x^4*lambda"],
            8,
        );
        let nx = mult_matrix(&b, Var::X).unwrap().nilpotency;
        let nl = mult_matrix(&b, Var::Lambda).unwrap().nilpotency;
        let k = match max_power_in_ideal(&b).unwrap() {
            MaxPower::Finite(k) => k,
            MaxPower::Infinite => panic!("finite expected"),
        };
        assert_eq!(k, 6);
        assert!(nx.max(nl) <= k && k < nx + nl);
    }

    #[test]
    fn quotient_dimension_matches_linear_algebra() {
        // Rank of the multiplication table span over the jet space must agree
        // with the staircase count: dim E/(I + M^{N+1}) by brute force.
        let gens = [
            "x^5 + x^3*lambda + lambda^2",
            "5*x^5 + 3*x^3*lambda",
            "5*x^4*lambda + 3*x^2*lambda^2",
        ];
        let n = 6u32;
        let b = jet_basis(&gens, n);
        let monos = monomials_up_to_degree(2, n);
        let index: std::collections::HashMap<Vec<u32>, usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.0.clone(), i))
            .collect();
        // Rows: J^n(m·g) for every monomial m with deg ≤ n and generator g.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for g in &b.gens {
            for m in &monos {
                let prod = g.mul_term(m, &rat(1, 1)).truncate_above(n);
                if prod.is_zero() {
                    continue;
                }
                let mut row = vec![int(0); monos.len()];
                for t in prod.terms() {
                    row[index[&t.mono.0]] = t.coef.clone();
                }
                rows.push(row);
            }
        }
        // Gaussian elimination over Q.
        let mut rank = 0usize;
        let ncols = monos.len();
        let mut pivot_row = 0usize;
        for col in 0..ncols {
            if let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != int(0)) {
                rows.swap(pivot_row, r);
                let inv = rows[pivot_row][col].recip();
                for c in col..ncols {
                    rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
                }
                for r in 0..rows.len() {
                    if r != pivot_row && rows[r][col] != int(0) {
                        let f = rows[r][col].clone();
                        for c in col..ncols {
                            rows[r][c] = &rows[r][c] - &f * &rows[pivot_row][c];
                        }
                    }
                }
                pivot_row += 1;
                rank += 1;
            }
        }
        let dim = normal_set(&b).unwrap().dimension();
        assert_eq!(dim, monos.len() - rank);
    }
}
