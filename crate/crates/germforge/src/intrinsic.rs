//! Intrinsic ideals: staircase presentation `Σ M^{m_i}⟨λ^{n_i}⟩`, the
//! intrinsic part `Itr(I)` of an ideal, and the direct-sum decomposition
//! `I = Itr(I) ⊕ (I ∩ ⟨Itr(I)^⊥⟩_K)`.

use crate::division::{IdealBasis, Ring};
use crate::error::{Error, Result};
use crate::ideal::{colon_ideal, max_power_in_ideal, staircase_search, MaxPower};
use crate::int;
use crate::basis::reduce_basis;
use crate::monomial::{monomials_up_to_degree, prune_to_minimal, Monomial};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::vars::{Var, VarList};
use crate::Rat;
use std::collections::HashMap;

/// The staircase ideal `Σ_i M^{m_i}⟨λ^{n_i}⟩`, stored as pairs `(m_i, n_i)`
/// with `n_i` strictly increasing and `m_i + n_i` strictly decreasing.
/// An empty list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntrinsicIdeal {
    pub stairs: Vec<(u32, u32)>,
}

impl IntrinsicIdeal {
    pub fn new(stairs: Vec<(u32, u32)>) -> IntrinsicIdeal {
        debug_assert!(stairs.windows(2).all(|w| {
            w[0].1 < w[1].1 && w[0].0 + w[0].1 > w[1].0 + w[1].1
        }));
        IntrinsicIdeal { stairs }
    }

    pub fn is_zero(&self) -> bool {
        self.stairs.is_empty()
    }

    /// Does the monomial `x^a λ^b` lie in the staircase?
    pub fn contains_monomial(&self, a: u32, b: u32) -> bool {
        self.stairs
            .iter()
            .any(|&(m, n)| b >= n && a + b >= m + n)
    }

    /// The reduced monomial standard basis: the minimal divisibility
    /// antichain among the stair edges `x^s λ^{m_i+n_i-s}`, `s = 0..m_i`.
    pub fn monomial_basis(&self, vars: &VarList) -> Result<Vec<Monomial>> {
        let xi = vars
            .index_of(Var::X)
            .ok_or_else(|| Error::invalid("ring without x"))?;
        let li = vars
            .index_of(Var::Lambda)
            .ok_or_else(|| Error::invalid("ring without lambda"))?;
        let mut edges = Vec::new();
        for &(m, n) in &self.stairs {
            for s in 0..=m {
                let mut exps = vec![0u32; vars.len()];
                exps[xi] = s;
                exps[li] = m + n - s;
                edges.push(Monomial(exps));
            }
        }
        Ok(prune_to_minimal(edges))
    }

    /// The staircase as an ideal basis in the given jet ring.
    pub fn to_basis(&self, vars: &VarList, degree: u32) -> Result<IdealBasis> {
        let gens = self
            .monomial_basis(vars)?
            .into_iter()
            .map(|m| Polynomial::from_monomial(vars.clone(), m, int(1)))
            .collect();
        Ok(IdealBasis::new(
            gens,
            MonomialOrder::AlexLocal,
            Ring::LocalJet(degree),
        ))
    }
}

/// Intrinsic membership: every term of `f` must sit on some stair.
pub fn intrinsic_membership(itr: &IntrinsicIdeal, f: &Polynomial) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let vars = f.vars();
    let xi = vars
        .index_of(Var::X)
        .ok_or_else(|| Error::invalid("ring without x"))?;
    let li = vars
        .index_of(Var::Lambda)
        .ok_or_else(|| Error::invalid("ring without lambda"))?;
    Ok(f.terms()
        .iter()
        .all(|t| itr.contains_monomial(t.mono.exp(xi), t.mono.exp(li))))
}

/// The intrinsic part `Itr(I)`: the largest intrinsic ideal inside `⟨B⟩`.
///
/// Finite codimension: colon iteration — `m(n) := ` least power with
/// `M^{m(n)} ⊆ I : ⟨λ^n⟩`, keeping the strict `m+n` breakpoints, stopping at
/// `m(n) = 0`. Infinite codimension: the staircase probe on the reduced jet
/// standard basis (exact for monomial ideals).
pub fn intrinsic_part(input: &IdealBasis) -> Result<IntrinsicIdeal> {
    let n = input
        .ring
        .truncation()
        .ok_or_else(|| Error::invalid("the intrinsic part is computed in the local jet ring"))?;
    if input.is_empty() {
        return Ok(IntrinsicIdeal::new(Vec::new()));
    }
    match max_power_in_ideal(input)? {
        MaxPower::Finite(_) => {
            let vars = input.vars().clone();
            let li = vars
                .index_of(Var::Lambda)
                .ok_or_else(|| Error::invalid("ring without lambda"))?;
            let mut stairs = Vec::new();
            let mut best: Option<u32> = None;
            for nn in 0..=n {
                let jetted = if nn == 0 {
                    input.clone()
                } else {
                    let colon =
                        colon_ideal(input, &Monomial::var(vars.len(), li, nn))?;
                    IdealBasis::new(colon.gens, MonomialOrder::AlexLocal, Ring::LocalJet(n))
                };
                let m = match max_power_in_ideal(&jetted)? {
                    MaxPower::Finite(m) => m,
                    MaxPower::Infinite => {
                        return Err(Error::Certification(
                            "colon ideal of a finite-codimension ideal cannot be infinite"
                                .into(),
                        ))
                    }
                };
                if best.map_or(true, |b| m + nn < b) {
                    stairs.push((m, nn));
                    best = Some(m + nn);
                }
                if m == 0 {
                    break;
                }
            }
            Ok(IntrinsicIdeal::new(stairs))
        }
        MaxPower::Infinite => {
            let comp = reduce_basis(input);
            let mut drops = Vec::new();
            let stairs = staircase_search(&comp.basis, n, &mut drops);
            Ok(IntrinsicIdeal::new(stairs))
        }
    }
}

/// `I = Itr(I) ⊕ span(complement_part)` at jet level: the intrinsic part
/// plus a canonical basis of the projection of `I`'s jet span onto the
/// monomials outside the staircase.
#[derive(Clone, Debug)]
pub struct IntrinsicDecomposition {
    pub itr: IntrinsicIdeal,
    pub complement_part: Vec<Polynomial>,
}

/// Reduced row echelon form over Q; zero rows dropped.
pub(crate) fn rref(mut rows: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != int(0)) else {
            continue;
        };
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
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|c| *c != int(0)));
    rows
}

/// Column layout shared by the jet-space linear algebra: monomials of degree
/// ≤ N sorted by (degree, x-exponent).
pub(crate) fn jet_columns(nvars: usize, n: u32) -> (Vec<Monomial>, HashMap<Vec<u32>, usize>) {
    let mut cols = monomials_up_to_degree(nvars, n);
    cols.sort_by_key(|m| (m.total_degree(), m.exp(0)));
    let index = cols
        .iter()
        .enumerate()
        .map(|(i, m)| (m.0.clone(), i))
        .collect();
    (cols, index)
}

fn row_of(p: &Polynomial, index: &HashMap<Vec<u32>, usize>, ncols: usize) -> Vec<Rat> {
    let mut row = vec![int(0); ncols];
    for t in p.terms() {
        row[index[&t.mono.0]] = t.coef.clone();
    }
    row
}

fn poly_of(row: &[Rat], cols: &[Monomial], vars: &VarList) -> Polynomial {
    let terms = row
        .iter()
        .zip(cols)
        .filter(|(c, _)| **c != int(0))
        .map(|(c, m)| crate::poly::Term {
            coef: c.clone(),
            mono: m.clone(),
        })
        .collect();
    Polynomial::new(vars.clone(), terms)
}

/// Decompose `⟨B⟩` as `Itr ⊕ complement`: the complement rows span the
/// projection of the ideal's jet space onto the staircase complement, so the
/// two summands rebuild the ideal's jet space exactly (Eq. IdealInt).
pub fn intrinsic_decomposition(input: &IdealBasis) -> Result<IntrinsicDecomposition> {
    let n = input
        .ring
        .truncation()
        .ok_or_else(|| Error::invalid("the decomposition is computed in the local jet ring"))?;
    let itr = intrinsic_part(input)?;
    if input.is_empty() {
        return Ok(IntrinsicDecomposition {
            itr,
            complement_part: Vec::new(),
        });
    }
    let vars = input.vars().clone();
    let xi = vars
        .index_of(Var::X)
        .ok_or_else(|| Error::invalid("ring without x"))?;
    let li = vars
        .index_of(Var::Lambda)
        .ok_or_else(|| Error::invalid("ring without lambda"))?;
    let comp = reduce_basis(input);
    let (cols, index) = jet_columns(vars.len(), n);
    let mut rows = Vec::new();
    for g in &comp.basis.gens {
        for m in monomials_up_to_degree(vars.len(), n) {
            let prod = g.mul_term(&m, &int(1)).truncate_above(n);
            // Project onto the staircase complement: drop the terms the
            // intrinsic part already covers.
            let outside = Polynomial::new(
                vars.clone(),
                prod.terms()
                    .iter()
                    .filter(|t| !itr.contains_monomial(t.mono.exp(xi), t.mono.exp(li)))
                    .cloned()
                    .collect(),
            );
            if !outside.is_zero() {
                rows.push(row_of(&outside, &index, cols.len()));
            }
        }
    }
    let complement_part = rref(rows)
        .into_iter()
        .map(|row| poly_of(&row, &cols, &vars))
        .collect();
    Ok(IntrinsicDecomposition {
        itr,
        complement_part,
    })
}

/// Reduce a finite K-span against a staircase (Lemma on the decomposition
/// with scalars): delete the terms inside the staircase, then drop vectors
/// linearly dependent on earlier ones. Order is preserved.
pub fn reduce_span_against(
    itr: &IntrinsicIdeal,
    span: &[Polynomial],
    degree: u32,
) -> Result<Vec<Polynomial>> {
    let Some(first) = span.first() else {
        return Ok(Vec::new());
    };
    let vars = first.vars().clone();
    let xi = vars
        .index_of(Var::X)
        .ok_or_else(|| Error::invalid("ring without x"))?;
    let li = vars
        .index_of(Var::Lambda)
        .ok_or_else(|| Error::invalid("ring without lambda"))?;
    let (cols, index) = jet_columns(vars.len(), degree);
    let mut kept: Vec<Polynomial> = Vec::new();
    let mut echelon: Vec<Vec<Rat>> = Vec::new();
    for p in span {
        let outside = Polynomial::new(
            vars.clone(),
            p.truncate_above(degree)
                .terms()
                .iter()
                .filter(|t| !itr.contains_monomial(t.mono.exp(xi), t.mono.exp(li)))
                .cloned()
                .collect(),
        );
        if outside.is_zero() {
            continue;
        }
        let mut candidate = echelon.clone();
        candidate.push(row_of(&outside, &index, cols.len()));
        let reduced = rref(candidate);
        if reduced.len() > echelon.len() {
            echelon = reduced;
            kept.push(outside);
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;
    use crate::ideal::power_lambda_test;

    fn poly(s: &str) -> Polynomial {
        parse_germ(s)
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap()
    }

    fn jet_basis(gens: &[&str], n: u32) -> IdealBasis {
        IdealBasis::new(
            gens.iter().map(|s| poly(s)).collect(),
            MonomialOrder::AlexLocal,
            Ring::LocalJet(n),
        )
    }

    fn p_ideal(n: u32) -> IdealBasis {
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
    fn high_order_ideal_staircase() {
        // 𝒫(x⁵+λx+λ²) = M⁶ + M²⟨λ⟩ + ⟨λ²⟩.
        let itr = intrinsic_part(&p_ideal(6)).unwrap();
        assert_eq!(itr.stairs, vec![(6, 0), (2, 1), (0, 2)]);
    }

    #[test]
    fn staircase_membership() {
        let itr = IntrinsicIdeal::new(vec![(6, 0), (2, 1), (0, 2)]);
        assert!(intrinsic_membership(&itr, &poly("lambda^2")).unwrap());
        assert!(!intrinsic_membership(&itr, &poly("x*lambda")).unwrap());
        assert!(intrinsic_membership(&itr, &Polynomial::zero(VarList::xl())).unwrap());
        assert!(intrinsic_membership(&itr, &poly("x^2*lambda + 3*lambda^2")).unwrap());
        assert!(!intrinsic_membership(&itr, &poly("x^5 + lambda^2")).unwrap());
    }

    #[test]
    fn monomial_basis_is_the_edge_antichain() {
        let itr = IntrinsicIdeal::new(vec![(6, 0), (2, 1), (0, 2)]);
        let basis = itr.monomial_basis(&VarList::xl()).unwrap();
        let mut names: Vec<(u32, u32)> =
            basis.iter().map(|m| (m.exp(0), m.exp(1))).collect();
        names.sort();
        // x⁶ plus the M²⟨λ⟩ edge {x²λ, xλ²} truncated by ⟨λ²⟩ → x²λ, and λ².
        assert_eq!(names, vec![(0, 2), (2, 1), (6, 0)]);
    }

    #[test]
    fn intrinsic_ideal_is_its_own_intrinsic_part() {
        let b = jet_basis(&["x^3", "x^2*lambda", "x*lambda^2", "lambda^3"], 4);
        let itr = intrinsic_part(&b).unwrap();
        assert_eq!(itr.stairs, vec![(3, 0)]);
        let dec = intrinsic_decomposition(&b).unwrap();
        assert!(dec.complement_part.is_empty());
    }

    #[test]
    fn binomial_ideal_intrinsic_part_and_maximality() {
        // I = ⟨x² + λ³, x³⟩: the largest intrinsic ideal inside is M⁶.
        let b = jet_basis(&["x^2 + lambda^3", "x^3"], 8);
        let itr = intrinsic_part(&b).unwrap();
        assert_eq!(itr.stairs, vec![(6, 0)]);
        // Maximality: a stair monomial ideal M^m⟨λ^n⟩ fits inside I exactly
        // when the staircase already covers it.
        for m in 0..=6u32 {
            for n in 0..=(6 - m) {
                let fits = power_lambda_test(&b, m, n).unwrap();
                assert_eq!(
                    fits,
                    itr.contains_monomial(m, n),
                    "stair ({m},{n}) disagreed"
                );
            }
        }
    }

    #[test]
    fn decomposition_rebuilds_the_jet_space() {
        let n = 8u32;
        let b = jet_basis(&["x^2 + lambda^3", "x^3"], n);
        let dec = intrinsic_decomposition(&b).unwrap();
        let (cols, index) = jet_columns(2, n);
        // Direct sum: complement terms avoid the staircase.
        for p in &dec.complement_part {
            assert!(!intrinsic_membership(&dec.itr, p).unwrap() || p.is_zero());
            for t in p.terms() {
                assert!(!dec.itr.contains_monomial(t.mono.exp(0), t.mono.exp(1)));
            }
        }
        // Rank bookkeeping: dim span(I) = dim span(Itr ≤ N) + #complement.
        let mut ideal_rows = Vec::new();
        for g in &b.gens {
            for m in monomials_up_to_degree(2, n) {
                let prod = g.mul_term(&m, &int(1)).truncate_above(n);
                if !prod.is_zero() {
                    let mut row = vec![int(0); cols.len()];
                    for t in prod.terms() {
                        row[index[&t.mono.0]] = t.coef.clone();
                    }
                    ideal_rows.push(row);
                }
            }
        }
        let ideal_dim = rref(ideal_rows).len();
        let itr_dim = monomials_up_to_degree(2, n)
            .into_iter()
            .filter(|m| dec.itr.contains_monomial(m.exp(0), m.exp(1)))
            .count();
        assert_eq!(ideal_dim, itr_dim + dec.complement_part.len());
    }

    #[test]
    fn infinite_codimension_monomial_staircase() {
        let b = jet_basis(&["x*lambda^3", "lambda^4"], 6);
        let itr = intrinsic_part(&b).unwrap();
        assert_eq!(itr.stairs, vec![(1, 3)]);
        // A lone wedge monomial has no staircase inside.
        let b2 = jet_basis(&["x*lambda^3"], 6);
        assert!(intrinsic_part(&b2).unwrap().is_zero());
    }

    #[test]
    fn span_reduction_prunes_dependents_and_staircase_terms() {
        let itr = IntrinsicIdeal::new(vec![(5, 0), (1, 1)]);
        let span = vec![
            poly("5*x^4 + lambda"),
            poly("x + 2*lambda"),
            poly("10*x^4 + 2*lambda"),
            poly("x^5 + x"),
        ];
        let kept = reduce_span_against(&itr, &span, 6).unwrap();
        // Third vector is twice the first; x⁵ dies inside the staircase and
        // the leftover x is independent of the earlier two.
        assert_eq!(kept.len(), 3);
        assert_eq!(kept[0], poly("5*x^4 + lambda"));
        assert_eq!(kept[1], poly("x + 2*lambda"));
        assert_eq!(kept[2], poly("x"));
    }
}
