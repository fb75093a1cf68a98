//! Multivariate division with remainder in the jet ring and the polynomial ring.
//!
//! The local ring never materializes power series: every local computation
//! happens in the finite-dimensional jet ring `K[x,..]/M^(N+1)`. Division
//! there always terminates because each reduction step strictly decreases
//! the leading monomial of the working polynomial and only finitely many
//! monomials exist below degree `N`. Every monomial discarded by a
//! truncation is logged so that truncation certificates can later check the
//! Nakayama-style hypotheses of the soundness theorems.

use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::{Polynomial, Term};
use crate::vars::VarList;

/// Ring context for an ideal computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ring {
    /// `K[vars]/M^(N+1)` — surrogate for the local germ ring at truncation
    /// degree `N`, used with a local order.
    LocalJet(u32),
    /// Plain polynomial ring, used with a global order.
    GlobalPoly,
}

impl Ring {
    pub fn is_local(&self) -> bool {
        matches!(self, Ring::LocalJet(_))
    }

    pub fn truncation(&self) -> Option<u32> {
        match self {
            Ring::LocalJet(n) => Some(*n),
            Ring::GlobalPoly => None,
        }
    }
}

/// A list of ideal generators together with the order and ring they live in.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub ring: Ring,
    /// Monomials discarded when jetting the generators into `LocalJet(N)`
    /// (provenance for truncation certificates).
    pub jet_drops: Vec<Monomial>,
}

impl IdealBasis {
    /// Build a basis, dropping zero generators and truncating to the jet
    /// degree in a local ring (recording what was cut).
    pub fn new(gens: Vec<Polynomial>, order: MonomialOrder, ring: Ring) -> IdealBasis {
        let mut jet_drops = Vec::new();
        let mut kept = Vec::new();
        for g in gens {
            let g = match ring.truncation() {
                Some(n) => {
                    let (low, high) = g.split_at_degree(n);
                    jet_drops.extend(high.terms().iter().map(|t| t.mono.clone()));
                    low
                }
                None => g,
            };
            if !g.is_zero() {
                kept.push(g);
            }
        }
        dedup_monomials(&mut jet_drops);
        IdealBasis {
            gens: kept,
            order,
            ring,
            jet_drops,
        }
    }

    pub fn vars(&self) -> &VarList {
        self.gens
            .first()
            .map(|g| g.vars())
            .expect("empty ideal basis has no variable list")
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Leading monomials of the generators under the basis order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.gens
            .iter()
            .map(|g| g.leading_monomial(self.order).expect("nonzero generator").clone())
            .collect()
    }

    pub fn with_gens(&self, gens: Vec<Polynomial>) -> IdealBasis {
        let mut b = IdealBasis::new(gens, self.order, self.ring);
        b.jet_drops.extend(self.jet_drops.iter().cloned());
        dedup_monomials(&mut b.jet_drops);
        b
    }
}

/// Outcome of one division: `f = Σ qᵢ gᵢ + remainder` exactly in the
/// polynomial ring, and modulo degree `N` in the jet ring.
#[derive(Clone, Debug)]
pub struct DivisionResult {
    pub remainder: Polynomial,
    pub quotients: Vec<Polynomial>,
    /// True when any reduction step overflowed the jet degree.
    pub truncated: bool,
    /// Every monomial discarded by jet truncation during this division.
    pub dropped: Vec<Monomial>,
}

/// Divide `f` by the basis generators (Def. of remainder): repeatedly cancel
/// the leading term against the first generator whose leading monomial
/// divides it, otherwise move the leading term to the remainder.
pub fn divide(f: &Polynomial, basis: &IdealBasis) -> DivisionResult {
    let order = basis.order;
    let mut dropped: Vec<Monomial> = Vec::new();
    let mut p = match basis.ring.truncation() {
        Some(n) => {
            let (low, high) = f.split_at_degree(n);
            dropped.extend(high.terms().iter().map(|t| t.mono.clone()));
            low
        }
        None => f.clone(),
    };
    let vars = p.vars().clone();
    let mut quotients = vec![Polynomial::zero(vars.clone()); basis.gens.len()];
    let mut remainder_terms: Vec<Term> = Vec::new();

    let leading: Vec<(Monomial, crate::Rat)> = basis
        .gens
        .iter()
        .map(|g| {
            let (m, c) = g.leading_data(order).expect("nonzero generator");
            (m.clone(), c.clone())
        })
        .collect();

    while !p.is_zero() {
        let (lm, lc) = {
            let (m, c) = p.leading_data(order).expect("nonzero");
            (m.clone(), c.clone())
        };
        let divisor = leading.iter().position(|(m, _)| m.divides(&lm));
        match divisor {
            Some(i) => {
                let qc = &lc / &leading[i].1;
                let qm = lm.div(&leading[i].0).expect("divisibility checked");
                p = p.sub(&basis.gens[i].mul_term(&qm, &qc));
                if let Some(n) = basis.ring.truncation() {
                    let (low, high) = p.split_at_degree(n);
                    dropped.extend(high.terms().iter().map(|t| t.mono.clone()));
                    p = low;
                }
                quotients[i] = quotients[i].add(&Polynomial::new(
                    vars.clone(),
                    vec![Term { coef: qc, mono: qm }],
                ));
            }
            None => {
                remainder_terms.push(Term {
                    coef: lc,
                    mono: lm.clone(),
                });
                p = p.sub(&Polynomial::new(
                    vars.clone(),
                    vec![Term {
                        coef: remainder_terms.last().unwrap().coef.clone(),
                        mono: lm,
                    }],
                ));
            }
        }
    }

    dedup_monomials(&mut dropped);
    DivisionResult {
        remainder: Polynomial::new(vars, remainder_terms),
        quotients,
        truncated: !dropped.is_empty(),
        dropped,
    }
}

/// Remainder-only convenience.
pub fn remainder(f: &Polynomial, basis: &IdealBasis) -> Polynomial {
    divide(f, basis).remainder
}

pub(crate) fn dedup_monomials(ms: &mut Vec<Monomial>) {
    ms.sort_by(|a, b| a.0.cmp(&b.0));
    ms.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;
    use crate::vars::VarList;
    use crate::{int, rat};

    fn poly(src: &str) -> Polynomial {
        parse_germ(src)
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap()
    }

    fn local(gens: &[&str], n: u32) -> IdealBasis {
        IdealBasis::new(
            gens.iter().map(|s| poly(s)).collect(),
            MonomialOrder::AlexLocal,
            Ring::LocalJet(n),
        )
    }

    #[test]
    fn geometric_series_division() {
        // Rem(1, {1-x}) = 0 in the local ring: the quotient is the truncated
        // geometric series.
        let b = local(&["1 - x"], 5);
        let r = divide(&poly("1"), &b);
        assert!(r.remainder.is_zero());
        assert_eq!(r.quotients[0], poly("1+x+x^2+x^3+x^4+x^5"));
        assert!(r.truncated);
        assert_eq!(r.dropped, vec![Monomial(vec![6, 0])]);
    }

    #[test]
    fn catalan_remainder() {
        // Rem(x^2 lambda, {x lambda - x^2 lambda^2 - x^4}) at N=21: the
        // remainder coefficients are Catalan numbers.
        let b = local(&["x*lambda - x^2*lambda^2 - x^4"], 21);
        let r = divide(&poly("x^2*lambda"), &b);
        assert_eq!(
            r.remainder,
            poly("x^5 + x^9 + 2*x^13 + 5*x^17 + 14*x^21")
        );
        // Division identity modulo degree 21.
        let recombined = r.quotients[0].mul(&b.gens[0]).add(&r.remainder);
        assert_eq!(
            recombined.truncate_above(21),
            poly("x^2*lambda")
        );
    }

    #[test]
    fn global_division_is_exact() {
        // Same dividend in the global ring: x^2 lambda is not divisible by
        // the global leading monomial x^2 lambda^2... the reduction stops
        // immediately with a nonzero remainder and no truncation.
        let b = IdealBasis::new(
            vec![poly("x*lambda - x^2*lambda^2 - x^4")],
            MonomialOrder::LexGlobal,
            Ring::GlobalPoly,
        );
        let r = divide(&poly("x^2*lambda"), &b);
        assert!(!r.truncated);
        let recombined = r.quotients[0].mul(&b.gens[0]).add(&r.remainder);
        assert_eq!(recombined, poly("x^2*lambda"));
    }

    #[test]
    fn remainder_terms_avoid_leading_monomials() {
        let b = local(&["x^2 - lambda^2"], 6);
        let r = divide(&poly("x^2*lambda + lambda^3"), &b);
        assert_eq!(r.remainder, poly("2*lambda^3"));
        assert_eq!(r.quotients[0], poly("lambda"));
    }

    #[test]
    fn generators_are_jetted_on_construction() {
        let b = local(&["x + x^9"], 5);
        assert_eq!(b.gens[0], poly("x"));
        assert_eq!(b.jet_drops, vec![Monomial(vec![9, 0])]);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn division_identity_and_remainder_support(seed in 0u64..10_000) {
            let (f, gens) = random_instance(seed);
            for (order, ring) in [
                (MonomialOrder::AlexLocal, Ring::LocalJet(7)),
                (MonomialOrder::LexGlobal, Ring::GlobalPoly),
            ] {
                let b = IdealBasis::new(gens.clone(), order, ring);
                if b.is_empty() {
                    continue;
                }
                let r = divide(&f, &b);
                // f = sum q_i g_i + rem (exactly, or modulo the jet degree).
                let mut acc = r.remainder.clone();
                for (q, g) in r.quotients.iter().zip(&b.gens) {
                    acc = acc.add(&q.mul(g));
                }
                let (want, got) = match ring.truncation() {
                    Some(n) => (f.truncate_above(n), acc.truncate_above(n)),
                    None => (f.clone(), acc),
                };
                proptest::prop_assert_eq!(want, got);
                // No remainder term is divisible by a leading monomial.
                for t in r.remainder.terms() {
                    for lm in b.leading_monomials() {
                        proptest::prop_assert!(!lm.divides(&t.mono));
                    }
                }
                // LT(q_i g_i) never exceeds LT(f).
                if let Some((flm, _)) = f.truncate_above(7).leading_data(order) {
                    for (q, g) in r.quotients.iter().zip(&b.gens) {
                        if let Some((qm, _)) = q.mul(g).truncate_above(7).leading_data(order) {
                            proptest::prop_assert!(
                                order.compare(qm, flm) != std::cmp::Ordering::Greater
                            );
                        }
                    }
                }
            }
        }
    }

    /// Deterministic pseudo-random polynomials over x, lambda.
    fn random_instance(seed: u64) -> (Polynomial, Vec<Polynomial>) {
        let mut state = seed.wrapping_add(0x6a09e667f3bcc908);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as u32
        };
        let mut rand_poly = |max_terms: u32| {
            let vars = VarList::xl();
            let nterms = 1 + next() % max_terms;
            let mut terms = Vec::new();
            for _ in 0..nterms {
                let a = next() % 4;
                let b = next() % 4;
                let c = (next() % 7) as i64 - 3;
                if c != 0 {
                    terms.push(Term {
                        coef: int(c) * rat(1, 1 + (next() % 3) as i64),
                        mono: Monomial(vec![a, b]),
                    });
                }
            }
            Polynomial::new(vars, terms)
        };
        let f = rand_poly(5);
        let gens = (0..1 + seed % 3).map(|_| rand_poly(3)).collect();
        (f, gens)
    }
}
