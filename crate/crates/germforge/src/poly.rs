//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a canonical descending (degree, lex) order independent
//! of the monomial order in use; the division and basis algorithms ask for
//! leading data against an explicit [`MonomialOrder`] instead. This keeps a
//! polynomial meaningful under several orders at once (the same ideal basis
//! is inspected locally and globally in the truncation certificates).

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::vars::{Var, VarList};
use crate::{int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// One coefficient-monomial pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coef: Rat,
    pub mono: Monomial,
}

/// Sparse polynomial over an ordered variable list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    vars: VarList,
    terms: Vec<Term>,
}

/// Canonical storage comparison: descending total degree, then descending
/// lexicographic. Gives stable display and serialization.
fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    b.total_degree()
        .cmp(&a.total_degree())
        .then_with(|| b.0.cmp(&a.0))
}

impl Polynomial {
    pub fn new(vars: VarList, terms: Vec<Term>) -> Self {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for t in terms {
            debug_assert_eq!(t.mono.nvars(), vars.len());
            let entry = map.entry(t.mono).or_insert_with(Rat::zero);
            *entry += t.coef;
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coef)| Term { coef, mono })
            .collect();
        terms.sort_by(|a, b| canonical_cmp(&a.mono, &b.mono));
        Polynomial { vars, terms }
    }

    pub fn zero(vars: VarList) -> Self {
        Polynomial {
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: VarList, c: Rat) -> Self {
        let n = vars.len();
        Polynomial::new(
            vars,
            vec![Term {
                coef: c,
                mono: Monomial::one(n),
            }],
        )
    }

    pub fn one(vars: VarList) -> Self {
        Self::constant(vars, int(1))
    }

    /// The monomial `v^k` as a polynomial.
    pub fn var_pow(vars: VarList, v: Var, k: u32) -> Self {
        let pos = vars
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in {vars}"));
        let n = vars.len();
        Polynomial::new(
            vars,
            vec![Term {
                coef: int(1),
                mono: Monomial::var(n, pos, k),
            }],
        )
    }

    pub fn from_monomial(vars: VarList, mono: Monomial, coef: Rat) -> Self {
        Polynomial::new(vars, vec![Term { coef, mono }])
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree; zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.mono.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Minimum total degree among terms (the order of the germ).
    pub fn order_of_vanishing(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.total_degree()).min()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        let Some(pos) = self.vars.index_of(v) else {
            return 0;
        };
        self.terms.iter().map(|t| t.mono.exp(pos)).max().unwrap_or(0)
    }

    pub fn coefficient_of(&self, mono: &Monomial) -> Rat {
        self.terms
            .iter()
            .find(|t| &t.mono == mono)
            .map(|t| t.coef.clone())
            .unwrap_or_else(Rat::zero)
    }

    fn assert_same_vars(&self, other: &Polynomial) {
        assert_eq!(
            self.vars, other.vars,
            "polynomial variable lists differ: {} vs {}",
            self.vars, other.vars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_vars(other);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Polynomial::new(self.vars.clone(), terms)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: -t.coef.clone(),
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: t.coef.clone() * c,
                    mono: t.mono.clone(),
                })
                .collect(),
        }
    }

    /// Multiply by a single term (used heavily by division loops).
    pub fn mul_term(&self, mono: &Monomial, coef: &Rat) -> Polynomial {
        if coef.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef.clone() * coef,
                mono: t.mono.mul(mono),
            })
            .collect();
        // Multiplying by a monomial preserves the canonical ordering.
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.assert_same_vars(other);
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let mono = a.mono.mul(&b.mono);
                let entry = map.entry(mono).or_insert_with(Rat::zero);
                *entry += a.coef.clone() * &b.coef;
            }
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coef)| Term { coef, mono })
            .collect();
        terms.sort_by(|a, b| canonical_cmp(&a.mono, &b.mono));
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.vars.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading (monomial, coefficient) under `order`; `None` for zero.
    pub fn leading_data(&self, order: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        let mut best: Option<&Term> = None;
        for t in &self.terms {
            match best {
                None => best = Some(t),
                Some(b) => {
                    if order.compare(&t.mono, &b.mono) == Ordering::Greater {
                        best = Some(t);
                    }
                }
            }
        }
        best.map(|t| (&t.mono, &t.coef))
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<Monomial> {
        self.leading_data(order).map(|(m, _)| m.clone())
    }

    /// Divide by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_data(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rat::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Primitive integer form: scale so coefficients are coprime integers
    /// and the canonical first term is positive. Display/goldens helper.
    pub fn integer_primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for t in &self.terms {
            den_lcm = den_lcm.lcm(t.coef.denom());
        }
        let mut num_gcd = BigInt::zero();
        for t in &self.terms {
            let scaled = t.coef.clone() * Rat::from_integer(den_lcm.clone());
            num_gcd = num_gcd.gcd(scaled.numer());
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        let mut factor = Rat::new(den_lcm, num_gcd);
        if self.terms[0].coef.clone() * &factor < Rat::zero() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Split into (degree <= n, degree > n) parts.
    pub fn split_at_degree(&self, n: u32) -> (Polynomial, Polynomial) {
        let (low, high): (Vec<Term>, Vec<Term>) = self
            .terms
            .iter()
            .cloned()
            .partition(|t| t.mono.total_degree() <= n);
        (
            Polynomial {
                vars: self.vars.clone(),
                terms: low,
            },
            Polynomial {
                vars: self.vars.clone(),
                terms: high,
            },
        )
    }

    /// Drop all terms of total degree above `n`.
    pub fn truncate_above(&self, n: u32) -> Polynomial {
        self.split_at_degree(n).0
    }

    pub fn partial_derivative(&self, v: Var) -> Polynomial {
        let pos = self
            .vars
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in {}", self.vars));
        let mut terms = Vec::new();
        for t in &self.terms {
            let e = t.mono.exp(pos);
            if e == 0 {
                continue;
            }
            let mut mono = t.mono.clone();
            mono.0[pos] = e - 1;
            terms.push(Term {
                coef: t.coef.clone() * int(e as i64),
                mono,
            });
        }
        Polynomial::new(self.vars.clone(), terms)
    }

    /// Substitute `v := replacement` (same variable list on both sides).
    pub fn substitute(&self, v: Var, replacement: &Polynomial) -> Polynomial {
        self.assert_same_vars(replacement);
        let pos = self
            .vars
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in {}", self.vars));
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(self.vars.clone())];
        let max_e = self.terms.iter().map(|t| t.mono.exp(pos)).max().unwrap_or(0);
        for _ in 0..max_e {
            powers.push(powers.last().unwrap().mul(replacement));
        }
        let mut acc = Polynomial::zero(self.vars.clone());
        for t in &self.terms {
            let e = t.mono.exp(pos);
            let mut rest = t.mono.clone();
            rest.0[pos] = 0;
            let base = Polynomial::from_monomial(self.vars.clone(), rest, t.coef.clone());
            acc = acc.add(&base.mul(&powers[e as usize]));
        }
        acc
    }

    /// Re-express over a superset variable list (or a reordering).
    pub fn embed(&self, new_vars: &VarList) -> Result<Polynomial> {
        let mapping: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                new_vars
                    .index_of(v)
                    .ok_or_else(|| Error::VariableMismatch(format!("{v} missing from {new_vars}")))
            })
            .collect::<Result<_>>()?;
        let n = new_vars.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = vec![0u32; n];
                for (old_pos, &new_pos) in mapping.iter().enumerate() {
                    e[new_pos] = t.mono.exp(old_pos);
                }
                Term {
                    coef: t.coef.clone(),
                    mono: Monomial(e),
                }
            })
            .collect();
        Ok(Polynomial::new(new_vars.clone(), terms))
    }

    /// Rename variables through `map` into a target list (exponents move).
    pub fn rename(&self, new_vars: &VarList, map: impl Fn(Var) -> Var) -> Result<Polynomial> {
        let mapping: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                let w = map(v);
                new_vars
                    .index_of(w)
                    .ok_or_else(|| Error::VariableMismatch(format!("{w} missing from {new_vars}")))
            })
            .collect::<Result<_>>()?;
        let n = new_vars.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = vec![0u32; n];
                for (old_pos, &new_pos) in mapping.iter().enumerate() {
                    e[new_pos] += t.mono.exp(old_pos);
                }
                Term {
                    coef: t.coef.clone(),
                    mono: Monomial(e),
                }
            })
            .collect();
        Ok(Polynomial::new(new_vars.clone(), terms))
    }

    /// Keep only terms not involving any of `positions`; error when a term
    /// mixes them in (used to read off elimination ideals).
    pub fn project_away(&self, drop: &[Var], new_vars: &VarList) -> Option<Polynomial> {
        let drop_pos: Vec<usize> = drop.iter().filter_map(|&v| self.vars.index_of(v)).collect();
        if self
            .terms
            .iter()
            .any(|t| drop_pos.iter().any(|&p| t.mono.exp(p) > 0))
        {
            return None;
        }
        let keep: Vec<(usize, usize)> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !drop.contains(v))
            .map(|(old, v)| (old, new_vars.index_of(v).expect("projection target")))
            .collect();
        let n = new_vars.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = vec![0u32; n];
                for &(old, new) in &keep {
                    e[new] = t.mono.exp(old);
                }
                Term {
                    coef: t.coef.clone(),
                    mono: Monomial(e),
                }
            })
            .collect();
        Some(Polynomial::new(new_vars.clone(), terms))
    }

    /// Substitute exact rationals for some variables.
    pub fn eval_vars(&self, assignment: &[(Var, Rat)]) -> Polynomial {
        let mut acc = self.clone();
        for (v, c) in assignment {
            let constant = Polynomial::constant(acc.vars.clone(), c.clone());
            acc = acc.substitute(*v, &constant);
        }
        acc
    }

    /// Floating-point evaluation with values aligned to the variable list.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = rat_to_f64(&t.coef);
            for (pos, &e) in t.mono.0.iter().enumerate() {
                v *= point[pos].powi(e as i32);
            }
            acc += v;
        }
        acc
    }

    /// `Some(c)` when `self == c * other` with `c != 0`.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<Rat> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some(int(1))
            } else {
                None
            };
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let ratio = self.terms[0].coef.clone() / &other.terms[0].coef;
        for (a, b) in self.terms.iter().zip(&other.terms) {
            if a.mono != b.mono || a.coef != b.coef.clone() * &ratio {
                return None;
            }
        }
        Some(ratio)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Scale down huge numerators before converting; coefficients seen by
    // the numeric layer are tame, so plain conversion is fine in practice.
    let n = r.numer();
    let d = r.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(if b.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef < Rat::zero();
            let abs = if neg { -t.coef.clone() } else { t.coef.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !abs.is_one() || t.mono.is_one() {
                pieces.push(format_rat(&abs));
            }
            for (pos, &e) in t.mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.vars.0[pos].to_string();
                if e == 1 {
                    pieces.push(name);
                } else {
                    pieces.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
