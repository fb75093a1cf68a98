//! Certified Taylor jets of germ expressions.
//!
//! A [`Jet`] is the exact degree-`N` Taylor polynomial of a germ together
//! with a [`TailSupport`]: a finite antichain of monomials such that every
//! term of the underlying series in degree `> N` is divisible by one of
//! them. The cone is what makes jet arithmetic honest — every truncation
//! performed while evaluating an expression records where the discarded
//! terms can live, and the ideal-theoretic truncation certificates consume
//! exactly that information.
//!
//! Jets always live in the germ ring variables `[x, lambda]`.

use crate::error::{Error, Result};
use crate::germ::{Func, GermExpression};
use crate::monomial::{prune_to_minimal, Monomial};
use crate::poly::{Polynomial, Term};
use crate::vars::{Var, VarList};
use crate::{int, rat, Rat};
use num_traits::{One, Zero};

/// Bound on where the non-polynomial tail of a series can live.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TailSupport {
    /// Every series term of degree above the jet degree is divisible by an
    /// element of this antichain. An empty cone means the jet is exact.
    Cone(Vec<Monomial>),
    /// No structural bound available. Certification fails loudly on this.
    Unknown,
}

impl TailSupport {
    pub fn exact() -> Self {
        TailSupport::Cone(Vec::new())
    }

    pub fn cone(&self) -> Option<&[Monomial]> {
        match self {
            TailSupport::Cone(c) => Some(c),
            TailSupport::Unknown => None,
        }
    }

    fn merge(a: &TailSupport, b: &TailSupport) -> TailSupport {
        match (a, b) {
            (TailSupport::Cone(x), TailSupport::Cone(y)) => {
                let mut all = x.clone();
                all.extend(y.iter().cloned());
                TailSupport::Cone(prune_to_minimal(all))
            }
            _ => TailSupport::Unknown,
        }
    }

    fn extend_with(self, extra: Vec<Monomial>) -> TailSupport {
        match self {
            TailSupport::Cone(mut c) => {
                c.extend(extra);
                TailSupport::Cone(prune_to_minimal(c))
            }
            TailSupport::Unknown => TailSupport::Unknown,
        }
    }
}

/// Exact degree-`N` jet of a germ with a certified tail bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    poly: Polynomial,
    degree: u32,
    tail: TailSupport,
}

impl Jet {
    /// Jet of an exact polynomial: the truncation error is the polynomial's
    /// own high part, so the cone is known exactly.
    pub fn from_polynomial(p: &Polynomial, degree: u32) -> Jet {
        assert_eq!(p.vars(), &VarList::xl(), "jets live in the [x, lambda] ring");
        let (low, high) = p.split_at_degree(degree);
        let cone = prune_to_minimal(high.terms().iter().map(|t| t.mono.clone()).collect());
        Jet {
            poly: low,
            degree,
            tail: TailSupport::Cone(cone),
        }
    }

    pub fn zero(degree: u32) -> Jet {
        Jet {
            poly: Polynomial::zero(VarList::xl()),
            degree,
            tail: TailSupport::exact(),
        }
    }

    pub fn constant(c: Rat, degree: u32) -> Jet {
        Jet {
            poly: Polynomial::constant(VarList::xl(), c),
            degree,
            tail: TailSupport::exact(),
        }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn tail(&self) -> &TailSupport {
        &self.tail
    }

    /// Whether the jet represents the exact germ (no tail at all).
    pub fn is_exact(&self) -> bool {
        matches!(&self.tail, TailSupport::Cone(c) if c.is_empty())
    }

    /// Minimal total degree of any possible series term, tail included.
    pub fn order_lower_bound(&self) -> Option<u32> {
        let poly_ord = self.poly.order_of_vanishing();
        let tail_ord = match &self.tail {
            TailSupport::Cone(c) => c.iter().map(|m| m.total_degree()).min(),
            TailSupport::Unknown => Some(self.degree + 1),
        };
        match (poly_ord, tail_ord) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        }
    }

    fn assert_compatible(&self, other: &Jet) {
        assert_eq!(
            self.degree, other.degree,
            "jet degrees differ: {} vs {}",
            self.degree, other.degree
        );
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.assert_compatible(other);
        Jet {
            poly: self.poly.add(&other.poly),
            degree: self.degree,
            tail: TailSupport::merge(&self.tail, &other.tail),
        }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.assert_compatible(other);
        Jet {
            poly: self.poly.sub(&other.poly),
            degree: self.degree,
            tail: TailSupport::merge(&self.tail, &other.tail),
        }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            poly: self.poly.neg(),
            degree: self.degree,
            tail: self.tail.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.degree);
        }
        Jet {
            poly: self.poly.scale(c),
            degree: self.degree,
            tail: self.tail.clone(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        self.assert_compatible(other);
        let product = self.poly.mul(&other.poly);
        let (low, high) = product.split_at_degree(self.degree);
        let mut extra: Vec<Monomial> = high.terms().iter().map(|t| t.mono.clone()).collect();
        let tail = match (&self.tail, &other.tail) {
            (TailSupport::Cone(ca), TailSupport::Cone(cb)) => {
                let sa = minimal_support(&self.poly);
                let sb = minimal_support(&other.poly);
                for a in ca {
                    for m in sb.iter().chain(cb.iter()) {
                        extra.push(a.mul(m));
                    }
                }
                for b in cb {
                    for m in &sa {
                        extra.push(b.mul(m));
                    }
                }
                TailSupport::Cone(prune_to_minimal(extra))
            }
            _ => TailSupport::Unknown,
        };
        Jet {
            poly: low,
            degree: self.degree,
            tail,
        }
    }

    /// Square-and-multiply power; cheap even for enormous exponents because
    /// a positive-order base collapses to a pure tail once `k` passes the
    /// jet degree.
    pub fn pow(&self, k: u32) -> Jet {
        if k == 0 {
            return Jet::constant(int(1), self.degree);
        }
        if let Some(ord) = self.order_lower_bound() {
            if ord > 0 && (k as u64) * (ord as u64) > self.degree as u64 {
                // Entirely tail: bound it by a bounded-length power cone.
                let w = self.lower_bound_cone();
                let j = ((self.degree / ord.max(1)) + 1).min(k);
                return Jet {
                    poly: Polynomial::zero(VarList::xl()),
                    degree: self.degree,
                    tail: TailSupport::Cone(power_cone(&w, j)),
                };
            }
        } else {
            // Zero jet.
            return Jet::zero(self.degree);
        }
        let mut base = self.clone();
        let mut k = k;
        let mut acc = Jet::constant(int(1), self.degree);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Antichain of monomials dividing every possible series term.
    fn lower_bound_cone(&self) -> Vec<Monomial> {
        let mut w = minimal_support(&self.poly);
        if let TailSupport::Cone(c) = &self.tail {
            w.extend(c.iter().cloned());
        }
        prune_to_minimal(w)
    }

    /// Derivative with respect to `v`; the result is certified one degree
    /// lower because the top coefficients of the derivative depend on the
    /// unseen degree-(N+1) part of the germ.
    pub fn derivative(&self, v: Var) -> Jet {
        assert!(self.degree > 0, "cannot differentiate a degree-0 jet");
        let pos = if v == Var::X { 0 } else { 1 };
        let tail = match &self.tail {
            TailSupport::Cone(c) => {
                let mut mapped: Vec<Monomial> = c
                    .iter()
                    .map(|m| {
                        let mut e = m.clone();
                        if e.0[pos] > 0 {
                            e.0[pos] -= 1;
                        }
                        e
                    })
                    .collect();
                // Degree-(N) jet terms also feed the (N-1)+1 tail region of
                // the derivative; cover them explicitly.
                for t in self.poly.terms() {
                    if t.mono.total_degree() == self.degree {
                        let mut e = t.mono.clone();
                        if e.0[pos] > 0 {
                            e.0[pos] -= 1;
                            mapped.push(e);
                        }
                    }
                }
                TailSupport::Cone(prune_to_minimal(mapped))
            }
            TailSupport::Unknown => TailSupport::Unknown,
        };
        Jet {
            poly: self.poly.partial_derivative(v).truncate_above(self.degree - 1),
            degree: self.degree - 1,
            tail,
        }
    }

    /// Multiply by a plain polynomial (jetted at the same degree first).
    pub fn mul_poly(&self, p: &Polynomial) -> Jet {
        self.mul(&Jet::from_polynomial(p, self.degree))
    }

    /// Restrict to a lower degree, folding the dropped terms into the cone.
    pub fn restrict(&self, degree: u32) -> Jet {
        assert!(degree <= self.degree);
        let (low, high) = self.poly.split_at_degree(degree);
        let dropped: Vec<Monomial> = high.terms().iter().map(|t| t.mono.clone()).collect();
        Jet {
            poly: low,
            degree,
            tail: self.tail.clone().extend_with(dropped),
        }
    }

    /// Linear change of state variable `x := a*x + b*lambda`.
    ///
    /// Degree is preserved (the substitution is homogeneous of degree one),
    /// and each cone element spreads into the slab of monomials with the
    /// same total degree and at least its lambda-exponent.
    pub fn substitute_linear(&self, a: &Rat, b: &Rat) -> Jet {
        let vars = VarList::xl();
        let replacement = Polynomial::new(
            vars.clone(),
            vec![
                Term {
                    coef: a.clone(),
                    mono: Monomial(vec![1, 0]),
                },
                Term {
                    coef: b.clone(),
                    mono: Monomial(vec![0, 1]),
                },
            ],
        );
        let tail = match &self.tail {
            TailSupport::Cone(c) => {
                let mut spread = Vec::new();
                for m in c {
                    let (dx, dl) = (m.exp(0), m.exp(1));
                    for i in 0..=dx {
                        spread.push(Monomial(vec![dx - i, dl + i]));
                    }
                }
                TailSupport::Cone(prune_to_minimal(spread))
            }
            TailSupport::Unknown => TailSupport::Unknown,
        };
        Jet {
            poly: self.poly.substitute(Var::X, &replacement),
            degree: self.degree,
            tail,
        }
    }
}

/// Minimal (divisibility) support monomials of a polynomial.
fn minimal_support(p: &Polynomial) -> Vec<Monomial> {
    prune_to_minimal(p.terms().iter().map(|t| t.mono.clone()).collect())
}

/// Antichain covering all products of `j` factors drawn from `w`.
fn power_cone(w: &[Monomial], j: u32) -> Vec<Monomial> {
    if w.is_empty() {
        return Vec::new();
    }
    let mut acc = w.to_vec();
    for _ in 1..j {
        let mut next = Vec::new();
        for a in &acc {
            for b in w {
                next.push(a.mul(b));
            }
        }
        acc = prune_to_minimal(next);
    }
    acc
}

/// Compute the exact degree-`n` Taylor jet of a germ expression.
pub fn taylor_jet(expr: &GermExpression, n: u32) -> Result<Jet> {
    match expr {
        GermExpression::Var(v) => match v {
            Var::X | Var::Lambda => Ok(Jet::from_polynomial(
                &Polynomial::var_pow(VarList::xl(), *v, 1),
                n,
            )),
            other => Err(Error::VariableMismatch(format!(
                "germ expressions use x and lambda only, found {other}"
            ))),
        },
        GermExpression::Const(c) => Ok(Jet::constant(c.clone(), n)),
        GermExpression::Add(a, b) => Ok(taylor_jet(a, n)?.add(&taylor_jet(b, n)?)),
        GermExpression::Sub(a, b) => Ok(taylor_jet(a, n)?.sub(&taylor_jet(b, n)?)),
        GermExpression::Mul(a, b) => Ok(taylor_jet(a, n)?.mul(&taylor_jet(b, n)?)),
        GermExpression::Pow(a, k) => Ok(taylor_jet(a, n)?.pow(*k)),
        GermExpression::Apply(f, a) => compose(*f, &taylor_jet(a, n)?),
    }
}

/// Tail-support cone of an expression at degree `n`.
pub fn tail_support(expr: &GermExpression, n: u32) -> Result<TailSupport> {
    Ok(taylor_jet(expr, n)?.tail().clone())
}

/// Series coefficient of `u^k` in the expansion of `f` around 0.
fn series_coefficient(f: Func, k: u32) -> Rat {
    match f {
        Func::Exp => rat(1, factorial(k)),
        Func::Sin => {
            if k % 2 == 0 {
                Rat::zero()
            } else {
                let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                rat(sign, factorial(k))
            }
        }
        Func::Cos => {
            if k % 2 == 1 {
                Rat::zero()
            } else if k == 0 {
                Rat::one()
            } else {
                let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                rat(sign, factorial(k))
            }
        }
        Func::Ln1p => {
            if k == 0 {
                Rat::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                rat(sign, k as i64)
            }
        }
    }
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}

fn compose(f: Func, u: &Jet) -> Result<Jet> {
    let n = u.degree();
    let constant = u.poly().coefficient_of(&Monomial::one(2));
    if !constant.is_zero() {
        return Err(Error::invalid(format!(
            "{}() applied to a germ with nonzero value at the origin; \
             the result would have a non-rational Taylor coefficient",
            f.name()
        )));
    }
    let Some(ord) = u.order_lower_bound().filter(|&o| o > 0) else {
        // u == 0 exactly (or has order 0, excluded above).
        return Ok(Jet::constant(series_coefficient(f, 0), n));
    };
    // Largest power of u that can still touch degree <= n.
    let cutoff = n / ord;
    let mut acc = Jet::constant(series_coefficient(f, 0), n);
    let mut u_power = Jet::constant(int(1), n);
    for k in 1..=cutoff {
        u_power = u_power.mul(u);
        let c = series_coefficient(f, k);
        if !c.is_zero() {
            acc = acc.add(&u_power.scale(&c));
        }
    }
    // Terms from u^(cutoff+1) onward are pure tail.
    let w = u.lower_bound_cone();
    let series_tail = power_cone(&w, cutoff + 1);
    Ok(Jet {
        poly: acc.poly.clone(),
        degree: n,
        tail: acc.tail.extend_with(series_tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;

    fn mono(a: u32, b: u32) -> Monomial {
        Monomial(vec![a, b])
    }

    fn jet_of(src: &str, n: u32) -> Jet {
        taylor_jet(&parse_germ(src).unwrap(), n).unwrap()
    }

    #[test]
    fn paper_intro_germ_jet() {
        // exp(x^2) + 2cos(x) - 3 + sin(lambda): the x^2 and constant terms
        // cancel and the degree-5 jet keeps both odd sin terms.
        let j = jet_of("exp(x^2)+2*cos(x)-3+sin(lambda)", 5);
        let expected = parse_germ("7/12*x^4+lambda-1/6*lambda^3+1/120*lambda^5")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        assert_eq!(j.poly(), &expected);
    }

    #[test]
    fn lambda_cubed_sin_x_jets_and_cones() {
        // At degree 6 the jet keeps the x^3 lambda^3 term; tail starts at x^5 lambda^3.
        let j6 = jet_of("lambda^3*sin(x)", 6);
        let expected = parse_germ("lambda^3*x - 1/6*lambda^3*x^3")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        assert_eq!(j6.poly(), &expected);
        assert_eq!(j6.tail().cone().unwrap(), &[mono(5, 3)]);

        // At degree 4 only lambda^3 x survives; the tail cone starts earlier.
        let j4 = jet_of("lambda^3*sin(x)", 4);
        let expected4 = parse_germ("lambda^3*x")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        assert_eq!(j4.poly(), &expected4);
        assert_eq!(j4.tail().cone().unwrap(), &[mono(3, 3)]);
    }

    #[test]
    fn additive_tail_cones_merge() {
        let t = tail_support(&parse_germ("exp(x)+exp(lambda)").unwrap(), 3).unwrap();
        assert_eq!(t.cone().unwrap(), &[mono(0, 4), mono(4, 0)]);
    }

    #[test]
    fn exact_polynomials_have_empty_cone() {
        let j = jet_of("x^2+lambda", 5);
        assert!(j.is_exact());
        // Truncating an exact polynomial re-materializes its high part.
        let j1 = jet_of("x^2+lambda", 1);
        assert_eq!(j1.tail().cone().unwrap(), &[mono(2, 0)]);
    }

    #[test]
    fn transcendental_constant_term_rejected() {
        let e = parse_germ("exp(1+x)").unwrap();
        assert!(taylor_jet(&e, 4).is_err());
        let ok = parse_germ("exp(x)+exp(lambda)").unwrap();
        assert!(taylor_jet(&ok, 4).is_ok());
    }

    #[test]
    fn derivative_certifies_one_degree_lower() {
        let j = jet_of("lambda^3*sin(x)", 7);
        let dx = j.derivative(Var::X);
        assert_eq!(dx.degree(), 6);
        // x^4 lambda^3 / 24 has total degree 7 and belongs to the tail, not
        // the degree-6 jet.
        let expected = parse_germ("lambda^3 - 1/2*lambda^3*x^2")
            .unwrap()
            .to_polynomial(&VarList::xl())
            .unwrap();
        assert_eq!(dx.poly(), &expected);
        assert_eq!(dx.tail().cone().unwrap(), &[mono(4, 3)]);
    }

    #[test]
    fn huge_exponent_is_pure_tail() {
        let e = parse_germ("x^1000000").unwrap();
        let j = taylor_jet(&e, 8).unwrap();
        assert!(j.poly().is_zero());
        let cone = j.tail().cone().unwrap();
        assert_eq!(cone.len(), 1);
        assert!(cone[0].total_degree() >= 9);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn jet_consistency_and_tail_soundness(seed in 0u64..5000, n in 2u32..7, k in 1u32..4) {
            let expr = random_expr(seed);
            let small = taylor_jet(&expr, n).unwrap();
            let big = taylor_jet(&expr, n + k).unwrap();
            // Consistency: truncating a higher jet gives the lower jet.
            proptest::prop_assert_eq!(big.poly().truncate_above(n), small.poly().clone());
            // Soundness: every term the higher jet sees beyond degree n is
            // inside the tail cone of the lower jet.
            let cone = small.tail().cone().unwrap();
            for t in big.poly().terms() {
                if t.mono.total_degree() > n {
                    proptest::prop_assert!(
                        cone.iter().any(|c| c.divides(&t.mono)),
                        "term {:?} escapes cone {:?}", t.mono, cone
                    );
                }
            }
        }
    }

    /// Small deterministic expression generator for the property tests.
    fn random_expr(seed: u64) -> GermExpression {
        fn build(state: &mut u64, depth: u32) -> GermExpression {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let choice = (*state >> 33) % if depth == 0 { 3 } else { 6 };
            match choice {
                0 => GermExpression::Var(Var::X),
                1 => GermExpression::Var(Var::Lambda),
                2 => GermExpression::Const(int(((*state >> 17) % 5) as i64 - 2)),
                3 => GermExpression::add(build(state, depth - 1), build(state, depth - 1)),
                4 => GermExpression::mul(build(state, depth - 1), build(state, depth - 1)),
                _ => {
                    let funcs = [Func::Exp, Func::Sin, Func::Cos, Func::Ln1p];
                    let f = funcs[((*state >> 11) % 4) as usize];
                    // Guarantee the argument vanishes at the origin.
                    let v = if (*state >> 7) % 2 == 0 { Var::X } else { Var::Lambda };
                    let arg = GermExpression::mul(
                        GermExpression::Var(v),
                        build(state, depth - 1),
                    );
                    GermExpression::Apply(f, Box::new(arg))
                }
            }
        }
        let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
        build(&mut state, 3)
    }
}
