//! Exact real-root analysis for univariate polynomials over the rationals.
//!
//! Sturm sequences give exact root counts on rational intervals; roots are
//! first isolated by interval bisection and then narrowed by further
//! bisection down to a requested width. Everything up to the final float
//! conversion is rational arithmetic, so counts and brackets are
//! certificates rather than estimates. The numeric layers (diagram tracing,
//! realization sampling) sit on top of this module.

use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, Polynomial};
use crate::vars::Var;
use crate::{int, rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Univariate polynomial with ascending coefficients `c[0] + c[1] t + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rat>) -> UniPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    /// Extract the coefficients of `v` from a multivariate polynomial in
    /// which every other variable has exponent zero.
    pub fn from_polynomial(p: &Polynomial, v: Var) -> Result<UniPoly> {
        let pos = p.vars().index_of(v).ok_or_else(|| {
            Error::VariableMismatch(format!("{v} is not a variable of the polynomial"))
        })?;
        let mut coeffs = vec![int(0); p.degree_in(v) as usize + 1];
        for t in p.terms() {
            for (i, &e) in t.mono.0.iter().enumerate() {
                if i != pos && e > 0 {
                    return Err(Error::VariableMismatch(format!(
                        "polynomial is not univariate in {v}"
                    )));
                }
            }
            coeffs[t.mono.exp(pos) as usize] = t.coef.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + rat_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * int(i as i64))
            .collect();
        UniPoly::new(coeffs)
    }

    fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Division remainder `self mod d` over the rationals.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let q = r[k].clone() / &lead;
            if !q.is_zero() {
                for i in 0..dd {
                    let v = r[k - dd + i].clone() - &q * &d.coeffs[i];
                    r[k - dd + i] = v;
                }
            }
            r.pop();
        }
        UniPoly::new(r)
    }

    /// Scale by the positive rational that makes the coefficients coprime
    /// integers; the sign pattern is untouched, so Sturm data is preserved.
    fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for c in &self.coeffs {
            denom_lcm = denom_lcm.lcm(c.denom());
            numer_gcd = numer_gcd.gcd(c.numer());
        }
        let scale = Rat::new(denom_lcm, numer_gcd);
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c * &scale).collect(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut f, mut g) = (a.primitive(), b.primitive());
        while !g.is_zero() {
            let r = f.rem(&g).primitive();
            f = g;
            g = r;
        }
        if let Some(d) = f.degree() {
            let lead = f.coeffs[d].clone();
            f = UniPoly {
                coeffs: f.coeffs.iter().map(|c| c / &lead).collect(),
            };
        }
        f
    }

    /// Quotient `self / d`, asserting the division is exact.
    pub fn exact_div(&self, d: &UniPoly) -> UniPoly {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![int(0); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1;
            let c = r[k].clone() / &lead;
            q[k - dd] = c.clone();
            for i in 0..dd {
                let v = r[k - dd + i].clone() - &c * &d.coeffs[i];
                r[k - dd + i] = v;
            }
            r.pop();
        }
        assert!(
            r.iter().all(|c| c.is_zero()),
            "exact_div called on a non-multiple"
        );
        UniPoly::new(q)
    }

    /// The squarefree part `self / gcd(self, self')`: same distinct real
    /// roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = UniPoly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            self.primitive()
        } else {
            self.exact_div(&g).primitive()
        }
    }

    /// Canonical Sturm chain of the polynomial.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.primitive(), self.derivative().primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                return chain;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg().primitive();
            chain.push(r);
        }
    }

    /// Cauchy bound: every real root has absolute value below the bound.
    pub fn root_bound(&self) -> Rat {
        let d = match self.degree() {
            Some(d) if d > 0 => d,
            _ => return int(1),
        };
        let lead = self.coeffs[d].abs();
        let mut m = int(0);
        for c in &self.coeffs[..d] {
            let q = c.abs() / &lead;
            if q > m {
                m = q;
            }
        }
        m + int(1)
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`;
    /// endpoints must not be roots.
    pub fn count_roots_in(&self, lo: &Rat, hi: &Rat) -> usize {
        let chain = self.sturm_chain();
        variations_at(&chain, lo) - variations_at(&chain, hi)
    }

    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let b = self.root_bound();
        self.count_roots_in(&-b.clone(), &b)
    }

    /// All real roots, each bracketed to width at most `2^-precision_bits`
    /// (exact roots collapse to a point), sorted increasingly.
    pub fn real_roots(&self, precision_bits: u32) -> Vec<RootInterval> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree_part();
        let chain = sf.sturm_chain();
        let bound = sf.root_bound();
        let width = rat(1, 2).pow(precision_bits as i32);

        let mut isolated: Vec<(Rat, Rat)> = Vec::new();
        let mut work = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = work.pop() {
            let n = variations_at(&chain, &lo) - variations_at(&chain, &hi);
            match n {
                0 => {}
                1 => isolated.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / int(2);
                    if sf.eval(&mid).is_zero() {
                        // Simple exact root at the midpoint: emit it and
                        // shave a root-free collar off both sides.
                        isolated.push((mid.clone(), mid.clone()));
                        let mut eps = (&hi - &lo) / int(4);
                        loop {
                            let (a, b) = (&mid - &eps, &mid + &eps);
                            if !sf.eval(&a).is_zero()
                                && !sf.eval(&b).is_zero()
                                && variations_at(&chain, &a) - variations_at(&chain, &b) == 1
                            {
                                work.push((lo.clone(), a));
                                work.push((b, hi.clone()));
                                break;
                            }
                            eps = eps / int(2);
                        }
                    } else {
                        work.push((lo, mid.clone()));
                        work.push((mid, hi));
                    }
                }
            }
        }

        let mut roots: Vec<RootInterval> = isolated
            .into_iter()
            .map(|(lo, hi)| refine(&sf, lo, hi, &width))
            .collect();
        roots.sort_by(|a, b| a.lo.cmp(&b.lo));
        roots
    }
}

/// Sign variations of a Sturm chain evaluated at a point.
fn variations_at(chain: &[UniPoly], t: &Rat) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = p.eval(t);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    sign_variations(&signs)
}

fn sign_variations(signs: &[i8]) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// An isolating bracket around a single simple real root.
#[derive(Clone, Debug)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    /// `true` when the bracket has collapsed to the root itself.
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        rat_to_f64(&self.mid())
    }
}

/// Bisect a bracket `(lo, hi)` around a simple root of the squarefree `p`
/// until the bracket is narrower than `width` (or the root is hit exactly).
fn refine(p: &UniPoly, lo: Rat, hi: Rat, width: &Rat) -> RootInterval {
    if lo == hi {
        return RootInterval { lo, hi };
    }
    let mut slo = p.eval(&lo);
    let (mut lo, mut hi) = (lo, hi);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / int(2);
        let smid = p.eval(&mid);
        if smid.is_zero() {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if smid.is_positive() == slo.is_positive() {
            lo = mid;
            slo = smid;
        } else {
            hi = mid;
        }
    }
    RootInterval { lo, hi }
}
