//! Universal unfoldings: one parameter per cokernel direction of the tangent
//! space. `G(x, λ, α) = g + Σ αᵢ·pᵢ` is universal exactly when the `pᵢ`
//! residues span `E / T(g)`, and the minimal number of parameters is the
//! codimension.

use crate::division::remainder;
use crate::error::{Error, Result};
use crate::intrinsic::jet_columns;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::singularity::{
    normal_form, normalize_corners, tangent_space, vector_of, RowSpace, SingularGerm,
};
use crate::vars::{Var, VarList};
use crate::{int, Rat};
use num_traits::Zero;

/// An unfolding `G = g + Σ αᵢ·pᵢ` of a polynomial organizing center.
#[derive(Clone, Debug)]
pub struct Unfolding {
    /// The organizing center `g(x, λ)`.
    pub base: Polynomial,
    /// The adjoined directions, one monomial per parameter, in order.
    pub directions: Vec<Monomial>,
    /// The extended variable list `x > λ > α₁ > … > α_k`.
    pub vars: VarList,
    /// `G` itself.
    pub poly: Polynomial,
}

impl Unfolding {
    /// Adopt an explicit parametric family `G(x, λ, α₁, …, α_k)`. The family
    /// must be affine in every parameter with a monomial direction, i.e.
    /// `G = g + Σ αᵢ·mᵢ` for monomials `mᵢ` in `(x, λ)`.
    pub fn from_polynomial(g: &Polynomial) -> Result<Unfolding> {
        let mut k = 0u8;
        for v in g.vars().iter() {
            if let Var::Alpha(i) = v {
                k = k.max(i);
            }
        }
        let vars = VarList::unfolding(k);
        let poly = g.embed(&vars)?;
        let zero: Vec<(Var, Rat)> = (1..=k).map(|i| (Var::Alpha(i), int(0))).collect();
        let xl = VarList::xl();
        let base = poly
            .eval_vars(&zero)
            .project_away(&(1..=k).map(Var::Alpha).collect::<Vec<_>>(), &xl)
            .expect("alpha-free after evaluation");
        let mut directions = Vec::new();
        for i in 1..=k {
            let d = poly.partial_derivative(Var::Alpha(i));
            let m = match (d.num_terms(), d.terms().first()) {
                (1, Some(t)) if t.coef == int(1) => t.mono.clone(),
                _ => {
                    return Err(Error::invalid(format!(
                        "direction of alpha{i} is not a single monomial in (x, lambda)"
                    )))
                }
            };
            if (1..=k).any(|j| m.exp(1 + j as usize) != 0) {
                return Err(Error::invalid(format!(
                    "alpha{i} enters the family nonlinearly"
                )));
            }
            directions.push(Monomial(vec![m.exp(0), m.exp(1)]));
        }
        Ok(Unfolding {
            base,
            directions,
            vars,
            poly,
        })
    }
}

/// Universal unfolding of the corner-normalized normal form of `g`.
pub fn universal_unfolding(g: &SingularGerm) -> Result<Unfolding> {
    let nf = normal_form(g, g.degree())?;
    let base = normalize_corners(&nf.poly);
    unfold(&base)
}

/// Unfold a polynomial organizing center along its E/T basis directions.
pub fn unfold(base: &Polynomial) -> Result<Unfolding> {
    let sg = SingularGerm::from_polynomial(base, 3)?;
    let t = tangent_space(&sg)?;
    let k = t.et_basis.len();
    if k > 9 {
        return Err(Error::invalid(
            "codimension exceeds the nine supported unfolding parameters",
        ));
    }
    let vars = VarList::unfolding(k as u8);
    let xl = VarList::xl();
    let mut poly = base.embed(&vars)?;
    for (i, m) in t.et_basis.iter().enumerate() {
        let dir = Polynomial::from_monomial(xl.clone(), m.clone(), int(1)).embed(&vars)?;
        let alpha = Polynomial::var_pow(vars.clone(), Var::Alpha((i + 1) as u8), 1);
        poly = poly.add(&dir.mul(&alpha));
    }
    Ok(Unfolding {
        base: base.clone(),
        directions: t.et_basis,
        vars,
        poly,
    })
}

/// The codimension of `g`: `dim E / T(g)`.
pub fn codimension(g: &SingularGerm) -> Result<usize> {
    Ok(tangent_space(g)?.et_basis.len())
}

/// Decide whether `candidate` (a polynomial over unfolding variables) is a
/// universal unfolding of its own `α = 0` restriction. Returns the verdict
/// together with the E/T directions the parameter derivatives fail to reach
/// (empty exactly when universal).
pub fn is_universal_unfolding(candidate: &Polynomial) -> Result<(bool, Vec<Monomial>)> {
    let cvars = candidate.vars().clone();
    let alphas: Vec<Var> = cvars
        .iter()
        .filter(|v| matches!(v, Var::Alpha(_)))
        .collect();
    let zero: Vec<(Var, Rat)> = alphas.iter().map(|&a| (a, Rat::zero())).collect();
    let xl = VarList::xl();
    let base = candidate
        .eval_vars(&zero)
        .project_away(&alphas, &xl)
        .ok_or_else(|| Error::invalid("candidate must be a germ in x and λ at α = 0"))?;
    let sg = SingularGerm::from_polynomial(&base, 3)?;
    let t = tangent_space(&sg)?;
    let n = t.rt.certificate.degree;
    let (cols, index) = jet_columns(2, n);
    let mut space = RowSpace::new();
    for p in &t.span {
        space.try_insert(vector_of(p, &index, cols.len()));
    }
    for &a in &alphas {
        let d = candidate
            .partial_derivative(a)
            .eval_vars(&zero)
            .project_away(&alphas, &xl)
            .ok_or_else(|| Error::invalid("parameter derivative is not a germ at α = 0"))?;
        let r = remainder(&d.truncate_above(n), &t.rt.sb.basis);
        space.try_insert(vector_of(&r, &index, cols.len()));
    }
    let mut witness = Vec::new();
    for m in &t.et_basis {
        let p = Polynomial::from_monomial(xl.clone(), m.clone(), int(1));
        let r = remainder(&p, &t.rt.sb.basis);
        if space.try_insert(vector_of(&r, &index, cols.len())) {
            witness.push(m.clone());
        }
    }
    Ok((witness.is_empty(), witness))
}
