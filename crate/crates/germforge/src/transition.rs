//! Transition varieties of a parametric family `G(x, λ, α)`: the bifurcation,
//! hysteresis, and double-limit components of the singular set in parameter
//! space. Each component is the closure of a projection, computed exactly by
//! eliminating the state variables from its defining system. On top of the
//! exact generators sit three advisory, explicitly numeric layers: real-point
//! side conditions (which part of the complex variety is actually realized by
//! real singular points), a sign-vector decomposition of the complement into
//! persistent regions, and traced bifurcation diagrams per region.

use crate::basis::groebner_basis;
use crate::division::{IdealBasis, Ring};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::{rat_to_f64, Polynomial, Term};
use crate::roots::UniPoly;
use crate::unfolding::Unfolding;
use crate::vars::{Var, VarList};
use crate::{int, rat, Rat};
use num_traits::Signed;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

/// Which transition variety a component describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TransitionKind {
    /// `G = G_x = G_λ = 0`: bifurcation points in the strict sense.
    Bifurcation,
    /// `G = G_x = G_xx = 0`: hysteresis (cusp) points.
    Hysteresis,
    /// `G = G_x = 0` at two distinct states with a shared `λ`.
    DoubleLimit,
}

impl TransitionKind {
    pub fn label(self) -> &'static str {
        match self {
            TransitionKind::Bifurcation => "bifurcation",
            TransitionKind::Hysteresis => "hysteresis",
            TransitionKind::DoubleLimit => "double-limit",
        }
    }
}

/// Degenerate outcomes of the elimination, reported explicitly rather than as
/// an empty generator list of ambiguous meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// The defining system generates the unit ideal: no singular points at
    /// all, the component is empty.
    EmptyLocus,
    /// The elimination ideal is zero: the component projects onto the whole
    /// parameter space and does not cut it.
    FullSpace,
}

/// A one-line description of where the real points of a component actually
/// realize singular behavior. Always advisory: these come from sampling, not
/// from a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// No sampled parameter point on the variety carried a real singular
    /// point of the requested kind.
    EmptyReal,
    /// Every sampled real point of the variety was realized.
    AllRealized,
    /// Realization is separated by the sign of one parameter.
    Sign { var: Var, nonpositive: bool },
    /// The samples fit none of the supported shapes.
    Undetermined,
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::EmptyReal => write!(f, "no realized real points"),
            Descriptor::AllRealized => write!(f, "realized at every sampled real point"),
            Descriptor::Sign { var, nonpositive } => {
                write!(f, "realized where {var} {} 0", if *nonpositive { "<=" } else { ">=" })
            }
            Descriptor::Undetermined => write!(f, "no sign description fits the samples"),
        }
    }
}

/// Sampled realization data for one component.
#[derive(Clone, Debug, Default)]
pub struct SideConditions {
    /// Number of real variety points sampled.
    pub sampled: usize,
    /// How many of them carried a real singular point.
    pub realized: usize,
    pub descriptors: Vec<Descriptor>,
}

impl SideConditions {
    fn undetermined() -> SideConditions {
        SideConditions {
            sampled: 0,
            realized: 0,
            descriptors: vec![Descriptor::Undetermined],
        }
    }
}

/// One transition variety: exact generators plus advisory side conditions.
#[derive(Clone, Debug)]
pub struct TransitionComponent {
    pub kind: TransitionKind,
    /// Reduced lexicographic basis of the elimination ideal in the parameter
    /// ring, scaled to coprime integer coefficients.
    pub generators: Vec<Polynomial>,
    pub trivial: Option<Triviality>,
    /// The defining system before elimination, over the full ring.
    pub system: Vec<Polynomial>,
    pub side: SideConditions,
}

impl TransitionComponent {
    pub fn is_empty(&self) -> bool {
        matches!(self.trivial, Some(Triviality::EmptyLocus))
    }

    /// The hypersurface this component cuts parameter space with, when it is
    /// principal and nontrivial.
    pub fn cutting_surface(&self) -> Option<&Polynomial> {
        if self.trivial.is_none() && self.generators.len() == 1 {
            Some(&self.generators[0])
        } else {
            None
        }
    }
}

/// The full transition set `Σ = ℬ ∪ ℋ ∪ 𝒟` of an unfolding.
#[derive(Clone, Debug)]
pub struct TransitionSet {
    pub alpha_vars: VarList,
    pub bifurcation: TransitionComponent,
    pub hysteresis: TransitionComponent,
    pub double_limit: TransitionComponent,
}

impl TransitionSet {
    pub fn components(&self) -> [&TransitionComponent; 3] {
        [&self.bifurcation, &self.hysteresis, &self.double_limit]
    }
}

/// `G` written as `P + λ·Q` with `P, Q` free of `λ`, over `[x, α…]`.
struct Affine {
    p: Polynomial,
    q: Polynomial,
}

enum Prepared {
    Trivial(Triviality),
    /// Generators over a ring whose first `elim` variables are to be
    /// eliminated and whose remaining variables are the parameters in order.
    Eliminate { gens: Vec<Polynomial>, elim: usize },
}

/// Compute the transition set of `u` with default side-condition sampling
/// over the parameter box `[-1, 1]^k`.
pub fn transition_set(u: &Unfolding) -> Result<TransitionSet> {
    let k = u.directions.len();
    let alphas: Vec<Var> = (1..=k as u8).map(Var::Alpha).collect();
    let alpha_vars = VarList(alphas);
    let aff = lambda_affine(&u.poly);

    let mut built = Vec::with_capacity(3);
    for kind in [
        TransitionKind::Bifurcation,
        TransitionKind::Hysteresis,
        TransitionKind::DoubleLimit,
    ] {
        let system = defining_system(kind, u)?;
        let (generators, trivial) = match prepare(kind, u, aff.as_ref())? {
            Prepared::Trivial(t) => (Vec::new(), Some(t)),
            Prepared::Eliminate { gens, elim } => eliminate(gens, elim, &alpha_vars)?,
        };
        let side = if trivial.is_some() || generators.is_empty() {
            SideConditions::default()
        } else {
            let lo = vec![-1.0; k];
            let hi = vec![1.0; k];
            let grid = if k <= 2 { 7 } else { 5 };
            real_filter(&system, &generators, &lo, &hi, grid)
                .unwrap_or_else(|_| SideConditions::undetermined())
        };
        built.push(TransitionComponent {
            kind,
            generators,
            trivial,
            system,
            side,
        });
    }
    let mut it = built.into_iter();
    Ok(TransitionSet {
        alpha_vars,
        bifurcation: it.next().unwrap(),
        hysteresis: it.next().unwrap(),
        double_limit: it.next().unwrap(),
    })
}

/// Split `g` as `P + λ·Q` when `g` is affine in `λ`. The pieces live over the
/// ring with `λ` removed.
fn lambda_affine(g: &Polynomial) -> Option<Affine> {
    if g.degree_in(Var::Lambda) > 1 {
        return None;
    }
    let reduced: Vec<Var> = g
        .vars()
        .iter()
        .filter(|v| *v != Var::Lambda)
        .collect();
    let rv = VarList(reduced);
    let p = g
        .eval_vars(&[(Var::Lambda, int(0))])
        .project_away(&[Var::Lambda], &rv)?;
    let q = g
        .partial_derivative(Var::Lambda)
        .project_away(&[Var::Lambda], &rv)?;
    Some(Affine { p, q })
}

/// Is `p` a nonzero element of the coefficient field? Only such coefficients
/// may be inverted when solving for `λ`.
fn is_unit(p: &Polynomial) -> bool {
    !p.is_zero() && p.total_degree() == 0
}

/// The literal defining system of a component over its full ring, kept for
/// reporting and for the numeric witness search.
fn defining_system(kind: TransitionKind, u: &Unfolding) -> Result<Vec<Polynomial>> {
    let g = &u.poly;
    match kind {
        TransitionKind::Bifurcation => Ok(vec![
            g.clone(),
            g.partial_derivative(Var::X),
            g.partial_derivative(Var::Lambda),
        ]),
        TransitionKind::Hysteresis => {
            let gx = g.partial_derivative(Var::X);
            Ok(vec![g.clone(), gx.partial_derivative(Var::X).clone(), gx])
        }
        TransitionKind::DoubleLimit => {
            let mut vars = vec![Var::Zeta, Var::X1, Var::X2, Var::Lambda];
            vars.extend(u.alpha_list());
            let dv = VarList(vars);
            let swap = |t: Var| move |v| if v == Var::X { t } else { v };
            let g1 = g.rename(&dv, swap(Var::X1))?;
            let g2 = g.rename(&dv, swap(Var::X2))?;
            let gx = g.partial_derivative(Var::X);
            let g1x = gx.rename(&dv, swap(Var::X1))?;
            let g2x = gx.rename(&dv, swap(Var::X2))?;
            let zeta = Polynomial::var_pow(dv.clone(), Var::Zeta, 1);
            let x1 = Polynomial::var_pow(dv.clone(), Var::X1, 1);
            let x2 = Polynomial::var_pow(dv.clone(), Var::X2, 1);
            let e = Polynomial::one(dv).sub(&zeta.mul(&x1.sub(&x2)));
            Ok(vec![g1, g2, g1x, g2x, e])
        }
    }
}

/// Choose the elimination system for a component. When `G = P + λQ` and `Q`
/// or `Q_x` is a nonzero constant, `λ` can be solved for through a ring
/// isomorphism and the system shrinks by one variable without changing the
/// elimination ideal; otherwise the full defining system is used.
fn prepare(kind: TransitionKind, u: &Unfolding, aff: Option<&Affine>) -> Result<Prepared> {
    let g = &u.poly;
    match kind {
        TransitionKind::Bifurcation => {
            if let Some(a) = aff {
                if a.q.is_zero() {
                    // g is λ-free, so g_λ ≡ 0 drops out of the system.
                    return Ok(Prepared::Eliminate {
                        gens: vec![a.p.clone(), a.p.partial_derivative(Var::X)],
                        elim: 1,
                    });
                }
                if is_unit(&a.q) {
                    // g_λ = Q is a nonzero constant; the system is unsolvable.
                    return Ok(Prepared::Trivial(Triviality::EmptyLocus));
                }
                if is_unit(&a.q.partial_derivative(Var::X)) {
                    // ⟨P + λQ, P_x + λQ_x, Q⟩ ∩ K[x,α] = ⟨P, Q⟩ because the
                    // middle generator solves for λ with a unit coefficient.
                    return Ok(Prepared::Eliminate {
                        gens: vec![a.p.clone(), a.q.clone()],
                        elim: 1,
                    });
                }
            }
            Ok(Prepared::Eliminate {
                gens: vec![
                    g.clone(),
                    g.partial_derivative(Var::X),
                    g.partial_derivative(Var::Lambda),
                ],
                elim: 2,
            })
        }
        TransitionKind::Hysteresis => {
            if let Some(a) = aff {
                let px = a.p.partial_derivative(Var::X);
                let pxx = px.partial_derivative(Var::X);
                let qx = a.q.partial_derivative(Var::X);
                if a.q.is_zero() {
                    return Ok(Prepared::Eliminate {
                        gens: vec![a.p.clone(), px, pxx],
                        elim: 1,
                    });
                }
                if is_unit(&a.q) {
                    // λ = -P/Q exactly; g_x and g_xx lose their λ part.
                    return Ok(Prepared::Eliminate {
                        gens: vec![px, pxx],
                        elim: 1,
                    });
                }
                if is_unit(&qx) {
                    // Solve λ from g_x. The images of g and g_xx are
                    //   u = P_x·Q − P·Q_x   and   v = P_xx·Q_x − P_x·Q_xx.
                    let u = px.mul(&a.q).sub(&a.p.mul(&qx));
                    let v = pxx.mul(&qx).sub(&px.mul(&qx.partial_derivative(Var::X)));
                    return Ok(Prepared::Eliminate {
                        gens: vec![u, v],
                        elim: 1,
                    });
                }
            }
            let gx = g.partial_derivative(Var::X);
            Ok(Prepared::Eliminate {
                gens: vec![g.clone(), gx.partial_derivative(Var::X), gx],
                elim: 2,
            })
        }
        TransitionKind::DoubleLimit => prepare_double_limit(u, aff),
    }
}

/// Double-limit elimination runs in symmetric coordinates: the ring slots
/// named `X1` and `X2` hold `e₁ = x₁ + x₂` and `e₂ = x₁·x₂`, and `ζ` inverts
/// the discriminant `e₁² − 4e₂ = (x₁ − x₂)²`, keeping the fold states
/// distinct. A pair `f(x₁), f(x₂)` generates — inside that saturation — the
/// same ideal as the symmetric pair `f(x₁) + f(x₂)` and the divided
/// difference `(f(x₁) − f(x₂))/(x₁ − x₂)`, both polynomials in `(e₁, e₂)`;
/// averaging any membership certificate over the swap shows the elimination
/// ideal in the parameters is unchanged, while the Gröbner walk no longer
/// duplicates the symmetric orbit.
fn prepare_double_limit(u: &Unfolding, aff: Option<&Affine>) -> Result<Prepared> {
    let reduced = matches!(aff, Some(a) if a.q.is_zero() || is_unit(&a.q) || is_unit(&a.q.partial_derivative(Var::X)));
    let mut vars = vec![Var::Zeta, Var::X1, Var::X2];
    if !reduced {
        vars.push(Var::Lambda);
    }
    vars.extend(u.alpha_list());
    let dv = VarList(vars);
    let elim = if reduced { 3 } else { 4 };
    let z = Polynomial::var_pow(dv.clone(), Var::Zeta, 1);
    let e1 = Polynomial::var_pow(dv.clone(), Var::X1, 1);
    let e2 = Polynomial::var_pow(dv.clone(), Var::X2, 1);
    let disc = e1.mul(&e1).sub(&e2.scale(&int(4)));
    let e = Polynomial::one(dv.clone()).sub(&z.mul(&disc));

    let mut gens = if let Some(a) = aff.filter(|_| reduced) {
        let px = a.p.partial_derivative(Var::X);
        let qx = a.q.partial_derivative(Var::X);
        if a.q.is_zero() {
            let (sp, hp) = symmetric_pair(&a.p, Var::X, &dv)?;
            let (spx, hpx) = symmetric_pair(&px, Var::X, &dv)?;
            vec![sp, hp, spx, hpx]
        } else if is_unit(&a.q) {
            // λ = -P(xᵢ)/Q turns the G-pair into the divided difference of P
            // and leaves the P_x pair.
            let (spx, hpx) = symmetric_pair(&px, Var::X, &dv)?;
            let (_, hp) = symmetric_pair(&a.p, Var::X, &dv)?;
            vec![spx, hpx, hp]
        } else {
            // Q_x is a unit: solve λ from G_x(x₁). The G-pair becomes the
            // pair of u = P_x·Q − P·Q_x, and G_x(x₂) the divided difference
            // of P_x.
            let u_poly = px.mul(&a.q).sub(&a.p.mul(&qx));
            let (su, hu) = symmetric_pair(&u_poly, Var::X, &dv)?;
            let (_, hpx) = symmetric_pair(&px, Var::X, &dv)?;
            vec![su, hu, hpx]
        }
    } else {
        let g = &u.poly;
        let gx = g.partial_derivative(Var::X);
        let (sg, hg) = symmetric_pair(g, Var::X, &dv)?;
        let (sgx, hgx) = symmetric_pair(&gx, Var::X, &dv)?;
        vec![sg, hg, sgx, hgx]
    };
    gens.push(e);
    Ok(Prepared::Eliminate { gens, elim })
}

/// Rewrite the pair `f(x₁), f(x₂)` as `(f(x₁) + f(x₂), DD f)` in the
/// symmetric coordinates `e₁ = x₁ + x₂` (slot `X1`) and `e₂ = x₁x₂` (slot
/// `X2`), via the power sums `pₙ` and complete homogeneous sums `hₙ`, both
/// satisfying `tₙ = e₁tₙ₋₁ − e₂tₙ₋₂`.
fn symmetric_pair(f: &Polynomial, x: Var, out: &VarList) -> Result<(Polynomial, Polynomial)> {
    let pos = f
        .vars()
        .index_of(x)
        .ok_or_else(|| Error::VariableMismatch(format!("{x} not present")))?;
    let e1 = Polynomial::var_pow(out.clone(), Var::X1, 1);
    let e2 = Polynomial::var_pow(out.clone(), Var::X2, 1);
    let top = f.degree_in(x) as usize;
    let mut p = vec![Polynomial::constant(out.clone(), int(2)), e1.clone()];
    let mut h = vec![Polynomial::one(out.clone()), e1.clone()];
    for n in 2..=top {
        p.push(e1.mul(&p[n - 1]).sub(&e2.mul(&p[n - 2])));
        h.push(e1.mul(&h[n - 1]).sub(&e2.mul(&h[n - 2])));
    }
    let zero = Polynomial::new(out.clone(), Vec::new());
    let (mut sum, mut dd) = (zero.clone(), zero);
    for t in f.terms() {
        let n = t.mono.exp(pos) as usize;
        let mut exps = vec![0u32; out.len()];
        for (i, w) in f.vars().iter().enumerate() {
            if i == pos || t.mono.exp(i) == 0 {
                continue;
            }
            let np = out
                .index_of(w)
                .ok_or_else(|| Error::VariableMismatch(format!("{w} not present")))?;
            exps[np] = t.mono.exp(i);
        }
        let rest = Polynomial::from_monomial(out.clone(), Monomial(exps), t.coef.clone());
        sum = sum.add(&rest.mul(&p[n]));
        if n >= 1 {
            dd = dd.add(&rest.mul(&h[n - 1]));
        }
    }
    Ok((sum, dd))
}

/// Monomial-wise divided difference: the image of `f` under
/// `(f(v₁) − f(v₂)) / (v₁ − v₂)`, using `vⁿ ↦ Σ_{i+j=n−1} v₁ⁱ v₂ʲ`.
pub fn divided_difference(
    f: &Polynomial,
    v: Var,
    v1: Var,
    v2: Var,
    out: &VarList,
) -> Result<Polynomial> {
    let pos = f
        .vars()
        .index_of(v)
        .ok_or_else(|| Error::VariableMismatch(format!("{v} not present")))?;
    let p1 = out
        .index_of(v1)
        .ok_or_else(|| Error::VariableMismatch(format!("{v1} not present")))?;
    let p2 = out
        .index_of(v2)
        .ok_or_else(|| Error::VariableMismatch(format!("{v2} not present")))?;
    let mut terms = Vec::new();
    for t in f.terms() {
        let e = t.mono.exp(pos);
        let mut base = vec![0u32; out.len()];
        for (i, w) in f.vars().iter().enumerate() {
            if i == pos || t.mono.exp(i) == 0 {
                continue;
            }
            let np = out
                .index_of(w)
                .ok_or_else(|| Error::VariableMismatch(format!("{w} not present")))?;
            base[np] = t.mono.exp(i);
        }
        for i in 0..e {
            let mut exps = base.clone();
            exps[p1] += i;
            exps[p2] += e - 1 - i;
            terms.push(Term {
                coef: t.coef.clone(),
                mono: Monomial(exps),
            });
        }
    }
    Ok(Polynomial::new(out.clone(), terms))
}

/// Eliminate the first `elim` ring variables from `gens` and return the
/// reduced lexicographic basis of the resulting ideal in the parameter ring.
fn eliminate(
    gens: Vec<Polynomial>,
    elim: usize,
    alpha_vars: &VarList,
) -> Result<(Vec<Polynomial>, Option<Triviality>)> {
    let gens: Vec<Polynomial> = gens
        .into_iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.integer_primitive())
        .collect();
    if gens.is_empty() {
        return Ok((Vec::new(), Some(Triviality::FullSpace)));
    }
    let ring = gens[0].vars().clone();
    let elim_list: Vec<Var> = ring.iter().take(elim).collect();
    let basis = IdealBasis::new(gens, MonomialOrder::Block { elim }, Ring::GlobalPoly);
    let gb = groebner_basis(&basis);
    let mut kept = Vec::new();
    for g in &gb.basis.gens {
        let free = g
            .terms()
            .iter()
            .all(|t| t.mono.0[..elim].iter().all(|&e| e == 0));
        if free {
            let projected = g
                .project_away(&elim_list, alpha_vars)
                .expect("elimination-free generator projects");
            kept.push(projected);
        }
    }
    if kept.is_empty() {
        return Ok((Vec::new(), Some(Triviality::FullSpace)));
    }
    if kept.iter().any(|g| g.total_degree() == 0) {
        return Ok((Vec::new(), Some(Triviality::EmptyLocus)));
    }
    let reduced = groebner_basis(&IdealBasis::new(
        kept,
        MonomialOrder::LexGlobal,
        Ring::GlobalPoly,
    ));
    let out: Vec<Polynomial> = reduced
        .basis
        .gens
        .iter()
        .map(|g| g.integer_primitive())
        .collect();
    Ok((out, None))
}

/// A real singular point certifying that a variety point is realized.
#[derive(Clone, Debug)]
pub struct Witness {
    /// State coordinates: one entry, or two for double-limit points.
    pub x: Vec<f64>,
    pub lambda: f64,
}

fn frat(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

/// `Σ |cᵢ|·max(1,|x|)^i`, the scale against which residuals at `x` are
/// measured.
fn poly_scale(u: &UniPoly, x: f64) -> f64 {
    let b = x.abs().max(1.0);
    let mut s = 0.0;
    let mut p = 1.0;
    for c in u.coeffs() {
        s += rat_to_f64(c).abs() * p;
        p *= b;
    }
    s.max(1.0)
}

const WITNESS_TOL: f64 = 1e-6;

/// Round to the nearest multiple of 2⁻³⁴. Root isolation returns interval
/// midpoints whose denominators far exceed their numeric meaning; trimming
/// them keeps every downstream exact evaluation cheap while staying five
/// orders of magnitude inside the witness tolerance.
fn dyadic(x: Rat) -> Rat {
    let scale = int(1i64 << 34);
    (x * scale.clone()).round() / scale
}

fn root_mid(r: &crate::roots::RootInterval) -> Rat {
    if r.is_exact() {
        r.mid()
    } else {
        dyadic(r.mid())
    }
}

/// Search for a real singular point of the requested kind at one exact
/// parameter assignment. Returns `Ok(None)` when the sampled parameter point
/// carries no real witness, and an error only when the system shape is
/// outside what the numeric search supports.
pub fn witness_at(system: &[Polynomial], point: &[(Var, Rat)]) -> Result<Option<Witness>> {
    let double = system
        .iter()
        .any(|s| s.degree_in(Var::X1) > 0 || s.degree_in(Var::X2) > 0);
    if double {
        witness_double_limit(&system[0], point)
    } else {
        witness_shared_state(system, point)
    }
}

/// Double-limit witnesses: fold points of `G(·, λ)` are the roots of
/// `u = P_x·Q − P·Q_x`; a witness is a pair of distinct fold states whose
/// fold values of `λ` agree.
fn witness_double_limit(g1: &Polynomial, point: &[(Var, Rat)]) -> Result<Option<Witness>> {
    let g = g1.eval_vars(point);
    if g.degree_in(Var::Lambda) > 1 {
        return Err(Error::Numeric(
            "witness search requires a family affine in lambda".into(),
        ));
    }
    let p = g.eval_vars(&[(Var::Lambda, int(0))]);
    let q = g.partial_derivative(Var::Lambda);
    let u = p
        .partial_derivative(Var::X1)
        .mul(&q)
        .sub(&p.mul(&q.partial_derivative(Var::X1)));
    let pu = UniPoly::from_polynomial(&p, Var::X1)?;
    let qu = UniPoly::from_polynomial(&q, Var::X1)?;
    let folds: Vec<Rat> = if q.is_zero() {
        // λ-free family: double limits are pairs of double roots of P.
        let w = UniPoly::gcd(&pu, &pu.derivative());
        w.real_roots(34).iter().map(root_mid).collect()
    } else {
        UniPoly::from_polynomial(&u, Var::X1)?
            .real_roots(34)
            .iter()
            .map(root_mid)
            .collect()
    };
    let mut states: Vec<(Rat, Rat)> = Vec::new();
    for x in folds {
        let qv = qu.eval(&x);
        let lambda = if q.is_zero() {
            int(0)
        } else if rat_to_f64(&qv).abs() > 1e-12 * poly_scale(&qu, rat_to_f64(&x)) {
            -pu.eval(&x) / qv
        } else {
            continue;
        };
        states.push((x, lambda));
    }
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let (xi, li) = &states[i];
            let (xj, lj) = &states[j];
            let dx = rat_to_f64(&(xi - xj)).abs();
            let dl = rat_to_f64(&(li - lj)).abs();
            let span = 1.0 + rat_to_f64(li).abs().max(rat_to_f64(lj).abs());
            if dx >= 1e-7 && dl <= 1e-7 * span {
                return Ok(Some(Witness {
                    x: vec![rat_to_f64(xi), rat_to_f64(xj)],
                    lambda: rat_to_f64(li),
                }));
            }
        }
    }
    Ok(None)
}

/// Witnesses for systems sharing one state: split every equation as
/// `aᵢ(x) + λ·bᵢ(x)`, gather the pairwise resultant-like combinations
/// `aᵢbⱼ − aⱼbᵢ` that vanish at any common zero, root-solve the smallest,
/// and verify candidates against the full system.
fn witness_shared_state(system: &[Polynomial], point: &[(Var, Rat)]) -> Result<Option<Witness>> {
    let mut parts: Vec<(UniPoly, UniPoly)> = Vec::new();
    let mut combos: Vec<Polynomial> = Vec::new();
    let mut split: Vec<(Polynomial, Polynomial)> = Vec::new();
    for s in system {
        let e = s.eval_vars(point);
        if e.is_zero() {
            continue;
        }
        if e.degree_in(Var::Lambda) > 1 {
            return Err(Error::Numeric(
                "witness search requires a family affine in lambda".into(),
            ));
        }
        let a = e.eval_vars(&[(Var::Lambda, int(0))]);
        let b = e.partial_derivative(Var::Lambda);
        parts.push((
            UniPoly::from_polynomial(&a, Var::X)?,
            UniPoly::from_polynomial(&b, Var::X)?,
        ));
        split.push((a, b));
    }
    if parts.is_empty() {
        // The system vanishes identically at this parameter point.
        return Ok(Some(Witness {
            x: vec![0.0],
            lambda: 0.0,
        }));
    }
    for (a, b) in &split {
        if b.is_zero() {
            combos.push(a.clone());
        }
    }
    for i in 0..split.len() {
        for j in i + 1..split.len() {
            let w = split[i].0.mul(&split[j].1).sub(&split[j].0.mul(&split[i].1));
            if !w.is_zero() {
                combos.push(w);
            }
        }
    }
    let combo_polys: Vec<UniPoly> = combos
        .iter()
        .map(|w| UniPoly::from_polynomial(w, Var::X))
        .collect::<Result<_>>()?;
    let candidates: Vec<Rat> = match combo_polys
        .iter()
        .filter(|w| w.degree().map_or(false, |d| d > 0))
        .min_by_key(|w| w.degree().unwrap())
    {
        Some(w0) => w0.real_roots(34).iter().map(root_mid).collect(),
        // Fewer than two independent equations: probe a few small states.
        None => [0, 1, -1, 2, -2]
            .iter()
            .map(|&n| rat(n, 2))
            .chain([int(0), int(1), int(-1), int(2), int(-2)])
            .collect(),
    };
    'candidate: for x in candidates {
        let xf = rat_to_f64(&x);
        for w in &combo_polys {
            if w.eval_f64(xf).abs() > WITNESS_TOL * poly_scale(w, xf) {
                continue 'candidate;
            }
        }
        let mut lambda: Option<Rat> = None;
        for (a, b) in &parts {
            let bv = b.eval(&x);
            if rat_to_f64(&bv).abs() > 1e-9 * poly_scale(b, xf) {
                lambda = Some(-a.eval(&x) / bv);
                break;
            }
        }
        let lam = lambda.unwrap_or_else(|| int(0));
        let lf = rat_to_f64(&lam);
        for (a, b) in &parts {
            let residual = rat_to_f64(&(a.eval(&x) + lam.clone() * b.eval(&x))).abs();
            let scale = poly_scale(a, xf) + lf.abs() * poly_scale(b, xf) + 1.0;
            if residual > WITNESS_TOL * scale {
                continue 'candidate;
            }
        }
        return Ok(Some(Witness {
            x: vec![xf],
            lambda: lf,
        }));
    }
    Ok(None)
}

/// Sample the real points of a principal variety over a parameter box and
/// test each sample for a real witness of the component's defining system.
pub fn real_filter(
    system: &[Polynomial],
    variety: &[Polynomial],
    lo: &[f64],
    hi: &[f64],
    grid: usize,
) -> Result<SideConditions> {
    if variety.len() != 1 {
        return Ok(SideConditions::undetermined());
    }
    let sigma = &variety[0];
    let av = sigma.vars().clone();
    let k = av.len();
    if lo.len() != k || hi.len() != k {
        return Err(Error::invalid("bounds do not match the parameter count"));
    }
    let mut solve: Option<(usize, u32)> = None;
    for (i, v) in av.iter().enumerate() {
        let d = sigma.degree_in(v);
        if d > 0 && solve.map_or(true, |(_, best)| d < best) {
            solve = Some((i, d));
        }
    }
    let (spos, _) = solve.ok_or_else(|| Error::invalid("variety generator is constant"))?;
    let solve_var = av.0[spos];
    let n = grid.max(1);
    let free: Vec<usize> = (0..k).filter(|&i| i != spos).collect();
    let lo_s = frat(lo[spos]);
    let hi_s = frat(hi[spos]);

    let mut samples: Vec<(Vec<Rat>, bool)> = Vec::new();
    let budget = 4000usize;
    let mut idx = vec![0usize; free.len()];
    'sweep: loop {
        let assign: Vec<(Var, Rat)> = free
            .iter()
            .zip(idx.iter())
            .map(|(&fi, &j)| (av.0[fi], grid_value(lo[fi], hi[fi], n, j)))
            .collect();
        let restricted = sigma.eval_vars(&assign);
        let roots: Vec<Rat> = if restricted.is_zero() {
            (0..n).map(|j| grid_value(lo[spos], hi[spos], n, j)).collect()
        } else {
            UniPoly::from_polynomial(&restricted, solve_var)?
                .real_roots(34)
                .iter()
                .map(root_mid)
                .collect()
        };
        for root in roots {
            if root < lo_s || root > hi_s {
                continue;
            }
            let mut point = assign.clone();
            point.push((solve_var, root));
            let witness = witness_at(system, &point)?;
            let coords: Vec<Rat> = av
                .iter()
                .map(|v| {
                    point
                        .iter()
                        .find(|(w, _)| *w == v)
                        .map(|(_, r)| r.clone())
                        .expect("full assignment")
                })
                .collect();
            samples.push((coords, witness.is_some()));
            if samples.len() >= budget {
                break 'sweep;
            }
        }
        let mut done = true;
        for t in 0..idx.len() {
            idx[t] += 1;
            if idx[t] < n {
                done = false;
                break;
            }
            idx[t] = 0;
        }
        if done {
            break;
        }
    }
    let realized = samples.iter().filter(|s| s.1).count();
    let descriptors = synthesize_descriptors(&av, &samples);
    Ok(SideConditions {
        sampled: samples.len(),
        realized,
        descriptors,
    })
}

fn grid_value(lo: f64, hi: f64, n: usize, j: usize) -> Rat {
    let (lo, hi) = (frat(lo), frat(hi));
    if n == 1 {
        (lo + hi) / int(2)
    } else {
        let step = (hi - lo.clone()) / int(n as i64 - 1);
        lo + step * int(j as i64)
    }
}

/// Fit the realization pattern to one of the supported descriptor shapes.
/// A boundary tolerance keeps exact-zero samples from blocking a sign
/// separation they sit on the edge of.
fn synthesize_descriptors(av: &VarList, samples: &[(Vec<Rat>, bool)]) -> Vec<Descriptor> {
    let realized = samples.iter().filter(|s| s.1).count();
    if realized == 0 {
        return vec![Descriptor::EmptyReal];
    }
    if realized == samples.len() {
        return vec![Descriptor::AllRealized];
    }
    let tol = rat(1, 1_000_000);
    let mut out = Vec::new();
    for (i, v) in av.iter().enumerate() {
        for nonpositive in [true, false] {
            let inside = |c: &Rat| {
                if nonpositive {
                    c <= &tol
                } else {
                    c >= &(-tol.clone())
                }
            };
            let strictly_outside = |c: &Rat| {
                if nonpositive {
                    c > &tol
                } else {
                    c < &(-tol.clone())
                }
            };
            // Realized samples must lie inside; unrealized samples must not
            // lie strictly inside; and at least one unrealized sample must
            // sit strictly outside for the sign to carry information.
            let realized_inside = samples.iter().all(|(pt, r)| !*r || inside(&pt[i]));
            let no_unrealized_inside = samples
                .iter()
                .all(|(pt, r)| *r || !inside(&pt[i]) || pt[i].abs() <= tol);
            let informative = samples
                .iter()
                .any(|(pt, r)| !*r && strictly_outside(&pt[i]));
            if realized_inside && no_unrealized_inside && informative {
                out.push(Descriptor::Sign { var: v, nonpositive });
            }
        }
    }
    if out.is_empty() {
        vec![Descriptor::Undetermined]
    } else {
        out
    }
}

/// One connected component of the complement of the transition set in a
/// parameter box, identified by its sign vector.
#[derive(Clone, Debug)]
pub struct ParameterRegion {
    pub id: usize,
    /// The deepest cell center: maximizes the worst margin `|σ|/τ` over the
    /// cutting surfaces active there.
    pub representative: Vec<Rat>,
    /// Sign of each cutting surface at the representative; `0` where the
    /// surface is masked by its side conditions.
    pub signs: Vec<i8>,
    pub cells: usize,
}

impl ParameterRegion {
    pub fn representative_f64(&self) -> Vec<f64> {
        self.representative.iter().map(rat_to_f64).collect()
    }
}

/// A sign-vector decomposition of a parameter box by the transition set.
#[derive(Clone, Debug)]
pub struct RegionDecomposition {
    pub alpha_vars: VarList,
    /// The cutting hypersurfaces, in component order.
    pub cutting: Vec<Polynomial>,
    pub regions: Vec<ParameterRegion>,
    /// Cells whose value fell inside the Lipschitz band of some surface.
    pub blocked: usize,
    pub warnings: Vec<String>,
}

/// Decompose the box `[lo, hi]` into persistent regions on a `grid^k` cell
/// lattice. A cell is blocked when a cutting surface cannot be excluded from
/// it (certified by a first-order bound with a sampled curvature term), and
/// side-condition masks demote surfaces to wildcards where their real locus
/// is known not to reach.
pub fn region_decompose(
    t: &TransitionSet,
    lo: &[f64],
    hi: &[f64],
    grid: usize,
) -> Result<RegionDecomposition> {
    let k = t.alpha_vars.len();
    if k > 3 {
        return Err(Error::invalid(
            "region decomposition supports at most three parameters",
        ));
    }
    if lo.len() != k || hi.len() != k {
        return Err(Error::invalid("bounds do not match the parameter count"));
    }
    let mut warnings = Vec::new();
    if k == 0 {
        return Ok(RegionDecomposition {
            alpha_vars: t.alpha_vars.clone(),
            cutting: Vec::new(),
            regions: vec![ParameterRegion {
                id: 0,
                representative: Vec::new(),
                signs: Vec::new(),
                cells: 1,
            }],
            blocked: 0,
            warnings,
        });
    }
    let n = grid.max(2);
    let total = n.checked_pow(k as u32).filter(|&c| c <= 4_000_000).ok_or_else(|| {
        Error::Budget("region grid exceeds the cell budget".into())
    })?;

    let mut cutting = Vec::new();
    let mut masks: Vec<Option<(usize, bool)>> = Vec::new();
    for c in t.components() {
        if c.trivial.is_some() {
            continue;
        }
        if let Some(p) = c.cutting_surface() {
            let sigma = p.embed(&t.alpha_vars)?;
            let mask = c.side.descriptors.iter().find_map(|d| match d {
                Descriptor::Sign { var, nonpositive } => {
                    t.alpha_vars.index_of(*var).map(|i| (i, *nonpositive))
                }
                _ => None,
            });
            masks.push(mask);
            cutting.push(sigma);
        } else if !c.generators.is_empty() {
            warnings.push(format!(
                "{} component is not principal; it does not cut the box",
                c.kind.label()
            ));
        }
    }

    let h: Vec<f64> = (0..k).map(|i| (hi[i] - lo[i]) / n as f64).collect();
    let grads: Vec<Vec<Polynomial>> = cutting
        .iter()
        .map(|s| t.alpha_vars.iter().map(|v| s.partial_derivative(v)).collect())
        .collect();
    // Sampled bound on Σᵢⱼ |∂ᵢ∂ⱼσ| over the box, for the curvature term.
    let hessians: Vec<Vec<Polynomial>> = grads
        .iter()
        .map(|gs| {
            gs.iter()
                .flat_map(|gi| t.alpha_vars.iter().map(|v| gi.partial_derivative(v)))
                .collect()
        })
        .collect();
    let mut curvature = vec![0.0f64; cutting.len()];
    let coarse = 6usize;
    let mut cidx = vec![0usize; k];
    loop {
        let pt: Vec<f64> = (0..k)
            .map(|i| lo[i] + (hi[i] - lo[i]) * cidx[i] as f64 / (coarse - 1) as f64)
            .collect();
        for (s, hs) in hessians.iter().enumerate() {
            let sum: f64 = hs.iter().map(|hij| hij.eval_f64(&pt).abs()).sum();
            curvature[s] = curvature[s].max(sum);
        }
        let mut done = true;
        for dim in 0..k {
            cidx[dim] += 1;
            if cidx[dim] < coarse {
                done = false;
                break;
            }
            cidx[dim] = 0;
        }
        if done {
            break;
        }
    }
    let slack = 1.25;
    let radius2: f64 = h.iter().map(|hi| (hi / 2.0) * (hi / 2.0)).sum();

    // Per-cell classification: sign per surface (0 = wildcard), or blocked.
    let n_sigma = cutting.len();
    let mut signs = vec![0i8; total * n_sigma.max(1)];
    let mut blocked_mask = vec![false; total];
    let mut depth = vec![f64::INFINITY; total];
    let center = |cell: usize| -> Vec<f64> {
        let mut c = cell;
        (0..k)
            .map(|i| {
                let j = c % n;
                c /= n;
                lo[i] + (j as f64 + 0.5) * h[i]
            })
            .collect()
    };
    for cell in 0..total {
        let pt = center(cell);
        for (s, sigma) in cutting.iter().enumerate() {
            if let Some((mi, nonpos)) = masks[s] {
                let margin = h[mi] / 2.0;
                let outside = if nonpos { pt[mi] > margin } else { pt[mi] < -margin };
                if outside {
                    continue; // wildcard: surface has no real points here
                }
            }
            let value = sigma.eval_f64(&pt);
            let linear: f64 = grads[s]
                .iter()
                .zip(h.iter())
                .map(|(gi, hi)| gi.eval_f64(&pt).abs() * hi / 2.0)
                .sum();
            let tau = slack * (linear + 0.5 * curvature[s] * radius2);
            if value.abs() <= tau {
                blocked_mask[cell] = true;
                break;
            }
            signs[cell * n_sigma + s] = if value > 0.0 { 1 } else { -1 };
            depth[cell] = depth[cell].min(value.abs() / tau.max(f64::MIN_POSITIVE));
        }
    }

    let blocked = blocked_mask.iter().filter(|&&b| b).count();
    if total > 0 && blocked * 2 > total {
        warnings.push("more than half of the cells are blocked; the grid is too coarse".into());
    }

    // Flood fill with wildcard-compatible adjacency.
    let compatible = |a: usize, b: usize| -> bool {
        (0..n_sigma).all(|s| {
            let (sa, sb) = (signs[a * n_sigma + s], signs[b * n_sigma + s]);
            sa == 0 || sb == 0 || sa == sb
        })
    };
    let mut region_of = vec![usize::MAX; total];
    let mut regions: Vec<ParameterRegion> = Vec::new();
    let mut best: Vec<(f64, usize)> = Vec::new();
    for start in 0..total {
        if blocked_mask[start] || region_of[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut queue = VecDeque::from([start]);
        region_of[start] = id;
        let mut cells = 0usize;
        best.push((f64::NEG_INFINITY, start));
        while let Some(cell) = queue.pop_front() {
            cells += 1;
            if depth[cell] > best[id].0 {
                best[id] = (depth[cell], cell);
            }
            let mut c = cell;
            for dim in 0..k {
                let j = c % n;
                for nb in [cell.checked_sub(n.pow(dim as u32)), Some(cell + n.pow(dim as u32))]
                    .into_iter()
                    .flatten()
                {
                    let valid = if nb < cell { j > 0 } else { j + 1 < n && nb < total };
                    if valid
                        && !blocked_mask[nb]
                        && region_of[nb] == usize::MAX
                        && compatible(cell, nb)
                    {
                        region_of[nb] = id;
                        queue.push_back(nb);
                    }
                }
                c /= n;
            }
        }
        regions.push(ParameterRegion {
            id,
            representative: Vec::new(),
            signs: Vec::new(),
            cells,
        });
    }
    for region in regions.iter_mut() {
        let (d, cell) = best[region.id];
        let mut c = cell;
        region.representative = (0..k)
            .map(|i| {
                let j = c % n;
                c /= n;
                frat(lo[i]) + (int(2 * j as i64 + 1) / int(2)) * (frat(hi[i]) - frat(lo[i])) / int(n as i64)
            })
            .collect();
        region.signs = (0..n_sigma).map(|s| signs[cell * n_sigma + s]).collect();
        if d.is_finite() && d <= 1.0 {
            warnings.push(format!(
                "region {} representative sits within the blocking threshold of a surface",
                region.id
            ));
        }
    }
    Ok(RegionDecomposition {
        alpha_vars: t.alpha_vars.clone(),
        cutting,
        regions,
        blocked,
        warnings,
    })
}

/// Qualitative shape of a bifurcation diagram: the run-length encoding of the
/// solution count along `λ`, plus the number of folds implied by its jumps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DiagramSignature {
    pub counts: Vec<(usize, usize)>,
    pub folds: usize,
}

/// A traced bifurcation diagram `{(λ, x) : G(x, λ, α*) = 0}` at one parameter
/// point.
#[derive(Clone, Debug)]
pub struct BifurcationDiagram {
    pub lambda: Vec<f64>,
    /// Solution branches as `(λ, x)` polylines, linked nearest-first.
    pub branches: Vec<Vec<(f64, f64)>>,
    pub counts: Vec<usize>,
    pub signature: DiagramSignature,
    pub max_residual: f64,
}

/// Trace the solution set of `G(x, λ, α*) = 0` over `λ ∈ [lo, hi]` with
/// `steps + 1` exact slices. Fails with a budget error when a root's scaled
/// residual exceeds `residual_tol`.
pub fn diagram_trace(
    g: &Polynomial,
    alpha: &[Rat],
    lo: f64,
    hi: f64,
    steps: usize,
    residual_tol: f64,
) -> Result<BifurcationDiagram> {
    let steps = steps.max(1);
    let assign: Vec<(Var, Rat)> = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| (Var::Alpha(i as u8 + 1), a.clone()))
        .collect();
    let at_alpha = g.eval_vars(&assign);
    let mut lambda = Vec::with_capacity(steps + 1);
    let mut counts = Vec::with_capacity(steps + 1);
    let mut branches: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut open: Vec<(f64, usize)> = Vec::new(); // (last x, branch index)
    let mut max_residual = 0.0f64;
    for j in 0..=steps {
        let lam = grid_value(lo, hi, steps + 1, j);
        let lf = rat_to_f64(&lam);
        let slice = at_alpha.eval_vars(&[(Var::Lambda, lam)]);
        if slice.is_zero() {
            return Err(Error::invalid("the family vanishes on a whole slice"));
        }
        let up = UniPoly::from_polynomial(&slice, Var::X)?;
        let roots: Vec<f64> = up.real_roots(48).iter().map(|r| r.mid_f64()).collect();
        for &x in &roots {
            let res = up.eval_f64(x).abs() / poly_scale(&up, x);
            max_residual = max_residual.max(res);
            if res > residual_tol {
                return Err(Error::Budget(format!(
                    "root residual {res:.2e} exceeds the budget at lambda = {lf}"
                )));
            }
        }
        counts.push(roots.len());
        lambda.push(lf);
        // Link roots to open branches, nearest pairs first.
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (oi, (ox, _)) in open.iter().enumerate() {
            for (ri, &x) in roots.iter().enumerate() {
                pairs.push(((x - ox).abs(), oi, ri));
            }
        }
        pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut used_old = vec![false; open.len()];
        let mut used_new = vec![false; roots.len()];
        let mut next_open = Vec::new();
        for (d, oi, ri) in pairs {
            if used_old[oi] || used_new[ri] || d > 0.5 {
                continue;
            }
            used_old[oi] = true;
            used_new[ri] = true;
            let bi = open[oi].1;
            branches[bi].push((lf, roots[ri]));
            next_open.push((roots[ri], bi));
        }
        for (ri, &x) in roots.iter().enumerate() {
            if !used_new[ri] {
                branches.push(vec![(lf, x)]);
                next_open.push((x, branches.len() - 1));
            }
        }
        open = next_open;
    }
    let mut rle: Vec<(usize, usize)> = Vec::new();
    for &c in &counts {
        match rle.last_mut() {
            Some((v, len)) if *v == c => *len += 1,
            _ => rle.push((c, 1)),
        }
    }
    let jumps: usize = counts.windows(2).map(|w| w[0].abs_diff(w[1])).sum();
    let signature = DiagramSignature {
        counts: rle,
        folds: jumps / 2,
    };
    Ok(BifurcationDiagram {
        lambda,
        branches,
        counts,
        signature,
        max_residual,
    })
}

/// All persistent bifurcation diagrams of an unfolding over a region
/// decomposition, with a shortlist of one region per distinct signature.
#[derive(Clone, Debug)]
pub struct PersistentDiagrams {
    pub lambda_range: (f64, f64),
    pub per_region: Vec<(usize, BifurcationDiagram)>,
    /// Region ids, one per distinct signature, in region order.
    pub shortlist: Vec<usize>,
}

pub fn persistent_diagrams(
    u: &Unfolding,
    decomposition: &RegionDecomposition,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<PersistentDiagrams> {
    let mut per_region = Vec::new();
    let mut seen: BTreeMap<DiagramSignature, usize> = BTreeMap::new();
    let mut shortlist = Vec::new();
    for region in &decomposition.regions {
        let d = diagram_trace(&u.poly, &region.representative, lo, hi, steps, 1e-9)?;
        if !seen.contains_key(&d.signature) {
            seen.insert(d.signature.clone(), region.id);
            shortlist.push(region.id);
        }
        per_region.push((region.id, d));
    }
    Ok(PersistentDiagrams {
        lambda_range: (lo, hi),
        per_region,
        shortlist,
    })
}

impl Unfolding {
    /// The parameter variables of this unfolding, in order.
    pub fn alpha_list(&self) -> Vec<Var> {
        (1..=self.directions.len() as u8).map(Var::Alpha).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{parse_germ, parse_unfolding};
    use crate::singularity::SingularGerm;
    use crate::unfolding::universal_unfolding;

    fn family(text: &str, k: u8) -> Unfolding {
        let expr = parse_unfolding(text).unwrap();
        let poly = expr.to_polynomial(&VarList::unfolding(k)).unwrap();
        Unfolding::from_polynomial(&poly).unwrap()
    }

    fn unfolded(text: &str) -> Unfolding {
        let expr = parse_germ(text).unwrap();
        let g = SingularGerm::from_polynomial(&expr.to_polynomial(&VarList::xl()).unwrap(), 3)
            .unwrap();
        universal_unfolding(&g).unwrap()
    }

    fn alpha_poly(terms: &[(i64, [u32; 4])]) -> Polynomial {
        let vars = VarList((1..=4).map(Var::Alpha).collect());
        Polynomial::new(
            vars.clone(),
            terms
                .iter()
                .map(|(c, e)| Term {
                    coef: int(*c),
                    mono: Monomial(e.to_vec()),
                })
                .collect(),
        )
    }

    fn assert_unit_multiple(actual: &Polynomial, expected: &Polynomial) {
        let expected = expected
            .embed(actual.vars())
            .unwrap_or_else(|_| expected.clone());
        let ratio = actual
            .proportional_to(&expected)
            .unwrap_or_else(|| panic!("not proportional:\n  {actual}\n  {expected}"));
        assert_eq!(ratio.abs(), int(1), "not a unit multiple: {ratio}");
    }

    #[test]
    fn divided_difference_splits_powers() {
        let vars = VarList(vec![Var::X]);
        let f = Polynomial::var_pow(vars.clone(), Var::X, 3)
            .sub(&Polynomial::var_pow(vars.clone(), Var::X, 1).scale(&int(2)));
        let out = VarList(vec![Var::X1, Var::X2]);
        let dd = divided_difference(&f, Var::X, Var::X1, Var::X2, &out).unwrap();
        let x1 = Polynomial::var_pow(out.clone(), Var::X1, 1);
        let x2 = Polynomial::var_pow(out.clone(), Var::X2, 1);
        let expected = x1
            .mul(&x1)
            .add(&x1.mul(&x2))
            .add(&x2.mul(&x2))
            .sub(&Polynomial::constant(out.clone(), int(2)));
        assert_eq!(dd, expected);
        // (x₁ − x₂)·DD must reproduce f(x₁) − f(x₂).
        let f1 = f.rename(&out, |_| Var::X1).unwrap();
        let f2 = f.rename(&out, |_| Var::X2).unwrap();
        assert_eq!(x1.sub(&x2).mul(&dd), f1.sub(&f2));
    }

    #[test]
    fn fold_has_empty_transition_set() {
        let u = unfolded("x^2+lambda");
        let t = transition_set(&u).unwrap();
        for c in t.components() {
            assert_eq!(c.trivial, Some(Triviality::EmptyLocus), "{}", c.kind.label());
        }
        let dec = region_decompose(&t, &[], &[], 10).unwrap();
        assert_eq!(dec.regions.len(), 1);

        let d = diagram_trace(&u.poly, &[], -1.0, 1.0, 200, 1e-9).unwrap();
        assert_eq!(d.signature.counts, vec![(2, 100), (1, 1), (0, 100)]);
        assert_eq!(d.signature.folds, 1);
        assert!(d.max_residual <= 1e-9);
    }

    #[test]
    fn quartic_transition_varieties() {
        let u = unfolded("x^4+lambda");
        let t = transition_set(&u).unwrap();
        assert_eq!(t.bifurcation.trivial, Some(Triviality::EmptyLocus));

        let vars = VarList(vec![Var::Alpha(1), Var::Alpha(2)]);
        let cusp = Polynomial::new(
            vars.clone(),
            vec![
                Term { coef: int(8), mono: Monomial(vec![0, 3]) },
                Term { coef: int(27), mono: Monomial(vec![2, 0]) },
            ],
        );
        assert_eq!(t.hysteresis.generators, vec![cusp]);
        assert!(t
            .hysteresis
            .side
            .descriptors
            .contains(&Descriptor::AllRealized));

        let line = Polynomial::var_pow(vars, Var::Alpha(1), 1);
        assert_eq!(t.double_limit.generators, vec![line]);
        assert!(t.double_limit.side.descriptors.contains(&Descriptor::Sign {
            var: Var::Alpha(2),
            nonpositive: true,
        }));
    }

    #[test]
    fn quartic_regions_and_shortlist() {
        let u = unfolded("x^4+lambda");
        let t = transition_set(&u).unwrap();
        let dec = region_decompose(&t, &[-1.0, -1.0], &[1.0, 1.0], 200).unwrap();
        assert_eq!(dec.regions.len(), 3, "warnings: {:?}", dec.warnings);

        let diagrams = persistent_diagrams(&u, &dec, -1.0, 1.0, 200).unwrap();
        assert_eq!(diagrams.per_region.len(), 3);
        // The two inner regions are mirror images with equal count profiles,
        // so the shortlist keeps one of them plus the outer region.
        assert_eq!(diagrams.shortlist.len(), 2);
        for (_, d) in &diagrams.per_region {
            assert!(d.max_residual <= 1e-9);
        }
    }

    #[test]
    fn pitchfork_family_transition_varieties() {
        let u = family("x^4+lambda*x+alpha1+alpha2*lambda+alpha3*x^2", 3);
        let t = transition_set(&u).unwrap();

        let vars = VarList((1..=3).map(Var::Alpha).collect());
        let term = |c: i64, e: [u32; 3]| Term { coef: int(c), mono: Monomial(e.to_vec()) };
        let b = Polynomial::new(
            vars.clone(),
            vec![term(1, [0, 4, 0]), term(1, [0, 2, 1]), term(1, [1, 0, 0])],
        );
        assert_eq!(t.bifurcation.generators.len(), 1);
        assert_unit_multiple(&t.bifurcation.generators[0], &b);

        let h = Polynomial::new(
            vars.clone(),
            vec![
                term(128, [0, 2, 3]),
                term(3, [0, 0, 4]),
                term(72, [1, 0, 2]),
                term(432, [2, 0, 0]),
            ],
        );
        assert_eq!(t.hysteresis.generators.len(), 1);
        assert_unit_multiple(&t.hysteresis.generators[0], &h);
        assert!(t.hysteresis.side.descriptors.contains(&Descriptor::Sign {
            var: Var::Alpha(3),
            nonpositive: true,
        }));

        let d = Polynomial::new(
            vars,
            vec![term(1, [0, 0, 2]), term(-4, [1, 0, 0])],
        );
        assert_eq!(t.double_limit.generators.len(), 1);
        assert_unit_multiple(&t.double_limit.generators[0], &d);
    }

    #[test]
    fn winged_cusp_transition_varieties() {
        let u = unfolded("x^5+lambda*x");
        assert_eq!(u.directions.len(), 4);
        let t = transition_set(&u).unwrap();

        let b = alpha_poly(&[(1, [1, 0, 0, 0]), (-1, [0, 5, 0, 0]), (1, [0, 2, 1, 0]), (-1, [0, 3, 0, 1])]);
        assert_eq!(t.bifurcation.generators.len(), 1);
        assert_unit_multiple(&t.bifurcation.generators[0], &b);

        let h = alpha_poly(&[
            (3375, [0, 3, 2, 3]),
            (10125, [1, 2, 0, 4]),
            (16875, [0, 3, 4, 0]),
            (-675, [0, 2, 3, 2]),
            (288, [0, 1, 2, 4]),
            (67500, [1, 2, 2, 1]),
            (-900, [1, 1, 1, 3]),
            (864, [1, 0, 0, 5]),
            (1080, [0, 1, 4, 1]),
            (-32, [0, 0, 3, 3]),
            (45000, [2, 1, 0, 2]),
            (13500, [1, 1, 3, 0]),
            (3300, [1, 0, 2, 2]),
            (-108, [0, 0, 5, 0]),
            (30000, [2, 0, 1, 1]),
            (50000, [3, 0, 0, 0]),
        ]);
        assert_eq!(t.hysteresis.generators.len(), 1);
        assert_unit_multiple(&t.hysteresis.generators[0], &h);

        // The α₂³α₃²α₄³ coefficient below is 11000, cross-checked by
        // evaluating at exact hand-constructed double-limit points such as
        // (α₁, α₂, α₃, α₄) = (92, 1, 66, -23), where the states x = 1, 2
        // share λ = -68.
        let d = alpha_poly(&[
            (2000, [0, 3, 0, 6]),
            (11000, [0, 3, 2, 3]),
            (-6400, [0, 2, 1, 5]),
            (64, [0, 1, 0, 7]),
            (28000, [1, 2, 0, 4]),
            (-16875, [0, 3, 4, 0]),
            (-43200, [0, 2, 3, 2]),
            (5472, [0, 1, 2, 4]),
            (-128, [0, 0, 1, 6]),
            (45000, [1, 2, 2, 1]),
            (-69600, [1, 1, 1, 3]),
            (256, [1, 0, 0, 5]),
            (34020, [0, 1, 4, 1]),
            (-1728, [0, 0, 3, 3]),
            (130000, [2, 1, 0, 2]),
            (-81000, [1, 1, 3, 0]),
            (43200, [1, 0, 2, 2]),
            (-5832, [0, 0, 5, 0]),
            (-180000, [2, 0, 1, 1]),
            (200000, [3, 0, 0, 0]),
        ]);
        assert_eq!(t.double_limit.generators.len(), 1);
        assert_unit_multiple(&t.double_limit.generators[0], &d);
    }

    #[test]
    #[ignore]
    fn winged_cusp_phase_timing() {
        let u = unfolded("x^5+lambda*x");
        let aff = lambda_affine(&u.poly);
        let alpha_vars = VarList(u.alpha_list());
        for kind in [
            TransitionKind::Bifurcation,
            TransitionKind::Hysteresis,
            TransitionKind::DoubleLimit,
        ] {
            let t0 = std::time::Instant::now();
            let prepared = prepare(kind, &u, aff.as_ref()).unwrap();
            let (gens, trivial) = match prepared {
                Prepared::Trivial(t) => (Vec::new(), Some(t)),
                Prepared::Eliminate { gens, elim } => eliminate(gens, elim, &alpha_vars).unwrap(),
            };
            println!(
                "{}: eliminate {:?} gens={} trivial={:?}",
                kind.label(),
                t0.elapsed(),
                gens.len(),
                trivial
            );
            if !gens.is_empty() {
                let t1 = std::time::Instant::now();
                let system = defining_system(kind, &u).unwrap();
                let side = real_filter(&system, &gens, &[-1.0; 4], &[1.0; 4], 7).unwrap();
                println!(
                    "{}: real_filter {:?} sampled={} realized={}",
                    kind.label(),
                    t1.elapsed(),
                    side.sampled,
                    side.realized
                );
            }
        }
    }

    #[test]
    fn double_limit_witnesses_at_frozen_points() {
        let u = family("x^4+lambda*x+alpha1+alpha2*lambda+alpha3*x^2", 3);
        let t = transition_set(&u).unwrap();
        let system = &t.double_limit.system;

        let point = vec![
            (Var::Alpha(1), rat(1, 4)),
            (Var::Alpha(2), int(0)),
            (Var::Alpha(3), int(-1)),
        ];
        let w = witness_at(system, &point).unwrap().expect("realized");
        assert_eq!(w.x.len(), 2);
        assert!((w.x[0] + w.x[1]).abs() < 1e-6, "symmetric pair: {:?}", w.x);
        assert!(w.lambda.abs() < 1e-6);

        let point = vec![
            (Var::Alpha(1), rat(1, 4)),
            (Var::Alpha(2), int(0)),
            (Var::Alpha(3), int(1)),
        ];
        assert!(witness_at(system, &point).unwrap().is_none());
    }

    #[test]
    fn empty_real_side_conditions() {
        let vars = VarList(vec![Var::X, Var::Lambda, Var::Alpha(1)]);
        let system = vec![Polynomial::var_pow(vars.clone(), Var::X, 2)
            .add(&Polynomial::one(vars.clone()))];
        let avars = VarList(vec![Var::Alpha(1)]);
        let variety = vec![Polynomial::var_pow(avars.clone(), Var::Alpha(1), 2)
            .add(&Polynomial::one(avars))];
        let side = real_filter(&system, &variety, &[-1.0], &[1.0], 7).unwrap();
        assert_eq!(side.sampled, 0);
        assert_eq!(side.descriptors, vec![Descriptor::EmptyReal]);
    }
}
