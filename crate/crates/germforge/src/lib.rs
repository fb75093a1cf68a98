//! Exact computer-algebra kernel for local bifurcation problems of scalar
//! smooth germs `g(x, lambda)`.
//!
//! The crate works over the ring of smooth germs at the origin through two
//! computational surrogates:
//!
//! * the *jet ring* `Q[x, lambda] / M^(N+1)` with a local (anti-graded)
//!   monomial order, used for standard bases, quotient data and all
//!   singularity-theoretic objects, with `N` chosen by an explicit
//!   truncation certificate, and
//! * the ordinary polynomial ring with global orders (lexicographic and
//!   block elimination), used for intersections, colon ideals and
//!   transition-set eliminations.
//!
//! Everything is exact rational arithmetic; floating point only appears in
//! the numeric layer that samples bifurcation diagrams and classifies
//! parameter regions.
//!
//! The pipeline, bottom to top: [`germ`] parses and differentiates germ
//! expressions into certified Taylor jets ([`jet`]), [`poly`] provides the
//! sparse polynomial algebra and [`order`] the monomial orders, [`division`]
//! and [`basis`] implement local/global division and Buchberger loops,
//! [`ideal`] the quotient/colon/truncation analysis, [`intrinsic`] the
//! staircase ideals, [`singularity`] the germ-level objects (high-order
//! terms, normal forms, tangent spaces, recognition, transformations),
//! [`unfolding`] universal unfoldings, and [`transition`] the transition
//! sets and persistent bifurcation diagrams.

pub mod basis;
pub mod division;
pub mod error;
pub mod germ;
pub mod ideal;
pub mod intrinsic;
pub mod jet;
pub mod json;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod roots;
pub mod singularity;
pub mod svg;
pub mod transition;
pub mod unfolding;
pub mod vars;

pub use error::Error;

/// Exact rational scalar used everywhere in the kernel.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for small integers as rationals.
pub fn int(n: i64) -> Rat {
    rat(n, 1)
}
