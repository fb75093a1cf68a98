//! Variable universe and ordered variable lists.
//!
//! A [`VarList`] fixes both which variables a polynomial mentions and their
//! precedence: earlier entries are *greater* in every monomial order built
//! on top of the list. The standard germ ring uses `[X, Lambda]`, i.e.
//! `x > lambda`; elimination rings prepend the variables to be eliminated.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A variable of the ambient polynomial ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Var {
    /// State variable `x`.
    X,
    /// Distinguished (bifurcation) parameter `lambda`.
    Lambda,
    /// Unfolding parameter `alpha<k>`, 1-based.
    Alpha(u8),
    /// Auxiliary variable for the intersection trick.
    T,
    /// Auxiliary variable for double-limit-point saturation.
    Zeta,
    /// First copy of `x` in double-limit-point systems.
    X1,
    /// Second copy of `x` in double-limit-point systems.
    X2,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Lambda => write!(f, "lambda"),
            Var::Alpha(k) => write!(f, "alpha{k}"),
            Var::T => write!(f, "t"),
            Var::Zeta => write!(f, "zeta"),
            Var::X1 => write!(f, "x1"),
            Var::X2 => write!(f, "x2"),
        }
    }
}

/// Ordered list of variables; position is precedence (first = greatest).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct VarList(pub Vec<Var>);

impl VarList {
    /// The germ ring variables `x > lambda`.
    pub fn xl() -> Self {
        VarList(vec![Var::X, Var::Lambda])
    }

    /// Germ ring extended by `k` unfolding parameters, all below `lambda`.
    pub fn unfolding(k: u8) -> Self {
        let mut v = vec![Var::X, Var::Lambda];
        v.extend((1..=k).map(Var::Alpha));
        VarList(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.0.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index_of(v).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for VarList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
