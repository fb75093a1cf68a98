//! Exponent-vector monomials.
//!
//! A [`Monomial`] is a bare exponent vector; its meaning (which position is
//! which variable) comes from the [`VarList`](crate::vars::VarList) of the
//! polynomial that owns it. All the divisibility combinatorics used by the
//! division algorithms and staircase computations live here.

use serde::{Deserialize, Serialize};

/// A monomial as a dense exponent vector aligned with some `VarList`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// Single variable `position^k`.
    pub fn var(nvars: usize, position: usize, k: u32) -> Self {
        let mut e = vec![0; nvars];
        e[position] = k;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, position: usize) -> u32 {
        self.0[position]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Exact quotient `self / other`; `None` when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// Coprime test used by the product criterion in Buchberger loops.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fill(&mut out, &mut current, 0, d);
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, position: usize, remaining: u32) {
    if position + 1 == current.len() {
        current[position] = remaining;
        out.push(Monomial(current.clone()));
        current[position] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[position] = e;
        fill(out, current, position + 1, remaining - e);
    }
    current[position] = 0;
}

/// All monomials of total degree at most `d`.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    (0..=d)
        .flat_map(|k| monomials_of_degree(nvars, k))
        .collect()
}

/// Remove elements divisible by another element, leaving the divisibility
/// antichain of minimal monomials.
pub fn prune_to_minimal(mut set: Vec<Monomial>) -> Vec<Monomial> {
    set.sort();
    set.dedup();
    let mut keep: Vec<Monomial> = Vec::new();
    // Sort by degree so potential divisors are seen first.
    set.sort_by_key(|m| m.total_degree());
    for m in set {
        if !keep.iter().any(|k| k.divides(&m)) {
            keep.push(m);
        }
    }
    keep.sort();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_enumeration_counts() {
        // C(d + n - 1, n - 1) monomials of degree d in n variables.
        assert_eq!(monomials_of_degree(2, 4).len(), 5);
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        assert_eq!(monomials_up_to_degree(2, 3).len(), 10);
    }

    #[test]
    fn divisibility_and_lcm() {
        let xy = Monomial(vec![1, 1]);
        let x2 = Monomial(vec![2, 0]);
        assert!(!xy.divides(&x2));
        assert_eq!(xy.lcm(&x2), Monomial(vec![2, 1]));
        assert_eq!(x2.div(&Monomial(vec![1, 0])), Some(Monomial(vec![1, 0])));
        assert_eq!(x2.div(&xy), None);
        assert!(x2.coprime(&Monomial(vec![0, 3])));
    }

    #[test]
    fn minimal_antichain() {
        let set = vec![
            Monomial(vec![1, 1]),
            Monomial(vec![2, 1]),
            Monomial(vec![0, 3]),
            Monomial(vec![1, 4]),
        ];
        let min = prune_to_minimal(set);
        assert_eq!(min, vec![Monomial(vec![0, 3]), Monomial(vec![1, 1])]);
    }
}
