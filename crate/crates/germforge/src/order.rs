//! Monomial orders: local anti-graded lex, global lex, block elimination.
//!
//! Precedence between variables always comes from the position in the
//! owning `VarList` (earlier = greater), so the order itself only stores
//! its kind. The local order makes `1` the greatest monomial of all, which
//! is exactly what the germ-ring division and standard-basis routines need:
//! reduction walks towards *higher* total degree and is cut off by the jet
//! truncation.

use crate::monomial::Monomial;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Kind of monomial order over an exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Anti-graded lexicographic: lower total degree is greater, ties by
    /// lexicographic comparison. Local: `1 > x > x^2 > ...` and `x > lambda`
    /// at equal degree (with the standard `[x, lambda]` list).
    AlexLocal,
    /// Plain lexicographic; global. With `t` first this is the classical
    /// elimination order used by the intersection trick.
    LexGlobal,
    /// Block elimination order: the first `elim` positions form the greater
    /// block; each block is compared by graded reverse lexicographic order.
    /// Any monomial touching the elimination block beats every monomial
    /// that does not, so the `elim`-free part of a Gröbner basis generates
    /// the elimination ideal.
    Block { elim: usize },
}

impl MonomialOrder {
    /// `true` when the order is local (a unit can have a greatest term).
    pub fn is_local(self) -> bool {
        matches!(self, MonomialOrder::AlexLocal)
    }

    /// Compare two monomials; `Greater` means `a` is the larger monomial.
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::AlexLocal => {
                match a.total_degree().cmp(&b.total_degree()) {
                    Ordering::Less => Ordering::Greater, // lower degree is greater
                    Ordering::Greater => Ordering::Less,
                    Ordering::Equal => lex(&a.0, &b.0),
                }
            }
            MonomialOrder::LexGlobal => lex(&a.0, &b.0),
            MonomialOrder::Block { elim } => {
                let head = grevlex(&a.0[..elim], &b.0[..elim]);
                if head != Ordering::Equal {
                    return head;
                }
                grevlex(&a.0[elim..], &b.0[elim..])
            }
        }
    }

    /// Maximum of a non-empty monomial set under this order.
    pub fn max<'a, I: IntoIterator<Item = &'a Monomial>>(self, set: I) -> Option<&'a Monomial> {
        set.into_iter()
            .max_by(|a, b| self.compare(a, b).then(Ordering::Equal))
    }

    /// Short human-readable name, used in CLI and JSON output.
    pub fn name(self) -> String {
        match self {
            MonomialOrder::AlexLocal => "alex-local".into(),
            MonomialOrder::LexGlobal => "lex-global".into(),
            MonomialOrder::Block { elim } => format!("block-elim({elim})"),
        }
    }
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // Reverse lexicographic tie-break: scanning from the least variable,
    // the monomial with the smaller exponent at the first difference wins.
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::monomials_up_to_degree;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn alex_basics() {
        let o = MonomialOrder::AlexLocal;
        // 1 > x > x^2 and x > lambda at equal degree.
        assert_eq!(o.compare(&m(&[0, 0]), &m(&[1, 0])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[2, 0])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
        // x^4*lambda < x^5 (equal degree, lex tie-break).
        assert_eq!(o.compare(&m(&[4, 1]), &m(&[5, 0])), Ordering::Less);
    }

    #[test]
    fn lex_basics() {
        let o = MonomialOrder::LexGlobal;
        assert_eq!(o.compare(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[0, 3]), &m(&[0, 4])), Ordering::Less);
        assert_eq!(o.compare(&m(&[2, 1]), &m(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates() {
        // Three variables, first one eliminated.
        let o = MonomialOrder::Block { elim: 1 };
        assert_eq!(
            o.compare(&m(&[1, 0, 0]), &m(&[0, 9, 9])),
            Ordering::Greater
        );
        assert_eq!(o.compare(&m(&[0, 2, 0]), &m(&[0, 0, 2])), Ordering::Greater);
    }

    #[test]
    fn divisor_is_greater_locally() {
        // If b divides a then a <= b in the local order.
        let o = MonomialOrder::AlexLocal;
        for a in monomials_up_to_degree(2, 6) {
            for b in monomials_up_to_degree(2, 6) {
                if b.divides(&a) {
                    assert_ne!(o.compare(&a, &b), Ordering::Greater);
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn orders_are_total_and_multiplicative(
            a in proptest::collection::vec(0u32..6, 3),
            b in proptest::collection::vec(0u32..6, 3),
            c in proptest::collection::vec(0u32..4, 3),
            which in 0usize..3,
        ) {
            let order = [MonomialOrder::AlexLocal,
                         MonomialOrder::LexGlobal,
                         MonomialOrder::Block { elim: 1 }][which];
            let (a, b, c) = (Monomial(a), Monomial(b), Monomial(c));
            let ab = order.compare(&a, &b);
            // Antisymmetry / totality.
            proptest::prop_assert_eq!(order.compare(&b, &a), ab.reverse());
            proptest::prop_assert_eq!(ab == Ordering::Equal, a == b);
            // Multiplicativity: a < b implies a*c < b*c.
            proptest::prop_assert_eq!(order.compare(&a.mul(&c), &b.mul(&c)), ab);
        }
    }
}
