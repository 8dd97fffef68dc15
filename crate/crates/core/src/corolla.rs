//! Basis corollas `c_{k,l,g}` of the one-dimensional-per-slot suspension
//! coproperad, their pairwise composition `∘_r` with its explicit sign, and
//! the signature action on legs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::Rational;

/// `c_{k,l,g}`: k inputs, l outputs, genus g. Weight `k+l+2g-2` is also the
/// degree of the basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corolla {
    pub k: usize,
    pub l: usize,
    pub g: usize,
}

impl Corolla {
    pub fn new(k: usize, l: usize, g: usize) -> Result<Self> {
        if k < 1 || l < 1 {
            return Err(Error::argument(format!(
                "corolla needs k, l ≥ 1, got ({k},{l},{g})"
            )));
        }
        Ok(Corolla { k, l, g })
    }

    pub const IDENTITY: Corolla = Corolla { k: 1, l: 1, g: 0 };

    pub fn weight(&self) -> i64 {
        self.k as i64 + self.l as i64 + 2 * self.g as i64 - 2
    }

    /// Degree in the suspension coproperad: equal to the weight.
    pub fn degree(&self) -> i64 {
        self.weight()
    }

    pub fn is_identity(&self) -> bool {
        *self == Corolla::IDENTITY
    }

    /// All corollas of exactly this weight, ordered (k, l, g) lexicographically.
    pub fn all_of_weight(w: i64) -> Vec<Corolla> {
        let mut out = Vec::new();
        if w < 0 {
            return out;
        }
        let mut g = 0usize;
        loop {
            let kl = w + 2 - 2 * g as i64;
            if kl < 2 {
                break;
            }
            for k in 1..kl as usize {
                let l = kl as usize - k;
                out.push(Corolla { k, l, g });
            }
            g += 1;
        }
        out.sort();
        out
    }

    /// All corollas with `1 ≤ weight ≤ max_weight`.
    pub fn all_up_to_weight(max_weight: i64) -> Vec<Corolla> {
        let mut out = Vec::new();
        for w in 1..=max_weight {
            out.extend(Corolla::all_of_weight(w));
        }
        out
    }
}

/// The `∘_r` composite: the last `r` outputs of `top` are grafted onto the
/// first `r` inputs of `bottom`, order-preservingly. Returns the sign
/// `(-1)^{(r-1)(r-2)/2 + (k'-r)(k''-r) + (l'-r)(l''-r) + (k'-r)(l''-r)}`
/// and the resulting corolla `(k'+k''-r, l'+l''-r, g'+g''+r-1)`, whose ports
/// are ordered bottom-free-then-top on inputs and bottom-then-top-free on
/// outputs.
pub fn compose_r(bottom: Corolla, top: Corolla, r: usize) -> Result<(i64, Corolla)> {
    if r < 1 || r > bottom.k.min(top.l) {
        return Err(Error::argument(format!(
            "compose_r: r = {r} out of range for bottom k' = {} and top l'' = {}",
            bottom.k, top.l
        )));
    }
    let kp = bottom.k as i64;
    let lp = bottom.l as i64;
    let kpp = top.k as i64;
    let lpp = top.l as i64;
    let ri = r as i64;
    let e = (ri - 1) * (ri - 2) / 2
        + (kp - ri) * (kpp - ri)
        + (lp - ri) * (lpp - ri)
        + (kp - ri) * (lpp - ri);
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    let result = Corolla {
        k: bottom.k + top.k - r,
        l: bottom.l + top.l - r,
        g: bottom.g + top.g + r - 1,
    };
    Ok((sign, result))
}

/// A scalar multiple of a basis corolla; the (k, l, g) component is
/// one-dimensional and leg permutations act by `sgn ⊗ sgn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspensionElement {
    pub coeff: Rational,
    pub corolla: Corolla,
}

impl SuspensionElement {
    pub fn new(coeff: Rational, corolla: Corolla) -> Self {
        SuspensionElement { coeff, corolla }
    }

    /// Acts by input and output permutations; the coefficient picks up
    /// `sgn(σ_in)·sgn(τ_out)`.
    pub fn act(&self, sigma_in: &Permutation, tau_out: &Permutation) -> Result<SuspensionElement> {
        if sigma_in.size() != self.corolla.k || tau_out.size() != self.corolla.l {
            return Err(Error::arity(format!(
                "act: permutation sizes ({}, {}) do not match corolla ({}, {})",
                sigma_in.size(),
                tau_out.size(),
                self.corolla.k,
                self.corolla.l
            )));
        }
        let s = sigma_in.sign() * tau_out.sign();
        Ok(SuspensionElement {
            coeff: &self.coeff * Rational::from_integer(s.into()),
            corolla: self.corolla,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;

    #[test]
    fn weight_and_identity() {
        assert_eq!(Corolla::IDENTITY.weight(), 0);
        assert_eq!(Corolla::new(2, 1, 0).unwrap().weight(), 1);
        assert_eq!(Corolla::new(1, 1, 1).unwrap().weight(), 2);
        assert!(Corolla::new(0, 1, 0).is_err());
    }

    #[test]
    fn compose_r_paper_values() {
        let b = Corolla::new(2, 1, 0).unwrap();
        let t = Corolla::new(1, 2, 0).unwrap();
        assert_eq!(compose_r(b, t, 1).unwrap(), (-1, Corolla::new(2, 2, 0).unwrap()));
        assert_eq!(compose_r(b, t, 2).unwrap(), (1, Corolla::new(1, 1, 1).unwrap()));
        assert!(compose_r(b, t, 3).is_err());
    }

    #[test]
    fn unit_axiom() {
        for top in [Corolla::new(3, 2, 1).unwrap(), Corolla::new(1, 4, 0).unwrap()] {
            assert_eq!(compose_r(Corolla::IDENTITY, top, 1).unwrap(), (1, top));
        }
        let bottom = Corolla::new(3, 2, 1).unwrap();
        assert_eq!(compose_r(bottom, Corolla::IDENTITY, 1).unwrap(), (1, bottom));
    }

    #[test]
    fn weight_additivity_and_genus_bookkeeping() {
        for bk in 1..4usize {
            for bl in 1..4usize {
                for tk in 1..4usize {
                    for tl in 1..4usize {
                        let b = Corolla::new(bk, bl, 1).unwrap();
                        let t = Corolla::new(tk, tl, 0).unwrap();
                        for r in 1..=bk.min(tl) {
                            let (_, c) = compose_r(b, t, r).unwrap();
                            assert_eq!(c.weight(), b.weight() + t.weight());
                            assert_eq!(c.g, b.g + t.g + r - 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn signature_action() {
        let e = SuspensionElement::new(one(), Corolla::new(2, 2, 0).unwrap());
        let id2 = Permutation::identity(2);
        let sw = Permutation::transposition(2, 0, 1);
        assert_eq!(e.act(&id2, &id2).unwrap(), e);
        assert_eq!(e.act(&sw, &id2).unwrap().coeff, -one());
        let back = e.act(&sw, &id2).unwrap().act(&sw.inverse(), &id2).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn corolla_enumeration() {
        assert_eq!(Corolla::all_of_weight(0), vec![Corolla::IDENTITY]);
        let w1 = Corolla::all_of_weight(1);
        assert_eq!(w1.len(), 2); // (1,2,0), (2,1,0)
        let w2 = Corolla::all_of_weight(2);
        assert_eq!(w2.len(), 4); // (1,1,1), (1,3,0), (2,2,0), (3,1,0)
    }
}
