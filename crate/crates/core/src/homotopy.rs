//! The symmetric homotopies `h_n` of a contraction:
//! `h_n = (1/n!) Σ_{σ∈S_n} Σ_{k=1}^n (id^{⊗(k-1)} ⊗ h ⊗ π^{⊗(n-k)})^σ`,
//! where the superscript denotes conjugation by the permutation operator.
//!
//! Values are memoized per (contraction, n) behind an internally synchronized
//! cache; exact rationals make the 1/n! average well defined.

use std::sync::Arc;

use crate::complex::Contraction;
use crate::error::{Error, Result};
use crate::gmap::GradedMap;
use crate::perm::Permutation;
use crate::rational::{int, Rational};

/// Materializes `h_n` on the big complex of `c`.
pub fn symmetric_homotopy(c: &Contraction, n: usize) -> Result<Arc<GradedMap>> {
    if n == 0 {
        return Err(Error::argument("symmetric homotopy needs n ≥ 1"));
    }
    if let Some(hit) = c.homotopy_cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let space = c.big().space().clone();
    let id_n = GradedMap::identity(&space, n);
    let value = apply_symmetric_homotopy(c, &id_n)?;
    let arc = Arc::new(value);
    c.homotopy_cache().lock().unwrap().insert(n, arc.clone());
    Ok(arc)
}

/// Computes `h_w ∘ acc` term by term, where `w = acc.out_arity()`, without
/// materializing `h_w`.
pub fn apply_symmetric_homotopy(c: &Contraction, acc: &GradedMap) -> Result<GradedMap> {
    let n = acc.out_arity();
    if n == 0 {
        return Err(Error::argument("symmetric homotopy needs width ≥ 1"));
    }
    let space = c.big().space().clone();
    if acc.target() != &space {
        return Err(Error::space("apply_symmetric_homotopy: acc must land in the big complex"));
    }
    let id = GradedMap::identity(&space, 1);
    let h = c.homotopy();
    let pi = c.pi()?;
    let mut total = GradedMap::zero(
        acc.source().clone(),
        space.clone(),
        acc.in_arity(),
        n,
        acc.degree() + 1,
    );
    let mut factorial = Rational::from_integer(1.into());
    for m in 1..=n {
        factorial *= int(m as i64);
    }
    let scale = factorial.recip();
    for sigma in Permutation::all(n) {
        let sigma_inv = sigma.inverse();
        let permuted = acc.permute_outputs(&sigma)?;
        for k in 1..=n {
            let mut factors: Vec<&GradedMap> = Vec::with_capacity(n);
            for _ in 0..k - 1 {
                factors.push(&id);
            }
            factors.push(h);
            for _ in k..n {
                factors.push(&pi);
            }
            let term = permuted
                .post_apply_elementary(&factors)?
                .permute_outputs(&sigma_inv)?;
            total = total.add(&term)?;
        }
    }
    Ok(total.scale(&scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{homology_contraction, ChainComplex};
    use crate::grading::{BasisIndex, GradedSpace};
    use crate::rational::one;

    fn small_contraction() -> Contraction {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(
            vec![BasisIndex::new(1, 0)],
            vec![BasisIndex::new(0, 0)],
            one(),
        )
        .unwrap();
        let a = ChainComplex::new(v, d).unwrap();
        homology_contraction(&a).unwrap()
    }

    #[test]
    fn h1_is_h() {
        let c = small_contraction();
        assert_eq!(*symmetric_homotopy(&c, 1).unwrap(), *c.homotopy());
    }

    #[test]
    fn homotopy_identity_on_tensor_powers() {
        // d h_n + h_n d = π^{⊗n} − id^{⊗n}, expanded here for n ≤ 3.
        let c = small_contraction();
        for n in 1..=3usize {
            let hn = symmetric_homotopy(&c, n).unwrap();
            let dn = c.big().tensor_differential(n).unwrap();
            let lhs = dn.compose(&hn).unwrap().add(&hn.compose(&dn).unwrap()).unwrap();
            let pi_n = c.pi().unwrap().tensor_power(n).unwrap();
            let id_n = GradedMap::identity(c.big().space(), n);
            let rhs = pi_n.sub(&id_n).unwrap();
            assert_eq!(lhs, rhs, "failed at n={n}");
        }
    }

    #[test]
    fn equivariance() {
        let c = small_contraction();
        let h2 = symmetric_homotopy(&c, 2).unwrap();
        let t = Permutation::transposition(2, 0, 1);
        let conj = h2.permute_inputs(&t).unwrap().permute_outputs(&t.inverse()).unwrap();
        assert_eq!(conj, *h2);
    }

    #[test]
    fn zero_homotopy_gives_zero() {
        let v = GradedSpace::from_dims([(0, 2)]);
        let a = ChainComplex::zero_differential(v);
        let c = Contraction::identity(&a);
        for n in 1..=3 {
            assert!(symmetric_homotopy(&c, n).unwrap().is_zero());
        }
    }
}
