//! Degree-homogeneous linear maps between tensor powers of graded spaces,
//! stored sparsely on basis multi-indices.
//!
//! Sign conventions, fixed once for the whole engine:
//!   - the permutation operator acts by
//!     `P_σ(x_1⊗…⊗x_n) = koszul_sign(σ, |x|) · x_{σ⁻¹(1)}⊗…⊗x_{σ⁻¹(n)}`
//!     (the element at slot i moves to slot σ(i));
//!   - `permute_inputs(f, σ) = f ∘ P_σ` (right action) and
//!     `permute_outputs(f, τ) = P_τ ∘ f` (left action);
//!   - `(f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)⊗g(y)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grading::{multi_degree, BasisIndex, GradedSpace, MultiIndex};
use crate::perm::{koszul_sign, Permutation};
use crate::rational::{neg_one_pow, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    in_arity: usize,
    out_arity: usize,
    degree: i64,
    entries: BTreeMap<(MultiIndex, MultiIndex), Rational>,
}

impl GradedMap {
    pub fn zero(
        source: GradedSpace,
        target: GradedSpace,
        in_arity: usize,
        out_arity: usize,
        degree: i64,
    ) -> Self {
        GradedMap {
            source,
            target,
            in_arity,
            out_arity,
            degree,
            entries: BTreeMap::new(),
        }
    }

    /// The identity on the n-th tensor power of `space`.
    pub fn identity(space: &GradedSpace, n: usize) -> Self {
        let mut m = GradedMap::zero(space.clone(), space.clone(), n, n, 0);
        for idx in space.tensor_basis(n) {
            m.entries
                .insert((idx.clone(), idx), Rational::from_integer(1.into()));
        }
        m
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }
    pub fn target(&self) -> &GradedSpace {
        &self.target
    }
    pub fn in_arity(&self) -> usize {
        self.in_arity
    }
    pub fn out_arity(&self) -> usize {
        self.out_arity
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &Rational)> {
        self.entries.iter().map(|((i, o), c)| (i, o, c))
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `coeff` to the entry at `(input, output)`, validating degrees and
    /// index ranges; zero results are dropped.
    pub fn add_entry(&mut self, input: MultiIndex, output: MultiIndex, coeff: Rational) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        if input.len() != self.in_arity || output.len() != self.out_arity {
            return Err(Error::arity(format!(
                "entry arity ({},{}) does not match map arity ({},{})",
                input.len(),
                output.len(),
                self.in_arity,
                self.out_arity
            )));
        }
        self.source.check_multi_index(&input)?;
        self.target.check_multi_index(&output)?;
        if multi_degree(&output) - multi_degree(&input) != self.degree {
            return Err(Error::degree(format!(
                "entry degree {} != map degree {}",
                multi_degree(&output) - multi_degree(&input),
                self.degree
            )));
        }
        let key = (input, output);
        let v = self.entries.entry(key.clone()).or_insert_with(Rational::zero);
        *v += coeff;
        if v.is_zero() {
            self.entries.remove(&key);
        }
        Ok(())
    }

    pub fn coeff(&self, input: &MultiIndex, output: &MultiIndex) -> Rational {
        self.entries
            .get(&(input.clone(), output.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn single(
        source: GradedSpace,
        target: GradedSpace,
        input: MultiIndex,
        output: MultiIndex,
        coeff: Rational,
    ) -> Result<Self> {
        let degree = multi_degree(&output) - multi_degree(&input);
        let mut m = GradedMap::zero(source, target, input.len(), output.len(), degree);
        m.add_entry(input, output, coeff)?;
        Ok(m)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedMap::zero(
                self.source.clone(),
                self.target.clone(),
                self.in_arity,
                self.out_arity,
                self.degree,
            );
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn negate(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn add(&self, other: &GradedMap) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for ((i, o), c) in &other.entries {
            out.add_entry(i.clone(), o.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<Self> {
        self.add(&other.negate())
    }

    fn compatible(&self, other: &GradedMap) -> Result<()> {
        if self.in_arity != other.in_arity || self.out_arity != other.out_arity {
            return Err(Error::arity("add: arity mismatch"));
        }
        if self.source != other.source || self.target != other.target {
            return Err(Error::space("add: space mismatch"));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::degree(format!(
                "add: degree {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<Self> {
        if other.out_arity != self.in_arity {
            return Err(Error::arity(format!(
                "compose: inner arity {} != outer arity {}",
                other.out_arity, self.in_arity
            )));
        }
        if other.target != self.source {
            return Err(Error::space("compose: target of inner != source of outer"));
        }
        let mut out = GradedMap::zero(
            other.source.clone(),
            self.target.clone(),
            other.in_arity,
            self.out_arity,
            self.degree + other.degree,
        );
        // Hash-join on the middle multi-index.
        let mut by_input: BTreeMap<&MultiIndex, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
        for ((i, o), c) in &self.entries {
            by_input.entry(i).or_default().push((o, c));
        }
        for ((i, mid), c1) in &other.entries {
            if let Some(rows) = by_input.get(mid) {
                for (o, c2) in rows {
                    out.add_entry(i.clone(), (*o).clone(), c1 * *c2)?;
                }
            }
        }
        Ok(out)
    }

    /// `self ⊗ other`, with the sign `(-1)^{|other|·deg(x_self)}` on entries.
    pub fn tensor(&self, other: &GradedMap) -> Result<Self> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::space("tensor: factors must share source and target spaces"));
        }
        let mut out = GradedMap::zero(
            self.source.clone(),
            self.target.clone(),
            self.in_arity + other.in_arity,
            self.out_arity + other.out_arity,
            self.degree + other.degree,
        );
        for ((i1, o1), c1) in &self.entries {
            let sign = neg_one_pow(other.degree * multi_degree(i1));
            for ((i2, o2), c2) in &other.entries {
                let mut i = i1.clone();
                i.extend_from_slice(i2);
                let mut o = o1.clone();
                o.extend_from_slice(o2);
                out.add_entry(i, o, c1 * c2 * &sign)?;
            }
        }
        Ok(out)
    }

    /// n-fold tensor power; n = 0 yields the empty-word identity.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        let mut out = GradedMap::identity(&self.source, 0);
        // identity(source, 0) has target = source; fix target for arity 0.
        out.target = self.target.clone();
        for _ in 0..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// `self ∘ P_σ`: a right action on inputs.
    pub fn permute_inputs(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.size() != self.in_arity {
            return Err(Error::arity(format!(
                "permute_inputs: permutation size {} != in arity {}",
                sigma.size(),
                self.in_arity
            )));
        }
        let sigma_inv = sigma.inverse();
        let mut out = GradedMap::zero(
            self.source.clone(),
            self.target.clone(),
            self.in_arity,
            self.out_arity,
            self.degree,
        );
        for ((u, y), c) in &self.entries {
            // x with P_σ(x) = ±u, i.e. x = slot i of u placed at σ⁻¹-arrangement.
            let x = sigma_inv.permute_slice(u);
            let degs: Vec<i64> = x.iter().map(|b| b.degree).collect();
            let sign = koszul_sign(sigma, &degs)?;
            out.add_entry(x, y.clone(), c * &sign)?;
        }
        Ok(out)
    }

    /// `P_τ ∘ self`: a left action on outputs.
    pub fn permute_outputs(&self, tau: &Permutation) -> Result<Self> {
        if tau.size() != self.out_arity {
            return Err(Error::arity(format!(
                "permute_outputs: permutation size {} != out arity {}",
                tau.size(),
                self.out_arity
            )));
        }
        let mut out = GradedMap::zero(
            self.source.clone(),
            self.target.clone(),
            self.in_arity,
            self.out_arity,
            self.degree,
        );
        for ((x, y), c) in &self.entries {
            let degs: Vec<i64> = y.iter().map(|b| b.degree).collect();
            let sign = koszul_sign(tau, &degs)?;
            out.add_entry(x.clone(), tau.permute_slice(y), c * &sign)?;
        }
        Ok(out)
    }

    /// `(id^{⊗pos} ⊗ op ⊗ id^{⊗rest}) ∘ self`, without materializing the
    /// identity factors. `op` consumes output slots `pos .. pos+op.in_arity`.
    pub fn post_apply_at(&self, pos: usize, op: &GradedMap) -> Result<Self> {
        if pos + op.in_arity > self.out_arity {
            return Err(Error::arity("post_apply_at: block out of range"));
        }
        if op.source != self.target {
            return Err(Error::space("post_apply_at: op source != map target"));
        }
        let new_out_arity = self.out_arity - op.in_arity + op.out_arity;
        let mut out = GradedMap::zero(
            self.source.clone(),
            op.target.clone(),
            self.in_arity,
            new_out_arity,
            self.degree + op.degree,
        );
        let mut by_input: BTreeMap<&MultiIndex, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
        for ((i, o), c) in &op.entries {
            by_input.entry(i).or_default().push((o, c));
        }
        for ((x, y), c) in &self.entries {
            let prefix = &y[..pos];
            let mid: MultiIndex = y[pos..pos + op.in_arity].to_vec();
            let suffix = &y[pos + op.in_arity..];
            let Some(rows) = by_input.get(&mid) else { continue };
            let sign = neg_one_pow(op.degree * multi_degree(prefix));
            for (z, c2) in rows {
                let mut new_y: MultiIndex = Vec::with_capacity(new_out_arity);
                new_y.extend_from_slice(prefix);
                new_y.extend_from_slice(z);
                new_y.extend_from_slice(suffix);
                out.add_entry(x.clone(), new_y, c * *c2 * &sign)?;
            }
        }
        Ok(out)
    }

    /// `(t_1 ⊗ … ⊗ t_w) ∘ self` for arity-(1,1) factors `t_j`, one per output
    /// slot. Signs follow the tensor convention on the original output degrees.
    pub fn post_apply_elementary(&self, factors: &[&GradedMap]) -> Result<Self> {
        if factors.len() != self.out_arity {
            return Err(Error::arity("post_apply_elementary: need one factor per slot"));
        }
        for t in factors {
            if t.in_arity != 1 || t.out_arity != 1 {
                return Err(Error::arity("post_apply_elementary: factors must be arity (1,1)"));
            }
        }
        let total_deg: i64 = factors.iter().map(|t| t.degree).sum();
        let target = factors
            .last()
            .map(|t| t.target.clone())
            .unwrap_or_else(|| self.target.clone());
        let mut out = GradedMap::zero(
            self.source.clone(),
            target,
            self.in_arity,
            self.out_arity,
            self.degree + total_deg,
        );
        // Per-factor column lookup.
        let mut cols: Vec<BTreeMap<BasisIndex, Vec<(BasisIndex, &Rational)>>> = Vec::new();
        for t in factors {
            let mut col: BTreeMap<BasisIndex, Vec<(BasisIndex, &Rational)>> = BTreeMap::new();
            for ((i, o), c) in &t.entries {
                col.entry(i[0]).or_default().push((o[0], c));
            }
            cols.push(col);
        }
        for ((x, y), c) in &self.entries {
            // Sign from sliding each t_j past y_1..y_{j-1}.
            let mut e = 0i64;
            let mut prefix_deg = 0i64;
            for (j, t) in factors.iter().enumerate() {
                e += t.degree * prefix_deg;
                prefix_deg += y[j].degree;
            }
            let base_sign = neg_one_pow(e);
            // Expand the product over slots.
            let mut partial: Vec<(MultiIndex, Rational)> = vec![(Vec::new(), c * &base_sign)];
            for (j, _) in factors.iter().enumerate() {
                let Some(rows) = cols[j].get(&y[j]) else {
                    partial.clear();
                    break;
                };
                let mut next = Vec::with_capacity(partial.len() * rows.len());
                for (zs, pc) in &partial {
                    for (z, tc) in rows {
                        let mut zs2 = zs.clone();
                        zs2.push(*z);
                        next.push((zs2, pc * *tc));
                    }
                }
                partial = next;
            }
            for (z, pc) in partial {
                out.add_entry(x.clone(), z, pc)?;
            }
        }
        Ok(out)
    }

    /// Checks every stored entry against the degree-homogeneity invariant.
    pub fn validate(&self) -> Result<()> {
        for ((i, o), c) in &self.entries {
            if c.is_zero() {
                return Err(Error::validation("explicit zero entry"));
            }
            if i.len() != self.in_arity || o.len() != self.out_arity {
                return Err(Error::validation("entry arity mismatch"));
            }
            self.source.check_multi_index(i)?;
            self.target.check_multi_index(o)?;
            if multi_degree(o) - multi_degree(i) != self.degree {
                return Err(Error::validation("entry violates degree homogeneity"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one, rat};

    fn b(d: i64, i: usize) -> BasisIndex {
        BasisIndex::new(d, i)
    }

    fn one_dim_odd() -> GradedSpace {
        GradedSpace::from_dims([(1, 1)])
    }

    #[test]
    fn identity_compose_is_identity() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let id = GradedMap::identity(&v, 2);
        let mut f = GradedMap::zero(v.clone(), v.clone(), 2, 2, 0);
        f.add_entry(vec![b(0, 0), b(1, 0)], vec![b(1, 0), b(0, 1)], rat(3, 2))
            .unwrap();
        assert_eq!(id.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn swap_on_odd_line_negates() {
        // On a 1-dimensional degree-1 space, swapping two factors multiplies
        // each entry by -1.
        let v = one_dim_odd();
        let mut f = GradedMap::zero(v.clone(), v.clone(), 2, 1, 1);
        f.add_entry(vec![b(1, 0), b(1, 0)], vec![b(3, 0)], one())
            .unwrap_err(); // no degree-3 basis vector
        let w = GradedSpace::from_dims([(1, 1), (2, 1)]);
        let mut f = GradedMap::zero(w.clone(), w.clone(), 2, 1, 0);
        f.add_entry(vec![b(1, 0), b(1, 0)], vec![b(2, 0)], one())
            .unwrap();
        let t = Permutation::transposition(2, 0, 1);
        let g = f.permute_inputs(&t).unwrap();
        assert_eq!(g, f.negate());
        // Involution: applying the transposition twice restores f.
        assert_eq!(g.permute_inputs(&t).unwrap(), f);
    }

    #[test]
    fn tensor_sign_single_entry() {
        // f: x -> y of degree 0 entry 2; g of odd degree 1; input of f odd.
        let w = GradedSpace::from_dims([(1, 2), (2, 2)]);
        let f = GradedMap::single(
            w.clone(),
            w.clone(),
            vec![b(1, 0)],
            vec![b(1, 1)],
            int(2),
        )
        .unwrap();
        let g = GradedMap::single(
            w.clone(),
            w.clone(),
            vec![b(1, 0)],
            vec![b(2, 0)],
            int(3),
        )
        .unwrap();
        let fg = f.tensor(&g).unwrap();
        // (f⊗g)(x⊗y) = (-1)^{|g||x|} f(x)⊗g(y); |g| = 1, |x| = 1.
        assert_eq!(
            fg.coeff(&vec![b(1, 0), b(1, 0)], &vec![b(1, 1), b(2, 0)]),
            int(-6)
        );
    }

    #[test]
    fn permute_actions_commute() {
        let w = GradedSpace::from_dims([(1, 1), (2, 1)]);
        let mut f = GradedMap::zero(w.clone(), w.clone(), 2, 2, 0);
        f.add_entry(vec![b(1, 0), b(2, 0)], vec![b(2, 0), b(1, 0)], rat(5, 3))
            .unwrap();
        let s = Permutation::transposition(2, 0, 1);
        let a = f.permute_inputs(&s).unwrap().permute_outputs(&s).unwrap();
        let bb = f.permute_outputs(&s).unwrap().permute_inputs(&s).unwrap();
        assert_eq!(a, bb);
    }

    #[test]
    fn post_apply_matches_tensor_compose() {
        let w = GradedSpace::from_dims([(0, 1), (1, 2)]);
        let mut acc = GradedMap::zero(w.clone(), w.clone(), 1, 3, 2);
        acc.add_entry(vec![b(1, 0)], vec![b(1, 1), b(1, 0), b(1, 1)], one())
            .unwrap();
        let op = GradedMap::single(w.clone(), w.clone(), vec![b(1, 0)], vec![b(0, 0)], int(2))
            .unwrap();
        let direct = acc.post_apply_at(1, &op).unwrap();
        let id1 = GradedMap::identity(&w, 1);
        let big = id1.tensor(&op).unwrap().tensor(&id1).unwrap();
        let via_tensor = big.compose(&acc).unwrap();
        assert_eq!(direct, via_tensor);

        let idw = GradedMap::identity(&w, 1);
        let elementary = acc
            .post_apply_elementary(&[&idw, &op, &idw])
            .unwrap();
        assert_eq!(elementary, via_tensor);
    }
}
