//! Chain complexes, contractions with all five side conditions, and a
//! deterministic homology-retract builder.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gmap::GradedMap;
use crate::grading::{BasisIndex, GradedSpace};
use crate::rational::Rational;
use crate::solve::{rref, SparseVec};

/// A chain complex `(A, d)` with `d` of arity (1,1), degree -1, `d∘d = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    space: GradedSpace,
    d: GradedMap,
}

impl ChainComplex {
    pub fn new(space: GradedSpace, d: GradedMap) -> Result<Self> {
        if d.in_arity() != 1 || d.out_arity() != 1 {
            return Err(Error::arity("differential must have arity (1,1)"));
        }
        if d.degree() != -1 {
            return Err(Error::degree(format!(
                "differential must have degree -1, got {}",
                d.degree()
            )));
        }
        if *d.source() != space || *d.target() != space {
            return Err(Error::space("differential must be an endomorphism of the complex space"));
        }
        d.validate()?;
        if !d.compose(&d)?.is_zero() {
            return Err(Error::validation("d∘d ≠ 0"));
        }
        Ok(ChainComplex { space, d })
    }

    pub fn zero_differential(space: GradedSpace) -> Self {
        let d = GradedMap::zero(space.clone(), space.clone(), 1, 1, -1);
        ChainComplex { space, d }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    /// The induced differential on the n-th tensor power,
    /// `Σ_j id^{⊗(j-1)} ⊗ d ⊗ id^{⊗(n-j)}`.
    pub fn tensor_differential(&self, n: usize) -> Result<GradedMap> {
        let mut out = GradedMap::zero(self.space.clone(), self.space.clone(), n, n, -1);
        let id = GradedMap::identity(&self.space, 1);
        if n == 0 {
            return Ok(out);
        }
        let id_n = GradedMap::identity(&self.space, n);
        for j in 0..n {
            let mut factors: Vec<&GradedMap> = vec![&id; n];
            factors[j] = &self.d;
            out = out.add(&id_n.post_apply_elementary(&factors)?)?;
        }
        Ok(out)
    }

    /// `∂(f) = d_{tgt} ∘ f - (-1)^{|f|} f ∘ d_{src}` for maps between tensor
    /// powers of this complex and `target`.
    pub fn hom_differential(src: &ChainComplex, tgt: &ChainComplex, f: &GradedMap) -> Result<GradedMap> {
        let left = tgt.tensor_differential(f.out_arity())?.compose(f)?;
        let right = f.compose(&src.tensor_differential(f.in_arity())?)?;
        let sign = crate::rational::neg_one_pow(f.degree());
        left.sub(&right.scale(&sign))
    }
}

/// A contraction `(A, H, i, p, h)` satisfying
/// `pi = id_H`, `ip - id_A = d_A h + h d_A`, `hi = 0`, `ph = 0`, `h² = 0`,
/// with `i`, `p` chain maps.
#[derive(Debug, Clone)]
pub struct Contraction {
    big: ChainComplex,
    small: ChainComplex,
    i: GradedMap,
    p: GradedMap,
    h: GradedMap,
    homotopy_cache: Arc<Mutex<BTreeMap<usize, Arc<GradedMap>>>>,
}

impl PartialEq for Contraction {
    fn eq(&self, other: &Self) -> bool {
        self.big == other.big
            && self.small == other.small
            && self.i == other.i
            && self.p == other.p
            && self.h == other.h
    }
}

impl Contraction {
    /// Builds a contraction, rejecting any violated side condition.
    pub fn new(
        big: ChainComplex,
        small: ChainComplex,
        i: GradedMap,
        p: GradedMap,
        h: GradedMap,
    ) -> Result<Self> {
        let c = Contraction {
            big,
            small,
            i,
            p,
            h,
            homotopy_cache: Arc::new(Mutex::new(BTreeMap::new())),
        };
        let violations = c.validate()?;
        if !violations.is_empty() {
            return Err(Error::validation(violations.join("; ")));
        }
        Ok(c)
    }

    /// Builds without checking the side conditions (for validators and tests).
    pub fn new_unchecked(
        big: ChainComplex,
        small: ChainComplex,
        i: GradedMap,
        p: GradedMap,
        h: GradedMap,
    ) -> Self {
        Contraction {
            big,
            small,
            i,
            p,
            h,
            homotopy_cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn identity(complex: &ChainComplex) -> Self {
        let i = GradedMap::identity(complex.space(), 1);
        let h = GradedMap::zero(complex.space().clone(), complex.space().clone(), 1, 1, 1);
        Contraction {
            big: complex.clone(),
            small: complex.clone(),
            i: i.clone(),
            p: i,
            h,
            homotopy_cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn big(&self) -> &ChainComplex {
        &self.big
    }
    pub fn small(&self) -> &ChainComplex {
        &self.small
    }
    pub fn inclusion(&self) -> &GradedMap {
        &self.i
    }
    pub fn projection(&self) -> &GradedMap {
        &self.p
    }
    pub fn homotopy(&self) -> &GradedMap {
        &self.h
    }

    /// `π = i∘p`.
    pub fn pi(&self) -> Result<GradedMap> {
        self.i.compose(&self.p)
    }

    pub(crate) fn homotopy_cache(&self) -> &Arc<Mutex<BTreeMap<usize, Arc<GradedMap>>>> {
        &self.homotopy_cache
    }

    /// Names of violated conditions; empty iff all hold exactly.
    pub fn validate(&self) -> Result<Vec<String>> {
        let a = self.big.space();
        let hh = self.small.space();
        if self.i.source() != hh
            || self.i.target() != a
            || self.p.source() != a
            || self.p.target() != hh
            || self.h.source() != a
            || self.h.target() != a
        {
            return Err(Error::space("contraction maps have inconsistent spaces"));
        }
        if self.i.in_arity() != 1
            || self.i.out_arity() != 1
            || self.p.in_arity() != 1
            || self.p.out_arity() != 1
            || self.h.in_arity() != 1
            || self.h.out_arity() != 1
        {
            return Err(Error::arity("contraction maps must have arity (1,1)"));
        }
        if self.i.degree() != 0 || self.p.degree() != 0 || self.h.degree() != 1 {
            return Err(Error::degree("contraction maps must have degrees (0, 0, +1)"));
        }
        let mut bad = Vec::new();
        let id_h = GradedMap::identity(hh, 1);
        let id_a = GradedMap::identity(a, 1);
        if self.p.compose(&self.i)? != id_h {
            bad.push("p∘i ≠ id_H".to_string());
        }
        let da = self.big.d();
        let dh = self.small.d();
        let lhs = self.i.compose(&self.p)?.sub(&id_a)?;
        let rhs = da.compose(&self.h)?.add(&self.h.compose(da)?)?;
        if lhs != rhs {
            bad.push("homotopy identity i∘p − id ≠ d∘h + h∘d".to_string());
        }
        if !self.h.compose(&self.i)?.is_zero() {
            bad.push("h∘i ≠ 0".to_string());
        }
        if !self.p.compose(&self.h)?.is_zero() {
            bad.push("p∘h ≠ 0".to_string());
        }
        if !self.h.compose(&self.h)?.is_zero() {
            bad.push("h∘h ≠ 0".to_string());
        }
        if da.compose(&self.i)? != self.i.compose(dh)? {
            bad.push("i is not a chain map".to_string());
        }
        if dh.compose(&self.p)? != self.p.compose(da)? {
            bad.push("p is not a chain map".to_string());
        }
        Ok(bad)
    }
}

/// Returns the list of violated contraction conditions (empty iff valid).
pub fn validate_contraction(c: &Contraction) -> Result<Vec<String>> {
    c.validate()
}

struct DegreeSplit {
    // Per degree: echelonized spanning rows of the boundary space B_n,
    // harmonic basis H_n, and the pivot columns forming the complement C_n.
    boundaries: Vec<Vec<Rational>>,
    harmonics: Vec<Vec<Rational>>,
    complement_cols: Vec<usize>,
}

fn dense_from_sparse(row: &SparseVec, n: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for (c, x) in row {
        v[*c] = x.clone();
    }
    v
}

fn sparse_from_dense(row: &[Rational]) -> SparseVec {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
        .collect()
}

/// Builds a contraction of `a` onto its homology (zero differential), with
/// the fixed pivoting rule: degrees ascending, pivots by lexicographic basis
/// index, complements chosen as coordinate subspaces.
pub fn homology_contraction(a: &ChainComplex) -> Result<Contraction> {
    let space = a.space();
    let degrees: Vec<i64> = space.degrees().collect();
    // d-matrix per source degree n: rows indexed by target basis (n-1),
    // columns by source basis (n).
    let mat = |n: i64| -> Vec<SparseVec> {
        let rows_n = space.dim(n - 1);
        let mut rows: Vec<SparseVec> = vec![SparseVec::new(); rows_n];
        for (i, o, c) in a.d().entries() {
            if i[0].degree == n {
                rows[o[0].index].insert(i[0].index, c.clone());
            }
        }
        rows
    };

    let mut split: BTreeMap<i64, DegreeSplit> = BTreeMap::new();
    for &n in &degrees {
        let dim_n = space.dim(n);
        // Kernel of d_n and pivot columns of its matrix.
        let mut rows = mat(n);
        let pivots = rref(&mut rows, dim_n);
        let complement_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let kernel = crate::solve::kernel_rows(&mat(n), dim_n);
        // Boundary space: echelonize the images d(e) for e in degree n+1.
        let mut brows: Vec<SparseVec> = Vec::new();
        let dim_up = space.dim(n + 1);
        for j in 0..dim_up {
            let mut img = SparseVec::new();
            for (i, o, c) in a.d().entries() {
                if i[0].degree == n + 1 && i[0].index == j {
                    img.insert(o[0].index, c.clone());
                }
            }
            if !img.is_empty() {
                brows.push(img);
            }
        }
        let _ = rref(&mut brows, dim_n);
        let boundaries: Vec<Vec<Rational>> = brows.iter().map(|r| dense_from_sparse(r, dim_n)).collect();
        // Harmonics: reduce kernel vectors by boundary rows, then echelonize.
        let bpivots: Vec<usize> = brows
            .iter()
            .map(|r| *r.keys().next().expect("echelon row nonempty"))
            .collect();
        let mut hrows: Vec<SparseVec> = Vec::new();
        for kv in &kernel {
            let mut row = sparse_from_dense(kv);
            for (bi, brow) in brows.iter().enumerate() {
                let pc = bpivots[bi];
                if let Some(f) = row.get(&pc).cloned() {
                    for (c, v) in brow {
                        let e = row.entry(*c).or_insert_with(Rational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
            if !row.is_empty() {
                hrows.push(row);
            }
        }
        let _ = rref(&mut hrows, dim_n);
        let harmonics: Vec<Vec<Rational>> = hrows.iter().map(|r| dense_from_sparse(r, dim_n)).collect();
        if boundaries.len() + harmonics.len() + complement_cols.len() != dim_n {
            return Err(Error::internal("homology splitting dimensions do not add up"));
        }
        split.insert(
            n,
            DegreeSplit {
                boundaries,
                harmonics,
                complement_cols,
            },
        );
    }

    // The homology space.
    let h_space = GradedSpace::from_dims(
        split
            .iter()
            .map(|(&n, s)| (n, s.harmonics.len()))
            .filter(|&(_, d)| d > 0),
    );
    let small = ChainComplex::zero_differential(h_space.clone());

    // Per degree, express each coordinate basis vector of A_n in the
    // B ⊕ H ⊕ C basis by solving the square change-of-basis system.
    let mut imap = GradedMap::zero(h_space.clone(), space.clone(), 1, 1, 0);
    let mut pmap = GradedMap::zero(space.clone(), h_space.clone(), 1, 1, 0);
    let mut hmap = GradedMap::zero(space.clone(), space.clone(), 1, 1, 1);

    for (&n, s) in &split {
        let dim_n = space.dim(n);
        // i: harmonic representatives.
        for (j, hv) in s.harmonics.iter().enumerate() {
            for (idx, c) in hv.iter().enumerate() {
                if !c.is_zero() {
                    imap.add_entry(
                        vec![BasisIndex::new(n, j)],
                        vec![BasisIndex::new(n, idx)],
                        c.clone(),
                    )?;
                }
            }
        }
        // Change of basis: columns = [B | H | C], solve for each e_idx.
        let nb = s.boundaries.len();
        let nh = s.harmonics.len();
        let rows_cols: Vec<Vec<Rational>> = {
            let mut cols: Vec<Vec<Rational>> = Vec::new();
            cols.extend(s.boundaries.iter().cloned());
            cols.extend(s.harmonics.iter().cloned());
            for &cc in &s.complement_cols {
                let mut v = vec![Rational::zero(); dim_n];
                v[cc] = Rational::from_integer(1.into());
                cols.push(v);
            }
            cols
        };
        // Solve M x = e_idx where M has the above columns.
        let mut mrows: Vec<SparseVec> = vec![SparseVec::new(); dim_n];
        for (cidx, col) in rows_cols.iter().enumerate() {
            for (ridx, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    mrows[ridx].insert(cidx, v.clone());
                }
            }
        }
        // The inverse of d restricted to the complement in degree n+1,
        // mapping boundaries in degree n to chains in degree n+1.
        let up = split.get(&(n + 1));
        for idx in 0..dim_n {
            let mut b = SparseVec::new();
            b.insert(idx, Rational::from_integer(1.into()));
            let x = crate::solve::solve_rows(&mrows, rows_cols.len(), &b)
                .ok_or_else(|| Error::internal("change of basis must be invertible"))?;
            // p(e_idx) = harmonic coefficients.
            for j in 0..nh {
                if !x[nb + j].is_zero() {
                    pmap.add_entry(
                        vec![BasisIndex::new(n, idx)],
                        vec![BasisIndex::new(n, j)],
                        x[nb + j].clone(),
                    )?;
                }
            }
            // h(e_idx) = -(d|_C)^{-1}(boundary component).
            if nb > 0 {
                if let Some(up) = up {
                    // boundary component as a dense vector in A_n
                    let mut bvec = vec![Rational::zero(); dim_n];
                    for (bi, brow) in s.boundaries.iter().enumerate() {
                        if x[bi].is_zero() {
                            continue;
                        }
                        for (c, v) in brow.iter().enumerate() {
                            bvec[c] += &x[bi] * v;
                        }
                    }
                    // Solve d(c) = bvec with c supported on complement columns
                    // of degree n+1.
                    let dim_up_total = space.dim(n + 1);
                    let mut drows: Vec<SparseVec> = vec![SparseVec::new(); dim_n];
                    for (i, o, c) in a.d().entries() {
                        if i[0].degree == n + 1 {
                            // restrict to complement columns
                            if let Some(pos) = up.complement_cols.iter().position(|&cc| cc == i[0].index) {
                                drows[o[0].index].insert(pos, c.clone());
                            }
                        }
                    }
                    let btarget = sparse_from_dense(&bvec);
                    let sol = crate::solve::solve_rows(&drows, up.complement_cols.len(), &btarget)
                        .ok_or_else(|| Error::internal("boundary must lift through the complement"))?;
                    let _ = dim_up_total;
                    for (pos, v) in sol.iter().enumerate() {
                        if !v.is_zero() {
                            hmap.add_entry(
                                vec![BasisIndex::new(n, idx)],
                                vec![BasisIndex::new(n + 1, up.complement_cols[pos])],
                                -v.clone(),
                            )?;
                        }
                    }
                }
            }
        }
    }

    let contraction = Contraction::new(a.clone(), small, imap, pmap, hmap)?;
    Ok(contraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one};

    fn b(d: i64, i: usize) -> BasisIndex {
        BasisIndex::new(d, i)
    }

    #[test]
    fn identity_contraction_is_valid() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let a = ChainComplex::zero_differential(v);
        let c = Contraction::identity(&a);
        assert!(c.validate().unwrap().is_empty());
    }

    #[test]
    fn zero_differential_retracts_identically() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let a = ChainComplex::zero_differential(v.clone());
        let c = homology_contraction(&a).unwrap();
        assert_eq!(c.small().space(), &v);
        assert!(c.homotopy().is_zero());
        assert_eq!(c.inclusion(), &GradedMap::identity(&v, 1));
        assert!(c.validate().unwrap().is_empty());
    }

    #[test]
    fn two_dim_acyclic_cone() {
        // d(e1) = e0 with degrees 1, 0: H = 0, h(e0) = -(-e1)? normalization:
        // h = -(d|C)^{-1} so h(e0) = -e1 ... checked via the side conditions.
        let v = GradedSpace::from_dims([(0, 1), (1, 1)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(vec![b(1, 0)], vec![b(0, 0)], one()).unwrap();
        let a = ChainComplex::new(v.clone(), d).unwrap();
        let c = homology_contraction(&a).unwrap();
        assert!(c.small().space().is_zero());
        assert!(c.validate().unwrap().is_empty());
        assert_eq!(c.homotopy().coeff(&vec![b(0, 0)], &vec![b(1, 0)]), int(-1));
    }

    #[test]
    fn perturbed_homotopy_is_flagged() {
        let v = GradedSpace::from_dims([(0, 1), (1, 1)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(vec![b(1, 0)], vec![b(0, 0)], one()).unwrap();
        let a = ChainComplex::new(v.clone(), d).unwrap();
        let good = homology_contraction(&a).unwrap();
        let bad_h = good.homotopy().scale(&int(2));
        let bad = Contraction::new_unchecked(
            good.big().clone(),
            good.small().clone(),
            good.inclusion().clone(),
            good.projection().clone(),
            bad_h,
        );
        let violations = bad.validate().unwrap();
        assert!(violations.iter().any(|v| v.contains("homotopy identity")));
    }

    #[test]
    fn dd_nonzero_rejected() {
        let v = GradedSpace::from_dims([(0, 1), (1, 1), (2, 1)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(vec![b(1, 0)], vec![b(0, 0)], one()).unwrap();
        d.add_entry(vec![b(2, 0)], vec![b(1, 0)], one()).unwrap();
        assert!(ChainComplex::new(v, d).is_err());
    }
}
