//! Deterministic exact linear algebra over the rationals.
//!
//! Pivoting is fixed once and for all: columns are processed in basis order
//! (lowest degree first, then lexicographic index), the first usable row is
//! chosen as pivot, and free variables of a preimage are set to zero. This
//! makes every kernel basis and every preimage reproducible bit-for-bit.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gmap::GradedMap;
use crate::grading::{BasisIndex, MultiIndex};
use crate::rational::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// Row-reduces `rows` in place to reduced row echelon form, returning the
/// pivot list as `(row, col)` pairs.
pub fn rref(rows: &mut Vec<SparseVec>, ncols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next..rows.len()).find(|&r| rows[r].contains_key(&col)) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = {
            let p = &rows[next][&col];
            p.recip()
        };
        let prow: SparseVec = rows[next]
            .iter()
            .map(|(c, v)| (*c, v * &inv))
            .collect();
        rows[next] = prow.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next {
                continue;
            }
            if let Some(f) = row.get(&col).cloned() {
                for (c, v) in &prow {
                    let e = row.entry(*c).or_insert_with(Rational::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        row.remove(c);
                    }
                }
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    rows.retain(|r| !r.is_empty());
    pivots
}

/// Solves `A x = b` where `A` is given row-major; `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve_rows(rows: &[SparseVec], ncols: usize, b: &SparseVec) -> Option<Vec<Rational>> {
    let aug = ncols;
    let mut work: Vec<SparseVec> = rows.to_vec();
    for row in work.iter_mut() {
        row.retain(|c, _| *c < ncols);
    }
    for (r, row) in work.iter_mut().enumerate() {
        if let Some(v) = b.get(&r) {
            if !v.is_zero() {
                row.insert(aug, v.clone());
            }
        }
    }
    // Rows of b beyond rows.len() cannot occur: caller sizes rows to the
    // full row range.
    let pivots = rref(&mut work, ncols);
    // Inconsistency: a surviving row with only the augmented entry.
    for row in &work {
        if row.len() == 1 && row.contains_key(&aug) {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, c) in pivots {
        if let Some(v) = work[r].get(&aug) {
            x[c] = v.clone();
        }
    }
    Some(x)
}

/// A deterministic basis of the kernel of the row-major matrix `A`.
pub fn kernel_rows(rows: &[SparseVec], ncols: usize) -> Vec<Vec<Rational>> {
    let mut work: Vec<SparseVec> = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut out = Vec::new();
    for f in 0..ncols {
        if pivot_cols.contains(&f) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::from_integer(1.into());
        for &(r, c) in &pivots {
            if let Some(coef) = work[r].get(&f) {
                v[c] = -coef.clone();
            }
        }
        out.push(v);
    }
    out
}

fn basis_order(space: &crate::grading::GradedSpace) -> (Vec<BasisIndex>, BTreeMap<BasisIndex, usize>) {
    let basis = space.basis();
    let pos: BTreeMap<BasisIndex, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    (basis, pos)
}

fn check_vector(y: &GradedMap) -> Result<()> {
    if y.in_arity() != 0 || y.out_arity() != 1 {
        return Err(Error::arity("expected a vector encoded as an arity (0,1) map"));
    }
    Ok(())
}

/// Solves `d(x) = y` exactly for `d` of arity (1,1) and `y` a vector encoded
/// as an arity-(0,1) map. Returns `None` when no solution exists.
pub fn solve_preimage(d: &GradedMap, y: &GradedMap) -> Result<Option<GradedMap>> {
    if d.in_arity() != 1 || d.out_arity() != 1 {
        return Err(Error::arity("solve_preimage: d must have arity (1,1)"));
    }
    check_vector(y)?;
    if y.target() != d.target() {
        return Err(Error::space("solve_preimage: y must live in the target of d"));
    }
    let (src_basis, src_pos) = basis_order(d.source());
    let (tgt_basis, tgt_pos) = basis_order(d.target());
    let mut rows: Vec<SparseVec> = vec![SparseVec::new(); tgt_basis.len()];
    for (i, o, c) in d.entries() {
        rows[tgt_pos[&o[0]]].insert(src_pos[&i[0]], c.clone());
    }
    let mut b = SparseVec::new();
    for (_, o, c) in y.entries() {
        b.insert(tgt_pos[&o[0]], c.clone());
    }
    let Some(x) = solve_rows(&rows, src_basis.len(), &b) else {
        return Ok(None);
    };
    let mut sol = GradedMap::zero(
        d.source().clone(),
        d.source().clone(),
        0,
        1,
        y.degree() - d.degree(),
    );
    for (j, v) in x.into_iter().enumerate() {
        if !v.is_zero() {
            sol.add_entry(vec![], vec![src_basis[j]], v)?;
        }
    }
    Ok(Some(sol))
}

/// A deterministic basis of `ker d` for `d` of arity (1,1); each vector is an
/// arity-(0,1) map.
pub fn kernel_basis(d: &GradedMap) -> Result<Vec<GradedMap>> {
    if d.in_arity() != 1 || d.out_arity() != 1 {
        return Err(Error::arity("kernel_basis: d must have arity (1,1)"));
    }
    let (src_basis, src_pos) = basis_order(d.source());
    let (_, tgt_pos) = basis_order(d.target());
    let mut rows: Vec<SparseVec> = vec![SparseVec::new(); tgt_pos.len()];
    for (i, o, c) in d.entries() {
        rows[tgt_pos[&o[0]]].insert(src_pos[&i[0]], c.clone());
    }
    let mut out = Vec::new();
    for v in kernel_rows(&rows, src_basis.len()) {
        // Kernel vectors of a graded map are homogeneous because distinct
        // degrees never share a pivot column relation.
        let support: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
            .collect();
        if support.is_empty() {
            continue;
        }
        let deg = src_basis[support[0]].degree;
        let mut vec_map = GradedMap::zero(d.source().clone(), d.source().clone(), 0, 1, deg);
        for j in support {
            vec_map.add_entry(vec![], vec![src_basis[j]], v[j].clone())?;
        }
        out.push(vec_map);
    }
    Ok(out)
}

/// Applies an arity-(1,1) map to a vector given as coefficients on `basis`.
pub fn vector_to_map(
    space: &crate::grading::GradedSpace,
    coords: &[(BasisIndex, Rational)],
) -> Result<GradedMap> {
    if coords.is_empty() {
        return Err(Error::argument("vector_to_map: empty vector has no degree"));
    }
    let deg = coords[0].0.degree;
    let mut m = GradedMap::zero(space.clone(), space.clone(), 0, 1, deg);
    for (b, c) in coords {
        m.add_entry(vec![], vec![*b], c.clone())?;
    }
    Ok(m)
}

/// Multi-index pair ordering helper shared by serializers and tests.
pub fn entry_key(i: &MultiIndex, o: &MultiIndex) -> (MultiIndex, MultiIndex) {
    (i.clone(), o.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::GradedSpace;
    use crate::rational::{int, one};

    fn b(d: i64, i: usize) -> BasisIndex {
        BasisIndex::new(d, i)
    }

    #[test]
    fn zero_map_cases() {
        let v = GradedSpace::from_dims([(0, 2), (1, 2)]);
        let d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        let y0 = GradedMap::zero(v.clone(), v.clone(), 0, 1, 0);
        // d = 0, y = 0 -> solution 0.
        let sol = solve_preimage(&d, &y0).unwrap().unwrap();
        assert!(sol.is_zero());
        // d = 0, y != 0 -> no solution.
        let y = GradedMap::single(v.clone(), v.clone(), vec![], vec![b(0, 0)], one()).unwrap();
        assert!(solve_preimage(&d, &y).unwrap().is_none());
        // kernel of 0 is everything.
        assert_eq!(kernel_basis(&d).unwrap().len(), 4);
    }

    #[test]
    fn constructed_preimage_is_recovered() {
        // Random-ish 6x6 over two degrees with a known preimage.
        let v = GradedSpace::from_dims([(0, 3), (1, 3)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        let data = [
            (0usize, 0usize, 2i64),
            (0, 1, -1),
            (1, 1, 3),
            (2, 0, 5),
            (2, 2, 1),
        ];
        for (i, o, c) in data {
            d.add_entry(vec![b(1, i)], vec![b(0, o)], int(c)).unwrap();
        }
        let x = GradedMap::single(v.clone(), v.clone(), vec![], vec![b(1, 0)], int(7)).unwrap();
        let x2 = x
            .add(&GradedMap::single(v.clone(), v.clone(), vec![], vec![b(1, 2)], int(-3)).unwrap())
            .unwrap();
        let y = d.compose(&x2).unwrap();
        let sol = solve_preimage(&d, &y).unwrap().expect("must be solvable");
        assert_eq!(d.compose(&sol).unwrap(), y);
    }

    #[test]
    fn determinism() {
        let v = GradedSpace::from_dims([(0, 2), (1, 3)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(vec![b(1, 0)], vec![b(0, 0)], int(1)).unwrap();
        d.add_entry(vec![b(1, 1)], vec![b(0, 0)], int(1)).unwrap();
        d.add_entry(vec![b(1, 2)], vec![b(0, 1)], int(2)).unwrap();
        let k1 = kernel_basis(&d).unwrap();
        let k2 = kernel_basis(&d).unwrap();
        assert_eq!(k1, k2);
        assert_eq!(k1.len(), 3); // dim ker = 2 (deg 0) + 1 (deg 1)
    }
}
