//! Seeded generators for test data: random complexes, contractions, strict
//! structures from verified families, random isotopies, and MC-satisfying
//! weight-truncated structures produced by weightwise transport.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::complex::{homology_contraction, ChainComplex, Contraction};
use crate::corolla::Corolla;
use crate::error::Result;
use crate::gmap::GradedMap;
use crate::grading::{BasisIndex, GradedSpace};
use crate::ibl::{make_ibl_structure, skew_symmetrize, IBLStructure, SkewMode};
use crate::morphism::{transport_structure, InfinityMorphism};
use crate::rational::{int, Rational};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn small_nonzero(r: &mut ChaCha12Rng) -> Rational {
    let v = [-3i64, -2, -1, 1, 2, 3];
    int(*v.choose(r).unwrap())
}

/// A random complex: dims spread over a few degrees, the differential built
/// from disjoint source/target pairs (sources map into non-source targets,
/// so d² = 0 holds by construction), optionally conjugated afterwards.
pub fn random_complex(r: &mut ChaCha12Rng, total_dim: usize) -> ChainComplex {
    loop {
        let lowest = r.gen_range(-2..=0);
        let n_degrees = r.gen_range(2..=3usize);
        let mut dims = vec![0usize; n_degrees];
        for _ in 0..total_dim {
            let i = r.gen_range(0..n_degrees);
            dims[i] += 1;
        }
        if dims.iter().any(|&d| d == 0) {
            continue;
        }
        let space = GradedSpace::from_dims(
            dims.iter()
                .enumerate()
                .map(|(i, &d)| (lowest + i as i64, d)),
        );
        // pick sources in degree n+1 and targets in degree n, disjointly
        let mut d = GradedMap::zero(space.clone(), space.clone(), 1, 1, -1);
        let mut targets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut sources: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for deg in space.degrees().collect::<Vec<_>>() {
            let n = space.dim(deg);
            let idx: Vec<usize> = (0..n).collect();
            let n_src = if space.dim(deg - 1) > 0 {
                r.gen_range(0..=n / 2)
            } else {
                0
            };
            sources.insert(deg, idx[..n_src].to_vec());
            targets.insert(deg, idx[n_src..].to_vec());
        }
        for (&deg, srcs) in &sources {
            let Some(tgts) = targets.get(&(deg - 1)) else { continue };
            if tgts.is_empty() {
                continue;
            }
            for &s in srcs {
                let n_hits = r.gen_range(1..=tgts.len().min(2));
                let mut hit = tgts.clone();
                hit.shuffle(r);
                for &t in hit.iter().take(n_hits) {
                    d.add_entry(
                        vec![BasisIndex::new(deg, s)],
                        vec![BasisIndex::new(deg - 1, t)],
                        small_nonzero(r),
                    )
                    .unwrap();
                }
            }
        }
        if let Ok(c) = ChainComplex::new(space, d) {
            return c;
        }
    }
}

/// A random degree-0 automorphism: per degree, a unit lower-times-upper
/// triangular matrix (determinant ±1 by construction).
pub fn random_graded_iso(r: &mut ChaCha12Rng, space: &GradedSpace) -> GradedMap {
    let mut phi = GradedMap::zero(space.clone(), space.clone(), 1, 1, 0);
    for deg in space.degrees().collect::<Vec<_>>() {
        let n = space.dim(deg);
        // M = L * U with unit diagonals, then a random basis permutation.
        let mut m = vec![vec![Rational::from_integer(0.into()); n]; n];
        let mut l = m.clone();
        let mut u = m.clone();
        for i in 0..n {
            l[i][i] = int(1);
            u[i][i] = int(1);
            for j in 0..i {
                if r.gen_bool(0.5) {
                    l[i][j] = small_nonzero(r);
                }
            }
            for j in i + 1..n {
                if r.gen_bool(0.5) {
                    u[i][j] = small_nonzero(r);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::from_integer(0.into());
                for t in 0..n {
                    acc += &l[i][t] * &u[t][j];
                }
                m[i][j] = acc;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(r);
        for j in 0..n {
            for i in 0..n {
                if m[i][j] != Rational::from_integer(0.into()) {
                    phi.add_entry(
                        vec![BasisIndex::new(deg, j)],
                        vec![BasisIndex::new(deg, perm[i])],
                        m[i][j].clone(),
                    )
                    .unwrap();
                }
            }
        }
    }
    phi
}

fn inverse_iso(phi: &GradedMap) -> Result<GradedMap> {
    crate::morphism::invert_chain_iso(phi)
}

/// Conjugates `(A, d, ops)` by the automorphism: `d' = φ d φ⁻¹`,
/// `μ' = φ^{⊗l} μ (φ⁻¹)^{⊗k}`.
pub fn conjugate_structure(s: &IBLStructure, phi: &GradedMap) -> Result<IBLStructure> {
    let phi_inv = inverse_iso(phi)?;
    let d = phi
        .compose(s.complex().d())?
        .compose(&phi_inv)?;
    let complex = ChainComplex::new(s.complex().space().clone(), d)?;
    let mut ops = Vec::new();
    for (c, m) in s.ops() {
        let fwd = phi.tensor_power(c.l)?;
        let back = phi_inv.tensor_power(c.k)?;
        ops.push((*c, fwd.compose(m)?.compose(&back)?));
    }
    make_ibl_structure(&complex, ops, s.max_weight(), SkewMode::Strict)
}

fn glue_cone(
    r: &mut ChaCha12Rng,
    space: &GradedSpace,
    d_entries: &[(BasisIndex, BasisIndex, Rational)],
    pad_degree: i64,
) -> (GradedSpace, GradedMap) {
    // appends an acyclic two-dimensional cone in (pad_degree, pad_degree+1)
    let extra = GradedSpace::from_dims([(pad_degree, 1), (pad_degree + 1, 1)]);
    let (sum, off) = space.direct_sum(&extra);
    let mut d = GradedMap::zero(sum.clone(), sum.clone(), 1, 1, -1);
    for (i, o, c) in d_entries {
        d.add_entry(vec![*i], vec![*o], c.clone()).unwrap();
    }
    d.add_entry(
        vec![BasisIndex::new(pad_degree + 1, off[&(pad_degree + 1)])],
        vec![BasisIndex::new(pad_degree, off[&pad_degree])],
        small_nonzero(r),
    )
    .unwrap();
    (sum, d)
}

/// The strict families, all 6-dimensional with nonzero differential:
///   0: gl(1|1) commutator ⊕ acyclic cone;
///   1: module bracket `[m₁, x] = e·y` with the complement generator feeding
///      a harmonic output;
///   2: its transpose cobracket;
///   3: two-step bracket and cobracket on disjoint supports
///      (`[x,y] = z`-seed) ⊕ acyclic cone.
pub fn strict_family(r: &mut ChaCha12Rng, family: usize, max_weight: i64) -> Result<IBLStructure> {
    let m210 = Corolla::new(2, 1, 0)?;
    let m120 = Corolla::new(1, 2, 0)?;
    let raw = match family % 4 {
        0 => {
            // gl(k^{1|1}): A dims {-1:1, 0:2, 1:1}; bracket = graded commutator.
            let gl = GradedSpace::from_dims([(-1, 1), (0, 2), (1, 1)]);
            let (space, d) = glue_cone(r, &gl, &[], 0);
            let complex = ChainComplex::new(space.clone(), d)?;
            let e00 = BasisIndex::new(0, 0);
            let e11 = BasisIndex::new(0, 1);
            let e01 = BasisIndex::new(-1, 0);
            let e10 = BasisIndex::new(1, 0);
            let vmap = |x: BasisIndex| -> (i64, i64) {
                if x == e00 {
                    (0, 0)
                } else if x == e11 {
                    (1, 1)
                } else if x == e01 {
                    (1, 0)
                } else {
                    (0, 1)
                }
            };
            let lift = |io: (i64, i64)| -> BasisIndex {
                match io {
                    (0, 0) => e00,
                    (1, 1) => e11,
                    (1, 0) => e01,
                    (0, 1) => e10,
                    _ => unreachable!(),
                }
            };
            let scale = small_nonzero(r);
            let mut mu = GradedMap::zero(space.clone(), space.clone(), 2, 1, 0);
            for f in [e00, e11, e01, e10] {
                for g in [e00, e11, e01, e10] {
                    let (fi, fo) = vmap(f);
                    let (gi, go) = vmap(g);
                    if go == fi {
                        mu.add_entry(vec![f, g], vec![lift((gi, fo))], scale.clone())?;
                    }
                    if fo == gi {
                        let sign = crate::rational::neg_one_pow(f.degree * g.degree);
                        mu.add_entry(vec![f, g], vec![lift((fi, go))], -(&sign * &scale))?;
                    }
                }
            }
            return make_ibl_structure(&complex, [(m210, mu)], max_weight, SkewMode::Strict);
        }
        1 => {
            // x(0), y(1) harmonic; m1(1)->m0(0); n1(3)->n0(2); [m1, x] = e y.
            let space = GradedSpace::from_dims([(0, 2), (1, 2), (2, 1), (3, 1)]);
            let mut d = GradedMap::zero(space.clone(), space.clone(), 1, 1, -1);
            d.add_entry(vec![BasisIndex::new(1, 1)], vec![BasisIndex::new(0, 1)], small_nonzero(r))?;
            d.add_entry(vec![BasisIndex::new(3, 0)], vec![BasisIndex::new(2, 0)], small_nonzero(r))?;
            let complex = ChainComplex::new(space.clone(), d)?;
            let mut mu = GradedMap::zero(space.clone(), space.clone(), 2, 1, 0);
            mu.add_entry(
                vec![BasisIndex::new(1, 1), BasisIndex::new(0, 0)],
                vec![BasisIndex::new(1, 0)],
                small_nonzero(r),
            )?;
            let mu = skew_symmetrize(&mu)?;
            return make_ibl_structure(&complex, [(m210, mu)], max_weight, SkewMode::Strict);
        }
        2 => {
            // transpose of family 1: δ(y*) = e·(m1* ∧ x*), reversed differential.
            let space = GradedSpace::from_dims([(0, 2), (-1, 2), (-2, 1), (-3, 1)]);
            let mut d = GradedMap::zero(space.clone(), space.clone(), 1, 1, -1);
            d.add_entry(vec![BasisIndex::new(0, 1)], vec![BasisIndex::new(-1, 1)], small_nonzero(r))?;
            d.add_entry(vec![BasisIndex::new(-2, 0)], vec![BasisIndex::new(-3, 0)], small_nonzero(r))?;
            let complex = ChainComplex::new(space.clone(), d)?;
            let mut delta = GradedMap::zero(space.clone(), space.clone(), 1, 2, 0);
            delta.add_entry(
                vec![BasisIndex::new(-1, 0)],
                vec![BasisIndex::new(-1, 1), BasisIndex::new(0, 0)],
                small_nonzero(r),
            )?;
            let delta = skew_symmetrize(&delta)?;
            return make_ibl_structure(&complex, [(m120, delta)], max_weight, SkewMode::Strict);
        }
        _ => {
            // 4-dim seed ⊕ cone: [x,y] = a z; δ(w) = b x∧z with
            // |z| = |x|+|y|, |w| = 2|x|+|y|.
            let dx = r.gen_range(0..=1i64);
            let dy = r.gen_range(0..=1i64);
            let seed_dims = [(dx, 1), (dy, 1), (dx + dy, 1), (2 * dx + dy, 1)];
            let seed = GradedSpace::from_dims(seed_dims);
            // indices within possibly-shared degrees
            let mut use_count: BTreeMap<i64, usize> = BTreeMap::new();
            let mut place = |deg: i64| -> BasisIndex {
                let c = use_count.entry(deg).or_insert(0);
                let b = BasisIndex::new(deg, *c);
                *c += 1;
                b
            };
            let x = place(dx);
            let y = place(dy);
            let z = place(dx + dy);
            let w = place(2 * dx + dy);
            let (space, d) = glue_cone(r, &seed, &[], 4);
            let complex = ChainComplex::new(space.clone(), d)?;
            let mut mu = GradedMap::zero(space.clone(), space.clone(), 2, 1, 0);
            mu.add_entry(vec![x, y], vec![z], small_nonzero(r))?;
            let mu = skew_symmetrize(&mu)?;
            let mut delta = GradedMap::zero(space.clone(), space.clone(), 1, 2, 0);
            delta.add_entry(vec![w], vec![x, z], small_nonzero(r))?;
            let delta = skew_symmetrize(&delta)?;
            let mut ops = Vec::new();
            if !mu.is_zero() {
                ops.push((m210, mu));
            }
            if !delta.is_zero() {
                ops.push((m120, delta));
            }
            return make_ibl_structure(&complex, ops, max_weight, SkewMode::Strict);
        }
    };
}

/// A random strict involutive Lie bialgebra on a 6-dimensional complex:
/// one of the verified families, conjugated by a random graded automorphism.
pub fn random_strict_ibl(r: &mut ChaCha12Rng, max_weight: i64) -> Result<IBLStructure> {
    let family = r.gen_range(0..4usize);
    let s = strict_family(r, family, max_weight)?;
    let phi = random_graded_iso(r, s.complex().space());
    conjugate_structure(&s, &phi)
}

/// Random skew isotopy components (weight-0 part the identity), sparse.
pub fn random_isotopy(
    r: &mut ChaCha12Rng,
    complex: &ChainComplex,
    max_weight: i64,
    density: f64,
) -> Result<BTreeMap<Corolla, GradedMap>> {
    let space = complex.space();
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(Corolla::IDENTITY, GradedMap::identity(space, 1));
    let basis = space.basis();
    for c in Corolla::all_up_to_weight(max_weight) {
        if c.k + c.l > 4 || !r.gen_bool(density) {
            continue;
        }
        let mut raw = GradedMap::zero(space.clone(), space.clone(), c.k, c.l, c.weight());
        for _attempt in 0..40 {
            let ins: Vec<BasisIndex> = (0..c.k).map(|_| *basis.choose(r).unwrap()).collect();
            let outs: Vec<BasisIndex> = (0..c.l).map(|_| *basis.choose(r).unwrap()).collect();
            let deg: i64 = outs.iter().map(|b| b.degree).sum::<i64>()
                - ins.iter().map(|b| b.degree).sum::<i64>();
            if deg == c.weight() {
                raw.add_entry(ins, outs, small_nonzero(r))?;
                break;
            }
        }
        let skew = skew_symmetrize(&raw)?;
        if !skew.is_zero() {
            comps.insert(c, skew);
        }
    }
    Ok(comps)
}

/// An MC-satisfying weight-truncated structure built by weightwise transport
/// of a strict structure along a random isotopy, together with that isotopy.
pub fn random_ibl_infinity(
    r: &mut ChaCha12Rng,
    max_weight: i64,
) -> Result<(IBLStructure, IBLStructure, InfinityMorphism)> {
    let alpha = random_strict_ibl(r, max_weight)?;
    let iso = random_isotopy(r, alpha.complex(), max_weight, 0.7)?;
    let (beta, f) = transport_structure(&alpha, &iso, max_weight)?;
    Ok((alpha, beta, f))
}

/// A contraction of a random complex onto its homology.
pub fn random_contraction(r: &mut ChaCha12Rng, total_dim: usize) -> Result<Contraction> {
    let a = random_complex(r, total_dim);
    homology_contraction(&a)
}
