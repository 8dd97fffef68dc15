//! Evaluation of labeled leveled graphs as honest Koszul-graded composites.
//!
//! The machine walks the canonical wiring top-down, keeping an ordered list
//! of open strands. Each vertex level is applied as
//! `(id ⊗ … ⊗ label ⊗ … ⊗ id) ∘ (permutation operator)`, so every sign is
//! produced by the single Koszul authority; optional caps and full-width
//! symmetric homotopies realize the transfer-style labelings.

use crate::complex::Contraction;
use crate::error::{Error, Result};
use crate::gmap::GradedMap;
use crate::grading::{BasisIndex, GradedSpace};
use crate::graph::{canonical_wiring, LeveledGraph, PortRef};
use crate::homotopy::apply_symmetric_homotopy;
use crate::perm::Permutation;

/// A uniform operation applied to all strands at the top or bottom of the
/// composite.
#[derive(Clone, Copy)]
pub enum Cap<'a> {
    None,
    /// Apply this arity-(1,1) map to every strand.
    Power(&'a GradedMap),
    /// Apply the full-width symmetric homotopy of this contraction.
    SymHom(&'a Contraction),
}

#[derive(Clone, Copy)]
pub struct EvalConfig<'a> {
    pub top: Cap<'a>,
    pub bottom: Cap<'a>,
    /// Apply the full-width symmetric homotopy between consecutive levels.
    pub between: Option<&'a Contraction>,
    /// The space mid-level strands live in (labels are endomorphism-style
    /// maps on this space).
    pub strand_space: &'a GradedSpace,
}

impl<'a> EvalConfig<'a> {
    pub fn plain(strand_space: &'a GradedSpace) -> Self {
        EvalConfig {
            top: Cap::None,
            bottom: Cap::None,
            between: None,
            strand_space,
        }
    }
}

/// Evaluates the graph with one `GradedMap` label per vertex (arities must
/// match the corollas). Inputs are numbered by external input labels, outputs
/// by external output labels.
pub fn eval_labeled_graph(
    g: &LeveledGraph,
    labels: &[GradedMap],
    cfg: &EvalConfig,
) -> Result<GradedMap> {
    let n = g.n_vertices();
    if labels.len() != n {
        return Err(Error::argument("eval: one label per vertex required"));
    }
    for (v, lab) in labels.iter().enumerate() {
        let c = g.vertices()[v];
        if lab.in_arity() != c.k || lab.out_arity() != c.l {
            return Err(Error::arity(format!(
                "eval: label arity ({},{}) does not match corolla ({},{}) at vertex {v}",
                lab.in_arity(),
                lab.out_arity(),
                c.k,
                c.l
            )));
        }
    }
    let wired = canonical_wiring(g);
    let k = g.total_inputs();

    let mut acc = match cfg.top {
        Cap::None => GradedMap::identity(cfg.strand_space, k),
        Cap::Power(t) => t.tensor_power(k)?,
        Cap::SymHom(c) => {
            apply_symmetric_homotopy(c, &GradedMap::identity(cfg.strand_space, k))?
        }
    };
    let mut strands: Vec<PortRef> = (1..=k).map(PortRef::Ext).collect();

    for v in (0..n).rev() {
        let wv = &wired.vertices[v];
        // positions of v's in-ports among the current strands, in port order
        let positions: Vec<usize> = wv
            .ins
            .iter()
            .map(|p| {
                strands
                    .iter()
                    .position(|s| s == p)
                    .ok_or_else(|| Error::internal("eval: missing strand for in-port"))
            })
            .collect::<Result<Vec<_>>>()?;
        let kv = positions.len();
        let w = strands.len();
        let c_pos = *positions.iter().min().expect("corollas have k ≥ 1");
        // images[old] = new: consumed ports become c_pos..c_pos+kv in port
        // order; the rest keep their relative order around the block.
        let mut images = vec![usize::MAX; w];
        for (j, &q) in positions.iter().enumerate() {
            images[q] = c_pos + j;
        }
        let mut free_slots: Vec<usize> = (0..w)
            .filter(|x| !(c_pos..c_pos + kv).contains(x))
            .collect();
        free_slots.sort_unstable();
        let mut fs = free_slots.into_iter();
        for old in 0..w {
            if images[old] == usize::MAX {
                images[old] = fs.next().expect("free slot available");
            }
        }
        let rho = Permutation::from_images(images)
            .map_err(|_| Error::internal("eval: bad strand permutation"))?;
        if !rho.is_identity() {
            acc = acc.permute_outputs(&rho)?;
            strands = rho.permute_slice(&strands);
        }
        acc = acc.post_apply_at(c_pos, &labels[v])?;
        strands.splice(c_pos..c_pos + kv, wv.outs.iter().cloned());
        if v > 0 {
            if let Some(c) = cfg.between {
                acc = apply_symmetric_homotopy(c, &acc)?;
            }
        }
    }

    match cfg.bottom {
        Cap::None => {}
        Cap::Power(t) => {
            let factors: Vec<&GradedMap> = vec![t; acc.out_arity()];
            acc = acc.post_apply_elementary(&factors)?;
        }
        Cap::SymHom(c) => {
            acc = apply_symmetric_homotopy(c, &acc)?;
        }
    }

    // Sort outputs to external label order.
    let final_labels: Vec<usize> = strands
        .iter()
        .map(|p| match p {
            PortRef::Ext(t) => Ok(*t),
            PortRef::Edge(_) => Err(Error::internal("eval: unresolved internal strand")),
        })
        .collect::<Result<Vec<_>>>()?;
    let images: Vec<usize> = final_labels.iter().map(|&t| t - 1).collect();
    let rho = Permutation::from_images(images)
        .map_err(|_| Error::internal("eval: output labels are not a bijection"))?;
    if !rho.is_identity() {
        acc = acc.permute_outputs(&rho)?;
    }
    Ok(acc)
}

/// The canonical composite `bottom ∘_r top`: the last r outputs of `top`
/// enter the first r inputs of `bottom`; composite ports are ordered
/// bottom-free-then-top on inputs and bottom-then-top-free on outputs.
/// This is the direct formula route, independent of the graph machinery.
pub fn two_level_composite(
    bottom: &GradedMap,
    top: &GradedMap,
    r: usize,
) -> Result<GradedMap> {
    let kp = bottom.in_arity();
    let lpp = top.out_arity();
    if r < 1 || r > kp.min(lpp) {
        return Err(Error::argument("two_level_composite: r out of range"));
    }
    let free = kp - r;
    let k_total = free + top.in_arity();
    let mut acc = GradedMap::identity(top.source(), k_total);
    acc = acc.post_apply_at(free, top)?;
    // strands: [free (0..free), top outs (free..free+lpp)]
    // target: consumed last r outs -> 0..r, free -> r..r+free,
    //         unconsumed outs -> r+free..
    let w = free + lpp;
    let mut images = vec![0usize; w];
    for p in 0..free {
        images[p] = r + p;
    }
    for j in 0..lpp - r {
        images[free + j] = kp + j;
    }
    for j in 0..r {
        images[free + (lpp - r) + j] = j;
    }
    let rho = Permutation::from_images(images)
        .map_err(|_| Error::internal("two_level_composite: bad permutation"))?;
    acc = acc.permute_outputs(&rho)?;
    acc = acc.post_apply_at(0, bottom)?;
    Ok(acc)
}

/// An ambient direct sum of component spaces, with embeddings and
/// projections for maps whose sources and targets live in different
/// components (morphism-style evaluations mix two or three spaces).
pub struct Ambient {
    space: GradedSpace,
    components: Vec<GradedSpace>,
    offsets: Vec<std::collections::BTreeMap<i64, usize>>,
}

impl Ambient {
    pub fn new(components: &[&GradedSpace]) -> Ambient {
        let mut space = GradedSpace::new();
        let mut offsets = Vec::new();
        for comp in components {
            let (sum, off) = space.direct_sum(comp);
            space = sum;
            offsets.push(off);
        }
        Ambient {
            space,
            components: components.iter().map(|c| (*c).clone()).collect(),
            offsets,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn up(&self, comp: usize, b: BasisIndex) -> BasisIndex {
        let off = self.offsets[comp].get(&b.degree).copied().unwrap_or(0);
        BasisIndex::new(b.degree, b.index + off)
    }

    fn down(&self, comp: usize, b: BasisIndex) -> Result<BasisIndex> {
        let off = self.offsets[comp].get(&b.degree).copied().unwrap_or(0);
        let dim = self.components[comp].dim(b.degree);
        if b.index < off || b.index >= off + dim {
            return Err(Error::internal("ambient projection: index outside the component block"));
        }
        Ok(BasisIndex::new(b.degree, b.index - off))
    }

    /// Reinterprets `f : comp_src^{⊗k} → comp_tgt^{⊗l}` inside the ambient space.
    pub fn embed(&self, comp_src: usize, comp_tgt: usize, f: &GradedMap) -> Result<GradedMap> {
        let mut out = GradedMap::zero(
            self.space.clone(),
            self.space.clone(),
            f.in_arity(),
            f.out_arity(),
            f.degree(),
        );
        for (i, o, c) in f.entries() {
            let i2: Vec<BasisIndex> = i.iter().map(|&b| self.up(comp_src, b)).collect();
            let o2: Vec<BasisIndex> = o.iter().map(|&b| self.up(comp_tgt, b)).collect();
            out.add_entry(i2, o2, c.clone())?;
        }
        Ok(out)
    }

    /// The inclusion of a component as an arity-(1,1) map into the ambient.
    pub fn inclusion(&self, comp: usize) -> Result<GradedMap> {
        let mut out = GradedMap::zero(self.components[comp].clone(), self.space.clone(), 1, 1, 0);
        for b in self.components[comp].basis() {
            out.add_entry(vec![b], vec![self.up(comp, b)], crate::rational::one())?;
        }
        Ok(out)
    }

    /// Extracts `f` back to component spaces; errors if any entry leaves the
    /// expected blocks.
    pub fn project(&self, comp_src: usize, comp_tgt: usize, f: &GradedMap) -> Result<GradedMap> {
        let mut out = GradedMap::zero(
            self.components[comp_src].clone(),
            self.components[comp_tgt].clone(),
            f.in_arity(),
            f.out_arity(),
            f.degree(),
        );
        for (i, o, c) in f.entries() {
            let i2: Vec<BasisIndex> = i
                .iter()
                .map(|&b| self.down(comp_src, b))
                .collect::<Result<Vec<_>>>()?;
            let o2: Vec<BasisIndex> = o
                .iter()
                .map(|&b| self.down(comp_tgt, b))
                .collect::<Result<Vec<_>>>()?;
            out.add_entry(i2, o2, c.clone())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corolla::Corolla;
    use crate::rational::{int, one};

    fn b(d: i64, i: usize) -> BasisIndex {
        BasisIndex::new(d, i)
    }

    #[test]
    fn single_vertex_plain_eval_is_the_label() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let g = LeveledGraph::single_vertex(Corolla::new(2, 1, 0).unwrap());
        let mut mu = GradedMap::zero(v.clone(), v.clone(), 2, 1, -1);
        mu.add_entry(vec![b(0, 0), b(1, 0)], vec![b(0, 1)], int(2)).unwrap();
        let cfg = EvalConfig::plain(&v);
        let out = eval_labeled_graph(&g, &[mu.clone()], &cfg).unwrap();
        assert_eq!(out, mu);
    }

    #[test]
    fn two_level_composite_reduces_to_plain_compose_when_total() {
        // r = l'' = k': bottom ∘ top is plain composition.
        let v = GradedSpace::from_dims([(0, 2), (1, 2)]);
        let mut top = GradedMap::zero(v.clone(), v.clone(), 1, 2, 1);
        top.add_entry(vec![b(1, 0)], vec![b(1, 1), b(1, 0)], one()).unwrap();
        let mut bottom = GradedMap::zero(v.clone(), v.clone(), 2, 1, -1);
        bottom.add_entry(vec![b(1, 1), b(1, 0)], vec![b(1, 0)], int(3)).unwrap();
        let via = two_level_composite(&bottom, &top, 2).unwrap();
        let direct = bottom.compose(&top).unwrap();
        assert_eq!(via, direct);
    }

    #[test]
    fn ambient_embed_project_roundtrip() {
        let a = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let bb = GradedSpace::from_dims([(0, 1), (2, 2)]);
        let amb = Ambient::new(&[&a, &bb]);
        let mut f = GradedMap::zero(a.clone(), bb.clone(), 1, 2, 2);
        f.add_entry(vec![b(0, 1)], vec![b(0, 0), b(2, 1)], int(5)).unwrap();
        let e = amb.embed(0, 1, &f).unwrap();
        let back = amb.project(0, 1, &e).unwrap();
        assert_eq!(back, f);
        // inclusion composes with projection to identity on the block
        let inc = amb.inclusion(1).unwrap();
        assert_eq!(inc.in_arity(), 1);
    }
}
