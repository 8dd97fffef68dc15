//! The homotopy transfer engine: transferred structures as signed sums over
//! leveled graphs labeled with the original operations, evaluated through
//! contraction data, and the universal infinity-quasi-isomorphisms extending
//! the inclusion and the projection.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::complex::Contraction;
use crate::corolla::Corolla;
use crate::delta::leveled_graphs_for;
use crate::error::{Error, Result};
use crate::eval::{eval_labeled_graph, Cap, EvalConfig};
use crate::gmap::GradedMap;
use crate::graph::LeveledGraph;
use crate::ibl::{make_ibl_structure, IBLStructure, SkewMode};
use crate::morphism::InfinityMorphism;
use crate::rational::{int, neg_one_pow};
use crate::sign::evaluate_graph_sign;

fn labels_for<'a>(s: &'a IBLStructure, g: &LeveledGraph) -> Option<Vec<GradedMap>> {
    g.vertices()
        .iter()
        .map(|c| s.op(c).cloned())
        .collect::<Option<Vec<_>>>()
}

/// `P ∘ V_1 ∘ h ∘ V_2 ∘ … ∘ V_N ∘ I`: the transferred-operation labeling.
pub fn eval_phi(g: &LeveledGraph, labels: &[GradedMap], c: &Contraction) -> Result<GradedMap> {
    let cfg = EvalConfig {
        top: Cap::Power(c.inclusion()),
        bottom: Cap::Power(c.projection()),
        between: Some(c),
        strand_space: c.big().space(),
    };
    eval_labeled_graph(g, labels, &cfg)
}

/// As `eval_phi` with the bottom label replaced by the full-width symmetric
/// homotopy: the universal morphism extending the inclusion.
pub fn eval_hhi(g: &LeveledGraph, labels: &[GradedMap], c: &Contraction) -> Result<GradedMap> {
    let cfg = EvalConfig {
        top: Cap::Power(c.inclusion()),
        bottom: Cap::SymHom(c),
        between: Some(c),
        strand_space: c.big().space(),
    };
    eval_labeled_graph(g, labels, &cfg)
}

/// As `eval_phi` with the top label replaced by the full-width symmetric
/// homotopy: the universal morphism extending the projection.
pub fn eval_phh(g: &LeveledGraph, labels: &[GradedMap], c: &Contraction) -> Result<GradedMap> {
    let cfg = EvalConfig {
        top: Cap::SymHom(c),
        bottom: Cap::Power(c.projection()),
        between: Some(c),
        strand_space: c.big().space(),
    };
    eval_labeled_graph(g, labels, &cfg)
}

fn check_compatible(s: &IBLStructure, c: &Contraction) -> Result<()> {
    if s.complex() != c.big() {
        return Err(Error::space(
            "transfer: the structure must live on the contraction's big complex",
        ));
    }
    Ok(())
}

fn target_corollas(
    max_weight: i64,
    max_genus: Option<usize>,
    max_coarity: Option<usize>,
) -> Vec<Corolla> {
    Corolla::all_up_to_weight(max_weight)
        .into_iter()
        .filter(|c| max_genus.map_or(true, |g| c.g <= g) && max_coarity.map_or(true, |l| c.l <= l))
        .collect()
}

/// The transferred structure on the small complex:
/// `ν_c = Σ_graphs sign(graph) · Φ(graph labeled by the original operations)`.
pub fn transfer(
    s: &IBLStructure,
    c: &Contraction,
    max_weight: i64,
    max_genus: Option<usize>,
    max_coarity: Option<usize>,
) -> Result<IBLStructure> {
    check_compatible(s, c)?;
    let corollas = target_corollas(max_weight, max_genus, max_coarity);
    let ops: Vec<(Corolla, GradedMap)> = corollas
        .par_iter()
        .map(|&cor| transferred_op(s, c, cor).map(|m| (cor, m)))
        .collect::<Result<Vec<_>>>()?;
    let small = c.small().clone();
    make_ibl_structure(
        &small,
        ops.into_iter().filter(|(_, m)| !m.is_zero()),
        max_weight,
        SkewMode::Strict,
    )
}

fn transferred_op(s: &IBLStructure, c: &Contraction, cor: Corolla) -> Result<GradedMap> {
    let h_space = c.small().space();
    let mut total = GradedMap::zero(
        h_space.clone(),
        h_space.clone(),
        cor.k,
        cor.l,
        cor.weight() - 1,
    );
    for g in leveled_graphs_for(cor)?.iter() {
        let Some(labels) = labels_for(s, g) else { continue };
        let (sign, boundary) = evaluate_graph_sign(g)?;
        debug_assert_eq!(boundary, cor);
        let term = eval_phi(g, &labels, c)?;
        total = total.add(&term.scale(&int(sign)))?;
    }
    Ok(total)
}

/// Per-weight global sign of the projection-side universal morphism; the
/// unique choice making `check_infinity_morphism` vanish on transferred
/// structures (the mirrored formula acquires a sign change).
fn proj_weight_sign(weight: i64) -> crate::rational::Rational {
    neg_one_pow(weight)
}

/// The universal infinity-morphism `(H, ν) ⇝ (A, α)` extending the inclusion.
pub fn infinity_in(
    s: &IBLStructure,
    c: &Contraction,
    max_weight: i64,
) -> Result<InfinityMorphism> {
    check_compatible(s, c)?;
    let transferred = transfer(s, c, max_weight, None, None)?;
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(Corolla::IDENTITY, c.inclusion().clone());
    let results: Vec<(Corolla, GradedMap)> = Corolla::all_up_to_weight(max_weight)
        .par_iter()
        .map(|&cor| -> Result<(Corolla, GradedMap)> {
            let mut total = GradedMap::zero(
                c.small().space().clone(),
                c.big().space().clone(),
                cor.k,
                cor.l,
                cor.weight(),
            );
            for g in leveled_graphs_for(cor)?.iter() {
                let Some(labels) = labels_for(s, g) else { continue };
                let (sign, _) = evaluate_graph_sign(g)?;
                let term = eval_hhi(g, &labels, c)?;
                total = total.add(&term.scale(&int(sign)))?;
            }
            Ok((cor, total))
        })
        .collect::<Result<Vec<_>>>()?;
    for (cor, m) in results {
        if !m.is_zero() {
            comps.insert(cor, m);
        }
    }
    InfinityMorphism::new(transferred, s.clone(), comps, max_weight)
}

/// The universal infinity-morphism `(A, α) ⇝ (H, ν)` extending the
/// projection, with the per-weight sign change.
pub fn infinity_proj(
    s: &IBLStructure,
    c: &Contraction,
    max_weight: i64,
) -> Result<InfinityMorphism> {
    check_compatible(s, c)?;
    let transferred = transfer(s, c, max_weight, None, None)?;
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(Corolla::IDENTITY, c.projection().clone());
    let results: Vec<(Corolla, GradedMap)> = Corolla::all_up_to_weight(max_weight)
        .par_iter()
        .map(|&cor| -> Result<(Corolla, GradedMap)> {
            let mut total = GradedMap::zero(
                c.big().space().clone(),
                c.small().space().clone(),
                cor.k,
                cor.l,
                cor.weight(),
            );
            for g in leveled_graphs_for(cor)?.iter() {
                let Some(labels) = labels_for(s, g) else { continue };
                let (sign, _) = evaluate_graph_sign(g)?;
                let term = eval_phh(g, &labels, c)?;
                total = total.add(&term.scale(&int(sign)))?;
            }
            Ok((cor, total.scale(&proj_weight_sign(cor.weight()))))
        })
        .collect::<Result<Vec<_>>>()?;
    for (cor, m) in results {
        if !m.is_zero() {
            comps.insert(cor, m);
        }
    }
    InfinityMorphism::new(s.clone(), transferred, comps, max_weight)
}
