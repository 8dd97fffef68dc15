//! The global sign oracle: evaluating a labeled leveled graph to the sign it
//! acquires when composed into a single basis corolla of the suspension
//! properad.
//!
//! Reduction repeatedly (i) moves an adjacent vertex pair into canonical
//! position, picking up Koszul signs on the vertex weights and `sgn ⊗ sgn`
//! signs for the port reorderings, then (ii) applies `∘_r`. The result is
//! independent of the reduction order; the test suite checks this
//! exhaustively on small graphs.

use std::collections::BTreeSet;

use crate::corolla::{compose_r, Corolla};
use crate::error::{Error, Result};
use crate::graph::{canonical_wiring, LeveledGraph, PortRef};
use crate::perm::Permutation;

#[derive(Debug, Clone)]
struct Block {
    corolla: Corolla,
    ins: Vec<PortRef>,
    outs: Vec<PortRef>,
}

fn blocks_from(g: &LeveledGraph) -> Vec<Block> {
    canonical_wiring(g)
        .vertices
        .into_iter()
        .map(|v| Block {
            corolla: v.corolla,
            ins: v.ins,
            outs: v.outs,
        })
        .collect()
}

/// Edge ids shared between `upper.outs` and `lower.ins`, in the order they
/// appear among the upper block's out-ports.
fn shared_edges(upper: &Block, lower: &Block) -> Vec<usize> {
    let lower_in: BTreeSet<usize> = lower
        .ins
        .iter()
        .filter_map(|p| match p {
            PortRef::Edge(e) => Some(*e),
            _ => None,
        })
        .collect();
    upper
        .outs
        .iter()
        .filter_map(|p| match p {
            PortRef::Edge(e) if lower_in.contains(e) => Some(*e),
            _ => None,
        })
        .collect()
}

/// Sign of the permutation rearranging `old` into `new` (equal multisets of
/// distinct entries).
fn reorder_sign(old: &[PortRef], new: &[PortRef]) -> Result<i64> {
    let images: Vec<usize> = old
        .iter()
        .map(|p| {
            new.iter()
                .position(|q| q == p)
                .ok_or_else(|| Error::internal("reorder_sign: element missing"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Permutation::from_images(images)
        .map_err(|_| Error::internal("reorder_sign: not a permutation"))?
        .sign())
}

/// Pairs (i, j), i < j, that may be contracted next: they share at least one
/// edge and no edge runs from j into a block strictly between them.
fn contractible_pairs(blocks: &[Block]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..blocks.len() {
        for i in 0..j {
            if shared_edges(&blocks[j], &blocks[i]).is_empty() {
                continue;
            }
            let blocked = (i + 1..j).any(|m| !shared_edges(&blocks[j], &blocks[m]).is_empty());
            if !blocked {
                out.push((i, j));
            }
        }
    }
    out
}

/// Port order of the `∘_r` composite relative to the two factors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Convention {
    pub in_top_first: bool,
    pub out_top_first: bool,
}

// The unique port order making reduction order-independent (checked
// exhaustively on all graphs with ≤ 4 vertices and weight ≤ 5): the composite
// lists the top factor's free ports before the bottom factor's.
pub(crate) const CONVENTION: Convention = Convention {
    in_top_first: true,
    out_top_first: true,
};

/// Contracts blocks (i, j) in place, returning the accumulated sign.
fn contract(blocks: &mut Vec<Block>, i: usize, j: usize) -> Result<i64> {
    contract_with(blocks, i, j, CONVENTION)
}

fn contract_with(blocks: &mut Vec<Block>, i: usize, j: usize, conv: Convention) -> Result<i64> {
    let mut sign = 1i64;
    // Koszul sign for moving block j down past the blocks between.
    let wj = blocks[j].corolla.weight();
    let between: i64 = blocks[i + 1..j].iter().map(|b| b.corolla.weight()).sum();
    if wj % 2 != 0 && between % 2 != 0 {
        sign = -sign;
    }
    let top = blocks[j].clone();
    let bottom = blocks[i].clone();
    let s = shared_edges(&top, &bottom);
    let r = s.len();
    // Reorder top outs: unshared first (relative order kept), shared last.
    let mut new_outs: Vec<PortRef> = top
        .outs
        .iter()
        .filter(|p| !matches!(p, PortRef::Edge(e) if s.contains(e)))
        .cloned()
        .collect();
    new_outs.extend(s.iter().map(|&e| PortRef::Edge(e)));
    sign *= reorder_sign(&top.outs, &new_outs)?;
    // Reorder bottom ins: shared first in the matching order, rest after.
    let mut new_ins: Vec<PortRef> = s.iter().map(|&e| PortRef::Edge(e)).collect();
    new_ins.extend(
        bottom
            .ins
            .iter()
            .filter(|p| !matches!(p, PortRef::Edge(e) if s.contains(e)))
            .cloned(),
    );
    sign *= reorder_sign(&bottom.ins, &new_ins)?;
    let (cs, merged) = compose_r(bottom.corolla, top.corolla, r)
        .map_err(|e| Error::internal(format!("contract: {e}")))?;
    sign *= cs;
    // Composite port order per the fixed convention.
    let bottom_free = new_ins[r..].to_vec();
    let top_free = new_outs[..new_outs.len() - r].to_vec();
    let ins = if conv.in_top_first {
        let mut v = top.ins.clone();
        v.extend(bottom_free);
        v
    } else {
        let mut v = bottom_free;
        v.extend(top.ins.iter().cloned());
        v
    };
    let outs = if conv.out_top_first {
        let mut v = top_free;
        v.extend(bottom.outs.iter().cloned());
        v
    } else {
        let mut v = bottom.outs.clone();
        v.extend(top_free);
        v
    };
    blocks[i] = Block {
        corolla: merged,
        ins,
        outs,
    };
    blocks.remove(j);
    Ok(sign)
}

/// Experimental variant used to pin the composite port-order convention.
#[doc(hidden)]
pub fn evaluate_all_orders_with(
    g: &LeveledGraph,
    in_top_first: bool,
    out_top_first: bool,
) -> Result<BTreeSet<(i64, Corolla)>> {
    let conv = Convention {
        in_top_first,
        out_top_first,
    };
    fn rec(
        blocks: Vec<Block>,
        sign: i64,
        conv: Convention,
        out: &mut BTreeSet<(i64, Corolla)>,
    ) -> Result<()> {
        if blocks.len() == 1 {
            let (s, c) = normalize_final(&blocks[0])?;
            out.insert((sign * s, c));
            return Ok(());
        }
        let pairs = contractible_pairs(&blocks);
        if pairs.is_empty() {
            return Err(Error::internal("stuck reduction state"));
        }
        for (i, j) in pairs {
            let mut next = blocks.clone();
            let s = contract_with(&mut next, i, j, conv)?;
            rec(next, sign * s, conv, out)?;
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    rec(blocks_from(g), 1, conv, &mut out)?;
    Ok(out)
}

/// Final normalization: sort external legs ascending, with `sgn ⊗ sgn`.
fn normalize_final(block: &Block) -> Result<(i64, Corolla)> {
    let ext = |p: &PortRef| -> Result<usize> {
        match p {
            PortRef::Ext(t) => Ok(*t),
            PortRef::Edge(_) => Err(Error::internal("unconsumed internal edge after reduction")),
        }
    };
    let mut sign = 1i64;
    let ins: Vec<usize> = block.ins.iter().map(ext).collect::<Result<Vec<_>>>()?;
    let mut sorted_ins = ins.clone();
    sorted_ins.sort_unstable();
    let in_new: Vec<PortRef> = sorted_ins.iter().map(|&t| PortRef::Ext(t)).collect();
    sign *= reorder_sign(&block.ins, &in_new)?;
    let outs: Vec<usize> = block.outs.iter().map(ext).collect::<Result<Vec<_>>>()?;
    let mut sorted_outs = outs.clone();
    sorted_outs.sort_unstable();
    let out_new: Vec<PortRef> = sorted_outs.iter().map(|&t| PortRef::Ext(t)).collect();
    sign *= reorder_sign(&block.outs, &out_new)?;
    Ok((sign, block.corolla))
}

fn reduce_default(g: &LeveledGraph) -> Result<(i64, Corolla)> {
    let mut blocks = blocks_from(g);
    let mut sign = 1i64;
    while blocks.len() > 1 {
        // Lowest block with an outgoing edge; highest partner below it.
        let j = (0..blocks.len())
            .find(|&j| {
                blocks[j]
                    .outs
                    .iter()
                    .any(|p| matches!(p, PortRef::Edge(_)))
            })
            .ok_or_else(|| Error::internal("disconnected reduction state"))?;
        let i = (0..j)
            .rev()
            .find(|&i| !shared_edges(&blocks[j], &blocks[i]).is_empty())
            .ok_or_else(|| Error::internal("edge without a lower endpoint"))?;
        sign *= contract(&mut blocks, i, j)?;
    }
    let (s, c) = normalize_final(&blocks[0])?;
    Ok((sign * s, c))
}

/// Sign and boundary corolla of a leveled graph with nontrivial vertices.
pub fn evaluate_graph_sign(g: &LeveledGraph) -> Result<(i64, Corolla)> {
    if g.has_identity_vertices() {
        return Err(Error::argument("evaluate_graph_sign: vertices must be nontrivial corollas"));
    }
    graph_sign_allow_identities(g)
}

/// Internal variant used by decomposition terms where identity corollas are
/// permitted on one level.
pub fn graph_sign_allow_identities(g: &LeveledGraph) -> Result<(i64, Corolla)> {
    reduce_default(g)
}

/// Evaluates the graph along every admissible reduction order; used to test
/// order independence exhaustively.
pub fn evaluate_all_reduction_orders(g: &LeveledGraph) -> Result<BTreeSet<(i64, Corolla)>> {
    fn rec(blocks: Vec<Block>, sign: i64, out: &mut BTreeSet<(i64, Corolla)>) -> Result<()> {
        if blocks.len() == 1 {
            let (s, c) = normalize_final(&blocks[0])?;
            out.insert((sign * s, c));
            return Ok(());
        }
        let pairs = contractible_pairs(&blocks);
        if pairs.is_empty() {
            return Err(Error::internal("stuck reduction state"));
        }
        for (i, j) in pairs {
            let mut next = blocks.clone();
            let s = contract(&mut next, i, j)?;
            rec(next, sign * s, out)?;
        }
        Ok(())
    }
    let mut out = BTreeSet::new();
    rec(blocks_from(g), 1, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_leveled_graphs;

    #[test]
    fn single_vertex_is_positive() {
        let g = LeveledGraph::single_vertex(Corolla::new(3, 2, 1).unwrap());
        assert_eq!(evaluate_graph_sign(&g).unwrap(), (1, Corolla::new(3, 2, 1).unwrap()));
    }

    #[test]
    fn diamond_sign_is_positive() {
        let gs = enumerate_leveled_graphs(1, 1, 1, 2).unwrap();
        let d = gs.iter().find(|g| g.n_vertices() == 2).unwrap();
        assert_eq!(evaluate_graph_sign(d).unwrap(), (1, Corolla::new(1, 1, 1).unwrap()));
    }

    #[test]
    fn boundary_matches_request() {
        for (k, l, g) in [(2, 2, 0), (1, 1, 1), (3, 1, 0), (2, 1, 1)] {
            let w = k as i64 + l as i64 + 2 * g as i64 - 2;
            for graph in enumerate_leveled_graphs(k, l, g, w).unwrap() {
                let (_, c) = evaluate_graph_sign(&graph).unwrap();
                assert_eq!(c, Corolla::new(k, l, g).unwrap());
            }
        }
    }

    #[test]
    fn order_independence_small() {
        for (k, l, g) in [(2, 2, 0), (1, 1, 1), (2, 2, 1), (3, 2, 0)] {
            let w = k as i64 + l as i64 + 2 * g as i64 - 2;
            for graph in enumerate_leveled_graphs(k, l, g, w).unwrap() {
                let all = evaluate_all_reduction_orders(&graph).unwrap();
                assert_eq!(all.len(), 1, "graph {:?} is order dependent", graph);
                let unique = all.into_iter().next().unwrap();
                assert_eq!(unique, evaluate_graph_sign(&graph).unwrap());
            }
        }
    }

    #[test]
    fn identity_vertices_rejected_publicly() {
        let g = LeveledGraph::single_vertex(Corolla::IDENTITY);
        assert!(evaluate_graph_sign(&g).is_err());
        assert!(graph_sign_allow_identities(&g).is_ok());
    }
}
