//! Decomposition maps of the suspension coproperad: the two-vertex
//! infinitesimal coproduct with its closed-form sign, and the full graph
//! expansion with signs from the sign oracle.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::corolla::{compose_r, Corolla};
use crate::error::Result;
use crate::graph::{enumerate_leveled_graphs, LeveledGraph};
use crate::perm::{inverse_shuffles, shuffles, Shuffle};
use crate::sign::evaluate_graph_sign;

/// One term of `Δ_{(1,1)}(c)`: the coefficient `ε·sgn(σ)·sgn(τ)` together
/// with the split data. `sigma` is an inverse `(k'-r, k'')`-shuffle acting on
/// inputs, `tau` a `(l', l''-r)`-shuffle acting on outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTerm {
    pub sign: i64,
    pub bottom: Corolla,
    pub top: Corolla,
    pub sigma: Shuffle,
    pub tau: Shuffle,
    pub r: usize,
}

/// The infinitesimal coproduct on a basis corolla: all `(r, splits, σ, τ)`
/// with both factors nontrivial. Empty below weight 2.
pub fn delta_one_one(c: Corolla) -> Vec<SplitTerm> {
    let mut out = Vec::new();
    if c.weight() < 2 {
        return out;
    }
    for r in 1..=c.g + 1 {
        let g_split = c.g + 1 - r; // g' + g''
        for kp in r..=c.k + r - 1 {
            let kpp = c.k + r - kp;
            if kpp < 1 {
                continue;
            }
            for lpp in r..=c.l + r - 1 {
                let lp = c.l + r - lpp;
                if lp < 1 {
                    continue;
                }
                for gp in 0..=g_split {
                    let gpp = g_split - gp;
                    let bottom = Corolla { k: kp, l: lp, g: gp };
                    let top = Corolla { k: kpp, l: lpp, g: gpp };
                    if bottom.weight() < 1 || top.weight() < 1 {
                        continue;
                    }
                    let (eps, merged) = compose_r(bottom, top, r).expect("split is composable");
                    debug_assert_eq!(merged, c);
                    for sigma in inverse_shuffles(kp - r, kpp) {
                        for tau in shuffles(lp, lpp - r) {
                            out.push(SplitTerm {
                                sign: eps * sigma.sign() * tau.sign(),
                                bottom,
                                top,
                                sigma: sigma.clone(),
                                tau: tau.clone(),
                                r,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// The canonical two-vertex graph realizing a split term: external input
/// label `σ⁻¹(i)` sits on the composite's slot i (bottom-free block then top
/// block), and output slot j carries label `τ(j)`.
pub fn two_vertex_graph(term: &SplitTerm) -> Result<LeveledGraph> {
    let kp = term.bottom.k;
    let lp = term.bottom.l;
    let r = term.r;
    let k = term.bottom.k + term.top.k - r;
    let l = term.bottom.l + term.top.l - r;
    let sigma_inv = term.sigma.perm.inverse();
    let bottom_in: std::collections::BTreeSet<usize> =
        (1..=kp - r).map(|i| sigma_inv.apply(i - 1) + 1).collect();
    let top_in: std::collections::BTreeSet<usize> =
        (kp - r + 1..=k).map(|i| sigma_inv.apply(i - 1) + 1).collect();
    let bottom_out: std::collections::BTreeSet<usize> =
        (1..=lp).map(|j| term.tau.perm.apply(j - 1) + 1).collect();
    let top_out: std::collections::BTreeSet<usize> =
        (lp + 1..=l).map(|j| term.tau.perm.apply(j - 1) + 1).collect();
    LeveledGraph::new(
        vec![term.bottom, term.top],
        [((1usize, 0usize), r)].into_iter().collect(),
        vec![bottom_in, top_in],
        vec![bottom_out, top_out],
    )
}

fn graph_cache() -> &'static Mutex<BTreeMap<Corolla, Arc<Vec<LeveledGraph>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<Corolla, Arc<Vec<LeveledGraph>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// All canonical leveled graphs composing to `c` (memoized per corolla).
pub fn leveled_graphs_for(c: Corolla) -> Result<Arc<Vec<LeveledGraph>>> {
    if let Some(hit) = graph_cache().lock().unwrap().get(&c) {
        return Ok(hit.clone());
    }
    let graphs = enumerate_leveled_graphs(c.k, c.l, c.g, c.weight().max(1))?;
    let arc = Arc::new(graphs);
    graph_cache().lock().unwrap().insert(c, arc.clone());
    Ok(arc)
}

/// The full decomposition of `c` into canonical leveled graphs with at most
/// `max_vertices` nontrivial vertices, each with its sign-oracle coefficient.
pub fn delta_terms(c: Corolla, max_vertices: usize) -> Result<Vec<(i64, LeveledGraph)>> {
    let graphs = leveled_graphs_for(c)?;
    let mut out = Vec::new();
    for g in graphs.iter() {
        if g.n_vertices() > max_vertices {
            continue;
        }
        let (s, boundary) = evaluate_graph_sign(g)?;
        debug_assert_eq!(boundary, c);
        out.push((s, g.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_primitive() {
        assert!(delta_one_one(Corolla::IDENTITY).is_empty());
        assert!(delta_one_one(Corolla::new(2, 1, 0).unwrap()).is_empty());
    }

    #[test]
    fn diamond_split() {
        let terms = delta_one_one(Corolla::new(1, 1, 1).unwrap());
        assert_eq!(terms.len(), 1);
        let t = &terms[0];
        assert_eq!(t.bottom, Corolla::new(2, 1, 0).unwrap());
        assert_eq!(t.top, Corolla::new(1, 2, 0).unwrap());
        assert_eq!(t.r, 2);
        assert_eq!(t.sign, 1);
        assert!(t.sigma.perm.is_identity());
        assert!(t.tau.perm.is_identity());
    }

    #[test]
    fn two_two_split_counts() {
        // (2,2,0): 4 terms bottom (2,1,0)/top (1,2,0) over 2x2 shuffles and
        // 1 term bottom (1,2,0)/top (2,1,0); the split with an identity
        // factor is excluded.
        let terms = delta_one_one(Corolla::new(2, 2, 0).unwrap());
        let b21 = terms
            .iter()
            .filter(|t| t.bottom == Corolla::new(2, 1, 0).unwrap())
            .count();
        let b12 = terms
            .iter()
            .filter(|t| t.bottom == Corolla::new(1, 2, 0).unwrap())
            .count();
        assert_eq!(b21, 4);
        assert_eq!(b12, 1);
        assert_eq!(terms.len(), 5);
    }

    #[test]
    fn term_graphs_biject_with_two_vertex_delta_terms() {
        for c in Corolla::all_up_to_weight(4) {
            let formula: Vec<LeveledGraph> = delta_one_one(c)
                .iter()
                .map(|t| two_vertex_graph(t).unwrap())
                .collect();
            let graphs: Vec<LeveledGraph> = delta_terms(c, 2)
                .unwrap()
                .into_iter()
                .filter(|(_, g)| g.n_vertices() == 2)
                .map(|(_, g)| g)
                .collect();
            let mut a = formula.clone();
            a.sort();
            let mut b = graphs.clone();
            b.sort();
            assert_eq!(a, b, "term sets differ at {:?}", c);
            // distinct shuffle data gives distinct graphs
            let mut dedup = a.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), a.len());
        }
    }

    #[test]
    fn single_vertex_term() {
        let c = Corolla::new(2, 1, 1).unwrap();
        let terms = delta_terms(c, 1).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, 1);
        assert_eq!(terms[0].1, LeveledGraph::single_vertex(c));
    }

    #[test]
    fn genus_line_terms() {
        let terms = delta_terms(Corolla::new(1, 1, 1).unwrap(), 2).unwrap();
        assert_eq!(terms.len(), 2);
        for (s, g) in &terms {
            if g.n_vertices() == 2 {
                assert_eq!(*s, 1);
            }
        }
    }
}
