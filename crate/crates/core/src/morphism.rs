//! Infinity-morphisms between homotopy involutive Lie bialgebra structures:
//! the defining relation as an exact residual check, composition, inversion
//! of infinity-isomorphisms, obstruction theory, and extension into acyclic
//! targets.

use std::collections::BTreeMap;

use crate::complex::{homology_contraction, ChainComplex, Contraction};
use crate::corolla::Corolla;
use crate::delta::leveled_graphs_for;
use crate::error::{Error, Result};
use crate::eval::{eval_labeled_graph, Ambient, Cap, EvalConfig};
use crate::gmap::GradedMap;
use crate::graph::{enumerate_two_level, LeveledGraph, RowConstraint, TwoLevelTerm};
use crate::grading::GradedSpace;
use crate::ibl::{is_skew, skew_symmetrize, IBLStructure, RelationReport};
use crate::rational::{int, neg_one_pow};
use crate::sign::{evaluate_graph_sign, graph_sign_allow_identities};
use crate::solve::solve_preimage;

/// A weight-truncated collection `f_{k,l,g} : A^{⊗k} → B^{⊗l}` of degree
/// `k+l+2g-2`, skew on both sides, whose identity-corolla component is a
/// chain map.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityMorphism {
    source: IBLStructure,
    target: IBLStructure,
    comps: BTreeMap<Corolla, GradedMap>,
    max_weight: i64,
}

impl InfinityMorphism {
    pub fn new(
        source: IBLStructure,
        target: IBLStructure,
        comps: BTreeMap<Corolla, GradedMap>,
        max_weight: i64,
    ) -> Result<Self> {
        let a = source.complex();
        let b = target.complex();
        let f0 = comps
            .get(&Corolla::IDENTITY)
            .ok_or_else(|| Error::validation("morphism needs its weight-0 component f₀"))?;
        if f0.degree() != 0 {
            return Err(Error::degree("f₀ must have degree 0"));
        }
        if !ChainComplex::hom_differential(a, b, f0)?.is_zero() {
            return Err(Error::validation("f₀ is not a chain map"));
        }
        for (c, m) in &comps {
            if c.weight() > max_weight {
                return Err(Error::validation(format!(
                    "component ({},{},{}) exceeds max weight {max_weight}",
                    c.k, c.l, c.g
                )));
            }
            if m.in_arity() != c.k || m.out_arity() != c.l {
                return Err(Error::arity(format!(
                    "component ({},{},{}) has arity ({},{})",
                    c.k,
                    c.l,
                    c.g,
                    m.in_arity(),
                    m.out_arity()
                )));
            }
            if m.degree() != c.weight() {
                return Err(Error::degree(format!(
                    "component ({},{},{}) must have degree {}, got {}",
                    c.k,
                    c.l,
                    c.g,
                    c.weight(),
                    m.degree()
                )));
            }
            if m.source() != a.space() || m.target() != b.space() {
                return Err(Error::space("component spaces do not match the structures"));
            }
            if !is_skew(m)? {
                return Err(Error::validation(format!(
                    "component ({},{},{}) violates sgn⊗sgn skew-symmetry",
                    c.k, c.l, c.g
                )));
            }
        }
        Ok(InfinityMorphism {
            source,
            target,
            comps,
            max_weight,
        })
    }

    pub fn identity(s: &IBLStructure) -> Result<Self> {
        let id = GradedMap::identity(s.complex().space(), 1);
        InfinityMorphism::new(
            s.clone(),
            s.clone(),
            [(Corolla::IDENTITY, id)].into_iter().collect(),
            s.max_weight(),
        )
    }

    pub fn source(&self) -> &IBLStructure {
        &self.source
    }
    pub fn target(&self) -> &IBLStructure {
        &self.target
    }
    pub fn comps(&self) -> &BTreeMap<Corolla, GradedMap> {
        &self.comps
    }
    pub fn comp(&self, c: &Corolla) -> Option<&GradedMap> {
        self.comps.get(c)
    }
    pub fn weight_zero(&self) -> &GradedMap {
        &self.comps[&Corolla::IDENTITY]
    }
    pub fn max_weight(&self) -> i64 {
        self.max_weight
    }

    pub fn is_isotopy(&self) -> bool {
        *self.weight_zero() == GradedMap::identity(self.source.complex().space(), 1)
    }
}

/// Component lookup used by the action sums: a morphism-style family between
/// two spaces (the identity corolla resolves to the weight-0 component).
struct CompFamily<'a> {
    comps: &'a BTreeMap<Corolla, GradedMap>,
}

impl<'a> CompFamily<'a> {
    fn get(&self, c: &Corolla) -> Option<&GradedMap> {
        self.comps.get(c)
    }
}

/// `f ▷ α` at one corolla: one nontrivial α-vertex on top, f on every bottom
/// vertex (identity corollas through f₀), identity strands elsewhere on top.
fn right_action(
    c: Corolla,
    family: &CompFamily,
    alpha: &IBLStructure,
    a_space: &GradedSpace,
    b_space: &GradedSpace,
) -> Result<GradedMap> {
    action_sum(c, family, alpha, a_space, b_space, ActionSide::Right)
}

/// `β ◁ f` at one corolla: one nontrivial β-vertex at the bottom, f on every
/// top vertex (identities through f₀), identity strands elsewhere below.
fn left_action(
    c: Corolla,
    family: &CompFamily,
    beta: &IBLStructure,
    a_space: &GradedSpace,
    b_space: &GradedSpace,
) -> Result<GradedMap> {
    action_sum(c, family, beta, a_space, b_space, ActionSide::Left)
}

#[derive(Clone, Copy, PartialEq)]
enum ActionSide {
    Right,
    Left,
}

fn action_sum(
    c: Corolla,
    family: &CompFamily,
    structure: &IBLStructure,
    a_space: &GradedSpace,
    b_space: &GradedSpace,
    side: ActionSide,
) -> Result<GradedMap> {
    let ambient = Ambient::new(&[a_space, b_space]);
    let inc_a = ambient.inclusion(0)?;
    let id_a = ambient.embed(0, 0, &GradedMap::identity(a_space, 1))?;
    let id_b = ambient.embed(1, 1, &GradedMap::identity(b_space, 1))?;
    let mut total = GradedMap::zero(
        a_space.clone(),
        b_space.clone(),
        c.k,
        c.l,
        c.weight() - 1,
    );
    let terms = match side {
        ActionSide::Right => enumerate_two_level(c, RowConstraint::Free, RowConstraint::SingleNontrivial)?,
        ActionSide::Left => enumerate_two_level(c, RowConstraint::SingleNontrivial, RowConstraint::Free)?,
    };
    'terms: for TwoLevelTerm {
        graph,
        bottom_count,
    } in terms
    {
        let mut labels = Vec::with_capacity(graph.n_vertices());
        for (v, cor) in graph.vertices().iter().enumerate() {
            let is_bottom = v < bottom_count;
            let lab = match (side, is_bottom, cor.is_identity()) {
                // f-row slots (bottom for ▷, top for ◁): f on everything,
                // identity corollas through f₀.
                (ActionSide::Right, true, _) | (ActionSide::Left, false, _) => {
                    match family.get(cor) {
                        Some(m) => ambient.embed(0, 1, m)?,
                        None => continue 'terms,
                    }
                }
                // structure row, nontrivial vertex: α on top / β at bottom.
                (ActionSide::Right, false, false) => match structure.op(cor) {
                    Some(m) => ambient.embed(0, 0, m)?,
                    None => continue 'terms,
                },
                (ActionSide::Left, true, false) => match structure.op(cor) {
                    Some(m) => ambient.embed(1, 1, m)?,
                    None => continue 'terms,
                },
                // structural identity strands on the single-vertex row.
                (ActionSide::Right, false, true) => id_a.clone(),
                (ActionSide::Left, true, true) => id_b.clone(),
            };
            labels.push(lab);
        }
        let (sign, _) = graph_sign_allow_identities(&graph)?;
        let cfg = EvalConfig {
            top: Cap::Power(&inc_a),
            bottom: Cap::None,
            between: None,
            strand_space: ambient.space(),
        };
        let term = eval_labeled_graph(&graph, &labels, &cfg)?;
        let term = ambient.project(0, 1, &term)?;
        total = total.add(&term.scale(&int(sign)))?;
    }
    Ok(total)
}

/// Test hooks exposing the raw action sums.
#[doc(hidden)]
pub fn right_action_public(
    c: Corolla,
    comps: &BTreeMap<Corolla, GradedMap>,
    alpha: &IBLStructure,
    a_space: &GradedSpace,
    b_space: &GradedSpace,
) -> Result<GradedMap> {
    right_action(c, &CompFamily { comps }, alpha, a_space, b_space)
}

#[doc(hidden)]
pub fn left_action_public(
    c: Corolla,
    comps: &BTreeMap<Corolla, GradedMap>,
    beta: &IBLStructure,
    a_space: &GradedSpace,
    b_space: &GradedSpace,
) -> Result<GradedMap> {
    left_action(c, &CompFamily { comps }, beta, a_space, b_space)
}

fn morphism_rhs(
    c: Corolla,
    comps: &BTreeMap<Corolla, GradedMap>,
    alpha: &IBLStructure,
    beta: &IBLStructure,
) -> Result<GradedMap> {
    let family = CompFamily { comps };
    let a_space = alpha.complex().space();
    let b_space = beta.complex().space();
    let r = right_action(c, &family, alpha, a_space, b_space)?;
    let l = left_action(c, &family, beta, a_space, b_space)?;
    r.sub(&l)
}

/// Residuals of `∂(f) = f ▷ α − β ◁ f`, weight by weight; the weight-0
/// residual is the chain-map defect of f₀.
pub fn check_infinity_morphism(f: &InfinityMorphism) -> Result<RelationReport> {
    let a = f.source().complex();
    let b = f.target().complex();
    let mut residuals = BTreeMap::new();
    residuals.insert(
        Corolla::IDENTITY,
        ChainComplex::hom_differential(a, b, f.weight_zero())?,
    );
    for c in Corolla::all_up_to_weight(f.max_weight()) {
        let df = match f.comp(&c) {
            Some(m) => ChainComplex::hom_differential(a, b, m)?,
            None => GradedMap::zero(
                a.space().clone(),
                b.space().clone(),
                c.k,
                c.l,
                c.weight() - 1,
            ),
        };
        let rhs = morphism_rhs(c, f.comps(), f.source(), f.target())?;
        residuals.insert(c, df.sub(&rhs)?);
    }
    Ok(RelationReport::new(residuals, f.max_weight()))
}

/// `g ⊚ f`: both rows of the two-level decomposition free, g's below f's,
/// identity corollas through the weight-0 components.
pub fn compose_infinity(
    g: &InfinityMorphism,
    f: &InfinityMorphism,
    max_weight: i64,
) -> Result<InfinityMorphism> {
    if f.target().complex() != g.source().complex() {
        return Err(Error::space("compose: target of f must be the source of g"));
    }
    let a_space = f.source().complex().space();
    let b_space = f.target().complex().space();
    let c_space = g.target().complex().space();
    let ambient = Ambient::new(&[a_space, b_space, c_space]);
    let inc_a = ambient.inclusion(0)?;
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(
        Corolla::IDENTITY,
        g.weight_zero().compose(f.weight_zero())?,
    );
    for c in Corolla::all_up_to_weight(max_weight) {
        let mut total = GradedMap::zero(
            a_space.clone(),
            c_space.clone(),
            c.k,
            c.l,
            c.weight(),
        );
        'terms: for TwoLevelTerm {
            graph,
            bottom_count,
        } in enumerate_two_level(c, RowConstraint::Free, RowConstraint::Free)?
        {
            let mut labels = Vec::with_capacity(graph.n_vertices());
            for (v, cor) in graph.vertices().iter().enumerate() {
                let lab = if v < bottom_count {
                    match g.comp(cor) {
                        Some(m) => ambient.embed(1, 2, m)?,
                        None => continue 'terms,
                    }
                } else {
                    match f.comp(cor) {
                        Some(m) => ambient.embed(0, 1, m)?,
                        None => continue 'terms,
                    }
                };
                labels.push(lab);
            }
            let (sign, _) = graph_sign_allow_identities(&graph)?;
            let cfg = EvalConfig {
                top: Cap::Power(&inc_a),
                bottom: Cap::None,
                between: None,
                strand_space: ambient.space(),
            };
            let term = eval_labeled_graph(&graph, &labels, &cfg)?;
            let term = ambient.project(0, 2, &term)?;
            total = total.add(&term.scale(&int(sign)))?;
        }
        if !total.is_zero() {
            comps.insert(c, total);
        }
    }
    InfinityMorphism::new(f.source().clone(), g.target().clone(), comps, max_weight)
}

/// The exact two-sided inverse of an invertible degree-0 chain map.
pub fn invert_chain_iso(f0: &GradedMap) -> Result<GradedMap> {
    let mut inv = GradedMap::zero(
        f0.target().clone(),
        f0.source().clone(),
        1,
        1,
        0,
    );
    for bvec in f0.target().basis() {
        let y = GradedMap::single(
            f0.target().clone(),
            f0.target().clone(),
            vec![],
            vec![bvec],
            crate::rational::one(),
        )?;
        let x = solve_preimage(f0, &y)?
            .ok_or_else(|| Error::validation("f₀ is singular: no inverse exists"))?;
        for (_, o, cf) in x.entries() {
            inv.add_entry(vec![bvec], vec![o[0]], cf.clone())?;
        }
    }
    let id_a = GradedMap::identity(f0.source(), 1);
    let id_b = GradedMap::identity(f0.target(), 1);
    if inv.compose(f0)? != id_a || f0.compose(&inv)? != id_b {
        return Err(Error::validation("f₀ is singular: no two-sided inverse"));
    }
    Ok(inv)
}

/// Inverse of an infinity-isomorphism: graphs with all vertices labeled by f,
/// every edge and leaf composed with f₀⁻¹, coefficient
/// `(-1)^{#vertices} · sign(graph)`, one term per unleveled canonical graph.
pub fn invert_infinity(f: &InfinityMorphism, max_weight: i64) -> Result<InfinityMorphism> {
    let f0_inv = invert_chain_iso(f.weight_zero())?;
    let a_space = f.source().complex().space();
    // Folded labels (f₀⁻¹)^{⊗l} ∘ f_c live in End of the source space.
    let mut folded: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    for (c, m) in f.comps() {
        if c.is_identity() {
            continue;
        }
        let pow = f0_inv.tensor_power(c.l)?;
        folded.insert(*c, pow.compose(m)?);
    }
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(Corolla::IDENTITY, f0_inv.clone());
    for c in Corolla::all_up_to_weight(max_weight) {
        let mut total = GradedMap::zero(
            f.target().complex().space().clone(),
            a_space.clone(),
            c.k,
            c.l,
            c.weight(),
        );
        // one representative per unleveled graph
        let mut seen = std::collections::BTreeSet::new();
        'graphs: for g in leveled_graphs_for(c)?.iter() {
            let key = g.unleveled_canonical();
            if !seen.insert(key.clone()) {
                continue;
            }
            let mut labels = Vec::with_capacity(key.n_vertices());
            for cor in key.vertices() {
                match folded.get(cor) {
                    Some(m) => labels.push(m.clone()),
                    None => continue 'graphs,
                }
            }
            let (sign, _) = evaluate_graph_sign(&key)?;
            let vertex_sign = neg_one_pow(key.n_vertices() as i64);
            let cfg = EvalConfig {
                top: Cap::Power(&f0_inv),
                bottom: Cap::None,
                between: None,
                strand_space: a_space,
            };
            let term = eval_labeled_graph(&key, &labels, &cfg)?;
            total = total.add(&term.scale(&(int(sign) * vertex_sign)))?;
        }
        if !total.is_zero() {
            comps.insert(c, total);
        }
    }
    InfinityMorphism::new(f.target().clone(), f.source().clone(), comps, max_weight)
}

/// The weight-n obstruction cocycle
/// `f̃_(n) = Σ_{k=1}^n (f_{(≤n-k)} ▷ α_(k) − β_(k) ◁ f_{(≤n-k)})`,
/// asserted to be an exact `∂`-cycle before returning.
pub fn obstruction_step(
    alpha: &IBLStructure,
    beta: &IBLStructure,
    partial: &BTreeMap<Corolla, GradedMap>,
    weight: i64,
) -> Result<BTreeMap<Corolla, GradedMap>> {
    if weight < 1 {
        return Err(Error::argument("obstruction_step needs weight ≥ 1"));
    }
    let a = alpha.complex();
    let b = beta.complex();
    let mut out = BTreeMap::new();
    for c in Corolla::all_of_weight(weight) {
        let tilde = morphism_rhs(c, partial, alpha, beta)?;
        if !ChainComplex::hom_differential(a, b, &tilde)?.is_zero() {
            return Err(Error::validation(format!(
                "obstruction at ({},{},{}) is not a cycle: the partial morphism is inconsistent",
                c.k, c.l, c.g
            )));
        }
        out.insert(c, tilde);
    }
    Ok(out)
}

/// Solves `∂(X) = y` in the hom-complex `Hom(A^{⊗k}, B^{⊗l})` by encoding it
/// as a graded space of basis-index pairs and delegating to the
/// deterministic linear solver.
pub fn solve_hom_equation(
    a: &ChainComplex,
    b: &ChainComplex,
    y: &GradedMap,
) -> Result<Option<GradedMap>> {
    let k = y.in_arity();
    let l = y.out_arity();
    let a_basis = a.space().tensor_basis(k);
    let b_basis = b.space().tensor_basis(l);
    // pair space: basis (x, z) with degree deg(z) - deg(x), ordered lex
    let mut pairs: Vec<(crate::grading::MultiIndex, crate::grading::MultiIndex)> = Vec::new();
    for x in &a_basis {
        for z in &b_basis {
            pairs.push((x.clone(), z.clone()));
        }
    }
    pairs.sort();
    let mut per_degree: BTreeMap<i64, usize> = BTreeMap::new();
    let mut index_of: BTreeMap<(crate::grading::MultiIndex, crate::grading::MultiIndex), crate::grading::BasisIndex> =
        BTreeMap::new();
    let mut by_index: BTreeMap<crate::grading::BasisIndex, (crate::grading::MultiIndex, crate::grading::MultiIndex)> =
        BTreeMap::new();
    for (x, z) in &pairs {
        let deg = crate::grading::multi_degree(z) - crate::grading::multi_degree(x);
        let idx = per_degree.entry(deg).or_insert(0);
        let bi = crate::grading::BasisIndex::new(deg, *idx);
        *idx += 1;
        index_of.insert((x.clone(), z.clone()), bi);
        by_index.insert(bi, (x.clone(), z.clone()));
    }
    let hs = GradedSpace::from_dims(per_degree.iter().map(|(&d, &n)| (d, n)));
    let da = a.tensor_differential(k)?;
    let db = b.tensor_differential(l)?;
    // ∂ E_{x,z} = Σ (db: z→z') c·E_{x,z'} − (-1)^{deg} Σ (da: x'→x) c·E_{x',z}
    let mut boundary = GradedMap::zero(hs.clone(), hs.clone(), 1, 1, -1);
    let mut db_rows: BTreeMap<&crate::grading::MultiIndex, Vec<(&crate::grading::MultiIndex, &crate::rational::Rational)>> =
        BTreeMap::new();
    for (i, o, cf) in db.entries() {
        db_rows.entry(i).or_default().push((o, cf));
    }
    let mut da_cols: BTreeMap<&crate::grading::MultiIndex, Vec<(&crate::grading::MultiIndex, &crate::rational::Rational)>> =
        BTreeMap::new();
    for (i, o, cf) in da.entries() {
        da_cols.entry(o).or_default().push((i, cf));
    }
    for ((x, z), bi) in &index_of {
        if let Some(rows) = db_rows.get(z) {
            for (z2, cf) in rows {
                let target = index_of[&(x.clone(), (*z2).clone())];
                boundary.add_entry(vec![*bi], vec![target], (*cf).clone())?;
            }
        }
        let sgn = neg_one_pow(bi.degree);
        if let Some(cols) = da_cols.get(x) {
            for (x2, cf) in cols {
                let target = index_of[&((*x2).clone(), z.clone())];
                boundary.add_entry(vec![*bi], vec![target], -(&sgn * *cf))?;
            }
        }
    }
    // encode y
    let mut yvec = GradedMap::zero(hs.clone(), hs.clone(), 0, 1, y.degree());
    for (x, z, cf) in y.entries() {
        yvec.add_entry(vec![], vec![index_of[&(x.clone(), z.clone())]], cf.clone())?;
    }
    let Some(sol) = solve_preimage(&boundary, &yvec)? else {
        return Ok(None);
    };
    let mut out = GradedMap::zero(
        a.space().clone(),
        b.space().clone(),
        k,
        l,
        y.degree() + 1,
    );
    for (_, o, cf) in sol.entries() {
        let (x, z) = &by_index[&o[0]];
        out.add_entry(x.clone(), z.clone(), cf.clone())?;
    }
    Ok(Some(out))
}

/// Extends a chain map into an acyclic target to a full infinity-morphism
/// `(A, α) ⇝ (B, 0)` by weightwise obstruction solving.
pub fn extend_to_acyclic(
    f0: &GradedMap,
    alpha: &IBLStructure,
    b_complex: &ChainComplex,
    max_weight: i64,
) -> Result<InfinityMorphism> {
    let retract = homology_contraction(b_complex)?;
    if !retract.small().space().is_zero() {
        return Err(Error::validation("extend_to_acyclic: target complex is not acyclic"));
    }
    let a = alpha.complex();
    if !ChainComplex::hom_differential(a, b_complex, f0)?.is_zero() {
        return Err(Error::validation("extend_to_acyclic: f₀ is not a chain map"));
    }
    let beta = IBLStructure::zero(b_complex.clone(), max_weight);
    let mut comps: BTreeMap<Corolla, GradedMap> = BTreeMap::new();
    comps.insert(Corolla::IDENTITY, f0.clone());
    for n in 1..=max_weight {
        let cycles = obstruction_step(alpha, &beta, &comps, n)?;
        for (c, y) in cycles {
            if y.is_zero() {
                continue;
            }
            let x = solve_hom_equation(a, b_complex, &y)?.ok_or_else(|| {
                Error::internal(
                    "extend_to_acyclic: no preimage despite the cycle check (sign bug)",
                )
            })?;
            let xs = skew_symmetrize(&x)?;
            if ChainComplex::hom_differential(a, b_complex, &xs)? != y {
                return Err(Error::internal(
                    "extend_to_acyclic: skew preimage failed substitution (sign bug)",
                ));
            }
            comps.insert(c, xs);
        }
    }
    InfinityMorphism::new(alpha.clone(), beta, comps, max_weight)
}

/// Transports a structure along an infinity-isotopy (weight-0 component the
/// identity): the unique `β` with `∂(f) = f ▷ α − β ◁ f`, solved weight by
/// weight. Returns the structure together with the isotopy as a morphism.
pub fn transport_structure(
    alpha: &IBLStructure,
    isotopy: &BTreeMap<Corolla, GradedMap>,
    max_weight: i64,
) -> Result<(IBLStructure, InfinityMorphism)> {
    let a = alpha.complex();
    let id = GradedMap::identity(a.space(), 1);
    let mut comps = isotopy.clone();
    match comps.get(&Corolla::IDENTITY) {
        None => {
            comps.insert(Corolla::IDENTITY, id.clone());
        }
        Some(f0) if *f0 == id => {}
        Some(_) => {
            return Err(Error::argument("transport: the isotopy must have f₀ = id"));
        }
    }
    let mut beta = IBLStructure::zero(a.clone(), max_weight);
    let family_comps = comps.clone();
    for n in 1..=max_weight {
        let mut new_ops: Vec<(Corolla, GradedMap)> = Vec::new();
        for c in Corolla::all_of_weight(n) {
            let family = CompFamily {
                comps: &family_comps,
            };
            let right = right_action(c, &family, alpha, a.space(), a.space())?;
            let left_lower = left_action(c, &family, &beta, a.space(), a.space())?;
            let df = match comps.get(&c) {
                Some(m) => ChainComplex::hom_differential(a, a, m)?,
                None => GradedMap::zero(
                    a.space().clone(),
                    a.space().clone(),
                    c.k,
                    c.l,
                    c.weight() - 1,
                ),
            };
            let op = right.sub(&left_lower)?.sub(&df)?;
            if !op.is_zero() {
                new_ops.push((c, op));
            }
        }
        let mut all_ops: Vec<(Corolla, GradedMap)> = beta
            .ops()
            .iter()
            .map(|(c, m)| (*c, m.clone()))
            .collect();
        all_ops.extend(new_ops);
        beta = crate::ibl::make_ibl_structure(a, all_ops, max_weight, crate::ibl::SkewMode::Strict)?;
    }
    let f = InfinityMorphism::new(alpha.clone(), beta.clone(), comps, max_weight)?;
    Ok((beta, f))
}

/// The homology inverse of an infinity-quasi-isomorphism: contract both ends
/// onto homology, invert the induced infinity-isomorphism there, and embed
/// back. The weight-0 component induces the homology inverse of f₀.
pub fn homology_inverse(f: &InfinityMorphism, max_weight: i64) -> Result<InfinityMorphism> {
    let alpha = f.source();
    let beta = f.target();
    let ca = homology_contraction(alpha.complex())?;
    let cb = homology_contraction(beta.complex())?;
    let i_a = crate::transfer::infinity_in(alpha, &ca, max_weight)?;
    let p_b = crate::transfer::infinity_proj(beta, &cb, max_weight)?;
    let down = compose_infinity(&p_b, &compose_infinity(f, &i_a, max_weight)?, max_weight)?;
    let up = invert_infinity(&down, max_weight)?;
    compose_infinity(&i_a, &compose_infinity(&up, &p_b, max_weight)?, max_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::BasisIndex;
    use crate::rational::one;

    fn b(d: i64, i: usize) -> BasisIndex {
        BasisIndex::new(d, i)
    }

    fn abelian(space: GradedSpace, w: i64) -> IBLStructure {
        IBLStructure::zero(ChainComplex::zero_differential(space), w)
    }

    #[test]
    fn identity_morphism_checks_out_on_abelian() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let s = abelian(v, 3);
        let f = InfinityMorphism::identity(&s).unwrap();
        let report = check_infinity_morphism(&f).unwrap();
        assert!(report.is_zero(), "{}", report.summary());
    }

    #[test]
    fn non_chain_map_f0_rejected() {
        let v = GradedSpace::from_dims([(0, 1), (1, 1)]);
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1, 1, -1);
        d.add_entry(vec![b(1, 0)], vec![b(0, 0)], one()).unwrap();
        let a = ChainComplex::new(v.clone(), d).unwrap();
        let sa = IBLStructure::zero(a, 2);
        let sb = abelian(v.clone(), 2);
        // the identity is not a chain map from (V, d) to (V, 0)
        let id = GradedMap::identity(&v, 1);
        let r = InfinityMorphism::new(
            sa,
            sb,
            [(Corolla::IDENTITY, id)].into_iter().collect(),
            2,
        );
        assert!(r.is_err());
    }

    #[test]
    fn obstruction_zero_structures() {
        // α = β = 0 ⇒ every obstruction cocycle vanishes.
        let v = GradedSpace::from_dims([(0, 2), (1, 1)]);
        let s = abelian(v.clone(), 3);
        let f = InfinityMorphism::identity(&s).unwrap();
        for n in 1..=3 {
            let cycles = obstruction_step(&s, &s, f.comps(), n).unwrap();
            assert!(cycles.values().all(|m| m.is_zero()));
        }
    }
}
