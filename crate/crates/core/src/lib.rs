//! Exact-arithmetic computer algebra for homotopy involutive Lie bialgebras:
//! graded linear algebra over the rationals, contractions and symmetric
//! homotopies, the suspension sign calculus, graph enumeration, homotopy
//! transfer, and the infinity-morphism calculus with obstruction theory.

pub mod complex;
pub mod corolla;
pub mod delta;
pub mod error;
pub mod eval;
pub mod gen;
pub mod gmap;
pub mod grading;
pub mod graph;
pub mod homotopy;
pub mod ibl;
pub mod morphism;
pub mod perm;
pub mod rational;
pub mod sign;
pub mod transfer;
pub mod solve;

pub use complex::{homology_contraction, validate_contraction, ChainComplex, Contraction};
pub use corolla::{compose_r, Corolla, SuspensionElement};
pub use delta::{delta_one_one, delta_terms, SplitTerm};
pub use error::{Error, Result};
pub use gmap::GradedMap;
pub use grading::{BasisIndex, GradedSpace, MultiIndex};
pub use graph::{
    canonical_wiring, enumerate_leveled_graphs, enumerate_two_level, LeveledGraph, PortRef,
    RowConstraint, TwoLevelTerm, WiredGraph, WiredVertex,
};
pub use ibl::{convolution_star, is_skew, make_ibl_structure, skew_symmetrize, verify_maurer_cartan, CorollaMap, IBLStructure, RelationReport, SkewMode};
pub use morphism::{
    check_infinity_morphism, compose_infinity, extend_to_acyclic, homology_inverse,
    invert_infinity, obstruction_step, solve_hom_equation, transport_structure,
    InfinityMorphism,
};
pub use transfer::{eval_hhi, eval_phh, eval_phi, infinity_in, infinity_proj, transfer};
pub use homotopy::{apply_symmetric_homotopy, symmetric_homotopy};
pub use perm::{inverse_shuffles, koszul_sign, shuffles, Permutation, Shuffle};
pub use rational::Rational;
pub use sign::{evaluate_all_reduction_orders, evaluate_graph_sign};
pub use solve::{kernel_basis, solve_preimage};
