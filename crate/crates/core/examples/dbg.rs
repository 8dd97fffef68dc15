use ibl_core::gen::*;
use ibl_core::ibl::SkewMode;
use ibl_core::rational::int;
use ibl_core::*;
use std::collections::BTreeMap;

// measure: right_action / left_action of a single-op structure against the
// identity isotopy; the result must be exactly st-op(c) with coefficient +1.
fn main() {
    let mut r = rng(7);
    // a generic complex and random skew op per corolla shape
    for c in Corolla::all_up_to_weight(3) {
        if c.k + c.l > 5 {
            continue;
        }
        let a = random_complex(&mut r, 5);
        let space = a.space().clone();
        let basis = space.basis();
        let mut raw = GradedMap::zero(space.clone(), space.clone(), c.k, c.l, c.weight() - 1);
        'fill: for _ in 0..400 {
            use rand::prelude::*;
            let ins: Vec<BasisIndex> = (0..c.k).map(|_| *basis.choose(&mut r).unwrap()).collect();
            let outs: Vec<BasisIndex> = (0..c.l).map(|_| *basis.choose(&mut r).unwrap()).collect();
            let deg: i64 = outs.iter().map(|b| b.degree).sum::<i64>()
                - ins.iter().map(|b| b.degree).sum::<i64>();
            if deg == c.weight() - 1 {
                raw.add_entry(ins, outs, int(1)).unwrap();
                break 'fill;
            }
        }
        let skew = ibl::skew_symmetrize(&raw).unwrap();
        if skew.is_zero() {
            println!("corolla ({},{},{}): no sample found", c.k, c.l, c.g);
            continue;
        }
        // bypass chain-map requirements: zero differential
        let complex = ChainComplex::zero_differential(space.clone());
        let s = make_ibl_structure(&complex, [(c, skew.clone())], 3, SkewMode::Strict).unwrap();
        let idm = InfinityMorphism::identity(&s).unwrap();
        let comps: BTreeMap<Corolla, GradedMap> = idm.comps().clone();
        let right = ibl_core::morphism::right_action_public(c, &comps, &s, &space, &space).unwrap();
        let left = ibl_core::morphism::left_action_public(c, &comps, &s, &space, &space).unwrap();
        let rsign = if right == skew {
            "+1"
        } else if right == skew.negate() {
            "-1"
        } else {
            "??"
        };
        let lsign = if left == skew {
            "+1"
        } else if left == skew.negate() {
            "-1"
        } else {
            "??"
        };
        println!("corolla ({},{},{}) w={}: right {} left {}", c.k, c.l, c.g, c.weight(), rsign, lsign);
    }
}
