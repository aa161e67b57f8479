//! Engine against the dense linear algebra oracle on seeded random inputs.

mod common;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relhom::homology::ext;
use relhom::module::{kernel, ModuleMap};
use relhom::vector::Space;
use relhom::{FreeModule, GradedRing, Poly, PolyRing, Presentation};
use relhom_oracle as oracle;

const TOP: i32 = 6;
const EXT_LO: i32 = -8;

struct Instance {
    ring: Arc<GradedRing>,
    oring: oracle::Ring,
    module: Presentation,
    omodule: oracle::Module,
    label: String,
}

fn random_poly(rng: &mut ChaCha8Rng, p: &PolyRing, deg: i32) -> Poly {
    common::random::poly(rng, p, deg)
}

fn instance(seed: u64) -> Instance {
    let mut rng = common::random::rng(seed);
    let (ring, ideal) = common::random::ring(&mut rng);
    let oring = oracle::Ring::from_relhom(ring.poly(), &ideal);
    let module = common::random::module(&mut rng, &ring, 3, 3);
    let omodule = oracle::Module::from_relhom(&module);
    Instance { label: format!("seed {seed}: {} over {}", module.display(), ring.key()), ring, oring, module, omodule }
}

fn engine_hf(m: &Presentation, lo: i32, hi: i32) -> Vec<usize> {
    m.hilbert_range(lo, hi).unwrap().into_iter().map(|v| v as usize).collect()
}

fn oracle_hf(r: &oracle::Ring, m: &oracle::Module, lo: i32, hi: i32) -> Vec<usize> {
    (lo..=hi).map(|d| m.hilbert(r, d)).collect()
}

const SEEDS: std::ops::Range<u64> = 0..24;

#[test]
fn hilbert_functions_agree() {
    for seed in SEEDS {
        let inst = instance(seed);
        let r = Presentation::free(inst.ring.clone(), vec![0]);
        let or = oracle::Module { twists: vec![0], relations: vec![] };
        assert_eq!(engine_hf(&r, 0, TOP), oracle_hf(&inst.oring, &or, 0, TOP), "{}", inst.label);
        assert_eq!(engine_hf(&inst.module, 0, TOP), oracle_hf(&inst.oring, &inst.omodule, 0, TOP), "{}", inst.label);
    }
}

#[test]
fn membership_agrees() {
    for seed in SEEDS {
        let inst = instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let space = inst.module.space();
        let twists = inst.module.cover().twists.clone();
        for deg in 1..=TOP {
            // a combination of relations, and a random vector
            let mut comb = vec![inst.ring.poly().zero(); twists.len()];
            for rel in inst.module.relations() {
                let comps = space.components(rel);
                let rd = inst.module.space().term_degree(rel.lead().unwrap());
                if rd > deg {
                    continue;
                }
                let c = random_poly(&mut rng, inst.ring.poly(), deg - rd);
                for (acc, f) in comb.iter_mut().zip(&comps) {
                    *acc = inst.ring.poly().add(acc, &inst.ring.poly().mul(&c, f));
                }
            }
            let random: Vec<Poly> =
                twists.iter().map(|t| random_poly(&mut rng, inst.ring.poly(), deg - t)).collect();
            for comps in [comb, random] {
                let v = space.from_components(&comps);
                let ov: oracle::Vector = comps.iter().map(oracle::from_poly).collect();
                let engine = inst.module.contains(&v).unwrap();
                assert_eq!(engine, inst.omodule.is_relation(&inst.oring, &ov), "{} degree {deg}", inst.label);
            }
        }
    }
}

#[test]
fn kernel_of_multiplication_agrees() {
    for seed in SEEDS {
        let inst = instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1234);
        let poly = inst.ring.poly();
        let l = random_poly(&mut rng, poly, 1);
        // multiplication by l: M(-1) -> M
        let shifted: Vec<i32> = inst.module.cover().twists.iter().map(|t| t + 1).collect();
        let src_cover = FreeModule::new(shifted.clone());
        let src_rel: Vec<_> = inst
            .module
            .relations()
            .iter()
            .map(|r| Space::new(poly, &src_cover).from_components(&inst.module.space().components(r)))
            .collect();
        let src = Arc::new(Presentation::new(inst.ring.clone(), src_cover, src_rel).unwrap());
        let tgt = Arc::new(inst.module.clone());
        let rank = shifted.len();
        let cols: Vec<_> = (0..rank)
            .map(|j| {
                let mut comps = vec![poly.zero(); rank];
                comps[j] = l.clone();
                inst.module.space().from_components(&comps)
            })
            .collect();
        let images: Vec<oracle::Vector> = (0..rank)
            .map(|j| (0..rank).map(|k| if k == j { oracle::from_poly(&l) } else { Default::default() }).collect())
            .collect();
        let f = ModuleMap::new(src.clone(), tgt, cols).unwrap();
        let (ker, _) = kernel(&f).unwrap();
        let osrc = oracle::Module { twists: shifted, relations: inst.omodule.relations.clone() };
        let oracle_dims: Vec<usize> =
            (0..=TOP).map(|d| oracle::kernel_dim(&inst.oring, &osrc, &inst.omodule, &images, d)).collect();
        assert_eq!(engine_hf(&ker, 0, TOP), oracle_dims, "{} times {}", inst.label, poly.display(&l));
    }
}

#[test]
fn ext_into_ring_agrees() {
    let mut compared = 0;
    for seed in SEEDS {
        let inst = instance(seed);
        let top_i = if inst.ring.is_polynomial_ring() { inst.ring.nvars() } else { 2 };
        let res = oracle::resolve(&inst.oring, &inst.omodule, top_i + 1, 14);
        if !res.settled(top_i + 1, 3) {
            eprintln!("{}: oracle resolution not settled, skipped", inst.label);
            continue;
        }
        compared += 1;
        let r = Presentation::free(inst.ring.clone(), vec![0]);
        let or = oracle::Module { twists: vec![0], relations: vec![] };
        for i in 0..=top_i {
            let e = ext(i, &inst.module, &r).unwrap();
            let od: Vec<usize> = (EXT_LO..=TOP).map(|d| oracle::ext_dim(&inst.oring, &res, &or, i, d)).collect();
            assert_eq!(engine_hf(&e, EXT_LO, TOP), od, "Ext^{i} for {}", inst.label);
        }
    }
    assert!(compared >= 20, "only {compared} instances compared");
}

#[test]
fn betti_numbers_agree() {
    for seed in SEEDS {
        let inst = instance(seed);
        let res = oracle::resolve(&inst.oring, &inst.omodule, 3, 12);
        if !res.settled(3, 3) {
            continue;
        }
        let engine = relhom::homology::resolve(&inst.module, 3).unwrap();
        let mut et = engine.betti_table();
        et.resize(4, Default::default());
        for (i, tw) in res.frees.iter().enumerate().take(4) {
            let mut row = std::collections::BTreeMap::new();
            for &t in tw {
                *row.entry(t).or_insert(0usize) += 1;
            }
            assert_eq!(et[i], row, "F_{i} of {}", inst.label);
        }
    }
}

/// Oracle values frozen for fixed instances.
#[test]
fn frozen_oracle_values() {
    // k over F_p[x,y,z]: Ext^i(k, S) in degrees -4..=0
    let r = common::ring(&["x", "y", "z"], &[]);
    let k = common::cyclic(&r, &["x", "y", "z"]);
    let or = oracle::Ring::from_relhom(r.poly(), &[]);
    let ok = oracle::Module::from_relhom(&k);
    let s = oracle::Module { twists: vec![0], relations: vec![] };
    let res = oracle::resolve(&or, &ok, 4, 8);
    let table: Vec<Vec<usize>> =
        (0..=3).map(|i| (-4..=0).map(|d| oracle::ext_dim(&or, &res, &s, i, d)).collect()).collect();
    assert_eq!(table, vec![vec![0; 5], vec![0; 5], vec![0; 5], vec![0, 1, 0, 0, 0]]);
    let sp = Presentation::free(r.clone(), vec![0]);
    for (i, row) in table.iter().enumerate() {
        assert_eq!(&engine_hf(&ext(i, &k, &sp).unwrap(), -4, 0), row);
    }

    // k over F_p[x]/(x^2): Hom(k, R) = k(-1), Ext^1(k, R) = 0
    let r = common::ring(&["x"], &["x^2"]);
    let k = common::cyclic(&r, &["x"]);
    let or = oracle::Ring::from_relhom(r.poly(), r.ideal_generators());
    let ok = oracle::Module::from_relhom(&k);
    let res = oracle::resolve(&or, &ok, 3, 8);
    let table: Vec<Vec<usize>> =
        (0..=2).map(|i| (-3..=3).map(|d| oracle::ext_dim(&or, &res, &s, i, d)).collect()).collect();
    assert_eq!(table, vec![vec![0, 0, 0, 0, 1, 0, 0], vec![0; 7], vec![0; 7]]);
    let rp = Presentation::free(r.clone(), vec![0]);
    for (i, row) in table.iter().enumerate() {
        assert_eq!(&engine_hf(&ext(i, &k, &rp).unwrap(), -3, 3), row);
    }
}
