//! Quantified properties of the engine on seeded random inputs.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use relhom::groebner::{syzygies, DEFAULT_DEGREE_CAP};
use relhom::homology::{clear_memory_cache, depth, ext, resolve};
use relhom::invariants::{gc_dim, grade, horizontally_linked, rgrade, totally_reflexive};
use relhom::module::{cokernel, direct_sum, hom_module, image, is_stable, kernel, tensor, ModuleMap};
use relhom::relative::{biduality_map, is_c_syzygy, syzygy, transpose, transpose_c};
use relhom::vector::Space;
use relhom::{GradedRing, Presentation, SemidualizingHandle, Value};
use relhom_oracle as oracle;

use common::random;

const D: i32 = 8;

fn hf(m: &Presentation) -> Vec<i64> {
    m.hilbert_range(-4, D).unwrap()
}

fn sum(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn instance(seed: u64) -> (Arc<GradedRing>, Presentation) {
    let mut rng = random::rng(seed);
    let (ring, _) = random::ring(&mut rng);
    let m = random::module(&mut rng, &ring, 3, 2);
    (ring, m)
}

/// A module over the semigroup ring, with the canonical module as dualizer.
fn semigroup_instance(seed: u64) -> (Arc<GradedRing>, Presentation, SemidualizingHandle) {
    let ring = common::semigroup();
    let mut rng = random::rng(seed);
    let m = random::module(&mut rng, &ring, 2, 2);
    let w = SemidualizingHandle::canonical(&ring).unwrap();
    (ring, m, w)
}

/// Multiplication by a random linear form `M(-1) -> M`.
fn multiplication(seed: u64, m: &Presentation) -> ModuleMap {
    let mut rng = random::rng(seed ^ 0x55);
    let poly = m.poly();
    let l = random::poly(&mut rng, poly, 1);
    let shifted: Vec<i32> = m.cover().twists.iter().map(|t| t + 1).collect();
    let cover = relhom::FreeModule::new(shifted);
    let rels = m.relations().iter().map(|r| Space::new(poly, &cover).from_components(&m.space().components(r))).collect();
    let src = Arc::new(Presentation::new(m.ring().clone(), cover, rels).unwrap());
    let cols = (0..m.rank())
        .map(|j| {
            let mut comps = vec![poly.zero(); m.rank()];
            comps[j] = l.clone();
            m.space().from_components(&comps)
        })
        .collect();
    ModuleMap::new(src, Arc::new(m.clone()), cols).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn homogeneity_under_arithmetic(seed in 0u64..10_000, a in 0i32..4, b in 0i32..4) {
        let mut rng = random::rng(seed);
        let (ring, _) = random::ring(&mut rng);
        let p = ring.poly();
        let f = random::poly(&mut rng, p, a);
        let g = random::poly(&mut rng, p, a);
        let h = random::poly(&mut rng, p, b);
        let s = p.add(&f, &g);
        prop_assert!(p.is_homogeneous(&s));
        prop_assert!(s.is_zero() || p.degree(&s) == Some(a as u32));
        let q = p.mul(&f, &h);
        prop_assert!(p.is_homogeneous(&q));
        if !q.is_zero() {
            prop_assert_eq!(p.degree(&q), Some((a + b) as u32));
        }
    }

    #[test]
    fn groebner_bases_and_normal_forms(seed in 0u64..10_000) {
        let (ring, m) = instance(seed);
        let gb = m.gb().unwrap();
        prop_assert!(gb.satisfies_buchberger_criterion());
        let mut rng = random::rng(seed ^ 7);
        for deg in 0..5 {
            let comps: Vec<_> = m.cover().twists.iter().map(|t| random::poly(&mut rng, ring.poly(), deg - t)).collect();
            let v = m.space().from_components(&comps);
            let nf = gb.normal_form(&v);
            prop_assert!(gb.contains(&m.space().sub(&nf, &v)));
            prop_assert_eq!(gb.normal_form(&nf), nf);
        }
    }

    #[test]
    fn syzygies_span_the_linear_algebra_kernel(seed in 0u64..10_000) {
        // over the polynomial ring: relations of the module's relations
        let mut rng = random::rng(seed);
        let (ring, _) = random::ring(&mut rng);
        let ambient = ring.ambient();
        let m = random::module(&mut rng, &ambient, 3, 2);
        let poly = ambient.poly();
        let gens = m.relations().to_vec();
        prop_assume!(!gens.is_empty());
        let syz = syzygies(poly, m.cover(), &gens, DEFAULT_DEGREE_CAP).unwrap();
        let sp = m.space();
        for col in &syz.columns {
            prop_assert!(sp.apply(&gens, col).is_zero());
        }
        let oring = oracle::Ring::from_relhom(poly, &[]);
        let images: Vec<oracle::Vector> = gens.iter().map(|g| sp.components(g).iter().map(oracle::from_poly).collect()).collect();
        let src = oracle::Module { twists: syz.target.twists.clone(), relations: vec![] };
        let tgt = oracle::Module { twists: m.cover().twists.clone(), relations: vec![] };
        let ssp = Space::new(poly, &syz.target);
        let span = oracle::Module {
            twists: syz.target.twists.clone(),
            relations: syz.columns.iter().map(|c| ssp.components(c).iter().map(oracle::from_poly).collect()).collect(),
        };
        for d in 0..=D {
            let ker = oracle::kernel_dim(&oring, &src, &tgt, &images, d);
            let generated = oracle::free_dim(&oring, &src.twists, d) - span.hilbert(&oring, d);
            prop_assert_eq!(ker, generated, "degree {}", d);
        }
    }

    #[test]
    fn kernel_image_cokernel_balance(seed in 0u64..10_000) {
        let (_, m) = instance(seed);
        let f = multiplication(seed, &m);
        let (ker, inc) = kernel(&f).unwrap();
        let (img, _, _) = image(&f).unwrap();
        let coker = cokernel(&f).unwrap().module;
        prop_assert_eq!(sum(&hf(&ker), &hf(&img)), hf(&f.source));
        prop_assert_eq!(sum(&hf(&coker), &hf(&img)), hf(&f.target));
        // kernel generators map to zero
        for col in &inc.columns {
            prop_assert!(f.target.contains(&f.apply(col)).unwrap());
        }
    }

    #[test]
    fn minimalize_idempotent(seed in 0u64..10_000) {
        let (_, m) = instance(seed);
        let once = m.minimal().unwrap();
        let twice = once.minimal().unwrap();
        prop_assert_eq!(once.key(), twice.key());
        prop_assert_eq!(hf(&once), hf(&m));
    }

    #[test]
    fn tensor_and_hom_split_over_sums(seed in 0u64..10_000) {
        let mut rng = random::rng(seed);
        let (ring, _) = random::ring(&mut rng);
        let m = random::module(&mut rng, &ring, 2, 2);
        let a = random::module(&mut rng, &ring, 2, 2);
        let b = random::module(&mut rng, &ring, 2, 2);
        let ab = direct_sum(&a, &b).unwrap().module;
        prop_assert_eq!(hf(&tensor(&m, &ab).unwrap()), sum(&hf(&tensor(&m, &a).unwrap()), &hf(&tensor(&m, &b).unwrap())));
        let mm = Arc::new(m);
        let h = |n: Presentation| hf(&hom_module(&mm, &Arc::new(n)).unwrap().module);
        prop_assert_eq!(h(ab), sum(&h(a), &h(b)));
    }

    #[test]
    fn free_summand_is_not_stable(seed in 0u64..10_000, a in -2i32..3) {
        let (ring, m) = instance(seed);
        let s = direct_sum(&m, &Presentation::free(ring, vec![a])).unwrap().module;
        prop_assert!(!is_stable(&Arc::new(s)).unwrap());
    }

    #[test]
    fn ext_zero_is_hom(seed in 0u64..10_000) {
        let mut rng = random::rng(seed);
        let (ring, _) = random::ring(&mut rng);
        let m = random::module(&mut rng, &ring, 2, 2);
        let n = random::module(&mut rng, &ring, 2, 2);
        let e0 = ext(0, &m, &n).unwrap();
        let h = hom_module(&Arc::new(m), &Arc::new(n)).unwrap().module;
        prop_assert_eq!(hf(&e0), hf(&h));
    }

    #[test]
    fn ext_sequence_of_a_syzygy(seed in 0u64..10_000) {
        // 0 -> ΩM -> F0 -> M -> 0 against R
        let (ring, m) = instance(seed);
        let m = m.minimal().unwrap();
        prop_assume!(!m.is_zero().unwrap());
        let r = Presentation::free(ring.clone(), vec![0]);
        let om = syzygy(&m, 1).unwrap();
        let f0 = Presentation::free(ring, m.cover().twists.clone());
        let alt: Vec<i64> = hf(&ext(0, &m, &r).unwrap())
            .iter()
            .zip(hf(&ext(0, &f0, &r).unwrap()))
            .zip(hf(&ext(0, &om, &r).unwrap()))
            .zip(hf(&ext(1, &m, &r).unwrap()))
            .map(|(((a, b), c), d)| a - b + c - d)
            .collect();
        prop_assert!(alt.iter().all(|&x| x == 0), "{:?}", alt);
        prop_assert_eq!(hf(&ext(1, &om, &r).unwrap()), hf(&ext(2, &m, &r).unwrap()));
    }

    #[test]
    fn depth_bounds_and_determinism(seed in 0u64..10_000) {
        let (ring, m) = instance(seed);
        let dm = depth(&m).unwrap();
        prop_assert!(m.is_zero().unwrap() || dm <= ring.dim());
        prop_assert_eq!(depth(&Presentation::free(ring.clone(), vec![0])).unwrap(), ring.depth().unwrap());
        let a = resolve(&m, 3).unwrap().betti_table();
        clear_memory_cache();
        let b = resolve(&m, 3).unwrap().betti_table();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn biduality_sequence(seed in 0u64..10_000) {
        let (ring, m) = instance(seed);
        let c = SemidualizingHandle::ring(&ring).unwrap();
        check_biduality(&m, &c)?;
    }

    #[test]
    fn biduality_sequence_over_semigroup_ring(seed in 0u64..10_000) {
        let (_, m, w) = semigroup_instance(seed);
        check_biduality(&m, &w)?;
    }

    #[test]
    fn double_transpose_of_stable_module(seed in 0u64..10_000) {
        let (_, m) = instance(seed);
        let m = m.minimal().unwrap();
        prop_assume!(!m.is_zero().unwrap() && is_stable(&Arc::new(m.clone())).unwrap());
        let tt = transpose(&transpose(&m).unwrap()).unwrap();
        prop_assert_eq!(resolve(&tt, 2).unwrap().betti_table(), resolve(&m, 2).unwrap().betti_table());
    }

    #[test]
    fn double_transpose_of_totally_reflexive(seed in 0u64..10_000) {
        // high syzygies over a hypersurface are totally reflexive
        let (ring, m) = instance(seed);
        prop_assume!(!ring.is_polynomial_ring());
        let c = SemidualizingHandle::ring(&ring).unwrap();
        let n = syzygy(&m, ring.dim()).unwrap().minimal().unwrap();
        prop_assume!(!n.is_zero().unwrap() && is_stable(&Arc::new(n.clone())).unwrap());
        prop_assert!(totally_reflexive(&n, &c, c.default_bound().unwrap()).unwrap().value);
        let tt = transpose_c(&transpose_c(&n, &c).unwrap(), &c).unwrap();
        prop_assert_eq!(resolve(&tt, 2).unwrap().betti_table(), resolve(&n, 2).unwrap().betti_table());
    }

    #[test]
    fn syzygies_are_c_syzygies(seed in 0u64..10_000) {
        let (ring, m) = instance(seed);
        let c = SemidualizingHandle::ring(&ring).unwrap();
        prop_assert!(is_c_syzygy(&syzygy(&m, 1).unwrap(), &c).unwrap().value);
        let (_, m, w) = semigroup_instance(seed);
        prop_assert!(is_c_syzygy(&syzygy(&m, 1).unwrap(), &w).unwrap().value);
    }

    #[test]
    fn grade_chain(seed in 0u64..10_000) {
        let (ring, m) = instance(seed);
        let c = SemidualizingHandle::ring(&ring).unwrap();
        check_chain(&m, &c)?;
        let (_, m, w) = semigroup_instance(seed);
        check_chain(&m, &w)?;
    }

    #[test]
    fn grade_against_canonical_module(seed in 0u64..10_000) {
        let (_, m, w) = semigroup_instance(seed);
        prop_assert_eq!(grade(&m, None).unwrap().value, grade(&m, Some(&w)).unwrap().value);
        let (ring, m) = instance(seed);
        if ring.is_cohen_macaulay().unwrap() {
            let w = SemidualizingHandle::canonical(&ring).unwrap();
            prop_assert_eq!(grade(&m, None).unwrap().value, grade(&m, Some(&w)).unwrap().value);
        }
    }

    #[test]
    fn linked_modules_have_grade_zero(seed in 0u64..10_000) {
        let (_, m) = instance(seed);
        if horizontally_linked(&m).unwrap().value {
            prop_assert_eq!(grade(&m, None).unwrap().value, Value::Finite(0));
        }
    }

    #[test]
    fn gc_dim_zero_on_sums_and_transposes(seed in 0u64..10_000) {
        let mut rng = random::rng(seed);
        let (ring, _) = random::ring(&mut rng);
        let a = random::module(&mut rng, &ring, 2, 2);
        let b = random::module(&mut rng, &ring, 2, 2);
        let c = SemidualizingHandle::ring(&ring).unwrap();
        let bound = c.default_bound().unwrap();
        let zero = |m: &Presentation| gc_dim(m, &c, bound).unwrap().value == Value::Finite(0);
        let ab = direct_sum(&a, &b).unwrap().module;
        prop_assert_eq!(zero(&ab), zero(&a) && zero(&b));
        let ga = gc_dim(&a, &c, bound).unwrap();
        let ta = transpose_c(&a, &c).unwrap();
        if ta.is_zero().unwrap() {
            // a is free
            prop_assert_eq!(ga.value, Value::Finite(0));
            return Ok(());
        }
        let gt = gc_dim(&ta, &c, bound).unwrap();
        prop_assert_eq!(ga.value == Value::Finite(0), gt.value == Value::Finite(0));
        prop_assert_eq!(ga.status.is_certified(), gt.status.is_certified());
    }
}

fn check_biduality(m: &Presentation, c: &SemidualizingHandle) -> Result<(), TestCaseError> {
    let b = biduality_map(m, c).unwrap();
    let t = transpose_c(m, c).unwrap();
    prop_assert_eq!(hf(&b.kernel().unwrap()), hf(&ext(1, &t, c.module()).unwrap()));
    prop_assert_eq!(hf(&b.cokernel().unwrap()), hf(&ext(2, &t, c.module()).unwrap()));
    Ok(())
}

fn check_chain(m: &Presentation, c: &SemidualizingHandle) -> Result<(), TestCaseError> {
    let bound = c.default_bound().unwrap();
    let g = gc_dim(m, c, bound).unwrap().value;
    if let Value::Finite(d) = g {
        if d > 0 {
            let gr = grade(m, None).unwrap().value;
            let rg = rgrade(m, c, bound).unwrap().value;
            prop_assert!(gr <= rg && rg <= g, "grade {} rgrade {} gc_dim {}", gr, rg, g);
        }
    }
    Ok(())
}
