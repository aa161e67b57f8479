#![allow(dead_code)]

use std::sync::Arc;

use relhom::{GradedRing, OrderKind, Poly, PolyRing, Presentation, PrimeField};

pub fn ring(vars: &[&str], ideal: &[&str]) -> Arc<GradedRing> {
    let p = PolyRing::standard(vars);
    let gens: Vec<Poly> = ideal.iter().map(|g| p.parse(g).unwrap()).collect();
    GradedRing::new(p, gens).unwrap()
}

/// `k[t^3, t^4, t^5]` as `k[a,b,c]` modulo its toric ideal.
pub fn semigroup() -> Arc<GradedRing> {
    let p = PolyRing::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![3, 4, 5],
        PrimeField::default(),
        OrderKind::DegRevLex,
    )
    .unwrap();
    let gens: Vec<Poly> = ["b^2 - a*c", "c^2 - a^2*b", "b*c - a^3"].iter().map(|g| p.parse(g).unwrap()).collect();
    GradedRing::new(p, gens).unwrap()
}

pub fn cyclic(r: &Arc<GradedRing>, gens: &[&str]) -> Presentation {
    let ps: Vec<Poly> = gens.iter().map(|g| r.poly().parse(g).unwrap()).collect();
    Presentation::cyclic(r.clone(), &ps).unwrap()
}

pub fn ideal(r: &Arc<GradedRing>, gens: &[&str]) -> Presentation {
    let ps: Vec<Poly> = gens.iter().map(|g| r.poly().parse(g).unwrap()).collect();
    relhom::module::ideal_as_module(r, &ps).unwrap()
}

pub mod random {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use relhom::vector::Space;
    use relhom::{FreeModule, GradedRing, Monomial, OrderKind, Poly, PolyRing, Presentation, PrimeField};

    pub const P: u32 = 32003;

    /// Weighted monomials of degree `d`.
    pub fn monomials(weights: &[u32], d: i32) -> Vec<Vec<u16>> {
        relhom_oracle::monomials(weights, d)
    }

    pub fn poly(rng: &mut ChaCha8Rng, p: &PolyRing, deg: i32) -> Poly {
        let mut terms = Vec::new();
        for m in monomials(p.weights(), deg) {
            if rng.gen_bool(0.6) {
                terms.push((Monomial::from_exponents(&m), rng.gen_range(1..P)));
            }
        }
        p.from_terms(terms)
    }

    /// `≤ 3` variables, optionally modulo one form of degree 2 or 3.
    pub fn ring(rng: &mut ChaCha8Rng) -> (Arc<GradedRing>, Vec<Poly>) {
        let nvars = rng.gen_range(1..=3);
        let names: Vec<String> = ["x", "y", "z"][..nvars].iter().map(|s| s.to_string()).collect();
        let p = PolyRing::new(names, vec![1; nvars], PrimeField::new(P).unwrap(), OrderKind::DegRevLex).unwrap();
        let mut ideal = Vec::new();
        if rng.gen_bool(0.5) {
            let g = loop {
                let deg = rng.gen_range(2..=3);
                let g = poly(rng, &p, deg);
                if !g.is_zero() {
                    break g;
                }
            };
            ideal.push(g);
        }
        (GradedRing::new(p, ideal.clone()).unwrap(), ideal)
    }

    /// Rank 1 or 2 cover in degrees 0..=1, one to `max_rel` relations of
    /// degree at most `spread` above the top cover degree.
    pub fn module(rng: &mut ChaCha8Rng, ring: &Arc<GradedRing>, max_rel: usize, spread: i32) -> Presentation {
        let rank = rng.gen_range(1..=2);
        let twists: Vec<i32> = (0..rank).map(|_| rng.gen_range(0..=1)).collect();
        let cover = FreeModule::new(twists.clone());
        let nrel = rng.gen_range(1..=max_rel);
        let w = ring.poly().weights().iter().copied().min().unwrap() as i32;
        let mut relations = Vec::new();
        for _ in 0..nrel {
            let deg = twists.iter().copied().max().unwrap() + w * rng.gen_range(1..=spread);
            let comps: Vec<Poly> = twists.iter().map(|t| poly(rng, ring.poly(), deg - t)).collect();
            relations.push(Space::new(ring.poly(), &cover).from_components(&comps));
        }
        Presentation::new(ring.clone(), cover, relations).unwrap()
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }
}
