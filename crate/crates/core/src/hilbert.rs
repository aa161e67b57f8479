//! Hilbert series of monomial quotients, `HS(t) = K(t) / Π (1 - t^w_i)`.

use std::collections::BTreeMap;

use crate::monomial::Monomial;

/// Laurent polynomial with integer coefficients, exponent -> coefficient.
pub type Laurent = BTreeMap<i32, i64>;

fn add_into(acc: &mut Laurent, other: &Laurent, shift: i32, sign: i64) {
    for (&e, &c) in other {
        let slot = acc.entry(e + shift).or_insert(0);
        *slot += sign * c;
    }
    acc.retain(|_, c| *c != 0);
}

fn minimize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let mut sorted = gens.to_vec();
    sorted.sort_by_key(|m| m.exponents().iter().map(|&e| e as u32).sum::<u32>());
    sorted.dedup();
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.retain(|g| !m.divides(g));
            out.push(m);
        }
    }
    out
}

/// Numerator `K(t)` of the Hilbert series of `S / (gens)`.
pub fn numerator(gens: &[Monomial], weights: &[u32]) -> Laurent {
    let gens = minimize(gens);
    let mut one = Laurent::new();
    one.insert(0, 1);
    if gens.is_empty() {
        return one;
    }
    if gens.iter().any(|m| m.is_one()) {
        return Laurent::new();
    }
    let n = weights.len();
    // base case: pairwise coprime generators
    let mut count = vec![0usize; n];
    for m in &gens {
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                count[i] += 1;
            }
        }
    }
    let (pivot_var, &best) = count.iter().enumerate().max_by_key(|(i, c)| (**c, n - *i)).unwrap();
    if best <= 1 {
        let mut acc = one;
        for m in &gens {
            let d = m.degree(weights) as i32;
            let mut next = acc.clone();
            add_into(&mut next, &acc, d, -1);
            acc = next;
        }
        return acc;
    }
    // pivot p = x^e with e the smallest positive exponent of the chosen variable
    let e = gens
        .iter()
        .map(|m| m.exponents()[pivot_var])
        .filter(|&e| e > 0)
        .min()
        .unwrap();
    let mut pe = vec![0u16; n];
    pe[pivot_var] = e;
    let p = Monomial::from_exponents(&pe);
    // K(J) = K(J + (p)) + t^deg(p) K(J : p)
    let mut plus = gens.clone();
    plus.push(p.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let ex: Vec<u16> =
                m.exponents().iter().zip(p.exponents()).map(|(a, b)| a.saturating_sub(*b)).collect();
            Monomial::from_exponents(&ex)
        })
        .collect();
    let mut acc = numerator(&plus, weights);
    let c = numerator(&colon, weights);
    add_into(&mut acc, &c, p.degree(weights) as i32, 1);
    acc
}

/// Number of monomials of each weighted degree 0..=up_to.
pub fn monomial_counts(weights: &[u32], up_to: i32) -> Vec<i64> {
    if up_to < 0 {
        return Vec::new();
    }
    let len = up_to as usize + 1;
    let mut counts = vec![0i64; len];
    counts[0] = 1;
    for &w in weights {
        let w = w as usize;
        for d in w..len {
            counts[d] += counts[d - w];
        }
    }
    counts
}

/// Hilbert function values on degrees `lo..=hi` for `K(t) / Π(1 - t^w)`.
pub fn expand(num: &Laurent, weights: &[u32], lo: i32, hi: i32) -> Vec<i64> {
    if hi < lo {
        return Vec::new();
    }
    let min_e = num.keys().next().copied().unwrap_or(0);
    let counts = monomial_counts(weights, (hi - min_e).max(0));
    (lo..=hi)
        .map(|d| {
            num.iter()
                .map(|(&e, &c)| if d - e >= 0 { c * counts[(d - e) as usize] } else { 0 })
                .sum()
        })
        .collect()
}

/// Multiplicity of `t = 1` as a root of `K`.
pub fn order_at_one(num: &Laurent) -> usize {
    if num.is_empty() {
        return usize::MAX;
    }
    let lo = *num.keys().next().unwrap();
    let hi = *num.keys().last().unwrap();
    let mut coeffs: Vec<i64> = (lo..=hi).map(|e| *num.get(&e).unwrap_or(&0)).collect();
    let mut order = 0;
    loop {
        if coeffs.iter().sum::<i64>() != 0 {
            return order;
        }
        // divide by (t - 1): synthetic division from the top
        let n = coeffs.len();
        let mut q = vec![0i64; n - 1];
        let mut carry = 0i64;
        for i in (1..n).rev() {
            carry += coeffs[i];
            q[i - 1] = carry;
        }
        coeffs = q;
        order += 1;
    }
}
