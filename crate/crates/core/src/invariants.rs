//! grade, reduced grade, G_C-dimension, perfection and linkage predicates.

use serde::Serialize;

use crate::cert::{CertStatus, Graded, Value};
use crate::error::{Error, Result};
use crate::homology::{depth, ext, resolve};
use crate::module::{is_stable, Presentation};
use crate::relative::{biduality_map, dual_c, syzygy, transpose, SemidualizingHandle};
use std::sync::Arc;

/// `inf { i >= 0 : Ext^i(M, X) != 0 }` with `X = C` or `R`, scanning up to `dim R`.
pub fn grade(m: &Presentation, c: Option<&SemidualizingHandle>) -> Result<Graded<Value>> {
    if m.is_zero()? {
        return Ok(Graded::certified(Value::Infinite));
    }
    let ring = m.ring().clone();
    let r = Presentation::free(ring.clone(), vec![0]);
    let against = match c {
        Some(h) => {
            h.require_verified()?;
            h.module().as_ref().clone()
        }
        None => r,
    };
    for i in 0..=ring.dim() {
        if !ext(i, m, &against)?.is_zero()? {
            return Ok(Graded::certified(Value::Finite(i)));
        }
    }
    Ok(Graded::new(
        Value::Infinite,
        CertStatus::Failed(format!("Ext^i vanishes for all i <= dim R = {} on a nonzero module", ring.dim())),
    ))
}

/// `inf { i > 0 : Ext^i(M, C) != 0 }`, scanning `1..=bound`.
pub fn rgrade(m: &Presentation, c: &SemidualizingHandle, bound: usize) -> Result<Graded<Value>> {
    c.require_verified()?;
    for i in 1..=bound {
        if !ext(i, m, c.module())?.is_zero()? {
            return Ok(Graded::certified(Value::Finite(i)));
        }
    }
    let depth_r = m.ring().depth()?;
    let pd_ok = m.is_zero()? || resolve(m, bound + 1)?.length().is_some_and(|l| l <= bound);
    let status = if (c.is_dualizing() && bound >= depth_r) || pd_ok {
        CertStatus::Certified
    } else {
        CertStatus::BoundedEvidence(bound)
    };
    Ok(Graded::new(Value::Infinite, status))
}

/// Total C-reflexivity: `σ^C` iso and `Ext^i(N, C) = Ext^i(N^C, C) = 0` for `1..=bound`.
pub fn totally_reflexive(n: &Presentation, c: &SemidualizingHandle, bound: usize) -> Result<Graded<bool>> {
    c.require_verified()?;
    let nm = n.minimal()?;
    if nm.relations().is_empty() {
        return Ok(Graded::certified(true));
    }
    let sigma = biduality_map(&nm, c)?;
    if !sigma.kernel()?.is_zero()? {
        return Ok(Graded::certified(false).with_witness("biduality map is not injective"));
    }
    if !sigma.cokernel()?.is_zero()? {
        return Ok(Graded::certified(false).with_witness("biduality map is not surjective"));
    }
    for i in 1..=bound {
        if !ext(i, &nm, c.module())?.is_zero()? {
            return Ok(Graded::certified(false).with_witness(format!("Ext^{i}(N, C) is nonzero")));
        }
    }
    let dual = dual_c(&nm, c)?;
    for i in 1..=bound {
        if !ext(i, &dual, c.module())?.is_zero()? {
            return Ok(Graded::certified(false).with_witness(format!("Ext^{i}(N^C, C) is nonzero")));
        }
    }
    let depth_r = n.ring().depth()?;
    let status = if c.is_dualizing() && depth(&nm)? == depth_r {
        CertStatus::Certified
    } else {
        CertStatus::BoundedEvidence(bound)
    };
    Ok(Graded::new(true, status))
}

/// G_C-dimension via the Auslander-Bridger candidate `d = depth R - depth M`.
pub fn gc_dim(m: &Presentation, c: &SemidualizingHandle, bound: usize) -> Result<Graded<Value>> {
    c.require_verified()?;
    if m.is_zero()? {
        return Err(Error::ZeroModule("G_C-dimension of the zero module".into()));
    }
    let ring = m.ring();
    let dr = ring.depth()?;
    let dm = depth(m)?;
    if dm > dr {
        return Ok(Graded::certified(Value::Infinite).with_witness(format!("depth M = {dm} exceeds depth R = {dr}")));
    }
    let d = dr - dm;
    if let Some(pd) = resolve(m, dr + 1)?.length() {
        // finite projective dimension: G_C-dim = pd = d
        return Ok(if pd == d {
            Graded::certified(Value::Finite(d))
        } else {
            Graded::new(Value::Finite(pd), CertStatus::Failed(format!("pd {pd} differs from depth R - depth M = {d}")))
        });
    }
    let n = syzygy(m, d)?;
    let tr = totally_reflexive(&n, c, bound)?;
    if tr.value {
        let status = if c.is_dualizing() { CertStatus::Certified } else { tr.status };
        Ok(Graded::new(Value::Finite(d), status))
    } else {
        let w = format!("Ω^{d} M is not totally C-reflexive: {}", tr.witness.unwrap_or_default());
        Ok(Graded::certified(Value::Infinite).with_witness(w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub gc_perfect: Graded<bool>,
    pub reduced_gc_perfect: Graded<bool>,
    pub stable: Graded<bool>,
    pub horizontally_linked: Graded<bool>,
    pub c_syzygy: Graded<bool>,
    pub c_k_torsionless: Graded<bool>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub dualizer: String,
    pub bound: usize,
    pub grade: Graded<Value>,
    pub rgrade_c: Graded<Value>,
    pub depth: Option<usize>,
    pub gc_dim: Graded<Value>,
    pub flags: Flags,
}

fn equal_values(a: &Graded<Value>, b: &Graded<Value>) -> Graded<bool> {
    let status = a.status.clone().weakest(b.status.clone());
    Graded::new(a.value == b.value, status)
}

/// Stable and `Ext^1(Tr M, R) = 0`.
pub fn horizontally_linked(m: &Presentation) -> Result<Graded<bool>> {
    let mm = Arc::new(m.minimal()?);
    if mm.rank() == 0 {
        return Ok(Graded::certified(true).with_witness("zero module"));
    }
    if !is_stable(&mm)? {
        return Ok(Graded::certified(false).with_witness("M has a free summand"));
    }
    let tr = transpose(&mm)?;
    let r = Presentation::free(mm.ring().clone(), vec![0]);
    if !ext(1, &tr, &r)?.is_zero()? {
        return Ok(Graded::certified(false).with_witness("Ext^1(Tr M, R) is nonzero"));
    }
    Ok(Graded::certified(true))
}

pub fn stable(m: &Presentation) -> Result<Graded<bool>> {
    Ok(Graded::certified(is_stable(&Arc::new(m.minimal()?))?))
}

pub fn report(m: &Presentation, c: &SemidualizingHandle, bound: usize, k: usize) -> Result<InvariantReport> {
    c.require_verified()?;
    let g = grade(m, None)?;
    let rg = rgrade(m, c, bound)?;
    let zero = m.is_zero()?;
    let dp = if zero { None } else { Some(depth(m)?) };
    let gd = if zero { Graded::certified(Value::Infinite) } else { gc_dim(m, c, bound)? };
    let gc_perfect = match gd.value {
        Value::Finite(_) => equal_values(&g, &gd),
        Value::Infinite => Graded::new(false, gd.status.clone()),
    };
    let reduced = match gd.value {
        Value::Finite(d) if d > 0 => equal_values(&rg, &gd),
        _ => Graded::new(false, gd.status.clone()),
    };
    let mut linked = horizontally_linked(m)?;
    if linked.value && !zero && g.value != Value::Finite(0) {
        linked.status = CertStatus::Failed("horizontally linked module with positive grade".into());
    }
    let flags = Flags {
        gc_perfect,
        reduced_gc_perfect: reduced,
        stable: stable(m)?,
        horizontally_linked: linked,
        c_syzygy: crate::relative::is_c_syzygy(m, c)?,
        c_k_torsionless: crate::relative::c_k_torsionless(m, c, k)?,
        k,
    };
    Ok(InvariantReport { dualizer: c.label(), bound, grade: g, rgrade_c: rg, depth: dp, gc_dim: gd, flags })
}
