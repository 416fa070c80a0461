//! Named special elements: `b_i(t_j)`, `α_i`, `Ω`, `π̃` and the Anderson–Thakur units `ω_β`.
//!
//! Floors passed to these functions are valuation numerators (units of `1/R`).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Context;
use crate::series::RamifiedSeries;
use crate::tate::TateElement;

/// `θ^{q^k}` for any integer `k` (negative `k` uses the ramification budget).
pub fn theta_qpow(ctx: &Arc<Context>, k: i64) -> Result<RamifiedSeries> {
    RamifiedSeries::theta_pow(ctx, 1).twist(k)
}

/// `b_i(t_j)`: `∏_{k<i}(t_j - θ^{q^k})` for `i ≥ 0`, and
/// `∏_{k<-i}(t_j - θ^{q^{-k-1}})^{-1}` for `i < 0`, known to `floor`.
pub fn b(ctx: &Arc<Context>, i: i64, j: usize, floor: i64) -> Result<TateElement> {
    if i >= 0 {
        let mut out = TateElement::one(ctx);
        for k in 0..i {
            out = out.mul(&TateElement::linear(ctx, j, &theta_qpow(ctx, k)?));
        }
        return Ok(out);
    }
    let mut den = TateElement::one(ctx);
    for k in 0..(-i) {
        den = den.mul(&TateElement::linear(ctx, j, &theta_qpow(ctx, -k - 1)?));
    }
    den.inv_unit(floor)
}

/// `b_i(U) = ∏_{j∈U} b_i(t_j)`.
pub fn b_set(ctx: &Arc<Context>, i: i64, u: &[usize], floor: i64) -> Result<TateElement> {
    let mut out = TateElement::one(ctx);
    for &j in u {
        out = out.mul(&b(ctx, i, j, floor + ctx.r() * u.len() as i64)?);
    }
    if i < 0 {
        out = out.truncate(floor);
    }
    Ok(out)
}

/// `α = ∏_{j∈U}(t_j - θ)`, `1` for empty `U`.
#[must_use]
pub fn alpha(ctx: &Arc<Context>, u: &[usize]) -> TateElement {
    let th = RamifiedSeries::theta_pow(ctx, 1);
    u.iter().fold(TateElement::one(ctx), |acc, &j| acc.mul(&TateElement::linear(ctx, j, &th)))
}

/// The fixed `(q-1)`-st root of `-θ`: `ζ θ^{1/(q-1)}` with `ζ^{q-1} = -1`.
#[must_use]
pub fn root_minus_theta(ctx: &Arc<Context>) -> RamifiedSeries {
    RamifiedSeries::monomial(ctx, ctx.root_minus_one(), ctx.r() / (ctx.qi() - 1))
}

/// `Ω(t) = (-θ)^{-q/(q-1)} ∏_{i≥1} (1 - t/θ^{q^i})`, known to `floor`, optionally also truncated in degree.
pub fn omega_big(ctx: &Arc<Context>, floor: i64, tcap: Option<u32>) -> Result<TateElement> {
    let q = ctx.qi();
    let lead = root_minus_theta(ctx).pow(q as u32).inv(0)?;
    let lead_ord = lead.ord_lb().unwrap();
    let rel = floor - lead_ord;
    let mut prod = TateElement::one(ctx).with_tcap(tcap);
    let t = TateElement::var(ctx, 0);
    let mut i = 1;
    loop {
        let qi = q.checked_pow(i).ok_or_else(|| Error::PrecisionExhausted("Ω product".into()))?;
        if qi.saturating_mul(ctx.r()) >= rel {
            break;
        }
        let f = TateElement::one(ctx).sub(&t.mul_scalar(&RamifiedSeries::theta_pow(ctx, -qi)));
        prod = prod.mul(&f).truncate(rel);
        i += 1;
    }
    Ok(prod.truncate(rel).mul_scalar(&lead).truncate(floor))
}

/// `Ω^{(d)}(θ)` for `d ≥ 0` from its product formula, known to `floor`.
pub fn omega_big_twist_at_theta(ctx: &Arc<Context>, d: u32, floor: i64) -> Result<RamifiedSeries> {
    let q = ctx.qi();
    let lead = root_minus_theta(ctx).pow(q as u32).inv(0)?.twist(i64::from(d))?;
    let rel = floor - lead.ord_lb().unwrap();
    let mut prod = RamifiedSeries::one(ctx);
    let mut i = 1u32;
    loop {
        let e = q.checked_pow(i + d).ok_or_else(|| Error::PrecisionExhausted("Ω product".into()))? - 1;
        if e.saturating_mul(ctx.r()) >= rel {
            break;
        }
        prod = prod.sub(&prod.mul(&RamifiedSeries::theta_pow(ctx, -e))).truncate(rel);
        i += 1;
    }
    Ok(prod.truncate(rel).mul(&lead).truncate(floor))
}

/// Carlitz period `π̃ = θ (-θ)^{1/(q-1)} ∏_{i≥1} (1 - θ^{1-q^i})^{-1}`, known to `floor`.
pub fn pi_tilde(ctx: &Arc<Context>, floor: i64) -> Result<RamifiedSeries> {
    let q = ctx.qi();
    let lead = root_minus_theta(ctx).shift(ctx.r());
    let rel = floor + lead.max_exp().unwrap();
    let mut prod = RamifiedSeries::one(ctx);
    let mut i = 1u32;
    loop {
        let e = q.checked_pow(i).ok_or_else(|| Error::PrecisionExhausted("π̃ product".into()))? - 1;
        if e.saturating_mul(ctx.r()) >= rel {
            break;
        }
        prod = prod.sub(&prod.mul(&RamifiedSeries::theta_pow(ctx, -e))).truncate(rel);
        i += 1;
    }
    Ok(prod.truncate(rel).inv(rel)?.mul(&lead).truncate(floor))
}

/// Anderson–Thakur unit `ω_β = γ ∏_{i≥0} y^{q^i}/τ^i(β)` with `y` the dominant scalar of `β`
/// and `γ` the chosen `(q-1)`-st root of `y`; solves `τ(ω_β) = β ω_β`.
pub fn omega_beta(beta: &TateElement, floor: i64) -> Result<TateElement> {
    let ctx = beta.ctx();
    let y = beta
        .dominant_scalar()
        .ok_or_else(|| Error::LeadingTerm("no dominant scalar term in β".into()))?;
    let (e, c) = y.leading().unwrap();
    let q1 = ctx.qi() - 1;
    if e % q1 != 0 {
        return Err(Error::RamificationBudget { num: e, den: ctx.r(), shift: 0 });
    }
    let root = ctx.root(c, q1 as u64).ok_or_else(|| Error::LeadingTerm("no (q-1)-st root of the leading coefficient".into()))?;
    let gamma = RamifiedSeries::monomial(ctx, root, e / q1);
    let rel = floor + gamma.max_exp().unwrap();
    let yinv = y.inv(0)?;
    let u = beta.mul_scalar(&yinv);
    let eps = u.sub(&TateElement::one(ctx));
    if eps.is_exact_zero() {
        return Ok(TateElement::scalar(&gamma));
    }
    let eps_ord = eps.ord_lb().unwrap();
    if eps_ord <= 0 {
        return Err(Error::LeadingTerm("β is not dominated by a scalar".into()));
    }
    let mut prod = TateElement::one(ctx).with_tcap(beta.tcap());
    let mut i = 0i64;
    let mut ord = eps_ord;
    while ord < rel {
        let f = u.twist(i)?;
        prod = prod.mul(&f.inv_unit(rel)?).truncate(rel);
        i += 1;
        ord = ord.saturating_mul(ctx.qi());
    }
    Ok(prod.truncate(rel).mul_scalar(&gamma).truncate(floor))
}

/// `ω_j = ω_{t_j - θ}`.
pub fn omega_var(ctx: &Arc<Context>, j: usize, floor: i64) -> Result<TateElement> {
    omega_beta(&TateElement::linear(ctx, j, &RamifiedSeries::theta_pow(ctx, 1)), floor)
}

/// `ω_U = ∏_{j∈U} ω_j`, `1` for empty `U`.
pub fn omega_set(ctx: &Arc<Context>, u: &[usize], floor: i64) -> Result<TateElement> {
    let extra = ctx.r() * u.len() as i64 / (ctx.qi() - 1);
    let mut out = TateElement::one(ctx);
    for &j in u {
        out = out.mul(&omega_var(ctx, j, floor + extra)?);
    }
    Ok(out.truncate(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};
    use crate::tate::NormExp;

    fn ctx(p: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_b_small() {
        let k = ctx(2);
        let w = k.vnum(20);
        assert_eq!(b(&k, 0, 1, w).unwrap(), TateElement::one(&k));
        let b1 = b(&k, 1, 1, w).unwrap();
        assert_eq!(b1.to_string(), "t_1 + theta");
        let lhs = b1.twist(1).unwrap().mul(&b1);
        assert_eq!(lhs, b(&k, 2, 1, w).unwrap());
    }

    #[test]
    fn test_b_negative_twists_up() {
        // τ(b_{-1}) = b_0 / b_1
        let k = ctx(3);
        let w = k.vnum(20);
        let bm1 = b(&k, -1, 1, w * 3).unwrap();
        let lhs = bm1.twist(1).unwrap().mul(&b(&k, 1, 1, w).unwrap());
        assert!(lhs.dist(&TateElement::one(&k)).lt(-w + k.r()));
    }

    #[test]
    fn test_omega_functional_equation() {
        for p in [2, 3] {
            let k = ctx(p);
            let w = k.vnum(30);
            let om = omega_big(&k, w * k.qi(), None).unwrap();
            let lhs = om.twist(-1).unwrap();
            let th = RamifiedSeries::theta_pow(&k, 1);
            let rhs = TateElement::linear(&k, 0, &th).mul(&om);
            assert!(lhs.dist(&rhs).lt(-w + k.r()), "q = {p}");
        }
    }

    #[test]
    fn test_omega_unit_norm_and_equation() {
        for p in [2, 3] {
            let k = ctx(p);
            let w = k.vnum(25);
            let om = omega_var(&k, 1, w * k.qi()).unwrap();
            assert_eq!(om.norm(), NormExp::Exact(k.r() / (k.qi() - 1)));
            let lhs = om.twist(1).unwrap();
            let rhs = om.mul(&b(&k, 1, 1, w).unwrap());
            assert!(lhs.dist(&rhs).lt(-w + 2 * k.r()));
        }
    }

    #[test]
    fn test_omega_at_theta_times_period() {
        let k = ctx(2);
        let w = k.vnum(40);
        let om = omega_big_twist_at_theta(&k, 0, w + 2 * k.r()).unwrap();
        let pi = pi_tilde(&k, w + 2 * k.r()).unwrap();
        assert!(om.mul(&pi).agrees(&RamifiedSeries::one(&k), w));
    }

    #[test]
    fn test_omega_of_one() {
        let k = ctx(3);
        let om = omega_beta(&TateElement::one(&k), k.vnum(10)).unwrap();
        assert_eq!(om, TateElement::one(&k));
    }
}
