//! Polynomials in `A = F_q[θ]`, stored low to high with coefficients in `F_q`, and
//! the factorial-type constants `ℓ_i`, `D_i`, `Γ_N`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Context, Fe};
use crate::series::RamifiedSeries;

pub type APoly = Vec<Fe>;

/// All monic polynomials of degree `d`, in a fixed order (base-`q` counting over `F_q`).
pub fn monic(ctx: &Arc<Context>, d: u32) -> Result<Vec<APoly>> {
    let cap = ctx.precision().d_max;
    if d > cap {
        return Err(Error::EnumerationCap { degree: d, cap });
    }
    let fq = ctx.fq();
    let q = fq.len();
    let count = q.pow(d);
    let mut out = Vec::with_capacity(count);
    for mut idx in 0..count {
        let mut a = vec![0; d as usize + 1];
        for c in a.iter_mut().take(d as usize) {
            *c = fq[idx % q];
            idx /= q;
        }
        a[d as usize] = 1;
        out.push(a);
    }
    Ok(out)
}

/// `a` as an exact series in `θ`.
#[must_use]
pub fn to_series(ctx: &Arc<Context>, a: &[Fe]) -> RamifiedSeries {
    RamifiedSeries::from_poly(ctx, a)
}

#[must_use]
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn trim(mut a: APoly) -> APoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

#[must_use]
pub fn derivative(ctx: &Context, a: &[Fe]) -> APoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c)).collect())
}

#[must_use]
pub fn mul(ctx: &Context, a: &[Fe], b: &[Fe]) -> APoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo monic `m`.
#[must_use]
pub fn rem(ctx: &Context, a: &[Fe], m: &[Fe]) -> APoly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = ctx.sub(r[shift + i], ctx.mul(lead, c));
        }
        r = trim(r);
    }
    r
}

/// Irreducibility over `F_q` by trial division with monic factors of degree at most `deg/2`.
pub fn is_irreducible(ctx: &Arc<Context>, p: &[Fe]) -> Result<bool> {
    let Some(d) = degree(p) else {
        return Ok(false);
    };
    if d == 0 {
        return Ok(false);
    }
    for e in 1..=d / 2 {
        let cands = monic(&ctx.with_precision(crate::field::Precision { d_max: e as u32, ..ctx.precision() }), e as u32)?;
        if cands.iter().any(|m| rem(ctx, p, m).is_empty()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn theta_pow_diff(ctx: &Arc<Context>, a: i64, b: i64) -> RamifiedSeries {
    RamifiedSeries::theta_pow(ctx, a).sub(&RamifiedSeries::theta_pow(ctx, b))
}

/// `ℓ_i = ∏_{k=1}^{i} (θ - θ^{q^k})`.
#[must_use]
pub fn ell(ctx: &Arc<Context>, i: u32) -> RamifiedSeries {
    let q = ctx.qi();
    (1..=i).fold(RamifiedSeries::one(ctx), |acc, k| acc.mul(&theta_pow_diff(ctx, 1, q.pow(k))))
}

/// `deg_θ ℓ_i = (q^{i+1} - q)/(q - 1)`.
#[must_use]
pub fn ell_degree(q: i64, i: u32) -> i64 {
    (q.pow(i + 1) - q) / (q - 1)
}

/// `D_i = ∏_{k=0}^{i-1} (θ^{q^i} - θ^{q^k})`.
#[must_use]
pub fn dfact(ctx: &Arc<Context>, i: u32) -> RamifiedSeries {
    let q = ctx.qi();
    (0..i).fold(RamifiedSeries::one(ctx), |acc, k| acc.mul(&theta_pow_diff(ctx, q.pow(i), q.pow(k))))
}

/// `Γ_N = ∏ D_i^{n_i}` for the base-`q` digits `N = Σ n_i q^i`.
#[must_use]
pub fn gamma(ctx: &Arc<Context>, n: u64) -> RamifiedSeries {
    let q = ctx.q();
    let mut out = RamifiedSeries::one(ctx);
    let (mut n, mut i) = (n, 0u32);
    while n > 0 {
        let digit = (n % q) as u32;
        if digit > 0 {
            out = out.mul(&dfact(ctx, i).pow(digit));
        }
        n /= q;
        i += 1;
    }
    out
}

/// Smallest `r ≥ 1` with `q^r ≥ n`.
#[must_use]
pub fn r_of(q: u64, n: u64) -> u32 {
    let mut r = 1;
    while q.pow(r) < n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Precision};

    fn ctx(p: u32) -> Arc<Context> {
        Context::new(FieldParams::new(p, 1, 1), Precision::default()).unwrap()
    }

    #[test]
    fn test_monic_counts() {
        let k = ctx(2);
        assert_eq!(monic(&k, 0).unwrap(), vec![vec![1]]);
        assert_eq!(monic(&k, 1).unwrap(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(monic(&k, 2).unwrap().len(), 4);
        let k3 = ctx(3);
        let all = monic(&k3, 3).unwrap();
        assert_eq!(all.len(), 27);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 27);
        assert!(matches!(monic(&k3, 9), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn test_factorials() {
        let k = ctx(2);
        assert_eq!(ell(&k, 0), RamifiedSeries::one(&k));
        // ℓ_1 = θ - θ^2 = θ^2 + θ in characteristic 2
        assert_eq!(ell(&k, 1), RamifiedSeries::from_poly(&k, &[0, 1, 1]));
        assert_eq!(dfact(&k, 1), RamifiedSeries::from_poly(&k, &[0, 1, 1]));
        assert_eq!(gamma(&k, 1), RamifiedSeries::one(&k));
        let k3 = ctx(3);
        assert_eq!(gamma(&k3, 2), RamifiedSeries::one(&k3));
        assert_eq!(gamma(&k3, 4), dfact(&k3, 1));
        for i in 0..5 {
            assert_eq!(ell(&k3, i).max_exp(), Some(ell_degree(3, i) * k3.r()));
        }
    }

    #[test]
    fn test_dfact_recursion() {
        let k = ctx(3);
        for i in 1..4 {
            let lhs = dfact(&k, i);
            let rhs = theta_pow_diff(&k, 3i64.pow(i), 1).mul(&dfact(&k, i - 1).twist(1).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn test_irreducible() {
        let k = ctx(2);
        assert!(is_irreducible(&k, &[1, 1, 1]).unwrap());
        assert!(!is_irreducible(&k, &[0, 1, 1]).unwrap());
        assert!(is_irreducible(&k, &[0, 1]).unwrap());
    }
}
