//! θ-division towers `f_n = exp(∂(θ)^{-(n+1)} ζ)` and the adjoint identity `G_θ δ_1 = δ_1 G_θ^*`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gc::random_vector;
use super::{AndersonModule, TMat};
use crate::error::Result;
use crate::series::RamifiedSeries;
use crate::tate::NormExp;

#[derive(Clone, Debug)]
pub struct TowerReport {
    /// `G_θ(f_{n+1}) = f_n` for every step, and `G_θ(f_0) = exp(ζ)`, to the working floor.
    pub chain_ok: bool,
    /// Worst chain residual.
    pub chain_residual: NormExp,
    /// `‖∂(θ)^{n_max+1} f_{n_max} - ζ‖`.
    pub recovery: NormExp,
    pub floor: i64,
}

/// Builds the tower up to `n_max` with `f_n` known to `floor` and checks it.
pub fn division_tower(m: &AndersonModule, zeta: &TMat, n_max: u32, floor: i64) -> Result<TowerReport> {
    let ctx = m.ctx();
    let rr = ctx.r();
    let mut fs = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        fs.push(m.exp_apply(&m.d_theta_inv_pow(n + 1, zeta), floor)?);
    }
    let check_floor = floor - 3 * rr;
    let mut worst = NormExp::Zero;
    let x = m.exp_apply(zeta, floor)?;
    let mut pairs = vec![(m.apply_theta(&fs[0])?, x)];
    for n in 0..n_max as usize {
        pairs.push((m.apply_theta(&fs[n + 1])?, fs[n].clone()));
    }
    let mut chain_ok = true;
    for (a, b) in &pairs {
        let d = a.truncate(check_floor).dist(&b.truncate(check_floor));
        chain_ok &= d.le(-check_floor);
        worst = worst.max(d);
    }
    let back = m.d_monomial(0, n_max + 1, &fs[n_max as usize]);
    Ok(TowerReport { chain_ok, chain_residual: worst, recovery: back.dist(zeta), floor: check_floor })
}

/// `g G_θ^*` for `g = Σ a_i σ^i` (rows `a_i`), with `G_θ^* = (θ + N)^T + E^{T(-1)} σ` and `σ c = c^{(-1)} σ`.
pub fn adjoint_apply(m: &AndersonModule, g: &[TMat]) -> Result<Vec<TMat>> {
    let ctx = m.ctx();
    let k = m.dim();
    let m0 = m.d_theta().transpose();
    let et = m.e.transpose();
    let mut out = vec![TMat::zero(ctx, 1, k); g.len() + 1];
    for (i, a) in g.iter().enumerate() {
        let i = i as i64;
        out[i as usize] = out[i as usize].add(&a.mul(&m0.twist(-i)?));
        out[i as usize + 1] = out[i as usize + 1].add(&a.mul(&et.twist(-1 - i)?));
    }
    Ok(out)
}

/// `δ_1(Σ a_i σ^i) = Σ (a_i^T)^{(i)}`.
pub fn delta_one(g: &[TMat]) -> Result<TMat> {
    let ctx = g[0].ctx();
    let mut acc = TMat::zero(ctx, g[0].cols(), 1);
    for (i, a) in g.iter().enumerate() {
        acc = acc.add(&a.transpose().twist(i as i64)?);
    }
    Ok(acc)
}

/// Checks `G_θ(δ_1 g) = δ_1(g G_θ^*)` exactly on `count` seeded σ-polynomials of degree at most 3.
pub fn delta_identity(m: &AndersonModule, rng: &mut ChaCha8Rng, count: usize) -> Result<bool> {
    let ctx = m.ctx();
    for _ in 0..count {
        let deg = rng.gen_range(0..=3usize);
        let g: Vec<TMat> = (0..=deg).map(|_| random_vector(ctx, rng, m.dim()).transpose()).collect();
        let lhs = m.apply_theta(&delta_one(&g)?)?;
        let rhs = delta_one(&adjoint_apply(m, &g)?)?;
        if !lhs.same(&rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A seeded vector of norm at most `q^{-shift}`.
pub fn small_vector(m: &AndersonModule, rng: &mut ChaCha8Rng, shift: i64) -> TMat {
    let ctx = m.ctx();
    random_vector(ctx, rng, m.dim()).mul_scalar(&RamifiedSeries::theta_pow(ctx, -shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anderson::carlitz;
    use crate::field::{Context, FieldParams, Precision};
    use rand::SeedableRng;

    #[test]
    fn test_zero_tower() {
        let k = Context::new(FieldParams::new(2, 1, 1), Precision::default()).unwrap();
        let c = carlitz(&k);
        let z = TMat::zero(&k, 1, 1);
        let rep = division_tower(&c, &z, 3, k.vnum(10)).unwrap();
        assert!(rep.chain_ok);
        assert_eq!(rep.recovery, NormExp::Zero);
    }

    #[test]
    fn test_delta_carlitz() {
        let k = Context::new(FieldParams::new(3, 1, 1), Precision::default()).unwrap();
        let c = carlitz(&k);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(delta_identity(&c, &mut rng, 5).unwrap());
    }
}
